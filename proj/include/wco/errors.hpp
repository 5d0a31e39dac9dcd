#pragma once

#include <stdexcept>
#include <string>

namespace wco {

enum class Errc {
  cycle_detected,
  disconnected,
  duplicate_parent,
  unknown_vertex,
  window_too_shallow,
  not_fiber_measurable,
  zero_denominator_at_weighted_point,
  order_too_large,
  valency_too_low,
  undefined_ancestor,
  not_centered,
  unknown_builtin,
  singular_matrix,
  parse_error,
  invalid_argument,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  Errc code() const { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::cycle_detected: return "CycleDetected";
    case Errc::disconnected: return "Disconnected";
    case Errc::duplicate_parent: return "DuplicateParent";
    case Errc::unknown_vertex: return "UnknownVertex";
    case Errc::window_too_shallow: return "WindowTooShallow";
    case Errc::not_fiber_measurable: return "NotFiberMeasurable";
    case Errc::zero_denominator_at_weighted_point: return "ZeroDenominatorAtWeightedPoint";
    case Errc::order_too_large: return "OrderTooLarge";
    case Errc::valency_too_low: return "ValencyTooLow";
    case Errc::undefined_ancestor: return "UndefinedAncestor";
    case Errc::not_centered: return "NotCentered";
    case Errc::unknown_builtin: return "UnknownBuiltin";
    case Errc::singular_matrix: return "SingularMatrix";
    case Errc::parse_error: return "ParseError";
    case Errc::invalid_argument: return "InvalidArgument";
  }
  return "Error";
}

}  // namespace wco
