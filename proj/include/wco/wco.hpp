#pragma once

#include <complex>
#include <string>
#include <vector>

#include "wco/shift.hpp"

namespace wco {

/// Complex-valued function on the points of a window together with a validity
/// mask. Invalid entries mean "not computable on this window", never "zero".
struct Masked {
  std::vector<Complex> value;
  std::vector<uint8_t> valid;

  Masked() = default;
  explicit Masked(int n, Complex fill = Complex(0, 0), bool ok = true)
      : value(n, fill), valid(n, ok ? 1 : 0) {}
  int size() const { return static_cast<int>(value.size()); }
};

/// Nonnegative real density h_n with validity mask.
struct Density {
  std::vector<double> value;
  std::vector<uint8_t> valid;
  int order = 0;

  int size() const { return static_cast<int>(value.size()); }
};

/// Discrete measure-space model of C_{phi,w}: finite ordered point set X,
/// point masses mu > 0, self-map phi and weight w. On truncations phi may
/// exit the window (phi(x) == kExit) and fibers may be incomplete; both are
/// tracked so that downstream quantities carry honest masks.
class DiscreteWco {
 public:
  static constexpr int kExit = -1;

  /// Finite-truth constructor: phi total on X, all fibers complete.
  DiscreteWco(std::vector<std::string> labels, std::vector<double> mass,
              std::vector<int> phi, std::vector<Complex> weight);

  /// Truncation-aware constructor.
  DiscreteWco(std::vector<std::string> labels, std::vector<double> mass,
              std::vector<int> phi, std::vector<Complex> weight,
              std::vector<uint8_t> fiber_complete, std::vector<uint8_t> phi_arbitrary);

  int size() const { return static_cast<int>(labels_.size()); }
  const std::string& label(int i) const { return labels_[i]; }
  double mass(int i) const { return mass_[i]; }
  int phi(int i) const { return phi_[i]; }
  bool phi_exits(int i) const { return phi_[i] == kExit; }
  bool phi_arbitrary(int i) const { return phi_arbitrary_[i] != 0; }
  Complex weight(int i) const { return weight_[i]; }
  bool weighted(int i) const { return weight_[i] != Complex(0, 0); }

  /// In-window preimage phi^{-1}(i).
  const std::vector<int>& fiber(int i) const { return fiber_[i]; }
  /// True when fiber(i) is the full preimage in the underlying structure.
  bool fiber_complete(int i) const { return fiber_complete_[i] != 0; }

  /// phi^n(i), or -1 when an iterate exits the window.
  int iterate_phi(int i, int n) const;

  /// True when the instance is a composition operator (w identically 1).
  bool is_composition() const;

 private:
  void finish();

  std::vector<std::string> labels_;
  std::vector<double> mass_;
  std::vector<int> phi_;
  std::vector<Complex> weight_;
  std::vector<uint8_t> fiber_complete_;
  std::vector<uint8_t> phi_arbitrary_;
  std::vector<std::vector<int>> fiber_;
};

/// Counting-measure wco of a weighted shift on a window: X = window members,
/// phi extends the parent map (a genuine root maps to itself, flagged
/// arbitrary; a cut top exits the window), w(x) = lambda_x off the root and 0
/// at a genuine root.
DiscreteWco from_weighted_shift(const WeightedShift& shift, const TruncationWindow& window);
DiscreteWco from_weighted_shift(const ShiftInstance& instance);

/// Iterated weight w_n(x) = prod_{j<n} w(phi^j(x)); w_0 = 1. Entries whose
/// needed iterates exit the window are masked. Throws window_too_shallow when
/// every point is masked.
Masked iterate_weights(const DiscreteWco& wco, int n);

}  // namespace wco
