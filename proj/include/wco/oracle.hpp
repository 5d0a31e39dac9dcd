#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <iosfwd>
#include <map>

#include "wco/wco.hpp"

namespace wco {

/// Dense materialization of a wco on its window, with per-order interior
/// bookkeeping. A point is interior at order n when its ancestors up to
/// phi^n stay inside the window and each of them has its full depth-(n+1)
/// subtree inside the window; quantities compressed to the interior subspace
/// then agree with the untruncated operator.
class TruncatedOperator {
 public:
  explicit TruncatedOperator(DiscreteWco wco);

  /// Wraps an arbitrary square matrix (negative controls): no truncation
  /// semantics, everything interior, valid order = dimension.
  static TruncatedOperator from_matrix(Eigen::MatrixXcd m);

  const Eigen::MatrixXcd& matrix() const { return matrix_; }
  const DiscreteWco& wco() const { return wco_; }
  int size() const { return wco_.size(); }

  /// Largest n with a nonempty interior.
  int valid_order() const { return valid_order_; }

  /// Indicator of the interior at order n over window points.
  const std::vector<uint8_t>& interior(int n) const;
  int interior_count(int n) const;
  /// Diagonal 0/1 projector onto the interior at order n.
  Eigen::MatrixXcd interior_projector(int n) const;

  /// Whether spectral norms are exact at this size (SVD) or replaced by the
  /// Frobenius bound.
  bool norms_exact() const { return size() <= 512; }

 private:
  const std::vector<uint8_t>& complete_to_depth(int d) const;

  DiscreteWco wco_;
  Eigen::MatrixXcd matrix_;
  int valid_order_ = 0;
  bool raw_ = false;
  mutable std::map<int, std::vector<uint8_t>> interior_;
  mutable std::map<int, std::vector<uint8_t>> complete_;
};

/// Matrix entry (y, x) = w(y) [phi(y)=x] sqrt(mu(y)/mu(x)). Throws
/// window_too_shallow when even order 1 has an empty interior.
TruncatedOperator materialize(const DiscreteWco& wco);
TruncatedOperator materialize(const ShiftInstance& instance);

/// Phase U_n of T^n: T^n pinv(|T^n|), singular values below `tol` zeroed.
/// T^{n*}T^n is diagonal for genuine wco input and an eigendecomposition
/// path covers non-wco matrices (negative controls). Throws order_too_large
/// for n > valid_order.
Eigen::MatrixXcd polar_phase(const TruncatedOperator& op, int n, double tol = 1e-9);

struct CenteredOracle {
  bool pass = false;
  double max_commutator = 0.0;         // raw, interior-compressed
  double normalized_commutator = 0.0;  // scaled by the factors' norms
  double phase_defect = 0.0;           // max ||U_1^n - U_n|| on the interior
};

/// Brute-force centeredness: commutators of T^{i*}T^i against T^jT^{j*} and
/// among the T^jT^{j*}, plus the phase consistency U_1^n = U_n, all
/// compressed to the interior of order n_max.
CenteredOracle brute_force_centered(const TruncatedOperator& op, int n_max, double tol);

struct HalfWeakOracle {
  bool half_pass = false;
  bool weak_pass = false;
  double half_commutator = 0.0;  // max ||[T^{i*}T^i, T^{j*}T^j]||
  double weak_commutator = 0.0;  // ||[T^*T, TT^*]||
};

HalfWeakOracle brute_force_half_and_weak(const TruncatedOperator& op, int n_max, double tol);

/// Spectral norm via singular values for matrices of dimension <= 512,
/// Frobenius bound above.
double spectral_norm(const Eigen::MatrixXcd& m);

/// Plain-text dense dump: first line "rows cols", then row-major "re im"
/// pairs, one row per line.
void dump_matrix(const Eigen::MatrixXcd& m, std::ostream& out);

}  // namespace wco
