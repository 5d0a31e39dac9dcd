#pragma once

#include "wco/oracle.hpp"
#include "wco/transfer.hpp"

namespace wco {

enum class TypeLabel { I, II, III, IV, I_plus_IV, II_or_III_family, UNDETERMINED };
const char* type_label_name(TypeLabel label);

struct TypeVerdict {
  TypeLabel label = TypeLabel::UNDETERMINED;
  std::vector<std::pair<std::string, std::string>> evidence;  // (criterion, data)
  std::string window_provenance;
};

enum class SupportSplitTag { I_or_IV, II_or_III, MIXED, UNDETERMINED };
const char* support_split_name(SupportSplitTag tag);

struct SupportSplitResult {
  SupportSplitTag tag = SupportSplitTag::UNDETERMINED;
  std::vector<int> always_positive;  // h_n > 0 for every decidable n <= n_max
  std::vector<int> eventually_zero;  // h_n = 0 for some decidable n <= n_max
  std::vector<int> undecided;        // no order decidable on this window
};

/// Support dichotomy of the densities: type I/IV operators keep every h_n
/// positive, type II/III operators push every point into {h_n = 0}.
SupportSplitResult support_split(TransferCache& cache, int n_max);

/// Injective with dense range at truncation scale: nonzero weight off the
/// root, h_1 positive wherever decidable, and singleton fibers on weighted
/// points (the conditional expectation acts as the identity). Forces type IV.
bool type_IV_test(TransferCache& cache);

struct DecayResult {
  std::vector<double> ratios;   // r_n, n = 1..n_max
  std::vector<uint8_t> valid;
  bool decaying = false;
  double fitted_rho = 1.0;      // exp of the fitted log-slope
};

/// Ratios r_n = |lambda_{par^n(v)|v}|^2 / ||S^n e_{par^n(v)}||^2. DECAYING is
/// decided by log-linear regression over the last ceil(n_max/2) valid ratios
/// with slope threshold -0.01. Throws undefined_ancestor when par^n(v) leaves
/// the window.
DecayResult type_I_decay(const ShiftInstance& instance, int v, int n_max);

/// sup |lambda| < sqrt(kappa) * inf |lambda| over the window; requires every
/// children-complete member to have at least kappa children (throws
/// valency_too_low otherwise). Together with centeredness this forces type I.
bool kappa_ary_test(const ShiftInstance& instance, int kappa);

struct RangeIntersection {
  std::vector<int> dims;          // dim of the iterated intersection of ran(T^n)
  std::vector<int> dims_adjoint;  // same for T^*
  int dim_interior = 0;           // final intersection cut to the interior subspace
  int dim_interior_adjoint = 0;
  int interior_count = 0;         // size of the interior at order n_max
};

/// Iteratively intersected column spaces of T^n and T^{*n} (orthonormal bases
/// via SVD, singular values below rank_tol * sigma_max treated as zero),
/// reported on the interior subspace of order n_max.
RangeIntersection range_intersection_dim(const TruncatedOperator& op, int n_max,
                                         double rank_tol = 1e-8);

/// Decreasing dims of the iterated intersection of ran(M^n) for a plain
/// matrix (used for discretized continuous models).
std::vector<int> nested_range_dims(const Eigen::MatrixXcd& m, int n_max,
                                   double rank_tol = 1e-8);

/// Structural classification of a centered shift with nonzero weights
/// (decompose first otherwise; the caller asserts centeredness):
/// rooted+leafless -> I, rooted+leaf -> III (finite uniform depth),
/// Z_-isomorphic -> II, rootless+leafless -> I or IV or their sum, refined by
/// the injectivity test, the kappa-ary bound, the decay ratios and the range
/// intersections. Throws not_centered when zero weights are present.
TypeVerdict structural_type(const ShiftInstance& instance, int n_max, double rank_tol);

}  // namespace wco
