#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wco/transfer.hpp"

namespace wco {

enum class Status { PASS, FAIL, INCONCLUSIVE, NOT_APPLICABLE };

const char* status_name(Status s);

struct Witness {
  std::string point;
  int n = 0;
  int k = 0;  // second order for pairwise conditions, else 0
  Complex lhs{0, 0};
  Complex rhs{0, 0};
};

/// Outcome of one condition check over a window. A FAIL carries the first
/// witness found (scan order: ascending order n, then window order). PASS
/// means every testable relevant point passed and every tested order had at
/// least one testable point; INCONCLUSIVE means some order had relevant
/// points but none testable on this window.
struct ConditionVerdict {
  std::string tag;
  int n_range = 0;
  Status status = Status::INCONCLUSIVE;
  std::optional<Witness> witness;
  double residual = 0.0;
  long tested = 0;
  long masked = 0;

  bool passed() const { return status == Status::PASS; }
  bool failed() const { return status == Status::FAIL; }
};

/// Pointwise identities equivalent to centeredness for a bounded wco, tested
/// for all orders up to n_max:
///   B: w_{n,phi} = w_{phi,n}                        (phase of C^n vs n-th phase power)
///   C: h_1 o phi * ... * h_1 o phi^n = h_n o phi^n  [mu_{w_n}]
///   D: h_n = E_1(h_n)                               [mu_w]
///   E: h_{n+1} o phi = h_n * h_1 o phi              [mu_w]
///   F: h_1 = E_n(h_1)                               [mu_{w_n}]
///   G: E_n(h_1) o phi = E_{n+1}(h_1 o phi)          [mu_{w_{n+1}}]
///   H: h_n = E_k(h_n) for all n,k <= n_max          [mu_{w_k}]
ConditionVerdict check_condition(TransferCache& cache, char cond, int n_max, double tol);

/// h_1 = E_1(h_1) a.e. [mu_w]; condition D at order 1.
ConditionVerdict check_weakly_centered(TransferCache& cache, double tol);

/// For every same-generation pair (u1,u2) in the window whose weight products
/// down from the meeting ancestor are nonzero, the children sums
/// sum_{y in Chi(u)} |lambda_y|^2 must agree. Pairs involving a vertex with
/// incomplete children are counted as masked.
ConditionVerdict generation_criterion(const ShiftInstance& instance, double tol);

/// Composition-operator check (w identically 1): E_1(h_1) = h_1 o phi and
/// E_1(h_n) = E_1(h_1)^n for n <= n_max. NOT_APPLICABLE for genuine weights.
ConditionVerdict check_quasinormal_composition(TransferCache& cache, int n_max, double tol);

/// Relative comparison used by every check: |lhs - rhs| <= max(tol, tol*|lhs|).
bool within_tolerance(Complex lhs, Complex rhs, double tol);

struct OracleSummary {
  bool ran = false;
  bool pass = false;
  double max_commutator = 0.0;
  double normalized_commutator = 0.0;
  double phase_defect = 0.0;
  double half_commutator = 0.0;
  bool weak_pass = false;
  double weak_commutator = 0.0;
  int valid_order = 0;
  // "spectral" up to 512 points, "frobenius_bound" beyond
  std::string norm_method = "spectral";
};

struct ClassificationSummary {
  bool ran = false;
  std::string label = "UNDETERMINED";
  std::vector<std::pair<std::string, std::string>> evidence;
};

struct CenteredReport {
  std::string instance_name;
  std::string base_label;
  int depth = 0;
  int member_count = 0;
  int interior_count = 0;  // points interior to order n_max
  int n_max = 3;
  double tol = 1e-9;
  std::vector<ConditionVerdict> conditions;
  OracleSummary oracle;
  ClassificationSummary classification;
  bool internal_inconsistency = false;

  bool all_pass() const;
  bool any_fail() const;
};

struct ReportOptions {
  int n_max = 3;
  double tol = 1e-9;
  bool with_oracle = true;
  bool with_classification = true;
};

/// Runs conditions B-H, the weak check and the generation criterion (plus the
/// quasinormal check when the instance is a composition operator), optionally
/// the matrix oracle and the type classification, and cross-checks mutual
/// consistency of the equivalent conditions. Disagreement between fully
/// tested equivalent conditions is flagged as an internal inconsistency.
CenteredReport full_report(const ShiftInstance& instance, const ReportOptions& options);

/// Same for a bare wco (no tree structure: no generation criterion, no
/// classification).
CenteredReport full_report(const DiscreteWco& wco, const std::string& name,
                           const ReportOptions& options);

}  // namespace wco
