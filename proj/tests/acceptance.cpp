// Acceptance suite: reproduces the worked examples at truncation scale and
// runs the randomized cross-validation batteries. One pass/fail line per
// criterion; the process exits with the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/random_trees.hpp"
#include "wco/centered.hpp"
#include "wco/classify.hpp"
#include "wco/continuous.hpp"
#include "wco/oracle.hpp"

using namespace wco;

namespace {

struct Criterion {
  std::string text;
  std::function<bool(std::string&)> body;
};

std::vector<ShiftInstance> equivalence_batch() {
  static std::vector<ShiftInstance> batch = [] {
    std::mt19937_64 rng(20260811);
    wco::testing::RandomShiftOptions opt;  // <=40 vertices, depth <=5, 10% zeros
    std::vector<ShiftInstance> out;
    out.reserve(200);
    for (int i = 0; i < 200; ++i)
      out.push_back(wco::testing::random_rooted_shift(rng, opt, "rand" + std::to_string(i)));
    return out;
  }();
  return batch;
}

bool criterion_binary(std::string& detail) {
  ShiftInstance inst = make_binary(8);
  bool ok = true;
  std::ostringstream why;

  ConditionVerdict gen = generation_criterion(inst, 1e-9);
  if (gen.status != Status::PASS) { ok = false; why << " generation!=PASS"; }

  TransferCache cache(from_weighted_shift(inst));
  for (char cond : {'C', 'D', 'E', 'F', 'G', 'H'}) {
    ConditionVerdict v = check_condition(cache, cond, 3, 1e-9);
    if (v.status != Status::PASS || v.residual > 1e-12) {
      ok = false;
      why << " " << cond << "(status=" << status_name(v.status) << ",res=" << v.residual << ")";
    }
  }

  TruncatedOperator op = materialize(inst);
  CenteredOracle oracle = brute_force_centered(op, 3, 1e-9);
  if (oracle.max_commutator > 1e-10) { ok = false; why << " commutator=" << oracle.max_commutator; }
  if (oracle.phase_defect > 1e-10) { ok = false; why << " phase=" << oracle.phase_defect; }

  DecayResult decay = type_I_decay(inst, inst.window.base, 8);
  for (int n = 1; n <= 8; ++n) {
    if (!decay.valid[n - 1] || std::abs(decay.ratios[n - 1] - std::pow(0.5, n)) > 1e-12) {
      ok = false;
      why << " ratio" << n;
    }
  }

  TypeVerdict tv = structural_type(inst, 3, 1e-8);
  if (tv.label != TypeLabel::I) { ok = false; why << " label=" << type_label_name(tv.label); }

  detail = why.str();
  return ok;
}

bool criterion_blackblack(std::string& detail) {
  ShiftInstance inst = make_blackblack(6);
  bool ok = true;
  std::ostringstream why;

  TransferCache cache(from_weighted_shift(inst));
  if (check_weakly_centered(cache, 1e-9).status != Status::PASS) { ok = false; why << " weak"; }

  ConditionVerdict d = check_condition(cache, 'D', 2, 1e-9);
  const DiscreteWco& w = cache.wco();
  if (d.status != Status::FAIL || !d.witness || d.witness->n != 2 ||
      (d.witness->point != "(1,1)" && d.witness->point != "(1,2)")) {
    ok = false;
    why << " D-witness";
  }
  const Density& h2 = cache.density(2);
  double h_11 = -1, h_12 = -1;
  for (int i = 0; i < w.size(); ++i) {
    if (w.label(i) == "(1,1)") h_11 = h2.value[i];
    if (w.label(i) == "(1,2)") h_12 = h2.value[i];
  }
  if (std::abs(h_11 - 1.0) > 1e-12 || std::abs(h_12 - 2.0) > 1e-12) {
    ok = false;
    why << " h2-values(" << h_11 << "," << h_12 << ")";
  }

  TruncatedOperator op = materialize(inst);
  Eigen::MatrixXcd t = op.matrix();
  Eigen::MatrixXcd t2 = t * t;
  Eigen::MatrixXcd a2 = t2.adjoint() * t2;
  Eigen::MatrixXcd b1 = t * t.adjoint();
  const auto& keep = op.interior(2);
  std::vector<int> idx;
  for (int i = 0; i < op.size(); ++i)
    if (keep[i]) idx.push_back(i);
  Eigen::MatrixXcd comm = a2 * b1 - b1 * a2;
  Eigen::MatrixXcd compressed(idx.size(), idx.size());
  for (size_t r = 0; r < idx.size(); ++r)
    for (size_t c = 0; c < idx.size(); ++c) compressed(r, c) = comm(idx[r], idx[c]);
  const double norm = spectral_norm(compressed);
  if (norm < 1.0 - 1e-9) { ok = false; why << " |[T2*T2,TT*]|=" << norm; }

  ConditionVerdict gen = generation_criterion(inst, 1e-9);
  if (gen.status != Status::FAIL || !gen.witness || gen.witness->point != "((2,1),(2,2))") {
    ok = false;
    why << " generation-witness";
  }

  detail = why.str();
  return ok;
}

bool criterion_y_tree(std::string& detail) {
  ShiftInstance inst = make_y_tree(10);
  bool ok = true;
  std::ostringstream why;

  TransferCache cache(from_weighted_shift(inst));
  for (char cond : {'B', 'C', 'D', 'E', 'F', 'G', 'H'}) {
    if (check_condition(cache, cond, 3, 1e-9).status != Status::PASS) {
      ok = false;
      why << " " << cond;
    }
  }
  if (generation_criterion(inst, 1e-9).status != Status::PASS) { ok = false; why << " generation"; }

  // The symmetric vector f((1,k)) = f((2,k)) = 2^{-k} lies in every range.
  TruncatedOperator op = materialize(inst);
  const DiscreteWco& w = cache.wco();
  Eigen::VectorXcd f = Eigen::VectorXcd::Zero(w.size());
  for (int i = 0; i < w.size(); ++i) {
    const std::string& label = w.label(i);
    if (label.size() >= 5 && label[0] == '(' && (label[1] == '1' || label[1] == '2')) {
      const int k = std::stoi(label.substr(3, label.size() - 4));
      f(i) = std::pow(2.0, -k);
    }
  }
  Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(w.size(), w.size());
  for (int n = 1; n <= 10; ++n) {
    power = power * op.matrix();
    Eigen::VectorXcd g = power.bdcSvd(Eigen::ComputeThinU | Eigen::ComputeThinV).solve(f);
    const double residual = (power * g - f).norm();
    if (residual > 1e-10) {
      ok = false;
      why << " lsq(n=" << n << ")=" << residual;
    }
  }

  TypeVerdict tv = structural_type(inst, 3, 1e-8);
  if (tv.label != TypeLabel::I_plus_IV) { ok = false; why << " label=" << type_label_name(tv.label); }
  bool has_dim = false;
  for (const auto& [criterion, data] : tv.evidence)
    if (criterion == "type_IV_dimension" && std::stoi(data) >= 1) has_dim = true;
  if (!has_dim) { ok = false; why << " IV-dim"; }

  detail = why.str();
  return ok;
}

bool criterion_z_minus(std::string& detail) {
  ShiftInstance inst = make_z_minus(8);
  bool ok = true;
  std::ostringstream why;

  TypeVerdict tv = structural_type(inst, 3, 1e-8);
  if (tv.label != TypeLabel::II) { ok = false; why << " label=" << type_label_name(tv.label); }

  TruncatedOperator op = materialize(inst);
  RangeIntersection ri = range_intersection_dim(op, 7, 1e-8);
  if (ri.dim_interior != ri.interior_count || ri.interior_count == 0) {
    ok = false;
    why << " ran(T^n) dim=" << ri.dim_interior << "/" << ri.interior_count;
  }
  if (ri.dim_interior_adjoint != 0) { ok = false; why << " ran(T*^n) dim=" << ri.dim_interior_adjoint; }

  detail = why.str();
  return ok;
}

bool criterion_equivalence(std::string& detail) {
  bool ok = true;
  std::ostringstream why;
  int centered_count = 0;
  const auto batch = equivalence_batch();
  for (size_t i = 0; i < batch.size(); ++i) {
    const ShiftInstance& inst = batch[i];
    TransferCache cache(from_weighted_shift(inst));
    std::vector<bool> verdicts;
    bool all_tested = true;
    for (char cond : {'B', 'C', 'D', 'E', 'F', 'G', 'H'}) {
      ConditionVerdict v = check_condition(cache, cond, 3, 1e-8);
      if (v.masked != 0 || v.status == Status::INCONCLUSIVE) all_tested = false;
      verdicts.push_back(v.status == Status::PASS);
    }
    verdicts.push_back(generation_criterion(inst, 1e-8).status == Status::PASS);
    TruncatedOperator op = materialize(cache.wco());
    CenteredOracle oracle = brute_force_centered(op, std::min(3, op.valid_order()), 1e-8);
    verdicts.push_back(oracle.pass);

    if (!all_tested) {
      ok = false;
      why << " instance " << i << " not fully interior;";
    }
    for (size_t k = 1; k < verdicts.size(); ++k) {
      if (verdicts[k] != verdicts[0]) {
        ok = false;
        why << " instance " << i << " verdict split;";
        break;
      }
    }
    if (verdicts[0]) ++centered_count;
  }
  if (centered_count == 0 || centered_count == 200) {
    ok = false;
    why << " degenerate batch (centered_count=" << centered_count << ")";
  }
  std::ostringstream note;
  note << " [" << centered_count << "/200 centered]" << why.str();
  detail = note.str();
  return ok;
}

bool criterion_chain_rule(std::string& detail) {
  bool ok = true;
  double worst = 0.0;
  for (const ShiftInstance& inst : equivalence_batch()) {
    TransferCache cache(from_weighted_shift(inst));
    for (auto [n, k] : {std::pair{1, 1}, {1, 2}, {2, 1}, {1, 3}, {3, 1}, {2, 2}}) {
      const double r = verify_chain_rule(cache, n, k);
      worst = std::max(worst, r);
      if (r > 1e-12) ok = false;
    }
  }
  std::ostringstream note;
  note << " [max residual " << worst << "]";
  detail = note.str();
  return ok;
}

bool criterion_half_centered(std::string& detail) {
  bool ok = true;
  double worst_comm = 0.0, worst_diag = 0.0;
  for (const ShiftInstance& inst : equivalence_batch()) {
    DiscreteWco w = from_weighted_shift(inst);
    TruncatedOperator op = materialize(w);
    const int n_max = std::min(3, op.valid_order());
    HalfWeakOracle hw = brute_force_half_and_weak(op, n_max, 1e-8);
    worst_comm = std::max(worst_comm, hw.half_commutator);
    if (hw.half_commutator > 1e-13) ok = false;

    TransferCache cache(w);
    Eigen::MatrixXcd power = Eigen::MatrixXcd::Identity(op.size(), op.size());
    for (int n = 1; n <= n_max; ++n) {
      power = power * op.matrix();
      Eigen::MatrixXcd gram = power.adjoint() * power;
      const Density& hn = cache.density(n);
      const auto& interior = op.interior(n);
      for (int i = 0; i < op.size(); ++i) {
        if (!interior[i]) continue;
        const double diff = std::abs(gram(i, i).real() - hn.value[i]);
        worst_diag = std::max(worst_diag, diff);
        if (diff > 1e-12) ok = false;
      }
    }
  }
  std::ostringstream note;
  note << " [max commutator " << worst_comm << ", max diag gap " << worst_diag << "]";
  detail = note.str();
  return ok;
}

bool criterion_linear_model(std::string& detail) {
  bool ok = true;
  std::ostringstream why;

  RadialDensity rho = RadialDensity::polynomial({0.0, 1.0});
  Eigen::MatrixXd a(1, 1);
  a << 2.0;
  LinearModel model(1, a);

  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> u(-9.0, 9.0);
  for (int rep = 0; rep < 200; ++rep) {
    Eigen::VectorXd x(1);
    x << u(rng);
    if (std::abs(x(0)) < 1e-6) continue;
    if (std::abs(rn_linear(rho, model, 1, x) - 0.125) > 1e-13) { ok = false; why << " rn"; break; }
  }

  Eigen::VectorXd c(1);
  c << 2.0;
  const double residual = quadrature_verify(rho, model, 1, {triangle_bump(c, 1.0)}, 10.0, 100000);
  if (residual > 1e-6) { ok = false; why << " quadrature=" << residual; }

  if (!boundedness_test(rho, model).bounded) { ok = false; why << " boundedness"; }

  double worst = 0.0;
  for (int rep = 0; rep < 1000; ++rep) {
    Eigen::VectorXd x(1);
    x << u(rng);
    if (std::abs(x(0)) < 1e-3) continue;
    for (auto [n, k] : {std::pair{1, 1}, {1, 2}, {2, 1}}) {
      Eigen::VectorXd back = x;
      for (int i = 0; i < n; ++i) back = model.inverse * back;
      const double lhs = rn_linear(rho, model, n + k, x);
      const double rhs = rn_linear(rho, model, n, x) * rn_linear(rho, model, k, back);
      worst = std::max(worst, std::abs(lhs - rhs) / std::max(1.0, std::abs(lhs)));
    }
  }
  if (worst > 1e-12) { ok = false; why << " chain=" << worst; }

  detail = why.str();
  return ok;
}

bool criterion_halfline(std::string& detail) {
  bool ok = true;
  std::ostringstream why;
  for (int order : {1, 2, 3}) {
    HalflineModel m = halfline_model(order);
    if (m.quadrature_residual > 1e-8) { ok = false; why << " quad(n=" << order << ")"; }
    if (m.coisometry_residual > 1e-8) { ok = false; why << " coiso(n=" << order << ")"; }
    if (m.adjoint_range_dims.back() != 0) { ok = false; why << " ranges"; }
    for (size_t i = 1; i < m.adjoint_range_dims.size(); ++i)
      if (m.adjoint_range_dims[i] > m.adjoint_range_dims[i - 1]) { ok = false; why << " monotone"; }
    if (std::string(m.type) != "II" || std::string(m.adjoint_type) != "I") {
      ok = false;
      why << " types";
    }
  }
  detail = why.str();
  return ok;
}

bool criterion_decomposition(std::string& detail) {
  std::mt19937_64 rng(4242);
  wco::testing::RandomShiftOptions opt;
  opt.zero_probability = 0.2;
  bool ok = true;
  int multi = 0, centered_full = 0;
  for (int i = 0; i < 50; ++i) {
    ShiftInstance inst = wco::testing::random_rooted_shift(rng, opt, "dz" + std::to_string(i));
    const bool full = generation_criterion(inst, 1e-8).status == Status::PASS;
    auto parts = decompose_at_zero_weights(inst);
    if (parts.size() > 1) ++multi;
    bool all_parts = true;
    for (const auto& p : parts)
      if (generation_criterion(p, 1e-8).status != Status::PASS) all_parts = false;
    if (full != all_parts) ok = false;
    if (full) ++centered_full;
  }
  std::ostringstream note;
  note << " [" << multi << "/50 split, " << centered_full << "/50 centered]";
  if (multi == 0) ok = false;  // the batch must actually exercise the cut
  detail = note.str();
  return ok;
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"binary tree depth 8: all conditions, oracle, decay (1/2)^n, type I", criterion_binary},
      {"blackblack depth 6: weak yes, D fails at n=2, unit commutator, generation witness",
       criterion_blackblack},
      {"y tree depth 10: centered, symmetric vector in every range, type I+IV", criterion_y_tree},
      {"z_minus depth 8: type II, full/empty range intersections at n=7", criterion_z_minus},
      {"200 random shifts: B-H, generation and oracle verdicts coincide", criterion_equivalence},
      {"chain rule residual <= 1e-12 for n+k <= 4 on the same batch", criterion_chain_rule},
      {"half-centeredness <= 1e-13 and gram diagonal matches densities <= 1e-12",
       criterion_half_centered},
      {"linear model: h_1 = 1/8, quadrature <= 1e-6, bounded, closed-form chain rule",
       criterion_linear_model},
      {"half line: h_n indicators <= 1e-8, co-isometry, adjoint ranges empty out",
       criterion_halfline},
      {"50 random shifts with zeros: centered iff every component is", criterion_decomposition},
  };

  int failures = 0;
  const auto t0 = std::chrono::steady_clock::now();
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = criteria[i].body(detail);
    } catch (const std::exception& e) {
      detail = std::string(" exception: ") + e.what();
    }
    const auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                        std::chrono::steady_clock::now() - start)
                        .count();
    std::printf("[%s] criterion %zu: %s (%lld ms)%s\n", ok ? "PASS" : "FAIL", i + 1,
                criteria[i].text.c_str(), static_cast<long long>(ms),
                ok ? (detail.empty() ? "" : detail.c_str()) : detail.c_str());
    if (!ok) ++failures;
  }
  const auto total = std::chrono::duration_cast<std::chrono::milliseconds>(
                         std::chrono::steady_clock::now() - t0)
                         .count();
  std::printf("%d/10 criteria passed in %lld ms\n", 10 - failures,
              static_cast<long long>(total));
  return failures;
}
