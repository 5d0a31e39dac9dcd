#include "wco/classify.hpp"

#include <cmath>
#include <sstream>

namespace wco {

const char* type_label_name(TypeLabel label) {
  switch (label) {
    case TypeLabel::I: return "I";
    case TypeLabel::II: return "II";
    case TypeLabel::III: return "III";
    case TypeLabel::IV: return "IV";
    case TypeLabel::I_plus_IV: return "I_plus_IV";
    case TypeLabel::II_or_III_family: return "II_or_III_family";
    case TypeLabel::UNDETERMINED: return "UNDETERMINED";
  }
  return "?";
}

const char* support_split_name(SupportSplitTag tag) {
  switch (tag) {
    case SupportSplitTag::I_or_IV: return "I_or_IV";
    case SupportSplitTag::II_or_III: return "II_or_III";
    case SupportSplitTag::MIXED: return "MIXED";
    case SupportSplitTag::UNDETERMINED: return "UNDETERMINED";
  }
  return "?";
}

SupportSplitResult support_split(TransferCache& cache, int n_max) {
  const int N = cache.size();
  SupportSplitResult out;
  for (int x = 0; x < N; ++x) {
    bool any_valid = false;
    bool hit_zero = false;
    for (int n = 1; n <= n_max; ++n) {
      const Density& hn = cache.density(n);
      if (!hn.valid[x]) continue;
      any_valid = true;
      if (hn.value[x] == 0.0) {
        hit_zero = true;
        break;
      }
    }
    if (!any_valid)
      out.undecided.push_back(x);
    else if (hit_zero)
      out.eventually_zero.push_back(x);
    else
      out.always_positive.push_back(x);
  }
  if (!out.always_positive.empty() && out.eventually_zero.empty() && out.undecided.empty())
    out.tag = SupportSplitTag::I_or_IV;
  else if (out.always_positive.empty() && !out.eventually_zero.empty() && out.undecided.empty())
    out.tag = SupportSplitTag::II_or_III;
  else if (!out.always_positive.empty() && !out.eventually_zero.empty())
    out.tag = SupportSplitTag::MIXED;
  else if (out.undecided.empty() || !out.always_positive.empty() || !out.eventually_zero.empty()) {
    // Partially undecided but one-sided: stay honest only about the decided side.
    out.tag = out.eventually_zero.empty() ? SupportSplitTag::I_or_IV
                                          : SupportSplitTag::II_or_III;
  }
  if (!out.undecided.empty() && out.always_positive.empty() && out.eventually_zero.empty())
    out.tag = SupportSplitTag::UNDETERMINED;
  return out;
}

bool type_IV_test(TransferCache& cache) {
  const DiscreteWco& wco = cache.wco();
  const Density& h1 = cache.density(1);
  for (int x = 0; x < wco.size(); ++x) {
    if (!wco.phi_arbitrary(x) && !wco.weighted(x)) return false;
    if (h1.valid[x] && h1.value[x] <= 0.0) return false;
    int weighted_in_fiber = 0;
    for (int z : wco.fiber(x))
      if (wco.weighted(z)) ++weighted_in_fiber;
    if (weighted_in_fiber > 1) return false;
  }
  return true;
}

DecayResult type_I_decay(const ShiftInstance& instance, int v, int n_max) {
  const DirectedTree& tree = *instance.shift.tree;
  const TruncationWindow& win = instance.window;
  const auto& lambda = instance.shift.lambda;
  if (win.rank_of(v) < 0) throw Error(Errc::unknown_vertex, "decay base not in window");

  DecayResult out;
  out.ratios.assign(n_max, 0.0);
  out.valid.assign(n_max, 0);

  for (int n = 1; n <= n_max; ++n) {
    const auto anc = tree.ancestor(v, n);
    if (!anc || win.rank_of(*anc) < 0)
      throw Error(Errc::undefined_ancestor,
                  "par^" + std::to_string(n) + " of " + tree.label(v) + " leaves the window");
    double numer = 1.0;
    int cur = v;
    for (int j = 0; j < n; ++j) {
      numer *= std::norm(lambda[cur]);
      cur = tree.parent(cur);
    }
    // ||S^n e_u||^2 = sum over depth-n descendants w of |lambda_{u|w}|^2;
    // only exact when the depth-n subtree under u is fully in the window.
    double denom = 0.0;
    bool complete = true;
    struct Item { int vertex; int depth; double prod; };
    std::vector<Item> stack{{*anc, 0, 1.0}};
    while (!stack.empty()) {
      const Item it = stack.back();
      stack.pop_back();
      if (it.depth == n) {
        denom += it.prod;
        continue;
      }
      if (!win.interior_mask[win.rank_of(it.vertex)]) complete = false;
      for (int c : tree.children(it.vertex)) {
        if (win.rank_of(c) < 0) continue;
        stack.push_back({c, it.depth + 1, it.prod * std::norm(lambda[c])});
      }
    }
    if (!complete || denom <= 0.0) continue;
    out.ratios[n - 1] = numer / denom;
    out.valid[n - 1] = 1;
  }

  // Log-linear fit over the last ceil(n_max/2) valid ratios.
  const int tail = (n_max + 1) / 2;
  std::vector<std::pair<double, double>> pts;
  for (int n = n_max - tail + 1; n <= n_max; ++n) {
    if (n >= 1 && out.valid[n - 1] && out.ratios[n - 1] > 0.0)
      pts.emplace_back(static_cast<double>(n), std::log(out.ratios[n - 1]));
  }
  if (pts.size() >= 2) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (auto [x, y] : pts) {
      sx += x;
      sy += y;
      sxx += x * x;
      sxy += x * y;
    }
    const double m = pts.size();
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.fitted_rho = std::exp(slope);
    out.decaying = slope < -0.01;
  }
  return out;
}

bool kappa_ary_test(const ShiftInstance& instance, int kappa) {
  if (kappa < 2) throw Error(Errc::invalid_argument, "kappa must be >= 2");
  const DirectedTree& tree = *instance.shift.tree;
  const TruncationWindow& win = instance.window;
  const auto& lambda = instance.shift.lambda;

  double sup = 0.0, inf = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < win.members.size(); ++i) {
    const int v = win.members[i];
    int in_window = 0;
    for (int c : tree.children(v))
      if (win.rank_of(c) >= 0) ++in_window;
    // A children-complete member must genuinely meet the valency bound; an
    // incomplete member is only checkable when even its window part does.
    if (win.interior_mask[i] && in_window < kappa)
      throw Error(Errc::valency_too_low,
                  tree.label(v) + " has " + std::to_string(in_window) + " children");
    const bool genuine_root = tree.parent(v) == -1 && !win.top_cut;
    if (!genuine_root) {
      const double a = std::abs(lambda[v]);
      sup = std::max(sup, a);
      inf = std::min(inf, a);
    }
  }
  return sup < std::sqrt(static_cast<double>(kappa)) * inf;
}

namespace {

/// Orthonormal basis of the column space, singular values below
/// rank_tol * sigma_max dropped. Exactly-zero columns are removed up front;
/// shift matrices are column-sparse and this keeps the factorization thin.
Eigen::MatrixXcd orth_basis(const Eigen::MatrixXcd& m, double rank_tol) {
  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index c = 0; c < m.cols(); ++c)
    if (m.col(c).norm() > 0.0) nonzero.push_back(c);
  if (nonzero.empty()) return Eigen::MatrixXcd(m.rows(), 0);
  Eigen::MatrixXcd thin(m.rows(), nonzero.size());
  for (size_t c = 0; c < nonzero.size(); ++c) thin.col(c) = m.col(nonzero[c]);

  if (thin.cols() > 256) {
    // Same singular-value factorization computed through the normal matrix:
    // sigma_i^2 are the eigenvalues of thin^H thin. Far cheaper for wide
    // blocks; our rank gaps are orders of magnitude above the squared
    // tolerance.
    Eigen::MatrixXcd gram = thin.adjoint() * thin;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
    const double smax = std::sqrt(std::max(0.0, eig.eigenvalues().maxCoeff()));
    if (smax <= 0.0) return Eigen::MatrixXcd(m.rows(), 0);
    std::vector<Eigen::Index> keep;
    for (Eigen::Index i = 0; i < eig.eigenvalues().size(); ++i)
      if (std::sqrt(std::max(0.0, eig.eigenvalues()(i))) >= rank_tol * smax)
        keep.push_back(i);
    Eigen::MatrixXcd basis(m.rows(), keep.size());
    for (size_t i = 0; i < keep.size(); ++i)
      basis.col(i) = thin * eig.eigenvectors().col(keep[i]) /
                     std::sqrt(eig.eigenvalues()(keep[i]));
    return basis;
  }

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(thin, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return Eigen::MatrixXcd(m.rows(), 0);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= rank_tol * sv(0)) ++rank;
  return svd.matrixU().leftCols(rank);
}

/// Intersection of two subspaces given by orthonormal bases, via principal
/// angles: directions with cos(theta) close to 1.
Eigen::MatrixXcd subspace_intersection(const Eigen::MatrixXcd& u, const Eigen::MatrixXcd& v,
                                       double angle_tol) {
  if (u.cols() == 0 || v.cols() == 0) return Eigen::MatrixXcd(u.rows(), 0);
  Eigen::MatrixXcd s = u.adjoint() * v;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(s, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= 1.0 - angle_tol) ++dim;
  return u * svd.matrixU().leftCols(dim);
}

int dim_on_coordinates(const Eigen::MatrixXcd& basis, const std::vector<uint8_t>& keep,
                       double angle_tol) {
  if (basis.cols() == 0) return 0;
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(keep.size()); ++i)
    if (keep[i]) idx.push_back(i);
  if (idx.empty()) return 0;
  Eigen::MatrixXcd rows(idx.size(), basis.cols());
  for (size_t r = 0; r < idx.size(); ++r) rows.row(r) = basis.row(idx[r]);
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(rows);
  const auto& sv = svd.singularValues();
  int dim = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv(i) >= 1.0 - angle_tol) ++dim;
  return dim;
}

std::vector<int> iterated_range_dims(const Eigen::MatrixXcd& t, int n_max, double rank_tol,
                                     double angle_tol, Eigen::MatrixXcd* final_basis) {
  // Operator matrices here are extremely sparse (at most one nonzero per row
  // for a wco); a sparse product keeps the iteration cheap on large windows.
  Eigen::SparseMatrix<Complex> ts(t.rows(), t.cols());
  {
    std::vector<Eigen::Triplet<Complex>> trip;
    for (Eigen::Index r = 0; r < t.rows(); ++r)
      for (Eigen::Index c = 0; c < t.cols(); ++c)
        if (t(r, c) != Complex(0, 0)) trip.emplace_back(r, c, t(r, c));
    ts.setFromTriplets(trip.begin(), trip.end());
  }
  std::vector<int> dims;
  Eigen::MatrixXcd power_basis = orth_basis(t, rank_tol);
  Eigen::MatrixXcd inter = power_basis;
  dims.push_back(static_cast<int>(inter.cols()));
  for (int n = 2; n <= n_max; ++n) {
    power_basis = orth_basis(ts * power_basis, rank_tol);  // ran(T^n) = T ran(T^{n-1})
    inter = subspace_intersection(inter, power_basis, angle_tol);
    dims.push_back(static_cast<int>(inter.cols()));
  }
  if (final_basis) *final_basis = inter;
  return dims;
}

}  // namespace

RangeIntersection range_intersection_dim(const TruncatedOperator& op, int n_max,
                                         double rank_tol) {
  if (n_max < 1) throw Error(Errc::invalid_argument, "n_max must be >= 1");
  const double angle_tol = std::sqrt(rank_tol);
  RangeIntersection out;
  Eigen::MatrixXcd basis_t, basis_tstar;
  out.dims = iterated_range_dims(op.matrix(), n_max, rank_tol, angle_tol, &basis_t);
  out.dims_adjoint =
      iterated_range_dims(op.matrix().adjoint(), n_max, rank_tol, angle_tol, &basis_tstar);
  const auto& keep = op.interior(std::min(n_max, op.valid_order()));
  out.interior_count = 0;
  for (uint8_t b : keep) out.interior_count += b;
  out.dim_interior = dim_on_coordinates(basis_t, keep, angle_tol);
  out.dim_interior_adjoint = dim_on_coordinates(basis_tstar, keep, angle_tol);
  return out;
}

std::vector<int> nested_range_dims(const Eigen::MatrixXcd& m, int n_max, double rank_tol) {
  return iterated_range_dims(m, n_max, rank_tol, std::sqrt(rank_tol), nullptr);
}

TypeVerdict structural_type(const ShiftInstance& instance, int n_max, double rank_tol) {
  const DirectedTree& tree = *instance.shift.tree;
  const TruncationWindow& win = instance.window;
  for (size_t i = 0; i < win.members.size(); ++i) {
    const int v = win.members[i];
    const bool genuine_root = tree.parent(v) == -1 && !win.top_cut;
    if (!genuine_root && instance.shift.lambda[v] == Complex(0, 0))
      throw Error(Errc::not_centered,
                  "zero weight at " + tree.label(v) + "; decompose before classifying");
  }

  StructuralProfile profile = structural_profile(tree, win);
  TypeVerdict out;
  std::ostringstream prov;
  prov << "base=" << tree.label(win.base) << " depth=" << win.depth
       << " members=" << win.count();
  out.window_provenance = prov.str();

  auto note = [&](const std::string& criterion, const std::string& data) {
    out.evidence.emplace_back(criterion, data);
  };

  if (profile.rooted && profile.leafless) {
    note("structural", "rooted and leafless");
    out.label = TypeLabel::I;
    return out;
  }
  if (profile.rooted && !profile.leafless) {
    // Centeredness forces all leaves into one generation and a uniform
    // finite depth.
    bool uniform = profile.finite_depth.has_value();
    if (uniform) {
      const int top_depth = tree.depth(win.top_member());
      for (int leaf : profile.leaves)
        if (tree.depth(leaf) - top_depth != *profile.finite_depth) uniform = false;
    }
    note("structural", "rooted with leaves");
    if (uniform) {
      note("finite_depth", std::to_string(*profile.finite_depth));
      out.label = TypeLabel::III;
    } else {
      note("finite_depth", "not uniform on window");
      out.label = TypeLabel::UNDETERMINED;
    }
    return out;
  }
  if (profile.z_minus_isomorphic) {
    note("structural", "rootless single ray with a leaf");
    out.label = TypeLabel::II;
    return out;
  }
  if (!profile.rooted && !profile.leafless) {
    note("structural", "rootless with leaves, not a single ray");
    out.label = TypeLabel::II_or_III_family;
    return out;
  }

  // Rootless and leafless: type I, type IV, or a genuine sum.
  note("structural", "rootless and leafless");
  TransferCache cache(from_weighted_shift(instance));
  if (type_IV_test(cache)) {
    note("injective_dense_range", "singleton fibers, positive density, nonzero weights");
    out.label = TypeLabel::IV;
    return out;
  }

  int min_valency = std::numeric_limits<int>::max();
  for (size_t i = 0; i < win.members.size(); ++i) {
    if (!win.interior_mask[i]) continue;
    min_valency = std::min(min_valency,
                           static_cast<int>(tree.children(win.members[i]).size()));
  }
  if (min_valency >= 2 && min_valency != std::numeric_limits<int>::max()) {
    if (kappa_ary_test(instance, min_valency)) {
      note("kappa_ary", "kappa=" + std::to_string(min_valency));
      out.label = TypeLabel::I;
      return out;
    }
  }

  const int navail = tree.depth(win.base) - tree.depth(win.top_member());
  if (navail >= 2) {
    DecayResult decay = type_I_decay(instance, win.base, navail);
    std::ostringstream ds;
    ds << (decay.decaying ? "decaying" : "not decaying") << " rho=" << decay.fitted_rho;
    note("decay", ds.str());
    if (decay.decaying) {
      out.label = TypeLabel::I;
      return out;
    }
  }

  TruncatedOperator op = materialize(instance);
  const int n_range = std::min(n_max, op.valid_order());
  RangeIntersection ri = range_intersection_dim(op, n_range, rank_tol);
  std::ostringstream rs;
  rs << "dim=" << ri.dim_interior << "/" << ri.interior_count << " at n=" << n_range;
  note("range_intersection", rs.str());
  if (ri.dim_interior == 0) {
    out.label = TypeLabel::I;
  } else {
    out.label = TypeLabel::I_plus_IV;
    note("type_IV_dimension", std::to_string(ri.dim_interior));
  }
  return out;
}

}  // namespace wco
