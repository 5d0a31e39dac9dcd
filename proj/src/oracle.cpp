#include "wco/oracle.hpp"

#include <cmath>
#include <ostream>

namespace wco {

namespace {

Eigen::MatrixXcd build_matrix(const DiscreteWco& wco) {
  const int n = wco.size();
  Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(n, n);
  for (int y = 0; y < n; ++y) {
    const int x = wco.phi(y);
    if (x == DiscreteWco::kExit) continue;
    m(y, x) += wco.weight(y) * std::sqrt(wco.mass(y) / wco.mass(x));
  }
  return m;
}

Eigen::MatrixXcd compress(const Eigen::MatrixXcd& m, const std::vector<uint8_t>& keep) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(keep.size()); ++i)
    if (keep[i]) idx.push_back(i);
  Eigen::MatrixXcd out(idx.size(), idx.size());
  for (size_t r = 0; r < idx.size(); ++r)
    for (size_t c = 0; c < idx.size(); ++c) out(r, c) = m(idx[r], idx[c]);
  return out;
}

}  // namespace

TruncatedOperator::TruncatedOperator(DiscreteWco wco)
    : wco_(std::move(wco)), matrix_(build_matrix(wco_)) {
  const int n = size();
  valid_order_ = 0;
  for (int order = 1; order <= n; ++order) {
    if (interior_count(order) == 0) break;
    valid_order_ = order;
  }
}

TruncatedOperator TruncatedOperator::from_matrix(Eigen::MatrixXcd m) {
  if (m.rows() != m.cols()) throw Error(Errc::invalid_argument, "matrix must be square");
  const int n = static_cast<int>(m.rows());
  std::vector<std::string> labels(n);
  std::vector<double> mass(n, 1.0);
  std::vector<int> phi(n);
  std::vector<Complex> weight(n, Complex(0, 0));
  for (int i = 0; i < n; ++i) {
    labels[i] = "p" + std::to_string(i);
    phi[i] = i;
  }
  TruncatedOperator op(DiscreteWco(std::move(labels), std::move(mass), std::move(phi),
                                   std::move(weight)));
  op.matrix_ = std::move(m);
  op.raw_ = true;
  op.valid_order_ = n;
  op.interior_.clear();
  return op;
}

const std::vector<uint8_t>& TruncatedOperator::complete_to_depth(int d) const {
  auto it = complete_.find(d);
  if (it != complete_.end()) return it->second;
  const int n = size();
  std::vector<uint8_t> out(n, 1);
  if (d > 0) {
    const std::vector<uint8_t>& prev = complete_to_depth(d - 1);
    for (int x = 0; x < n; ++x) {
      bool ok = wco_.fiber_complete(x);
      for (int y : wco_.fiber(x))
        if (!prev[y]) ok = false;
      out[x] = ok ? 1 : 0;
    }
  }
  return complete_.emplace(d, std::move(out)).first->second;
}

const std::vector<uint8_t>& TruncatedOperator::interior(int n) const {
  if (n < 0) throw Error(Errc::invalid_argument, "interior order must be nonnegative");
  auto it = interior_.find(n);
  if (it != interior_.end()) return it->second;
  if (raw_) return interior_.emplace(n, std::vector<uint8_t>(size(), 1)).first->second;
  // Depth-n completeness at every ancestor up to phi^n covers all quantities
  // the oracle compresses: densities along the ancestor path, the iterated
  // weights, and the moduli entering the phases.
  const std::vector<uint8_t>& deep = complete_to_depth(n);
  const int N = size();
  std::vector<uint8_t> out(N, 0);
  for (int x = 0; x < N; ++x) {
    bool ok = true;
    int cur = x;
    for (int j = 0; j <= n; ++j) {
      if (cur == DiscreteWco::kExit || !deep[cur]) {
        ok = false;
        break;
      }
      cur = wco_.phi(cur);
    }
    out[x] = ok ? 1 : 0;
  }
  return interior_.emplace(n, std::move(out)).first->second;
}

int TruncatedOperator::interior_count(int n) const {
  const auto& mask = interior(n);
  int c = 0;
  for (uint8_t b : mask) c += b;
  return c;
}

Eigen::MatrixXcd TruncatedOperator::interior_projector(int n) const {
  const auto& mask = interior(n);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(size(), size());
  for (int i = 0; i < size(); ++i)
    if (mask[i]) p(i, i) = 1.0;
  return p;
}

TruncatedOperator materialize(const DiscreteWco& wco) {
  TruncatedOperator op(wco);
  if (op.valid_order() == 0)
    throw Error(Errc::window_too_shallow, "window has no interior even at order 1");
  return op;
}

TruncatedOperator materialize(const ShiftInstance& instance) {
  return materialize(from_weighted_shift(instance));
}

double spectral_norm(const Eigen::MatrixXcd& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  if (std::max(m.rows(), m.cols()) <= 512) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(m);
    return svd.singularValues()(0);
  }
  return m.norm();  // Frobenius bound
}

Eigen::MatrixXcd polar_phase(const TruncatedOperator& op, int n, double tol) {
  if (n < 1) throw Error(Errc::invalid_argument, "phase order must be >= 1");
  if (n > op.valid_order())
    throw Error(Errc::order_too_large, "order " + std::to_string(n) + " exceeds valid order " +
                                           std::to_string(op.valid_order()));
  const int N = op.size();
  Eigen::MatrixXcd tn = Eigen::MatrixXcd::Identity(N, N);
  for (int i = 0; i < n; ++i) tn = tn * op.matrix();
  Eigen::MatrixXcd gram = tn.adjoint() * tn;

  double offdiag = 0.0, scale = 0.0;
  for (int r = 0; r < N; ++r)
    for (int c = 0; c < N; ++c) {
      const double a = std::abs(gram(r, c));
      scale = std::max(scale, a);
      if (r != c) offdiag = std::max(offdiag, a);
    }

  if (offdiag <= 1e-12 * std::max(1.0, scale)) {
    // wco structure: T^{n*}T^n is the multiplication by h_n, so the modulus
    // is diagonal and the pseudo-inverse is entrywise.
    Eigen::MatrixXcd pinv = Eigen::MatrixXcd::Zero(N, N);
    for (int i = 0; i < N; ++i) {
      const double s = std::sqrt(std::max(0.0, gram(i, i).real()));
      if (s >= tol) pinv(i, i) = 1.0 / s;
    }
    return tn * pinv;
  }

  // Negative controls (arbitrary matrices): symmetric eigendecomposition.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(gram);
  Eigen::VectorXd vals = eig.eigenvalues();
  Eigen::MatrixXcd v = eig.eigenvectors();
  Eigen::VectorXd inv(N);
  for (int i = 0; i < N; ++i) {
    const double s = std::sqrt(std::max(0.0, vals(i)));
    inv(i) = s >= tol ? 1.0 / s : 0.0;
  }
  return tn * (v * inv.asDiagonal() * v.adjoint());
}

CenteredOracle brute_force_centered(const TruncatedOperator& op, int n_max, double tol) {
  if (n_max < 1) throw Error(Errc::invalid_argument, "n_max must be >= 1");
  if (n_max > op.valid_order())
    throw Error(Errc::order_too_large, "n_max exceeds valid order");
  const int N = op.size();
  const auto& keep = op.interior(n_max);

  std::vector<Eigen::MatrixXcd> powers(n_max + 1);
  powers[0] = Eigen::MatrixXcd::Identity(N, N);
  for (int i = 1; i <= n_max; ++i) powers[i] = powers[i - 1] * op.matrix();

  std::vector<Eigen::MatrixXcd> gram(n_max + 1), cogram(n_max + 1);
  std::vector<double> power_norm(n_max + 1, 1.0);
  for (int i = 1; i <= n_max; ++i) {
    gram[i] = powers[i].adjoint() * powers[i];
    cogram[i] = powers[i] * powers[i].adjoint();
    power_norm[i] = spectral_norm(powers[i]);
  }

  CenteredOracle out;
  auto record = [&](const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double na, double nb) {
    const double raw = spectral_norm(compress(a * b - b * a, keep));
    out.max_commutator = std::max(out.max_commutator, raw);
    out.normalized_commutator =
        std::max(out.normalized_commutator, raw / std::max(1.0, na * nb));
  };
  for (int i = 1; i <= n_max; ++i)
    for (int j = 1; j <= n_max; ++j)
      record(gram[i], cogram[j], power_norm[i] * power_norm[i], power_norm[j] * power_norm[j]);
  for (int i = 1; i <= n_max; ++i)
    for (int j = i + 1; j <= n_max; ++j)
      record(cogram[i], cogram[j], power_norm[i] * power_norm[i], power_norm[j] * power_norm[j]);

  const Eigen::MatrixXcd u1 = polar_phase(op, 1, tol);
  Eigen::MatrixXcd u1n = u1;
  for (int n = 1; n <= n_max; ++n) {
    if (n > 1) u1n = u1n * u1;
    const Eigen::MatrixXcd un = polar_phase(op, n, tol);
    out.phase_defect =
        std::max(out.phase_defect, spectral_norm(compress(u1n - un, keep)));
  }

  out.pass = out.normalized_commutator <= tol && out.phase_defect <= tol;
  return out;
}

HalfWeakOracle brute_force_half_and_weak(const TruncatedOperator& op, int n_max, double tol) {
  if (n_max < 1) throw Error(Errc::invalid_argument, "n_max must be >= 1");
  if (n_max > op.valid_order())
    throw Error(Errc::order_too_large, "n_max exceeds valid order");
  const int N = op.size();
  const auto& keep = op.interior(n_max);

  std::vector<Eigen::MatrixXcd> powers(n_max + 1);
  powers[0] = Eigen::MatrixXcd::Identity(N, N);
  for (int i = 1; i <= n_max; ++i) powers[i] = powers[i - 1] * op.matrix();
  std::vector<Eigen::MatrixXcd> gram(n_max + 1);
  std::vector<double> norm2(n_max + 1, 1.0);
  for (int i = 1; i <= n_max; ++i) {
    gram[i] = powers[i].adjoint() * powers[i];
    const double s = spectral_norm(powers[i]);
    norm2[i] = s * s;
  }

  HalfWeakOracle out;
  double half_normalized = 0.0;
  for (int i = 1; i <= n_max; ++i)
    for (int j = i + 1; j <= n_max; ++j) {
      const double raw = spectral_norm(compress(gram[i] * gram[j] - gram[j] * gram[i], keep));
      out.half_commutator = std::max(out.half_commutator, raw);
      half_normalized = std::max(half_normalized, raw / std::max(1.0, norm2[i] * norm2[j]));
    }
  out.half_pass = half_normalized <= tol;

  const Eigen::MatrixXcd cogram1 = powers[1] * powers[1].adjoint();
  out.weak_commutator =
      spectral_norm(compress(gram[1] * cogram1 - cogram1 * gram[1], keep));
  out.weak_pass = out.weak_commutator / std::max(1.0, norm2[1] * norm2[1]) <= tol;
  return out;
}

void dump_matrix(const Eigen::MatrixXcd& m, std::ostream& out) {
  out << m.rows() << " " << m.cols() << "\n";
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      std::snprintf(buf, sizeof(buf), "%.17g %.17g", m(r, c).real(), m(r, c).imag());
      out << buf << (c + 1 == m.cols() ? "" : " ");
    }
    out << "\n";
  }
}

}  // namespace wco
