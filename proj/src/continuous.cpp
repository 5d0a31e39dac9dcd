#include "wco/continuous.hpp"

#include <cmath>

#include "wco/classify.hpp"

namespace wco {

RadialDensity RadialDensity::polynomial(std::vector<double> coeffs) {
  bool positive_tail = false;
  for (size_t k = 0; k < coeffs.size(); ++k) {
    if (coeffs[k] < 0.0)
      throw Error(Errc::invalid_argument, "density coefficients must be nonnegative");
    if (k >= 1 && coeffs[k] > 0.0) positive_tail = true;
  }
  if (!positive_tail)
    throw Error(Errc::invalid_argument,
                "density needs a positive coefficient of index >= 1");
  RadialDensity d;
  d.kind = Kind::polynomial;
  d.coefficients = std::move(coeffs);
  return d;
}

RadialDensity RadialDensity::exponential() {
  RadialDensity d;
  d.kind = Kind::exponential;
  return d;
}

RadialDensity RadialDensity::entire(std::function<double(double)> fn) {
  if (!fn) throw Error(Errc::invalid_argument, "density hook must be callable");
  RadialDensity d;
  d.kind = Kind::custom;
  d.hook = std::move(fn);
  return d;
}

double RadialDensity::operator()(double z) const {
  if (kind == Kind::exponential) return std::exp(z);
  if (kind == Kind::custom) return hook(z);
  double acc = 0.0;
  for (size_t k = coefficients.size(); k-- > 0;) acc = acc * z + coefficients[k];
  return acc;
}

LinearModel::LinearModel(int kappa_, Eigen::MatrixXd a)
    : LinearModel(kappa_, std::move(a), Eigen::MatrixXd::Identity(kappa_, kappa_)) {}

LinearModel::LinearModel(int kappa_, Eigen::MatrixXd a, Eigen::MatrixXd g)
    : kappa(kappa_), map(std::move(a)), inner_product(std::move(g)) {
  if (map.rows() != kappa || map.cols() != kappa)
    throw Error(Errc::invalid_argument, "map must be kappa x kappa");
  if (inner_product.rows() != kappa || inner_product.cols() != kappa)
    throw Error(Errc::invalid_argument, "inner product must be kappa x kappa");
  det = map.determinant();
  if (std::abs(det) < 1e-300) throw Error(Errc::singular_matrix, "map is singular");
  inverse = map.inverse();
  Eigen::LLT<Eigen::MatrixXd> llt(inner_product);
  if (llt.info() != Eigen::Success)
    throw Error(Errc::invalid_argument, "inner product must be positive definite");
}

double LinearModel::norm_sq(const Eigen::VectorXd& x) const {
  return x.dot(inner_product * x);
}

double LinearModel::inverse_operator_norm() const {
  // ||A^{-1}||_G = sigma_max(L^T A^{-1} L^{-T}) with G = L L^T.
  Eigen::LLT<Eigen::MatrixXd> llt(inner_product);
  Eigen::MatrixXd l = llt.matrixL();
  Eigen::MatrixXd m =
      l.transpose() * inverse * l.transpose().triangularView<Eigen::Upper>().solve(
                                    Eigen::MatrixXd::Identity(kappa, kappa));
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m);
  return svd.singularValues()(0);
}

double rn_linear(const RadialDensity& density, const LinearModel& model, int n,
                 const Eigen::VectorXd& x) {
  if (n < 1) throw Error(Errc::invalid_argument, "density order must be >= 1");
  Eigen::VectorXd y = x;
  for (int i = 0; i < n; ++i) y = model.inverse * y;
  if (density.kind == RadialDensity::Kind::exponential) {
    // Work with the exponent difference; the two factors overflow separately
    // far before the ratio does.
    return std::exp(model.norm_sq(y) - model.norm_sq(x)) /
           std::pow(std::abs(model.det), n);
  }
  const double denom = density(model.norm_sq(x));
  if (denom <= 0.0) throw Error(Errc::invalid_argument, "density vanishes at the sample");
  return density(model.norm_sq(y)) / (std::pow(std::abs(model.det), n) * denom);
}

Boundedness boundedness_test(const RadialDensity& density, const LinearModel& model,
                             double radius, int grid) {
  Boundedness out;
  out.bounded = density.is_polynomial() || model.inverse_operator_norm() <= 1.0;
  if (!out.bounded) return out;
  // Operator norm estimate: sup of h_1 over a coarse grid (kappa = 1 sweeps
  // the axis; higher kappa sweeps the diagonal and the axes).
  double sup = 0.0;
  for (int axis = 0; axis < model.kappa + 1; ++axis) {
    for (int i = 0; i < grid; ++i) {
      const double t = -radius + (2.0 * radius) * (i + 0.5) / grid;
      if (std::abs(t) < 1e-9) continue;
      Eigen::VectorXd x = Eigen::VectorXd::Zero(model.kappa);
      if (axis < model.kappa)
        x(axis) = t;
      else
        x.setConstant(t / std::sqrt(static_cast<double>(model.kappa)));
      if (density(model.norm_sq(x)) <= 0.0) continue;
      sup = std::max(sup, rn_linear(density, model, 1, x));
    }
  }
  out.norm_sq_estimate = sup;
  return out;
}

TestFunction triangle_bump(const Eigen::VectorXd& center, double halfwidth) {
  return [center, halfwidth](const Eigen::VectorXd& x) {
    double v = 1.0;
    for (Eigen::Index i = 0; i < center.size(); ++i) {
      const double t = 1.0 - std::abs(x(i) - center(i)) / halfwidth;
      if (t <= 0.0) return 0.0;
      v *= t;
    }
    return v;
  };
}

double pairwise_sum(const std::vector<double>& values) {
  // Fixed-order pairwise reduction for reproducible quadrature sums.
  if (values.empty()) return 0.0;
  std::vector<double> acc = values;
  while (acc.size() > 1) {
    std::vector<double> next((acc.size() + 1) / 2);
    for (size_t i = 0; i + 1 < acc.size(); i += 2) next[i / 2] = acc[i] + acc[i + 1];
    if (acc.size() % 2 == 1) next.back() = acc.back();
    acc = std::move(next);
  }
  return acc[0];
}

namespace {

void for_each_midpoint(int kappa, double radius, int grid,
                       const std::function<void(const Eigen::VectorXd&)>& fn) {
  const double h = 2.0 * radius / grid;
  Eigen::VectorXd x(kappa);
  if (kappa == 1) {
    for (int i = 0; i < grid; ++i) {
      x(0) = -radius + h * (i + 0.5);
      fn(x);
    }
  } else if (kappa == 2) {
    for (int i = 0; i < grid; ++i) {
      x(0) = -radius + h * (i + 0.5);
      for (int j = 0; j < grid; ++j) {
        x(1) = -radius + h * (j + 0.5);
        fn(x);
      }
    }
  } else if (kappa == 3) {
    for (int i = 0; i < grid; ++i) {
      x(0) = -radius + h * (i + 0.5);
      for (int j = 0; j < grid; ++j) {
        x(1) = -radius + h * (j + 0.5);
        for (int k = 0; k < grid; ++k) {
          x(2) = -radius + h * (k + 0.5);
          fn(x);
        }
      }
    }
  } else {
    throw Error(Errc::invalid_argument, "quadrature supports kappa <= 3");
  }
}

}  // namespace

double quadrature_verify(const RadialDensity& density, const LinearModel& model, int n,
                         const std::vector<TestFunction>& test_functions, double radius,
                         int grid_per_axis) {
  if (n < 1) throw Error(Errc::invalid_argument, "order must be >= 1");
  const double h = 2.0 * radius / grid_per_axis;
  const double cell = std::pow(h, model.kappa);

  Eigen::MatrixXd forward = Eigen::MatrixXd::Identity(model.kappa, model.kappa);
  for (int i = 0; i < n; ++i) forward = model.map * forward;

  double worst = 0.0;
  for (const auto& f : test_functions) {
    std::vector<double> lhs_terms, rhs_terms;
    for_each_midpoint(model.kappa, radius, grid_per_axis, [&](const Eigen::VectorXd& x) {
      const double f_forward = f(forward * x);
      const double f_here = f(x);
      if (f_forward == 0.0 && f_here == 0.0) return;  // density may be huge out there
      const double rho = density(model.norm_sq(x));
      if (rho <= 0.0) return;
      lhs_terms.push_back(f_forward * rho * cell);
      rhs_terms.push_back(f_here * rn_linear(density, model, n, x) * rho * cell);
    });
    const double lhs = pairwise_sum(lhs_terms);
    const double rhs = pairwise_sum(rhs_terms);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    worst = std::max(worst, scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0);
  }
  return worst;
}

HalflineModel halfline_model(int n, double radius, int grid, int cells) {
  if (n < 1) throw Error(Errc::invalid_argument, "order must be >= 1");
  HalflineModel out;
  out.order = n;
  out.h = [n](double x) { return x >= static_cast<double>(n) ? 1.0 : 0.0; };

  // Midpoint quadrature of int f(x+n) dx against int f * chi_{[n,inf)} dx on
  // [0, radius] for a family of bumps supported inside (n, radius).
  const double h = radius / grid;
  double worst = 0.0;
  for (int b = 0; b < 5; ++b) {
    const double center = n + 1.5 + b;
    Eigen::VectorXd c(1);
    c(0) = center;
    TestFunction f = triangle_bump(c, 1.0);
    std::vector<double> lhs_terms, rhs_terms;
    Eigen::VectorXd x(1);
    for (int i = 0; i < grid; ++i) {
      const double t = h * (i + 0.5);
      x(0) = t + n;
      lhs_terms.push_back(f(x) * h);
      x(0) = t;
      rhs_terms.push_back(f(x) * out.h(t) * h);
    }
    const double lhs = pairwise_sum(lhs_terms);
    const double rhs = pairwise_sum(rhs_terms);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1e-30});
    worst = std::max(worst, std::abs(lhs - rhs) / scale);
  }
  out.quadrature_residual = worst;

  // The adjoint shifts forward: ||C* g||^2 over [0,radius] equals ||g||^2 for
  // g supported in (0, radius - 1).
  double co_worst = 0.0;
  for (int b = 0; b < 5; ++b) {
    Eigen::VectorXd c(1);
    c(0) = 2.0 + b;
    TestFunction g = triangle_bump(c, 1.0);
    std::vector<double> shifted_terms, plain_terms;
    Eigen::VectorXd x(1);
    for (int i = 0; i < grid; ++i) {
      const double t = h * (i + 0.5);
      double shifted = 0.0;
      if (t >= 1.0) {
        x(0) = t - 1.0;
        shifted = g(x);
      }
      shifted_terms.push_back(shifted * shifted * h);
      x(0) = t;
      plain_terms.push_back(g(x) * g(x) * h);
    }
    const double a = pairwise_sum(shifted_terms);
    const double b2 = pairwise_sum(plain_terms);
    co_worst = std::max(co_worst, std::abs(a - b2) / std::max(b2, 1e-30));
  }
  out.coisometry_residual = co_worst;

  // Discretization on unit cells: composition by x+1 is the backward shift,
  // its adjoint the forward shift whose iterated ranges shrink to zero.
  Eigen::MatrixXcd t = Eigen::MatrixXcd::Zero(cells, cells);
  for (int k = 1; k < cells; ++k) t(k - 1, k) = 1.0;
  out.adjoint_range_dims = nested_range_dims(t.adjoint(), cells, 1e-8);
  return out;
}

}  // namespace wco
