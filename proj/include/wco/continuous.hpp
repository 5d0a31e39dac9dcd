#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "wco/errors.hpp"

namespace wco {

/// Radial density rho applied to ||x||^2: a polynomial with nonnegative
/// coefficients (at least one positive coefficient of index >= 1), the
/// canonical entire non-polynomial instance rho(z) = e^z, or a user-supplied
/// entire function (treated as non-polynomial for the boundedness dichotomy).
struct RadialDensity {
  enum class Kind { polynomial, exponential, custom };
  Kind kind = Kind::polynomial;
  std::vector<double> coefficients;
  std::function<double(double)> hook;

  static RadialDensity polynomial(std::vector<double> coeffs);
  static RadialDensity exponential();
  static RadialDensity entire(std::function<double(double)> fn);

  double operator()(double z) const;
  bool is_polynomial() const { return kind == Kind::polynomial; }
};

/// Invertible linear self-map of R^kappa with a norm induced by an SPD inner
/// product (defaults to the Euclidean one).
struct LinearModel {
  int kappa = 1;
  Eigen::MatrixXd map;
  Eigen::MatrixXd inner_product;
  Eigen::MatrixXd inverse;
  double det = 1.0;

  LinearModel(int kappa, Eigen::MatrixXd a);
  LinearModel(int kappa, Eigen::MatrixXd a, Eigen::MatrixXd g);

  double norm_sq(const Eigen::VectorXd& x) const;
  /// Operator norm of the inverse map with respect to the model norm.
  double inverse_operator_norm() const;
};

/// Closed-form density of the n-th power of the composition by the linear
/// map: h_n(x) = rho(||A^{-n} x||^2) / (|det A|^n rho(||x||^2)).
double rn_linear(const RadialDensity& density, const LinearModel& model, int n,
                 const Eigen::VectorXd& x);

struct Boundedness {
  bool bounded = false;
  double norm_sq_estimate = 0.0;  // sup of h_1 over the sampling grid
};

/// Polynomial densities always give a bounded operator; entire non-polynomial
/// densities give one exactly when the inverse map is a contraction.
Boundedness boundedness_test(const RadialDensity& density, const LinearModel& model,
                             double radius = 10.0, int grid = 512);

using TestFunction = std::function<double(const Eigen::VectorXd&)>;

/// Triangle bump centered at `center` with half-width `halfwidth` per axis
/// (tensor product across axes).
TestFunction triangle_bump(const Eigen::VectorXd& center, double halfwidth);

/// Composite midpoint quadrature of both sides of the transfer identity
/// int f(phi^n x) dmu = int f h_n dmu over [-radius, radius]^kappa; returns
/// the maximal relative residual over the test set. Supports kappa <= 3.
double quadrature_verify(const RadialDensity& density, const LinearModel& model, int n,
                         const std::vector<TestFunction>& test_functions, double radius,
                         int grid_per_axis);

/// Deterministic pairwise summation.
double pairwise_sum(const std::vector<double>& values);

/// Translation x -> x+1 on the half line [0, inf) with Lebesgue measure:
/// h_n is the indicator of [n, inf), the operator is a co-isometry, the
/// conditional expectation is the identity (so the operator is centered), and
/// the discretized adjoint drives its iterated ranges to zero (adjoint of
/// type I, the operator itself of type II).
struct HalflineModel {
  int order = 1;
  std::function<double(double)> h;
  double quadrature_residual = 0.0;   // transfer identity residual over bumps
  double coisometry_residual = 0.0;   // | ||C* g||^2 - ||g||^2 | / ||g||^2
  bool expectation_identity = true;
  std::vector<int> adjoint_range_dims;
  const char* type = "II";
  const char* adjoint_type = "I";
};

HalflineModel halfline_model(int n, double radius = 32.0, int grid = 32000, int cells = 24);

}  // namespace wco
