#pragma once

#include <functional>
#include <vector>

namespace torsim {

// 2019 SI exact values.
inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J / K
inline constexpr double kSpeedOfLight = 2.99792458e8;  // m / s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

/// sin(x)/x with a series fallback below |x| < 1e-4 so removable
/// singularities evaluate exactly.
double stable_sinc(double x);

/// Composite Simpson rule with `intervals` subintervals (rounded up to even).
double simpson(const std::function<double(double)>& f, double a, double b,
               int intervals);

/// Simpson rule over uniformly spaced samples (odd sample count required).
double simpson_samples(const std::vector<double>& y, double h);

/// Recursive adaptive Simpson quadrature.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double tol, int max_depth = 40);

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Legendre rule on [-1, 1]; results are cached per order.
const QuadratureRule& gauss_legendre(int n);

/// Gauss-Legendre rule mapped to [a, b].
QuadratureRule gauss_legendre_on(int n, double a, double b);

/// Laguerre polynomial L_n(x) by the three-term recurrence.
double laguerre(int n, double x);

/// L_0(x) .. L_n(x) in one pass.
std::vector<double> laguerre_all(int n, double x);

/// Associated Laguerre L_n^{(k)}(x).
double laguerre_assoc(int n, int k, double x);

/// log(n!) for stable factorial ratios.
double log_factorial(int n);

struct LinearFit {
  double slope;
  double intercept;
};

/// Least-squares straight line through (x_i, y_i).
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace torsim
