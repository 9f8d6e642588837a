#pragma once

#include <Eigen/Core>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace torsim {

/// Uniform grid axis over [min, max] with n samples.
struct Axis {
  double min = 0.0;
  double max = 0.0;
  int n = 0;

  double step() const { return (max - min) / (n - 1); }
  double value(int i) const { return min + step() * i; }
  std::vector<double> values() const;
  bool operator==(const Axis& other) const;
};

Axis symmetric_axis(double half_span, int n = 401);

/// Default phase-space window: 401 points over [-10, 10] quadrature units,
/// wide enough that every reference state normalizes to 1e-6.
inline Axis default_axis() { return symmetric_axis(10.0, 401); }

/// Gaussian state over n modes in the unit-vacuum-variance convention
/// (vacuum covariance = identity, quadrature order x1, p1, x2, p2, ...).
class GaussianState {
 public:
  GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov);

  int n_modes() const { return static_cast<int>(mean_.size()) / 2; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& cov() const { return cov_; }

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
};

GaussianState make_vacuum(int n_modes = 1);

/// Squeezed vacuum, cov = diag(e^{2r}, e^{-2r}).
GaussianState make_squeezed(double r);

/// Squeezed thermal state, cov = diag(v_theta, v_l); requires v_theta v_l >= 1.
GaussianState make_squeezed_thermal(double v_theta, double v_l);

/// Unit-covariance state displaced to the given quadrature means.
GaussianState make_coherent(double mean_x, double mean_p);

GaussianState tensor(const GaussianState& a, const GaussianState& b);

/// Single-mode Wigner function sampled on a rectangular grid.
struct GridWigner {
  Axis x_axis;
  Axis p_axis;
  Eigen::MatrixXd values;  // values(i, j) = W(x_i, p_j)
  bool normalized = false;
  std::string provenance;

  double dx() const { return x_axis.step(); }
  double dp() const { return p_axis.step(); }
  double integral() const;
  void normalize();
  /// Bilinear interpolation, zero outside the grid.
  double value_at(double x, double p) const;
  std::vector<double> marginal_x() const;
  std::vector<double> marginal_p() const;
  double min_value() const;
  double max_value() const;
  void check_invariants() const;  // throws InvalidStateError
};

GridWigner sample_grid(const Axis& x_axis, const Axis& p_axis,
                       const std::function<double(double, double)>& f,
                       bool normalize_result, std::string provenance);

// Closed-form single-mode Wigner densities, unit-vacuum convention.
double vacuum_wigner(double x, double p);
double fock_wigner(double x, double p, int n);
/// Even-cat Wigner; along_p = true orients the coherent components along p.
double even_cat_wigner(double x, double p, double alpha, bool along_p = false);

/// Renders a single-mode Gaussian state; throws CoverageError when the axes
/// cover less than 4 marginal deviations around the mean.
GridWigner gaussian_to_grid(const GaussianState& state, const Axis& x_axis,
                            const Axis& p_axis);

GridWigner make_even_cat(double alpha, int points = 401);
GridWigner make_fock_wigner(int n, int points = 401, double half_span = 10.0);

/// integral |W| - 1 (zero for any Gaussian state).
double negativity_volume(const GridWigner& w);

/// Pure-state overlap 4 pi * integral Wa Wb on a common grid, clamped to
/// [0, 1 + 1e-6]. Equals Tr[rho_a rho_b] in this convention.
double fidelity_overlap(const GridWigner& a, const GridWigner& b);

/// 4 pi * integral W^2.
double purity(const GridWigner& w);

/// One separable term f1(u1) * f2(u2) of a Wigner function.
struct SeparableTerm {
  std::function<double(double)> f1;
  std::function<double(double)> f2;
};

/// Evaluator facade over analytic states, Gaussian states and grids, with
/// support metadata and an optional exact sum-of-separable-terms form.
struct WignerFunction {
  std::function<double(double, double)> eval;
  double center1 = 0.0;
  double center2 = 0.0;
  double half_width1 = 10.0;
  double half_width2 = 10.0;
  std::vector<SeparableTerm> separable;  // empty: not separable
  /// First-argument sample axis for grid-backed evaluators; quadratures align
  /// their panels with the interpolation cells.
  std::optional<Axis> cell_axis1;

  double operator()(double u1, double u2) const { return eval(u1, u2); }

  static WignerFunction from_gaussian(const GaussianState& state);
  static WignerFunction from_grid(const GridWigner& grid);
  static WignerFunction from_fock(int n);
  static WignerFunction from_even_cat(double alpha, bool along_p = false);
};

}  // namespace torsim
