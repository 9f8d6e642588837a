#include "torsim/phase_space.hpp"

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"

namespace torsim {

std::vector<double> Axis::values() const {
  std::vector<double> out(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) out[static_cast<size_t>(i)] = value(i);
  return out;
}

bool Axis::operator==(const Axis& other) const {
  return min == other.min && max == other.max && n == other.n;
}

Axis symmetric_axis(double half_span, int n) {
  if (!(half_span > 0.0) || n < 3)
    throw InvalidParameterError("symmetric_axis: bad arguments");
  return Axis{-half_span, half_span, n};
}

GaussianState::GaussianState(Eigen::VectorXd mean, Eigen::MatrixXd cov)
    : mean_(std::move(mean)), cov_(std::move(cov)) {
  const auto dim = mean_.size();
  if (dim < 2 || dim % 2 != 0 || cov_.rows() != dim || cov_.cols() != dim)
    throw InvalidStateError("GaussianState: mean/cov dimensions invalid");
  if (!cov_.isApprox(cov_.transpose(), 1e-9))
    throw InvalidStateError("GaussianState: covariance not symmetric");
  // Uncertainty bound: cov + i Omega >= 0.
  const int n = static_cast<int>(dim) / 2;
  Eigen::MatrixXcd bound = cov_.cast<std::complex<double>>();
  const std::complex<double> im(0.0, 1.0);
  for (int k = 0; k < n; ++k) {
    bound(2 * k, 2 * k + 1) += im;
    bound(2 * k + 1, 2 * k) -= im;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(bound);
  if (solver.info() != Eigen::Success)
    throw NumericalError("GaussianState: uncertainty eigencheck failed");
  if (solver.eigenvalues().minCoeff() < -1e-9)
    throw InvalidStateError("GaussianState: uncertainty bound violated");
}

GaussianState make_vacuum(int n_modes) {
  if (n_modes < 1) throw InvalidParameterError("make_vacuum: n_modes must be >= 1");
  return GaussianState(Eigen::VectorXd::Zero(2 * n_modes),
                       Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes));
}

GaussianState make_squeezed(double r) {
  if (!std::isfinite(r)) throw InvalidParameterError("make_squeezed: r must be finite");
  Eigen::MatrixXd cov(2, 2);
  cov << std::exp(2.0 * r), 0.0, 0.0, std::exp(-2.0 * r);
  return GaussianState(Eigen::VectorXd::Zero(2), cov);
}

GaussianState make_squeezed_thermal(double v_theta, double v_l) {
  if (!(v_theta > 0.0) || !(v_l > 0.0))
    throw InvalidStateError("make_squeezed_thermal: variances must be positive");
  if (v_theta * v_l < 1.0 - 1e-12)
    throw InvalidStateError("make_squeezed_thermal: uncertainty product below 1");
  Eigen::MatrixXd cov(2, 2);
  cov << v_theta, 0.0, 0.0, v_l;
  return GaussianState(Eigen::VectorXd::Zero(2), cov);
}

GaussianState make_coherent(double mean_x, double mean_p) {
  Eigen::VectorXd mean(2);
  mean << mean_x, mean_p;
  return GaussianState(mean, Eigen::MatrixXd::Identity(2, 2));
}

GaussianState tensor(const GaussianState& a, const GaussianState& b) {
  const auto na = a.mean().size();
  const auto nb = b.mean().size();
  Eigen::VectorXd mean(na + nb);
  mean << a.mean(), b.mean();
  Eigen::MatrixXd cov = Eigen::MatrixXd::Zero(na + nb, na + nb);
  cov.topLeftCorner(na, na) = a.cov();
  cov.bottomRightCorner(nb, nb) = b.cov();
  return GaussianState(mean, cov);
}

double GridWigner::integral() const {
  return values.sum() * dx() * dp();
}

void GridWigner::normalize() {
  const double total = integral();
  if (!(std::abs(total) > 1e-300))
    throw NumericalError("GridWigner::normalize: vanishing norm");
  values /= total;
  normalized = true;
}

double GridWigner::value_at(double x, double p) const {
  const double fx = (x - x_axis.min) / dx();
  const double fp = (p - p_axis.min) / dp();
  if (fx < 0.0 || fp < 0.0 || fx > x_axis.n - 1 || fp > p_axis.n - 1) return 0.0;
  int i = static_cast<int>(fx);
  int j = static_cast<int>(fp);
  if (i >= x_axis.n - 1) i = x_axis.n - 2;
  if (j >= p_axis.n - 1) j = p_axis.n - 2;
  const double tx = fx - i;
  const double tp = fp - j;
  return values(i, j) * (1 - tx) * (1 - tp) + values(i + 1, j) * tx * (1 - tp) +
         values(i, j + 1) * (1 - tx) * tp + values(i + 1, j + 1) * tx * tp;
}

std::vector<double> GridWigner::marginal_x() const {
  std::vector<double> out(static_cast<size_t>(x_axis.n));
  for (int i = 0; i < x_axis.n; ++i) out[static_cast<size_t>(i)] = values.row(i).sum() * dp();
  return out;
}

std::vector<double> GridWigner::marginal_p() const {
  std::vector<double> out(static_cast<size_t>(p_axis.n));
  for (int j = 0; j < p_axis.n; ++j) out[static_cast<size_t>(j)] = values.col(j).sum() * dx();
  return out;
}

double GridWigner::min_value() const { return values.minCoeff(); }

double GridWigner::max_value() const { return values.maxCoeff(); }

void GridWigner::check_invariants() const {
  if (x_axis.n < 3 || p_axis.n < 3 || values.rows() != x_axis.n ||
      values.cols() != p_axis.n)
    throw InvalidStateError("GridWigner: grid/value shape mismatch");
  if (!values.allFinite()) throw InvalidStateError("GridWigner: non-finite values");
  if (normalized && std::abs(integral() - 1.0) > 1e-6)
    throw InvalidStateError("GridWigner: normalization flag violated");
}

GridWigner sample_grid(const Axis& x_axis, const Axis& p_axis,
                       const std::function<double(double, double)>& f,
                       bool normalize_result, std::string provenance) {
  GridWigner w;
  w.x_axis = x_axis;
  w.p_axis = p_axis;
  w.provenance = std::move(provenance);
  w.values.resize(x_axis.n, p_axis.n);
  for (int i = 0; i < x_axis.n; ++i) {
    const double x = x_axis.value(i);
    for (int j = 0; j < p_axis.n; ++j) {
      w.values(i, j) = f(x, p_axis.value(j));
    }
  }
  if (normalize_result) w.normalize();
  return w;
}

double vacuum_wigner(double x, double p) {
  return std::exp(-0.5 * (x * x + p * p)) / kTwoPi;
}

double fock_wigner(double x, double p, int n) {
  if (n < 0) throw InvalidParameterError("fock_wigner: n must be >= 0");
  const double r2 = x * x + p * p;
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  return sign / kTwoPi * laguerre(n, r2) * std::exp(-0.5 * r2);
}

double even_cat_wigner(double x, double p, double alpha, bool along_p) {
  const double u = along_p ? p : x;  // component axis
  const double v = along_p ? x : p;  // fringe axis
  const double norm = kTwoPi * (1.0 + std::exp(-2.0 * alpha * alpha));
  const double envelope = std::exp(-0.5 * (x * x + p * p));
  return envelope / norm *
         (std::exp(-2.0 * alpha * alpha) * std::cosh(2.0 * u * alpha) +
          std::cos(2.0 * v * alpha));
}

GridWigner gaussian_to_grid(const GaussianState& state, const Axis& x_axis,
                            const Axis& p_axis) {
  if (state.n_modes() != 1)
    throw InvalidParameterError("gaussian_to_grid: single-mode states only");
  const double mx = state.mean()(0);
  const double mp = state.mean()(1);
  const double sx = std::sqrt(state.cov()(0, 0));
  const double sp = std::sqrt(state.cov()(1, 1));
  if (x_axis.max - mx < 4.0 * sx || mx - x_axis.min < 4.0 * sx ||
      p_axis.max - mp < 4.0 * sp || mp - p_axis.min < 4.0 * sp)
    throw CoverageError("gaussian_to_grid: axes cover less than 4 sigma");

  const Eigen::Matrix2d cov = state.cov();
  const double det = cov.determinant();
  if (!(det > 0.0)) throw InvalidStateError("gaussian_to_grid: singular covariance");
  const Eigen::Matrix2d inv = cov.inverse();
  const double prefactor = 1.0 / (kTwoPi * std::sqrt(det));
  GridWigner w = sample_grid(
      x_axis, p_axis,
      [&](double x, double p) {
        const double ux = x - mx;
        const double up = p - mp;
        const double q =
            inv(0, 0) * ux * ux + 2.0 * inv(0, 1) * ux * up + inv(1, 1) * up * up;
        return prefactor * std::exp(-0.5 * q);
      },
      true, "gaussian");
  return w;
}

GridWigner make_even_cat(double alpha, int points) {
  if (alpha < 0.0) throw InvalidParameterError("make_even_cat: alpha must be >= 0");
  const double half_span = std::max(10.0, 2.0 * alpha + 8.0);
  const Axis axis = symmetric_axis(half_span, points);
  return sample_grid(
      axis, axis,
      [alpha](double x, double p) { return even_cat_wigner(x, p, alpha); }, true,
      "even_cat");
}

GridWigner make_fock_wigner(int n, int points, double half_span) {
  if (n < 0) throw InvalidParameterError("make_fock_wigner: n must be >= 0");
  const Axis axis = symmetric_axis(half_span, points);
  return sample_grid(
      axis, axis, [n](double x, double p) { return fock_wigner(x, p, n); }, true,
      "fock");
}

double negativity_volume(const GridWigner& w) {
  if (!w.normalized)
    throw InvalidStateError("negativity_volume: grid must be normalized");
  const double abs_integral = w.values.cwiseAbs().sum() * w.dx() * w.dp();
  return std::max(0.0, abs_integral - 1.0);
}

double fidelity_overlap(const GridWigner& a, const GridWigner& b) {
  if (!(a.x_axis == b.x_axis) || !(a.p_axis == b.p_axis))
    throw GridError("fidelity_overlap: grids differ");
  if (!a.normalized || !b.normalized)
    throw InvalidStateError("fidelity_overlap: states must be normalized");
  const double overlap =
      2.0 * kTwoPi * a.values.cwiseProduct(b.values).sum() * a.dx() * a.dp();
  return std::clamp(overlap, 0.0, 1.0 + 1e-6);
}

double purity(const GridWigner& w) {
  if (!w.normalized) throw InvalidStateError("purity: grid must be normalized");
  return 2.0 * kTwoPi * w.values.squaredNorm() * w.dx() * w.dp();
}

WignerFunction WignerFunction::from_gaussian(const GaussianState& state) {
  if (state.n_modes() != 1)
    throw InvalidParameterError("WignerFunction: single-mode states only");
  const double mx = state.mean()(0);
  const double mp = state.mean()(1);
  const Eigen::Matrix2d cov = state.cov();
  const double det = cov.determinant();
  if (!(det > 0.0)) throw InvalidStateError("WignerFunction: singular covariance");
  const Eigen::Matrix2d inv = cov.inverse();
  const double prefactor = 1.0 / (kTwoPi * std::sqrt(det));

  WignerFunction w;
  w.center1 = mx;
  w.center2 = mp;
  w.half_width1 = 8.0 * std::sqrt(cov(0, 0));
  w.half_width2 = 8.0 * std::sqrt(cov(1, 1));
  w.eval = [=](double x, double p) {
    const double ux = x - mx;
    const double up = p - mp;
    const double q = inv(0, 0) * ux * ux + 2.0 * inv(0, 1) * ux * up + inv(1, 1) * up * up;
    return prefactor * std::exp(-0.5 * q);
  };
  if (std::abs(cov(0, 1)) < 1e-14 * std::sqrt(cov(0, 0) * cov(1, 1))) {
    const double vx = cov(0, 0);
    const double vp = cov(1, 1);
    w.separable.push_back(SeparableTerm{
        [=](double x) {
          return std::exp(-0.5 * (x - mx) * (x - mx) / vx) / std::sqrt(kTwoPi * vx);
        },
        [=](double p) {
          return std::exp(-0.5 * (p - mp) * (p - mp) / vp) / std::sqrt(kTwoPi * vp);
        }});
  }
  return w;
}

WignerFunction WignerFunction::from_grid(const GridWigner& grid) {
  auto shared = std::make_shared<GridWigner>(grid);
  WignerFunction w;
  w.center1 = 0.5 * (grid.x_axis.min + grid.x_axis.max);
  w.center2 = 0.5 * (grid.p_axis.min + grid.p_axis.max);
  w.half_width1 = 0.5 * (grid.x_axis.max - grid.x_axis.min);
  w.half_width2 = 0.5 * (grid.p_axis.max - grid.p_axis.min);
  w.eval = [shared](double x, double p) { return shared->value_at(x, p); };
  w.cell_axis1 = grid.x_axis;
  return w;
}

WignerFunction WignerFunction::from_fock(int n) {
  if (n < 0) throw InvalidParameterError("WignerFunction: n must be >= 0");
  WignerFunction w;
  w.half_width1 = 2.0 * std::sqrt(2.0 * n + 1.0) + 8.0;
  w.half_width2 = w.half_width1;
  w.eval = [n](double x, double p) { return fock_wigner(x, p, n); };
  // L_n(x^2 + p^2) expanded into monomials gives an exact separable sum.
  const double sign = n % 2 == 0 ? 1.0 : -1.0;
  for (int k = 0; k <= n; ++k) {
    const double binom_nk =
        std::exp(log_factorial(n) - log_factorial(k) - log_factorial(n - k));
    const double base = sign / kTwoPi * binom_nk *
                        (k % 2 == 0 ? 1.0 : -1.0) / std::exp(log_factorial(k));
    for (int j = 0; j <= k; ++j) {
      const double binom_kj =
          std::exp(log_factorial(k) - log_factorial(j) - log_factorial(k - j));
      const double coeff = base * binom_kj;
      const int px = 2 * j;
      const int pp = 2 * (k - j);
      w.separable.push_back(SeparableTerm{
          [coeff, px](double x) { return coeff * std::pow(x, px) * std::exp(-0.5 * x * x); },
          [pp](double p) { return std::pow(p, pp) * std::exp(-0.5 * p * p); }});
    }
  }
  return w;
}

WignerFunction WignerFunction::from_even_cat(double alpha, bool along_p) {
  if (alpha < 0.0) throw InvalidParameterError("WignerFunction: alpha must be >= 0");
  WignerFunction w;
  const double wide = 2.0 * alpha + 8.0;
  w.half_width1 = wide;
  w.half_width2 = wide;
  w.eval = [alpha, along_p](double x, double p) {
    return even_cat_wigner(x, p, alpha, along_p);
  };
  const double norm = kTwoPi * (1.0 + std::exp(-2.0 * alpha * alpha));
  const double damp = std::exp(-2.0 * alpha * alpha);
  auto gauss = [](double u) { return std::exp(-0.5 * u * u); };
  auto component = [=](double u) { return damp / norm * std::cosh(2.0 * u * alpha) * gauss(u); };
  auto fringe = [=](double v) { return 1.0 / norm * std::cos(2.0 * v * alpha) * gauss(v); };
  if (!along_p) {
    w.separable.push_back(SeparableTerm{component, gauss});
    w.separable.push_back(SeparableTerm{gauss, fringe});
  } else {
    w.separable.push_back(SeparableTerm{gauss, component});
    w.separable.push_back(SeparableTerm{fringe, gauss});
  }
  return w;
}

}  // namespace torsim
