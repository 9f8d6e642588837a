#include "torsim/symplectic.hpp"

#include <Eigen/Dense>
#include <cmath>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"

namespace torsim {

Eigen::MatrixXd symplectic_form(int n_modes) {
  Eigen::MatrixXd omega = Eigen::MatrixXd::Zero(2 * n_modes, 2 * n_modes);
  for (int k = 0; k < n_modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

SymplecticMatrix::SymplecticMatrix(Eigen::MatrixXd m) : m_(std::move(m)) {
  if (m_.rows() != m_.cols() || m_.rows() < 2 || m_.rows() % 2 != 0)
    throw InvalidParameterError("SymplecticMatrix: dimension must be even");
  const Eigen::MatrixXd omega = symplectic_form(static_cast<int>(m_.rows()) / 2);
  const double residual = (m_.transpose() * omega * m_ - omega).cwiseAbs().maxCoeff();
  if (residual > 1e-12)
    throw InvalidParameterError("SymplecticMatrix: symplectic condition violated");
  if (std::abs(m_.determinant() - 1.0) > 1e-12)
    throw InvalidParameterError("SymplecticMatrix: determinant must be 1");
}

SymplecticMatrix SymplecticMatrix::inverse() const {
  // M^{-1} = Omega^T M^T Omega, exact for symplectic maps.
  const Eigen::MatrixXd omega = symplectic_form(n_modes());
  return SymplecticMatrix(omega.transpose() * m_.transpose() * omega);
}

SymplecticMatrix SymplecticMatrix::operator*(const SymplecticMatrix& rhs) const {
  return SymplecticMatrix(m_ * rhs.m_);
}

SymplecticMatrix SymplecticMatrix::swapped_modes() const {
  if (n_modes() != 2)
    throw InvalidParameterError("swapped_modes: two-mode maps only");
  Eigen::MatrixXd perm = Eigen::MatrixXd::Zero(4, 4);
  perm(0, 2) = perm(1, 3) = perm(2, 0) = perm(3, 1) = 1.0;
  return SymplecticMatrix(perm * m_ * perm.transpose());
}

SymplecticMatrix beam_splitter(double t_tap) {
  if (!(t_tap >= 0.0 && t_tap <= 1.0))
    throw InvalidParameterError("beam_splitter: transmittance must lie in [0, 1]");
  const double t = std::sqrt(t_tap);
  const double r = std::sqrt(1.0 - t_tap);
  Eigen::MatrixXd m(4, 4);
  m << t, 0, r, 0,
       0, t, 0, r,
      -r, 0, t, 0,
       0, -r, 0, t;
  return SymplecticMatrix(m);
}

SymplecticMatrix om_interaction(double chi) {
  if (!std::isfinite(chi)) throw InvalidParameterError("om_interaction: chi must be finite");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(4, 4);
  m(1, 2) = -chi;
  m(3, 0) = -chi;
  return SymplecticMatrix(m);
}

SymplecticMatrix phase_rotation(double angle, int mode_index, int n_modes) {
  if (mode_index < 0 || mode_index >= n_modes)
    throw InvalidParameterError("phase_rotation: mode index out of range");
  Eigen::MatrixXd m = Eigen::MatrixXd::Identity(2 * n_modes, 2 * n_modes);
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  m(2 * mode_index, 2 * mode_index) = c;
  m(2 * mode_index, 2 * mode_index + 1) = s;
  m(2 * mode_index + 1, 2 * mode_index) = -s;
  m(2 * mode_index + 1, 2 * mode_index + 1) = c;
  return SymplecticMatrix(m);
}

SymplecticMatrix single_mode_squeeze(double r) {
  if (!std::isfinite(r)) throw InvalidParameterError("single_mode_squeeze: r must be finite");
  Eigen::MatrixXd m(2, 2);
  m << std::exp(r), 0.0, 0.0, std::exp(-r);
  return SymplecticMatrix(m);
}

GaussianState apply_gaussian(const SymplecticMatrix& m, const GaussianState& s) {
  if (m.n_modes() != s.n_modes())
    throw InvalidParameterError("apply_gaussian: mode-count mismatch");
  return GaussianState(m.matrix() * s.mean(),
                       m.matrix() * s.cov() * m.matrix().transpose());
}

GridWigner apply_grid(const SymplecticMatrix& m, const GridWigner& w) {
  if (m.n_modes() != 1)
    throw InvalidParameterError("apply_grid: single-mode maps only");
  if (m.matrix().isIdentity(0.0)) return w;
  const Eigen::Matrix2d inv = m.inverse().matrix();
  GridWigner out;
  out.x_axis = w.x_axis;
  out.p_axis = w.p_axis;
  out.provenance = w.provenance;
  out.values.resize(w.x_axis.n, w.p_axis.n);
  for (int i = 0; i < w.x_axis.n; ++i) {
    const double x = w.x_axis.value(i);
    for (int j = 0; j < w.p_axis.n; ++j) {
      const double p = w.p_axis.value(j);
      out.values(i, j) = w.value_at(inv(0, 0) * x + inv(0, 1) * p,
                                    inv(1, 0) * x + inv(1, 1) * p);
    }
  }
  if (w.normalized) {
    // Mass on the boundary ring flags clipped support; the renormalization
    // below only corrects interpolation error.
    double ring = 0.0;
    for (int i = 0; i < w.x_axis.n; ++i)
      ring += std::abs(out.values(i, 0)) + std::abs(out.values(i, w.p_axis.n - 1));
    for (int j = 0; j < w.p_axis.n; ++j)
      ring += std::abs(out.values(0, j)) + std::abs(out.values(w.x_axis.n - 1, j));
    if (ring * out.dx() * out.dp() > 1e-6)
      throw CoverageError("apply_grid: transformed support clipped by the grid");
    out.normalize();
  }
  return out;
}

}  // namespace torsim
