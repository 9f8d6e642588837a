#pragma once

#include <Eigen/Core>

#include "torsim/phase_space.hpp"

namespace torsim {

/// n-fold block diagonal of [[0, 1], [-1, 0]].
Eigen::MatrixXd symplectic_form(int n_modes);

/// Linear quadrature map r -> M r with M^T Omega M = Omega and det M = 1,
/// both enforced to 1e-12 at construction.
class SymplecticMatrix {
 public:
  explicit SymplecticMatrix(Eigen::MatrixXd m);

  int n_modes() const { return static_cast<int>(m_.rows()) / 2; }
  const Eigen::MatrixXd& matrix() const { return m_; }

  SymplecticMatrix inverse() const;
  SymplecticMatrix operator*(const SymplecticMatrix& rhs) const;
  /// Exchanges the two modes of a two-mode map.
  SymplecticMatrix swapped_modes() const;

 private:
  Eigen::MatrixXd m_;
};

/// Two-mode beam-splitter map with transmittance t_tap in [0, 1].
SymplecticMatrix beam_splitter(double t_tap);

/// Pulsed interaction on (x_L, p_L, theta_M, L_M):
/// p_L -> p_L - chi theta_M, L_M -> L_M - chi x_L. Mode-swap symmetric.
SymplecticMatrix om_interaction(double chi);

/// Embeds [[cos, sin], [-sin, cos]] at mode_index, identity elsewhere.
SymplecticMatrix phase_rotation(double angle, int mode_index = 0, int n_modes = 1);

/// diag(e^r, e^{-r}) on one mode.
SymplecticMatrix single_mode_squeeze(double r);

/// mean -> M mean, cov -> M cov M^T.
GaussianState apply_gaussian(const SymplecticMatrix& m, const GaussianState& s);

/// Wigner pullback W_out(r) = W_in(M^{-1} r) by bilinear interpolation on the
/// same axes; renormalization corrects interpolation error only. Throws
/// CoverageError when >= 1e-6 of the mass maps off-grid.
GridWigner apply_grid(const SymplecticMatrix& m, const GridWigner& w);

}  // namespace torsim
