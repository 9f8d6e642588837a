#pragma once

#include <functional>

namespace torsim {

/// Coupling-rate breakdown by mechanism, cyclic frequencies (Hz).
struct CouplingBreakdown {
  double g12ma = 0.0;
  double g11ma = 0.0;
  double g22ma = 0.0;
  double g12mb = 0.0;
  double g11mb = 0.0;
  double g22mb = 0.0;
  double g_oe = 0.0;
};

/// Reference-configuration breakdown. The moving-boundary entries are carried
/// constants (their evaluation needs the full field profiles); the
/// opto-elastic entry vanishes identically for the cosine torsional mode.
CouplingBreakdown reference_breakdown();

struct OverlapInputs {
  double L = 0.0;      // m
  double beta1 = 0.0;  // m^-1
  double beta2 = 0.0;  // m^-1
  double k_t = 0.0;    // m^-1
  /// Normalized transverse field overlap, |t| <= 1.
  double transverse_factor = 1.0;

  void validate() const;
};

/// (1/L) integral_{-L/2}^{L/2} cos(k_t z) cos(b1 z) cos(b2 z) dz via the
/// four-term sinc closed form; removable singularities are exact.
double longitudinal_overlap_closed(double L, double beta1, double beta2, double k_t);

/// integral sin(k_t z) cos(b_i z) cos(b_j z) dz over [-L/2, L/2]: odd
/// integrand on a symmetric interval, exactly zero.
double g_oe_longitudinal(double L, double beta_i, double beta_j, double k_t);

/// Dimensionless calibration constant fixing the absolute scale of the
/// anisotropy coupling so the reference configuration reproduces 22 kHz with
/// transverse_factor = 1 (constant prefactors of the rate formula are not
/// derivable without the full field normalization).
double g12ma_scale();

/// Anisotropy coupling estimate in Hz:
/// scale * (theta_zp/2) * delta_eps * sqrt(w1 w2) * t * 2 * overlap / (2 pi).
double g12ma_estimate(double theta_zp, double delta_eps, double omega1,
                      double omega2, const OverlapInputs& inputs);

struct LengthScalingOptions {
  double length_min = 1e-3;  // m
  double length_max = 1e-2;  // m
  int samples = 12;
  double delta_eps = 0.0049;
  double omega1 = 0.0;  // 0: reference optical frequency
  double omega2 = 0.0;
};

/// Fits log g vs log L over the requested decade with the resonance-matched
/// condition beta1 - beta2 = k_t, k_t L = 2 pi ceil(20 L / L_min); returns the
/// fitted exponent (-1/2 when theta_zp carries the only L dependence).
double length_scaling_exponent(const OverlapInputs& base,
                               const std::function<double(double)>& theta_zp_of_length,
                               const LengthScalingOptions& options = {});

}  // namespace torsim
