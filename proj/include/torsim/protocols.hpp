#pragma once

#include "torsim/measurement.hpp"
#include "torsim/phase_space.hpp"

namespace torsim {

/// Bose occupation 1 / (exp(hbar Omega / kB T) - 1).
double thermal_occupation(double temperature_k, double omega);

/// Thermal single-mode Gaussian state, cov = (2 n_bar + 1) I.
GaussianState make_thermal_gaussian(double n_bar);

struct SqueezeReport {
  double var_theta_out = 0.0;
  double var_l_out = 0.0;
  double n_eff = 0.0;
  double chi = 0.0;
  double n_bar = 0.0;
  /// Homodyne outcome density at the conditioning value.
  double weight_density = 0.0;
};

/// Single-pulse cooling/squeezing: vacuum-driven interaction at strength chi
/// on a thermal mode with occupation n_bar, conditioned on measuring the
/// output optical p quadrature at 0. Exact Gaussian conditioning: with
/// t = 2 n_bar + 1, var_theta = t / (1 + chi^2 t), var_l = t + chi^2.
SqueezeReport single_pulse_squeeze(double n_bar, double chi);

/// Tap transmittance (e^{2 r1} - 1) / (e^{2 r1} - e^{-2 r1}).
double optimal_tap(double r1);

struct CatPrepConfig {
  double r1 = 1.15;
  double r2 = -1.15;
  double t_tap = -1.0;  // < 0: optimal_tap(r1)
  int subtract_m = 1;
  double eta = 1.0;
  double chi = 1.0;
  double v_theta = 0.2;
  double v_l = 2000.0;
  double homodyne_outcome_p = 0.0;

  double tap() const { return t_tap < 0.0 ? optimal_tap(r1) : t_tap; }
  void validate() const;
};

/// Generalized photon subtraction: two squeezed modes on an asymmetric beam
/// splitter, m photons detected (efficiency eta) on the tap port; returns the
/// surviving optical mode.
ConditionalResult gps_optical_cat(const CatPrepConfig& cfg, const Axis& out_x,
                                  const Axis& out_p,
                                  const QuadratureOptions& options = {});

/// Mechanical state after the transfer pulse with a single-photon input,
/// closed form: exp[-(1 + 1/v_l) theta^2 / 2 - l^2 / (2 (1 + v_theta))] *
/// [(1 + v_theta) theta^2 + l^2 / (1 + v_theta) - 1], normalized.
GridWigner closed_form_fock_transfer(double v_theta, double v_l,
                                     const Axis& theta_axis, const Axis& l_axis);

/// Mechanical state after the transfer pulse with an even-cat input, closed
/// form with fringes cos(2 alpha l / (1 + v_theta)) and components
/// cosh(2 alpha theta), normalized.
GridWigner closed_form_cat_transfer(double v_theta, double v_l, double alpha,
                                    const Axis& theta_axis, const Axis& l_axis);

/// Transfer pulse: the precooled mechanical mode (variances v_theta, v_l)
/// freely evolves a quarter period, interacts at strength chi with the given
/// optical input, and the output optical p quadrature is measured at
/// homodyne_outcome_p (ideal delta; the integral collapses to one dimension).
/// Returns the mechanical state on (theta_axis, l_axis) with the outcome
/// density as success weight.
/// convergence_tol bounds the relative node-doubling residual; grid-backed
/// optical inputs are only bilinear-accurate, so the two-pulse chain runs
/// them at 1e-4.
ConditionalResult mechanical_state_prep(const WignerFunction& optical_in,
                                        const CatPrepConfig& cfg,
                                        const Axis& theta_axis, const Axis& l_axis,
                                        int base_nodes = 128,
                                        double convergence_tol = 1e-6);

struct TwoPulseResult {
  SqueezeReport cooling;
  double t_tap = 0.0;
  double gps_weight = 0.0;
  double prep_weight = 0.0;
  double total_weight = 0.0;
  ConditionalResult final_state;
};

/// Full chain: cooling pulse -> quarter-period rotation -> GPS optical cat
/// (rotated so its components sit along the measured-conjugate quadrature) ->
/// transfer pulse. The second pulse uses the cooling-output variances.
TwoPulseResult two_pulse_protocol(double n_bar, double chi1, const CatPrepConfig& cfg,
                                  const Axis& theta_axis, const Axis& l_axis,
                                  int optical_points = 401);

}  // namespace torsim
