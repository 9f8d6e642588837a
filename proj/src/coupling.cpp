#include "torsim/coupling.hpp"

#include <cmath>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"
#include "torsim/params.hpp"

namespace torsim {

CouplingBreakdown reference_breakdown() {
  CouplingBreakdown b;
  b.g12ma = 22e3;
  b.g11ma = 0.0;
  b.g22ma = 0.0;
  b.g12mb = 81.0;
  b.g11mb = -10.0;
  b.g22mb = -10.0;
  b.g_oe = 0.0;
  return b;
}

void OverlapInputs::validate() const {
  if (!(L > 0.0)) throw InvalidParameterError("OverlapInputs: L must be positive");
  if (std::abs(transverse_factor) > 1.0)
    throw InvalidParameterError("OverlapInputs: |transverse_factor| must be <= 1");
}

double longitudinal_overlap_closed(double L, double beta1, double beta2, double k_t) {
  if (!(L > 0.0)) throw InvalidParameterError("longitudinal_overlap_closed: L must be positive");
  const double half = 0.5 * L;
  return 0.25 * (stable_sinc((beta1 + beta2 - k_t) * half) +
                 stable_sinc((beta1 - beta2 + k_t) * half) +
                 stable_sinc((-beta1 + beta2 + k_t) * half) +
                 stable_sinc((beta1 + beta2 + k_t) * half));
}

double g_oe_longitudinal(double L, double beta_i, double beta_j, double k_t) {
  if (!(L > 0.0)) throw InvalidParameterError("g_oe_longitudinal: L must be positive");
  (void)beta_i;
  (void)beta_j;
  (void)k_t;
  return 0.0;
}

namespace {

double g12ma_raw(double theta_zp, double delta_eps, double omega1, double omega2,
                 const OverlapInputs& inputs) {
  const double overlap =
      longitudinal_overlap_closed(inputs.L, inputs.beta1, inputs.beta2, inputs.k_t);
  // The cos^2 normalization integrals are ~L/2 for beta L >> 1, so the
  // normalized longitudinal ratio is 2x the mean overlap.
  return 0.5 * theta_zp * delta_eps * std::sqrt(omega1 * omega2) *
         inputs.transverse_factor * 2.0 * overlap / kTwoPi;
}

}  // namespace

double g12ma_scale() {
  static const double scale = [] {
    const PhysicalParams ref = reference_params();
    const DerivedParams d = derive_params(ref);
    OverlapInputs inputs;
    inputs.L = ref.beam_length_L;
    inputs.beta1 = ref.beta1;
    inputs.beta2 = ref.beta2;
    inputs.k_t = d.k_t;
    inputs.transverse_factor = 1.0;
    const double omega = kTwoPi * kSpeedOfLight / ref.wavelength_lambda;
    return kReferenceCouplingHz /
           g12ma_raw(d.theta_zp, d.delta_eps, omega, omega, inputs);
  }();
  return scale;
}

double g12ma_estimate(double theta_zp, double delta_eps, double omega1,
                      double omega2, const OverlapInputs& inputs) {
  inputs.validate();
  if (!(theta_zp > 0.0))
    throw InvalidParameterError("g12ma_estimate: theta_zp must be positive");
  if (!std::isfinite(delta_eps) || !std::isfinite(omega1) || !std::isfinite(omega2))
    throw InvalidParameterError("g12ma_estimate: inputs must be finite");
  return g12ma_scale() * g12ma_raw(theta_zp, delta_eps, omega1, omega2, inputs);
}

double length_scaling_exponent(const OverlapInputs& base,
                               const std::function<double(double)>& theta_zp_of_length,
                               const LengthScalingOptions& options) {
  if (!(options.length_min > 0.0) || !(options.length_max > options.length_min))
    throw InvalidParameterError("length_scaling_exponent: bad length range");
  if (options.samples < 3)
    throw InvalidParameterError("length_scaling_exponent: need >= 3 samples");
  const double omega_ref = kTwoPi * kSpeedOfLight / 1550e-9;
  const double omega1 = options.omega1 > 0.0 ? options.omega1 : omega_ref;
  const double omega2 = options.omega2 > 0.0 ? options.omega2 : omega_ref;

  std::vector<double> log_length, log_g;
  for (int i = 0; i < options.samples; ++i) {
    const double t = static_cast<double>(i) / (options.samples - 1);
    const double length =
        options.length_min * std::pow(options.length_max / options.length_min, t);
    const double cycles = std::ceil(20.0 * length / options.length_min);
    OverlapInputs inputs = base;
    inputs.L = length;
    inputs.k_t = kTwoPi * cycles / length;
    inputs.beta1 = base.beta1;
    inputs.beta2 = base.beta1 - inputs.k_t;
    if (!(inputs.k_t * length > 10.0) || !(inputs.beta2 > 0.0))
      throw InvalidParameterError(
          "length_scaling_exponent: resonance-matched condition violated");
    const double g = g12ma_estimate(theta_zp_of_length(length), options.delta_eps,
                                    omega1, omega2, inputs);
    if (!(g > 0.0))
      throw NumericalError("length_scaling_exponent: non-positive coupling sample");
    log_length.push_back(std::log(length));
    log_g.push_back(std::log(g));
  }
  return linear_fit(log_length, log_g).slope;
}

}  // namespace torsim
