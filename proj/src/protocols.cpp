#include "torsim/protocols.hpp"

#include <algorithm>
#include <cmath>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"

namespace torsim {

double thermal_occupation(double temperature_k, double omega) {
  if (!(omega > 0.0))
    throw InvalidParameterError("thermal_occupation: frequency must be positive");
  if (temperature_k < 0.0)
    throw InvalidParameterError("thermal_occupation: temperature must be >= 0");
  if (temperature_k == 0.0) return 0.0;
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * temperature_k));
}

GaussianState make_thermal_gaussian(double n_bar) {
  if (n_bar < 0.0)
    throw InvalidParameterError("make_thermal_gaussian: n_bar must be >= 0");
  const double t = 2.0 * n_bar + 1.0;
  Eigen::Matrix2d cov;
  cov << t, 0.0, 0.0, t;
  return GaussianState(Eigen::Vector2d::Zero(), cov);
}

SqueezeReport single_pulse_squeeze(double n_bar, double chi) {
  if (!(chi > 0.0))
    throw InvalidParameterError("single_pulse_squeeze: no squeezing without chi > 0");
  if (n_bar < 0.0)
    throw InvalidParameterError("single_pulse_squeeze: n_bar must be >= 0");
  const GaussianState joint = tensor(make_vacuum(), make_thermal_gaussian(n_bar));
  const GaussianState evolved = apply_gaussian(om_interaction(chi), joint);
  const GaussianConditional cond =
      condition_gaussian_homodyne(evolved, 0, kPi / 2.0, 0.0);

  SqueezeReport report;
  report.var_theta_out = cond.state.cov()(0, 0);
  report.var_l_out = cond.state.cov()(1, 1);
  report.n_eff = 0.5 * std::sqrt(report.var_theta_out * report.var_l_out) - 0.5;
  report.chi = chi;
  report.n_bar = n_bar;
  report.weight_density = cond.weight_density;
  return report;
}

double optimal_tap(double r1) {
  if (!(r1 > 0.0)) throw InvalidParameterError("optimal_tap: r1 must be positive");
  const double e2 = std::exp(2.0 * r1);
  return (e2 - 1.0) / (e2 - std::exp(-2.0 * r1));
}

void CatPrepConfig::validate() const {
  if (!std::isfinite(r1) || !std::isfinite(r2) || !std::isfinite(chi))
    throw InvalidParameterError("CatPrepConfig: parameters must be finite");
  if (t_tap >= 0.0 && t_tap > 1.0)
    throw InvalidParameterError("CatPrepConfig: transmittance must lie in [0, 1]");
  if (subtract_m < 0) throw InvalidParameterError("CatPrepConfig: m must be >= 0");
  if (!(eta > 0.0 && eta <= 1.0))
    throw InvalidParameterError("CatPrepConfig: efficiency must lie in (0, 1]");
  if (!(v_theta > 0.0) || !(v_l > 0.0) || v_theta * v_l < 1.0 - 1e-12)
    throw InvalidParameterError("CatPrepConfig: mechanical variances violate the uncertainty bound");
}

ConditionalResult gps_optical_cat(const CatPrepConfig& cfg, const Axis& out_x,
                                  const Axis& out_p,
                                  const QuadratureOptions& options) {
  cfg.validate();
  const WignerFunction kept = WignerFunction::from_gaussian(make_squeezed(cfg.r1));
  const WignerFunction measured = WignerFunction::from_gaussian(make_squeezed(cfg.r2));
  ConditionalResult result =
      condition_product_state(kept, measured, beam_splitter(cfg.tap()),
                              povm_photon_number(cfg.subtract_m, cfg.eta), out_x,
                              out_p, options);
  result.state.provenance = "gps_optical_cat";
  return result;
}

namespace {

void check_transfer_variances(double v_theta, double v_l) {
  if (!(v_theta > 0.0) || !(v_l > 0.0) || v_theta * v_l < 1.0 - 1e-12)
    throw InvalidParameterError("transfer closed form: invalid variances");
}

}  // namespace

GridWigner closed_form_fock_transfer(double v_theta, double v_l,
                                     const Axis& theta_axis, const Axis& l_axis) {
  check_transfer_variances(v_theta, v_l);
  const double theta_coeff = 0.5 * (1.0 + 1.0 / v_l);
  const double l_coeff = 0.5 / (1.0 + v_theta);
  return sample_grid(
      theta_axis, l_axis,
      [=](double theta, double l) {
        const double bracket = (1.0 + v_theta) * theta * theta +
                               l * l / (1.0 + v_theta) - 1.0;
        return std::exp(-theta_coeff * theta * theta - l_coeff * l * l) * bracket;
      },
      true, "fock_transfer_closed_form");
}

GridWigner closed_form_cat_transfer(double v_theta, double v_l, double alpha,
                                    const Axis& theta_axis, const Axis& l_axis) {
  check_transfer_variances(v_theta, v_l);
  if (alpha < 0.0)
    throw InvalidParameterError("closed_form_cat_transfer: alpha must be >= 0");
  const double theta_coeff = 0.5 * (1.0 + 1.0 / v_l);
  const double l_coeff = 0.5 / (1.0 + v_theta);
  const double fringe_freq = 2.0 * alpha / (1.0 + v_theta);
  const double damp = std::exp(-2.0 * alpha * alpha / (1.0 + v_theta));
  return sample_grid(
      theta_axis, l_axis,
      [=](double theta, double l) {
        return std::exp(-theta_coeff * theta * theta - l_coeff * l * l) *
               (std::cos(fringe_freq * l) + damp * std::cosh(2.0 * alpha * theta));
      },
      true, "cat_transfer_closed_form");
}

ConditionalResult mechanical_state_prep(const WignerFunction& optical_in,
                                        const CatPrepConfig& cfg,
                                        const Axis& theta_axis, const Axis& l_axis,
                                        int base_nodes, double convergence_tol) {
  cfg.validate();
  // Quarter-period free evolution precedes the transfer pulse.
  const GaussianState mech = apply_gaussian(
      phase_rotation(kPi / 2.0), make_squeezed_thermal(cfg.v_theta, cfg.v_l));
  const double v_t = mech.cov()(0, 0);
  const double v_l = mech.cov()(1, 1);
  const double chi = cfg.chi;
  const double p0 = cfg.homodyne_outcome_p;
  const double mech_norm = 1.0 / (kTwoPi * std::sqrt(v_t * v_l));
  const double l_reach = 8.0 * std::sqrt(v_l);

  const double x_lo_state = optical_in.center1 - optical_in.half_width1;
  const double x_hi_state = optical_in.center1 + optical_in.half_width1;

  // Grid-backed inputs are piecewise linear; aligning quadrature panels with
  // the interpolation cells keeps the kinks on panel boundaries.
  const auto make_rule = [&](double lo, double hi, int level) -> QuadratureRule {
    if (!optical_in.cell_axis1) {
      return gauss_legendre_on(base_nodes << level, lo, hi);
    }
    const Axis& cells = *optical_in.cell_axis1;
    const double h = cells.step();
    const int per_cell = 3 << level;
    QuadratureRule rule;
    int cell = static_cast<int>(std::floor((lo - cells.min) / h));
    cell = std::max(cell, 0);
    for (; cell < cells.n - 1; ++cell) {
      const double c0 = std::max(lo, cells.value(cell));
      const double c1 = std::min(hi, cells.value(cell + 1));
      if (!(c1 > c0)) {
        if (cells.value(cell) > hi) break;
        continue;
      }
      const QuadratureRule sub = gauss_legendre_on(per_cell, c0, c1);
      rule.nodes.insert(rule.nodes.end(), sub.nodes.begin(), sub.nodes.end());
      rule.weights.insert(rule.weights.end(), sub.weights.begin(), sub.weights.end());
    }
    if (rule.nodes.empty()) return gauss_legendre_on(4, lo, hi);
    return rule;
  };

  double abs_peak = 0.0;  // scale of the unsigned integrand, set at level 0
  auto evaluate = [&](int level) {
    Eigen::MatrixXd values(theta_axis.n, l_axis.n);
    for (int i = 0; i < theta_axis.n; ++i) {
      const double theta = theta_axis.value(i);
      const double p_arg = p0 + chi * theta;
      const double theta_factor =
          mech_norm * std::exp(-0.5 * theta * theta / v_t);
      if (std::abs(p_arg - optical_in.center2) > optical_in.half_width2 ||
          theta_factor == 0.0) {
        values.row(i).setZero();
        continue;
      }
      for (int j = 0; j < l_axis.n; ++j) {
        const double l = l_axis.value(j);
        double x_lo = x_lo_state;
        double x_hi = x_hi_state;
        if (chi != 0.0) {
          const double bound_a = (-l - l_reach) / chi;
          const double bound_b = (-l + l_reach) / chi;
          x_lo = std::max(x_lo, std::min(bound_a, bound_b));
          x_hi = std::min(x_hi, std::max(bound_a, bound_b));
        }
        if (!(x_hi > x_lo)) {
          values(i, j) = 0.0;
          continue;
        }
        const QuadratureRule rule = make_rule(x_lo, x_hi, level);
        double acc = 0.0;
        double acc_abs = 0.0;
        for (size_t k = 0; k < rule.nodes.size(); ++k) {
          const double x = rule.nodes[k];
          const double shift = l + chi * x;
          const double term = rule.weights[k] * optical_in.eval(x, p_arg) *
                              std::exp(-0.5 * shift * shift / v_l);
          acc += term;
          acc_abs += std::abs(term);
        }
        values(i, j) = theta_factor * acc;
        if (level == 0) abs_peak = std::max(abs_peak, theta_factor * acc_abs);
      }
    }
    return values;
  };

  Eigen::MatrixXd current = evaluate(0);
  if (current.cwiseAbs().maxCoeff() <= 1e-10 * abs_peak)
    throw NumericalError(
        "mechanical_state_prep: outcome density vanishes for this input");
  for (int level = 1;; ++level) {
    if ((optical_in.cell_axis1 ? (3 << level) : (base_nodes << level)) > 2048)
      throw NumericalError("mechanical_state_prep: quadrature did not converge");
    const Eigen::MatrixXd refined = evaluate(level);
    const double scale = std::max(refined.cwiseAbs().maxCoeff(), 1e-300);
    const double diff = (refined - current).cwiseAbs().maxCoeff() / scale;
    current = refined;
    if (diff <= convergence_tol) break;
  }

  ConditionalResult result;
  result.state.x_axis = theta_axis;
  result.state.p_axis = l_axis;
  result.state.values = current;
  result.state.provenance = "mechanical_state_prep";
  result.success_weight = result.state.integral();
  if (!(result.success_weight > 0.0))
    throw NumericalError("mechanical_state_prep: non-positive outcome weight");
  result.state.normalize();
  return result;
}

TwoPulseResult two_pulse_protocol(double n_bar, double chi1, const CatPrepConfig& cfg,
                                  const Axis& theta_axis, const Axis& l_axis,
                                  int optical_points) {
  TwoPulseResult out;
  out.cooling = single_pulse_squeeze(n_bar, chi1);

  CatPrepConfig pulse2 = cfg;
  pulse2.v_theta = out.cooling.var_theta_out;
  pulse2.v_l = out.cooling.var_l_out;
  pulse2.t_tap = cfg.tap();
  out.t_tap = pulse2.t_tap;

  const Axis optical_axis = symmetric_axis(16.0, optical_points);
  ConditionalResult cat = gps_optical_cat(pulse2, optical_axis, optical_axis);
  out.gps_weight = cat.success_weight;

  // Orient the cat components along the measured-conjugate quadrature so the
  // transferred components separate in the angle.
  const GridWigner rotated = apply_grid(phase_rotation(kPi / 2.0), cat.state);

  out.final_state = mechanical_state_prep(WignerFunction::from_grid(rotated), pulse2,
                                          theta_axis, l_axis);
  out.prep_weight = out.final_state.success_weight;
  out.total_weight = out.cooling.weight_density * out.gps_weight * out.prep_weight;
  return out;
}

}  // namespace torsim
