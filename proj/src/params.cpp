#include "torsim/params.hpp"

#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"

namespace torsim {

namespace {

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v))
    throw InvalidParameterError(std::string(name) + " must be strictly positive");
}

}  // namespace

std::vector<std::string> PhysicalParams::validate() const {
  require_positive(beam_width_a, "beam_width_a");
  require_positive(beam_length_L, "beam_length_L");
  require_positive(mass_density_rho, "mass_density_rho");
  require_positive(torsion_freq_Omega, "torsion_freq_Omega");
  require_positive(torsion_velocity_ct, "torsion_velocity_ct");
  require_positive(mech_quality_Qm, "mech_quality_Qm");
  require_positive(cavity_kappa, "cavity_kappa");
  require_positive(wavelength_lambda, "wavelength_lambda");
  require_positive(optical_quality_Qo, "optical_quality_Qo");
  require_positive(eps_xx, "eps_xx");
  require_positive(eps_yy, "eps_yy");
  require_positive(eps_zz, "eps_zz");
  require_positive(pulse_bandwidth_inv_tau, "pulse_bandwidth_inv_tau");
  if (beta1 < 0.0 || beta2 < 0.0)
    throw InvalidParameterError("propagation constants must be non-negative");
  if (eps_xx < eps_yy)
    throw InvalidParameterError("anisotropy requires eps_xx >= eps_yy");

  std::vector<std::string> warnings;
  constexpr double strictness = 5.0;
  if (pulse_bandwidth_inv_tau < strictness * torsion_freq_Omega) {
    warnings.push_back("timescale ordering weak: 1/tau is less than 5x Omega");
  }
  if (cavity_kappa < strictness * pulse_bandwidth_inv_tau) {
    warnings.push_back("timescale ordering weak: kappa is less than 5x 1/tau");
  }
  return warnings;
}

PhysicalParams reference_params() {
  PhysicalParams p;
  p.beam_width_a = 1e-6;
  p.beam_length_L = 100e-6;
  p.mass_density_rho = 2650.0;
  p.torsion_freq_Omega = kTwoPi * 500e3;
  p.torsion_velocity_ct = 5000.0;
  p.mech_quality_Qm = 1e4;
  p.cavity_kappa = kTwoPi * 225e6;
  p.wavelength_lambda = 1550e-9;
  p.optical_quality_Qo = 8.4e5;
  p.eps_xx = 1.5326;
  p.eps_yy = 1.5277;
  p.eps_zz = 1.5277;
  const double k_opt = kTwoPi / p.wavelength_lambda;
  p.beta1 = 1.2859 * k_opt;
  p.beta2 = 1.2926 * k_opt;
  p.pulse_bandwidth_inv_tau = kTwoPi * 15e6;
  return p;
}

double derive_wavevector(const PhysicalParams& p) {
  if (!(p.torsion_velocity_ct > 0.0))
    throw InvalidParameterError("derive_wavevector: c_t must be positive");
  if (!(p.torsion_freq_Omega > 0.0))
    throw InvalidParameterError("derive_wavevector: Omega must be positive");
  return p.torsion_freq_Omega / p.torsion_velocity_ct;
}

double effective_moment_of_inertia(const PhysicalParams& p,
                                   double mode_sq_integral,
                                   double support_factor) {
  if (!(mode_sq_integral > 0.0) || mode_sq_integral > p.beam_length_L)
    throw InvalidParameterError(
        "effective_moment_of_inertia: mode square integral must lie in (0, L]");
  if (!(support_factor > 0.0))
    throw InvalidParameterError("effective_moment_of_inertia: support factor must be positive");
  const double a4 = std::pow(p.beam_width_a, 4);
  return support_factor / 6.0 * p.mass_density_rho * a4 * mode_sq_integral;
}

double zero_point_angle(double i_eff, double omega) {
  if (!(i_eff > 0.0) || !(omega > 0.0))
    throw InvalidParameterError("zero_point_angle: inputs must be positive");
  return std::sqrt(kHbar / (2.0 * i_eff * omega));
}

double coupling_coefficient_chi(double g_hz, double kappa, double n_in) {
  if (!(kappa > 0.0))
    throw InvalidParameterError("coupling_coefficient_chi: kappa must be positive");
  if (g_hz < 0.0 || n_in < 0.0)
    throw InvalidParameterError("coupling_coefficient_chi: g and N_in must be non-negative");
  return 8.0 * g_hz * std::sqrt(n_in) / kappa;
}

double photon_threshold(double g_hz, double kappa, double chi_target) {
  if (!(g_hz > 0.0))
    throw InvalidParameterError("photon_threshold: target unreachable at g = 0");
  if (!(kappa > 0.0) || !(chi_target > 0.0))
    throw InvalidParameterError("photon_threshold: kappa and chi_target must be positive");
  const double root = chi_target * kappa / (8.0 * g_hz);
  return root * root;
}

DerivedParams derive_params(const PhysicalParams& p, double g_hz, double n_in) {
  DerivedParams d;
  d.k_t = derive_wavevector(p);
  // Fundamental mode profile cos(k_t z); closed-form square integral.
  const double kl = d.k_t * p.beam_length_L;
  const double mode_sq =
      p.beam_length_L / 2.0 * (1.0 + stable_sinc(kl));
  d.I_eff = effective_moment_of_inertia(p, mode_sq);
  d.theta_zp = zero_point_angle(d.I_eff, p.torsion_freq_Omega);
  d.delta_eps = p.eps_xx - p.eps_yy;
  d.g_coupling = g_hz;
  if (n_in < 0.0) n_in = photon_threshold(g_hz, p.cavity_kappa, 1.0);
  d.chi = coupling_coefficient_chi(g_hz, p.cavity_kappa, n_in);
  return d;
}

namespace {

double get_number(const nlohmann::json& j, const char* key) {
  if (!j.contains(key))
    throw ConfigError(std::string("missing parameter key: ") + key);
  if (!j[key].is_number())
    throw ConfigError(std::string("parameter key is not a number: ") + key);
  return j[key].get<double>();
}

}  // namespace

PhysicalParams params_from_json_file(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open parameter file: " + file.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("malformed parameter file " + file.string() + ": " + e.what());
  }
  PhysicalParams p;
  p.beam_width_a = get_number(j, "beam_width_a");
  p.beam_length_L = get_number(j, "beam_length_L");
  p.mass_density_rho = get_number(j, "mass_density_rho");
  p.torsion_freq_Omega = get_number(j, "torsion_freq_Omega");
  p.torsion_velocity_ct = get_number(j, "torsion_velocity_ct");
  p.mech_quality_Qm = get_number(j, "mech_quality_Qm");
  p.cavity_kappa = get_number(j, "cavity_kappa");
  p.wavelength_lambda = get_number(j, "wavelength_lambda");
  p.optical_quality_Qo = get_number(j, "optical_quality_Qo");
  p.eps_xx = get_number(j, "eps_xx");
  p.eps_yy = get_number(j, "eps_yy");
  p.eps_zz = get_number(j, "eps_zz");
  p.beta1 = get_number(j, "beta1");
  p.beta2 = get_number(j, "beta2");
  p.pulse_bandwidth_inv_tau = get_number(j, "pulse_bandwidth_inv_tau");
  return p;
}

void params_to_json_file(const PhysicalParams& p, const std::filesystem::path& file) {
  nlohmann::json j;
  j["beam_width_a"] = p.beam_width_a;
  j["beam_length_L"] = p.beam_length_L;
  j["mass_density_rho"] = p.mass_density_rho;
  j["torsion_freq_Omega"] = p.torsion_freq_Omega;
  j["torsion_velocity_ct"] = p.torsion_velocity_ct;
  j["mech_quality_Qm"] = p.mech_quality_Qm;
  j["cavity_kappa"] = p.cavity_kappa;
  j["wavelength_lambda"] = p.wavelength_lambda;
  j["optical_quality_Qo"] = p.optical_quality_Qo;
  j["eps_xx"] = p.eps_xx;
  j["eps_yy"] = p.eps_yy;
  j["eps_zz"] = p.eps_zz;
  j["beta1"] = p.beta1;
  j["beta2"] = p.beta2;
  j["pulse_bandwidth_inv_tau"] = p.pulse_bandwidth_inv_tau;
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write parameter file: " + file.string());
  out << j.dump(2) << "\n";
}

}  // namespace torsim
