#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace torsim {

/// Table-1 coupling value, cyclic frequency.
inline constexpr double kReferenceCouplingHz = 22e3;

/// Physical constants of the torsional optomechanical system, SI units
/// throughout. Frequencies kappa, Omega and 1/tau are angular (rad/s).
struct PhysicalParams {
  double beam_width_a = 0.0;             // m
  double beam_length_L = 0.0;            // m
  double mass_density_rho = 0.0;         // kg m^-3
  double torsion_freq_Omega = 0.0;       // rad s^-1
  double torsion_velocity_ct = 0.0;      // m s^-1
  double mech_quality_Qm = 0.0;
  double cavity_kappa = 0.0;             // rad s^-1
  double wavelength_lambda = 0.0;        // m
  double optical_quality_Qo = 0.0;
  double eps_xx = 0.0;
  double eps_yy = 0.0;
  double eps_zz = 0.0;
  double beta1 = 0.0;                    // m^-1
  double beta2 = 0.0;                    // m^-1
  double pulse_bandwidth_inv_tau = 0.0;  // rad s^-1

  /// Throws InvalidParameterError on hard violations; returns soft warnings
  /// (timescale ordering Omega << 1/tau << kappa checked with factor 5).
  std::vector<std::string> validate() const;
};

/// The reference configuration used in all tabulated values.
PhysicalParams reference_params();

struct DerivedParams {
  double k_t = 0.0;         // m^-1
  double I_eff = 0.0;       // kg m^2
  double theta_zp = 0.0;    // rad
  double delta_eps = 0.0;
  double g_coupling = 0.0;  // Hz
  double chi = 0.0;
};

/// k_t = Omega / c_t.
double derive_wavevector(const PhysicalParams& p);

/// I_eff = support_factor * (1/6) * rho * a^4 * integral(theta^2 dz).
/// The support factor accounts for structures beyond the bare beam.
double effective_moment_of_inertia(const PhysicalParams& p,
                                   double mode_sq_integral,
                                   double support_factor = 10.0);

/// theta_zp = sqrt(hbar / (2 I_eff Omega)).
double zero_point_angle(double i_eff, double omega);

/// chi = 8 g sqrt(N_in) / kappa, with g cyclic (Hz) and kappa angular (rad/s).
double coupling_coefficient_chi(double g_hz, double kappa, double n_in);

/// Minimal pulse photon number reaching chi_target: (chi_target*kappa/(8g))^2.
double photon_threshold(double g_hz, double kappa, double chi_target);

/// Full derived set. The coupling g is a stored input (Table-1 default);
/// n_in < 0 selects the chi = 1 threshold so that chi = 1 is reported.
DerivedParams derive_params(const PhysicalParams& p,
                            double g_hz = kReferenceCouplingHz,
                            double n_in = -1.0);

PhysicalParams params_from_json_file(const std::filesystem::path& file);
void params_to_json_file(const PhysicalParams& p, const std::filesystem::path& file);

}  // namespace torsim
