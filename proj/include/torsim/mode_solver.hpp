#pragma once

#include <filesystem>
#include <vector>

namespace torsim {

enum class Parity { even, odd, mixed };

enum class ModeForm { cosine, sine, sampled };

/// A torsional mode theta(z) on [-L/2, L/2], normalized to max|theta| = 1.
struct TorsionalMode {
  int mode_index = 0;
  Parity parity = Parity::mixed;
  ModeForm form = ModeForm::sampled;
  double wavevector = 0.0;  // m^-1
  double frequency = 0.0;   // rad s^-1
  std::vector<double> grid_z;
  std::vector<double> theta;

  double length() const { return grid_z.back() - grid_z.front(); }

  /// Wraps raw samples without boundary-condition checks (for quadrature on
  /// arbitrary profiles, e.g. the device mode with k_t L << 1).
  static TorsionalMode from_samples(std::vector<double> grid_z,
                                    std::vector<double> theta);
};

/// Polar-moment profile I_p(z) on a uniform grid.
struct CrossSectionProfile {
  std::vector<double> grid_z;
  std::vector<double> polar_moment;  // m^4

  void validate() const;
  static CrossSectionProfile uniform(double length, double polar_moment, int points);
  static CrossSectionProfile from_csv(const std::filesystem::path& file);
};

/// Analytic clamped-end mode of the uniform beam. Even modes are
/// cos(k z) with k = (2n+1) pi / L; odd modes sin(k z) with k = 2 pi n / L,
/// n >= 1. Frequency is c_t * k.
TorsionalMode uniform_beam_mode(double length, double ct, int n, Parity parity,
                                int samples = 513);

/// Lowest `count` clamped modes of theta'' + (Ip'/Ip) theta' + k^2 theta = 0,
/// via the self-adjoint second-order finite-difference discretization.
std::vector<TorsionalMode> webster_eigenmodes(const CrossSectionProfile& profile,
                                              double ct, int count);

/// integral theta(z)^2 dz; closed form for tagged analytic modes, composite
/// Simpson otherwise.
double mode_square_integral(const TorsionalMode& mode);

/// Closed form of the cosine-mode square integral over [-L/2, L/2].
double cosine_mode_square_integral(double k_t, double length);

void mode_to_csv(const TorsionalMode& mode, const std::filesystem::path& file);

}  // namespace torsim
