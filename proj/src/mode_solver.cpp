#include "torsim/mode_solver.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"

namespace torsim {

TorsionalMode TorsionalMode::from_samples(std::vector<double> grid_z,
                                          std::vector<double> theta) {
  if (grid_z.size() != theta.size() || grid_z.size() < 3)
    throw InvalidParameterError("from_samples: need >= 3 matching samples");
  for (size_t i = 1; i < grid_z.size(); ++i) {
    if (!(grid_z[i] > grid_z[i - 1]))
      throw InvalidParameterError("from_samples: grid must be strictly increasing");
  }
  TorsionalMode mode;
  mode.form = ModeForm::sampled;
  mode.grid_z = std::move(grid_z);
  mode.theta = std::move(theta);
  return mode;
}

void CrossSectionProfile::validate() const {
  if (grid_z.size() != polar_moment.size() || grid_z.size() < 3)
    throw InvalidParameterError("profile: need >= 3 matching samples");
  const double h = grid_z[1] - grid_z[0];
  if (!(h > 0.0)) throw InvalidParameterError("profile: grid must increase");
  for (size_t i = 1; i < grid_z.size(); ++i) {
    const double step = grid_z[i] - grid_z[i - 1];
    if (std::abs(step - h) > 1e-9 * std::abs(h))
      throw InvalidParameterError("profile: grid must be uniform");
  }
  for (double ip : polar_moment) {
    if (!(ip > 0.0)) throw InvalidParameterError("profile: I_p must be positive everywhere");
  }
}

CrossSectionProfile CrossSectionProfile::uniform(double length, double polar_moment,
                                                 int points) {
  if (!(length > 0.0) || !(polar_moment > 0.0) || points < 3)
    throw InvalidParameterError("uniform profile: bad arguments");
  CrossSectionProfile profile;
  profile.grid_z.resize(points);
  profile.polar_moment.assign(points, polar_moment);
  for (int i = 0; i < points; ++i) {
    profile.grid_z[i] = -length / 2.0 + length * i / (points - 1);
  }
  return profile;
}

CrossSectionProfile CrossSectionProfile::from_csv(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw ConfigError("cannot open profile: " + file.string());
  CrossSectionProfile profile;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double z, ip;
    if (!(row >> z >> ip)) throw ConfigError("malformed profile row: " + line);
    profile.grid_z.push_back(z);
    profile.polar_moment.push_back(ip);
  }
  profile.validate();
  return profile;
}

TorsionalMode uniform_beam_mode(double length, double ct, int n, Parity parity,
                                int samples) {
  if (!(length > 0.0) || !(ct > 0.0) || n < 0)
    throw InvalidParameterError("uniform_beam_mode: bad arguments");
  if (parity == Parity::mixed)
    throw InvalidParameterError("uniform_beam_mode: parity must be even or odd");
  if (parity == Parity::odd && n == 0)
    throw InvalidParameterError("uniform_beam_mode: odd mode n = 0 is identically zero");
  if (samples < 3) samples = 3;
  if (samples % 2 == 0) ++samples;

  TorsionalMode mode;
  mode.mode_index = n;
  mode.parity = parity;
  mode.form = parity == Parity::even ? ModeForm::cosine : ModeForm::sine;
  mode.wavevector = parity == Parity::even ? (2.0 * n + 1.0) * kPi / length
                                           : 2.0 * kPi * n / length;
  mode.frequency = ct * mode.wavevector;
  mode.grid_z.resize(samples);
  mode.theta.resize(samples);
  for (int i = 0; i < samples; ++i) {
    const double z = -length / 2.0 + length * i / (samples - 1);
    mode.grid_z[i] = z;
    mode.theta[i] = parity == Parity::even ? std::cos(mode.wavevector * z)
                                           : std::sin(mode.wavevector * z);
  }
  return mode;
}

namespace {

Parity classify_parity(const std::vector<double>& theta, double tol) {
  const size_t n = theta.size();
  double even_residual = 0.0;
  double odd_residual = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double mirrored = theta[n - 1 - i];
    even_residual = std::max(even_residual, std::abs(theta[i] - mirrored));
    odd_residual = std::max(odd_residual, std::abs(theta[i] + mirrored));
  }
  if (even_residual < tol) return Parity::even;
  if (odd_residual < tol) return Parity::odd;
  return Parity::mixed;
}

}  // namespace

std::vector<TorsionalMode> webster_eigenmodes(const CrossSectionProfile& profile,
                                              double ct, int count) {
  profile.validate();
  if (profile.grid_z.size() < 64)
    throw InvalidParameterError("webster_eigenmodes: need >= 64 grid points");
  if (count < 1) throw InvalidParameterError("webster_eigenmodes: count must be >= 1");
  if (!(ct > 0.0)) throw InvalidParameterError("webster_eigenmodes: c_t must be positive");

  // Interior-point discretization of -(Ip theta')' = k^2 Ip theta with
  // clamped ends, symmetrized by D^{-1/2} A D^{-1/2}.
  const int total = static_cast<int>(profile.grid_z.size());
  const int m = total - 2;
  if (count > m) throw InvalidParameterError("webster_eigenmodes: count exceeds grid capacity");
  const double h = profile.grid_z[1] - profile.grid_z[0];
  const auto& ip = profile.polar_moment;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(m, m);
  for (int i = 0; i < m; ++i) {
    const int g = i + 1;
    const double ip_minus = 0.5 * (ip[g - 1] + ip[g]);
    const double ip_plus = 0.5 * (ip[g] + ip[g + 1]);
    const double d = std::sqrt(ip[g]);
    a(i, i) = (ip_minus + ip_plus) / (h * h * ip[g]);
    if (i + 1 < m) {
      const double dr = std::sqrt(ip[g + 1]);
      a(i, i + 1) = -ip_plus / (h * h * d * dr);
      a(i + 1, i) = a(i, i + 1);
    }
  }

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
  if (solver.info() != Eigen::Success)
    throw NumericalError("webster_eigenmodes: eigensolver failed");

  std::vector<TorsionalMode> modes;
  modes.reserve(count);
  for (int idx = 0; idx < count; ++idx) {
    const double lambda = solver.eigenvalues()(idx);
    if (!(lambda > 0.0)) throw NumericalError("webster_eigenmodes: non-positive eigenvalue");
    TorsionalMode mode;
    mode.mode_index = idx;
    mode.form = ModeForm::sampled;
    mode.wavevector = std::sqrt(lambda);
    mode.frequency = ct * mode.wavevector;
    mode.grid_z = profile.grid_z;
    mode.theta.assign(total, 0.0);
    double peak = 0.0;
    int peak_at = 0;
    for (int i = 0; i < m; ++i) {
      mode.theta[i + 1] = solver.eigenvectors()(i, idx) / std::sqrt(ip[i + 1]);
      if (std::abs(mode.theta[i + 1]) > peak) {
        peak = std::abs(mode.theta[i + 1]);
        peak_at = i + 1;
      }
    }
    const double scale = 1.0 / mode.theta[peak_at];
    for (double& v : mode.theta) v *= scale;
    mode.parity = classify_parity(mode.theta, 1e-9);
    modes.push_back(std::move(mode));
  }
  return modes;
}

double cosine_mode_square_integral(double k_t, double length) {
  if (!(length > 0.0)) throw InvalidParameterError("cosine_mode_square_integral: L must be positive");
  return length / 2.0 * (1.0 + stable_sinc(k_t * length));
}

double mode_square_integral(const TorsionalMode& mode) {
  if (mode.grid_z.size() < 3 || mode.grid_z.size() != mode.theta.size())
    throw InvalidParameterError("mode_square_integral: invalid mode samples");
  const double length = mode.length();
  if (mode.form == ModeForm::cosine) {
    return cosine_mode_square_integral(mode.wavevector, length);
  }
  if (mode.form == ModeForm::sine) {
    return length / 2.0 * (1.0 - stable_sinc(mode.wavevector * length));
  }
  std::vector<double> sq(mode.theta.size());
  for (size_t i = 0; i < sq.size(); ++i) sq[i] = mode.theta[i] * mode.theta[i];
  if (sq.size() % 2 == 0) {
    // Trapezoid fallback for even sample counts.
    const double h = mode.grid_z[1] - mode.grid_z[0];
    double sum = 0.5 * (sq.front() + sq.back());
    for (size_t i = 1; i + 1 < sq.size(); ++i) sum += sq[i];
    return sum * h;
  }
  return simpson_samples(sq, mode.grid_z[1] - mode.grid_z[0]);
}

void mode_to_csv(const TorsionalMode& mode, const std::filesystem::path& file) {
  std::ofstream out(file);
  if (!out) throw ConfigError("cannot write mode file: " + file.string());
  out << "z,theta\n";
  char buffer[80];
  for (size_t i = 0; i < mode.grid_z.size(); ++i) {
    std::snprintf(buffer, sizeof(buffer), "%.17g,%.17g\n", mode.grid_z[i], mode.theta[i]);
    out << buffer;
  }
}

}  // namespace torsim
