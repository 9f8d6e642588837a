#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "torsim/errors.hpp"
#include "torsim/mode_solver.hpp"
#include "torsim/numerics.hpp"

using namespace torsim;

namespace {
constexpr double kLength = 100e-6;
constexpr double kVelocity = 5000.0;
}  // namespace

TEST_CASE("uniform beam fundamental mode") {
  const TorsionalMode mode = uniform_beam_mode(kLength, kVelocity, 0, Parity::even);
  CHECK(mode.wavevector == doctest::Approx(kPi / kLength).epsilon(1e-14));
  CHECK(mode.frequency ==
        doctest::Approx(kTwoPi * 25e6).epsilon(1e-12));  // c_t pi / L
  CHECK(std::abs(mode.theta.front()) < 1e-12);
  CHECK(std::abs(mode.theta.back()) < 1e-12);
  CHECK(mode.theta[mode.theta.size() / 2] == doctest::Approx(1.0).epsilon(1e-15));

  // Parity of the samples.
  const size_t n = mode.theta.size();
  for (size_t i = 0; i < n; ++i)
    CHECK(mode.theta[i] == doctest::Approx(mode.theta[n - 1 - i]).epsilon(1e-12));
}

TEST_CASE("uniform beam odd modes") {
  CHECK_THROWS_AS(uniform_beam_mode(kLength, kVelocity, 0, Parity::odd),
                  InvalidParameterError);
  const TorsionalMode mode = uniform_beam_mode(kLength, kVelocity, 1, Parity::odd);
  CHECK(mode.wavevector == doctest::Approx(2.0 * kPi / kLength).epsilon(1e-14));
  CHECK(std::abs(mode.theta.back()) < 1e-12);
  const size_t n = mode.theta.size();
  for (size_t i = 0; i < n; ++i)
    CHECK(mode.theta[i] == doctest::Approx(-mode.theta[n - 1 - i]).epsilon(1e-12));
}

TEST_CASE("mode square integral") {
  // Fundamental clamped cosine: k L = pi integrates to exactly L/2.
  const TorsionalMode fundamental =
      uniform_beam_mode(kLength, kVelocity, 0, Parity::even);
  CHECK(mode_square_integral(fundamental) ==
        doctest::Approx(kLength / 2.0).epsilon(1e-10));

  // Long-wavelength device profile, k L = 0.0628.
  const double k_t = 0.0628 / kLength;
  CHECK(cosine_mode_square_integral(k_t, kLength) ==
        doctest::Approx(kLength * (1.0 - 0.0628 * 0.0628 / 12.0)).epsilon(1e-6));

  // Simpson path on raw samples.
  std::vector<double> z(513), one(513, 1.0);
  for (int i = 0; i < 513; ++i) z[static_cast<size_t>(i)] = kLength * i / 512.0;
  CHECK(mode_square_integral(TorsionalMode::from_samples(z, one)) ==
        doctest::Approx(kLength).epsilon(1e-12));
}

TEST_CASE("webster solver reproduces uniform-beam modes") {
  const CrossSectionProfile profile =
      CrossSectionProfile::uniform(kLength, 1e-24, 513);
  const auto modes = webster_eigenmodes(profile, kVelocity, 3);
  REQUIRE(modes.size() == 3);

  CHECK(modes[0].wavevector == doctest::Approx(kPi / kLength).epsilon(1e-3));
  CHECK(modes[1].wavevector == doctest::Approx(2.0 * kPi / kLength).epsilon(1e-3));
  CHECK(modes[0].parity == Parity::even);
  CHECK(modes[1].parity == Parity::odd);

  // Frequencies strictly increasing.
  CHECK(modes[0].frequency < modes[1].frequency);
  CHECK(modes[1].frequency < modes[2].frequency);

  // Fundamental matches the analytic cosine pointwise.
  double linf = 0.0;
  for (size_t i = 0; i < modes[0].grid_z.size(); ++i) {
    linf = std::max(linf, std::abs(modes[0].theta[i] -
                                   std::cos(kPi * modes[0].grid_z[i] / kLength)));
  }
  CHECK(linf < 1e-3);

  // Boundary residual.
  for (const auto& mode : modes) {
    CHECK(std::abs(mode.theta.front()) < 1e-6);
    CHECK(std::abs(mode.theta.back()) < 1e-6);
  }

  // Orthogonality of distinct modes.
  for (int a = 0; a < 3; ++a) {
    for (int b = a + 1; b < 3; ++b) {
      std::vector<double> prod(modes[a].theta.size());
      for (size_t i = 0; i < prod.size(); ++i)
        prod[i] = modes[a].theta[i] * modes[b].theta[i];
      const double overlap =
          simpson_samples(prod, modes[a].grid_z[1] - modes[a].grid_z[0]);
      CHECK(std::abs(overlap) < 1e-6 * kLength);
    }
  }
}

TEST_CASE("second-order convergence of the discretization") {
  const double exact = kPi / kLength;
  auto error_at = [&](int points) {
    const auto modes =
        webster_eigenmodes(CrossSectionProfile::uniform(kLength, 1e-24, points),
                           kVelocity, 1);
    return std::abs(modes[0].wavevector - exact);
  };
  const double coarse = error_at(257);
  const double fine = error_at(513);
  CHECK(coarse / fine == doctest::Approx(4.0).epsilon(0.15));
}

TEST_CASE("webster solver on a varying profile") {
  // Smoothly pinched cross-section; spectrum must stay ordered and clamped.
  CrossSectionProfile profile = CrossSectionProfile::uniform(kLength, 1e-24, 257);
  for (size_t i = 0; i < profile.grid_z.size(); ++i) {
    const double z = profile.grid_z[i] / kLength;
    profile.polar_moment[i] *= 1.0 + 0.5 * std::cos(kTwoPi * z);
  }
  const auto modes = webster_eigenmodes(profile, kVelocity, 4);
  for (size_t i = 1; i < modes.size(); ++i)
    CHECK(modes[i].frequency > modes[i - 1].frequency);
  for (const auto& mode : modes) {
    CHECK(std::abs(mode.theta.front()) < 1e-6);
    double peak = 0.0;
    for (double v : mode.theta) peak = std::max(peak, std::abs(v));
    CHECK(peak == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("profile validation") {
  CrossSectionProfile profile = CrossSectionProfile::uniform(kLength, 1e-24, 65);
  profile.polar_moment[10] = -1.0;
  CHECK_THROWS_AS(webster_eigenmodes(profile, kVelocity, 1), InvalidParameterError);

  const CrossSectionProfile small = CrossSectionProfile::uniform(kLength, 1e-24, 32);
  CHECK_THROWS_AS(webster_eigenmodes(small, kVelocity, 1), InvalidParameterError);
}

TEST_CASE("profile and mode CSV round trip") {
  namespace fs = std::filesystem;
  const auto dir = fs::temp_directory_path() / "torsim_mode_test";
  fs::create_directories(dir);

  const auto profile_file = dir / "profile.csv";
  {
    std::ofstream out(profile_file);
    out << "# z,Ip\n";
    for (int i = 0; i < 65; ++i) {
      const double z = -kLength / 2.0 + kLength * i / 64.0;
      out << z << "," << 1e-24 << "\n";
    }
  }
  const CrossSectionProfile profile = CrossSectionProfile::from_csv(profile_file);
  CHECK(profile.grid_z.size() == 65);

  const TorsionalMode mode = uniform_beam_mode(kLength, kVelocity, 0, Parity::even);
  mode_to_csv(mode, dir / "mode.csv");
  std::ifstream in(dir / "mode.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "z,theta");
}
