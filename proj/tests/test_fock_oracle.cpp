#include <doctest.h>

#include <cmath>
#include <complex>

#include "oracles.hpp"
#include "torsim/errors.hpp"
#include "torsim/fock_oracle.hpp"
#include "torsim/measurement.hpp"
#include "torsim/numerics.hpp"
#include "torsim/phase_space.hpp"

using namespace torsim;
using Complex = std::complex<double>;

namespace {

Complex mode_annihilation_mean(const FockDensityMatrix& state) {
  Complex a(0.0, 0.0);
  for (int n = 1; n <= state.truncation; ++n)
    a += std::sqrt(double(n)) * state.rho(n, n - 1);
  return a;
}

double photon_expectation(const FockDensityMatrix& state, int n) {
  return state.rho(n, n).real();
}

}  // namespace

TEST_CASE("state builders") {
  const FockDensityMatrix fock1 = build_state(Fock{1}, 20);
  CHECK(photon_expectation(fock1, 1) == doctest::Approx(1.0));
  fock1.validate();

  const FockDensityMatrix coherent = build_state(Coherent{2.0}, 40);
  for (int n = 0; n <= 20; ++n) {
    CHECK(photon_expectation(coherent, n) ==
          doctest::Approx(torsim_test::poisson_pmf(4.0, n)).epsilon(1e-10));
  }

  const FockDensityMatrix cat = build_state(EvenCat{2.0}, 40);
  for (int n = 1; n <= 39; n += 2)
    CHECK(std::abs(cat.rho(n, n)) < 1e-20);

  // Squeezed quadrature variance <x^2> = 2 Re<a^2> + 2<n> + 1 = e^{2r}.
  const FockDensityMatrix squeezed = build_state(Squeezed{1.15}, 120, 1e-9);
  Complex a2(0.0, 0.0);
  double nbar = 0.0;
  for (int n = 0; n <= 118; ++n) {
    a2 += std::sqrt(double(n + 1) * (n + 2)) * squeezed.rho(n + 2, n);
    nbar += n * squeezed.rho(n, n).real();
  }
  nbar += 119.0 * squeezed.rho(119, 119).real() + 120.0 * squeezed.rho(120, 120).real();
  CHECK(2.0 * a2.real() + 2.0 * nbar + 1.0 ==
        doctest::Approx(std::exp(2.3)).epsilon(1e-6));
}

TEST_CASE("truncation deficits are measured") {
  // Squeezing at r = 1.15 loses ~5e-5 of norm at a 40-photon cutoff.
  const double deficit = truncation_deficit(Squeezed{1.15}, 40);
  CHECK(deficit > 1e-6);
  CHECK(deficit < 1e-3);
  CHECK_THROWS_AS(build_state(Squeezed{1.15}, 40, 1e-10), TruncationError);
  CHECK_NOTHROW(build_state(Squeezed{1.15}, 40, 1e-4));

  CHECK(truncation_deficit(Thermal{1.0}, 40) == doctest::Approx(std::pow(0.5, 41)));
  CHECK(truncation_deficit(EvenCat{2.0}, 40) < 1e-10);
  CHECK_THROWS_AS(build_state(Fock{50}, 40), TruncationError);
}

TEST_CASE("characteristic function against the coherent-state formula") {
  const double alpha = 1.2;
  const FockDensityMatrix coherent = build_state(Coherent{alpha}, 40);
  for (const Complex beta : {Complex(0.3, 0.0), Complex(-0.7, 1.1), Complex(0.0, 2.0)}) {
    const Complex expected = std::exp(-0.5 * std::norm(beta)) *
                             std::exp(beta * alpha - std::conj(beta) * alpha);
    const Complex got = characteristic_function(coherent, beta);
    CHECK(std::abs(got - expected) < 1e-10);
  }
  CHECK(std::abs(characteristic_function(coherent, Complex(0.0, 0.0)) - 1.0) < 1e-12);
}

TEST_CASE("wigner reconstruction matches closed forms") {
  const Axis axis = symmetric_axis(8.0, 201);

  const GridWigner vac_oracle = wigner_reconstruct(build_state(Vacuum{}, 20), axis, axis);
  const GridWigner vac = gaussian_to_grid(make_vacuum(), axis, axis);
  CHECK((vac_oracle.values - vac.values).cwiseAbs().maxCoeff() < 1e-8);

  const GridWigner fock_oracle_grid =
      wigner_reconstruct(build_state(Fock{1}, 20), axis, axis);
  const GridWigner fock_closed = make_fock_wigner(1, 201, 8.0);
  CHECK((fock_oracle_grid.values - fock_closed.values).cwiseAbs().maxCoeff() < 1e-8);

  const Axis cat_axis = symmetric_axis(12.0, 241);
  const GridWigner cat_oracle =
      wigner_reconstruct(build_state(EvenCat{2.0}, 40), cat_axis, cat_axis);
  const GridWigner cat_closed = sample_grid(
      cat_axis, cat_axis,
      [](double x, double p) { return even_cat_wigner(x, p, 2.0); }, true, "cat");
  CHECK((cat_oracle.values - cat_closed.values).cwiseAbs().maxCoeff() < 1e-6);

  double raw_norm = 0.0;
  const GridWigner thermal_oracle =
      wigner_reconstruct(build_state(Thermal{0.8}, 60), axis, axis, 0.0, 0, &raw_norm);
  CHECK(std::abs(raw_norm - 1.0) < 1e-5);
  CHECK(thermal_oracle.integral() == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("povm wigner reconstruction certifies the closed form") {
  const Axis axis = symmetric_axis(10.0, 161);
  for (double eta : {1.0, 0.5}) {
    for (int m = 0; m <= 1; ++m) {
      const PovmWigner povm = povm_photon_number(m, eta);
      const GridWigner closed = sample_grid(axis, axis, povm.eval, false, "povm");
      const GridWigner oracle = povm_wigner_reconstruct(m, eta, 60, axis, axis);
      CHECK((closed.values - oracle.values).cwiseAbs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("beam splitter on fock states") {
  const FockDensityMatrix joint =
      tensor(build_state(Fock{1}, 12), build_state(Vacuum{}, 12));
  const FockDensityMatrix same = apply_beam_splitter(joint, 1.0);
  CHECK((same.rho - joint.rho).cwiseAbs().maxCoeff() < 1e-13);

  const FockDensityMatrix split = apply_beam_splitter(joint, 0.5);
  split.validate(false);
  // Reduced mode-1 single-photon probability is 1/2.
  double p1 = 0.0;
  const int d = split.dim_per_mode();
  for (int k = 0; k < d; ++k) p1 += split.rho(1 * d + k, 1 * d + k).real();
  CHECK(p1 == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("beam splitter displacement covariance") {
  const FockDensityMatrix joint =
      tensor(build_state(Coherent{1.0}, 25), build_state(Coherent{0.0}, 25));
  for (double t : {0.2, 0.5, 0.909}) {
    const FockDensityMatrix out = apply_beam_splitter(joint, t);
    const Eigen::Vector4d means = mode_quadrature_means(out);
    const Eigen::Vector4d expected =
        beam_splitter(t).matrix() * Eigen::Vector4d(2.0, 0.0, 0.0, 0.0);
    CHECK((means - expected).cwiseAbs().maxCoeff() < 1e-8);
  }
}

TEST_CASE("beam splitter truncation leakage is measured") {
  const FockDensityMatrix joint =
      tensor(build_state(Squeezed{1.15}, 40, 1e-4), build_state(Squeezed{-1.15}, 40, 1e-4));
  CHECK_THROWS_AS(apply_beam_splitter(joint, 0.909, 1e-8), TruncationError);
  CHECK_NOTHROW(apply_beam_splitter(joint, 0.909, 1e-4));
}

TEST_CASE("photon POVM conditioning") {
  const FockDensityMatrix vac2 =
      tensor(build_state(Vacuum{}, 10), build_state(Vacuum{}, 10));
  const FockConditional trivial = apply_povm_and_condition(vac2, 0, 1.0);
  CHECK(trivial.probability == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(trivial.state.rho(0, 0).real() == doctest::Approx(1.0).epsilon(1e-12));

  const FockDensityMatrix mixed =
      tensor(build_state(Vacuum{}, 10), build_state(Fock{1}, 10));
  CHECK(apply_povm_and_condition(mixed, 1, 0.5).probability ==
        doctest::Approx(0.5).epsilon(1e-12));

  // Completeness at unit efficiency; outcomes beyond m = 12 carry less
  // mass than the impossible-outcome threshold for this drive.
  const FockDensityMatrix joint =
      tensor(build_state(Coherent{1.0}, 30), build_state(Coherent{0.8}, 30));
  double total = 0.0;
  for (int m = 0; m <= 12; ++m)
    total += apply_povm_and_condition(joint, m, 1.0).probability;
  CHECK(total == doctest::Approx(1.0).epsilon(1e-10));

  CHECK_THROWS_AS(apply_povm_and_condition(mixed, 9, 1.0), NumericalError);
}

TEST_CASE("density matrices stay valid after operations") {
  const FockDensityMatrix joint =
      tensor(build_state(EvenCat{1.0}, 14), build_state(Vacuum{}, 14));
  const FockDensityMatrix split = apply_beam_splitter(joint, 0.7);
  const FockConditional cond = apply_povm_and_condition(split, 1, 0.8);
  cond.state.validate();
}
