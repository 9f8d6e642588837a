#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <random>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"
#include "torsim/phase_space.hpp"

using namespace torsim;

namespace {

double marginal_variance(const std::vector<double>& marginal, const Axis& axis) {
  double mass = 0.0, mean = 0.0;
  for (int i = 0; i < axis.n; ++i) {
    mass += marginal[static_cast<size_t>(i)] * axis.step();
    mean += axis.value(i) * marginal[static_cast<size_t>(i)] * axis.step();
  }
  mean /= mass;
  double var = 0.0;
  for (int i = 0; i < axis.n; ++i) {
    const double d = axis.value(i) - mean;
    var += d * d * marginal[static_cast<size_t>(i)] * axis.step();
  }
  return var / mass;
}

}  // namespace

TEST_CASE("vacuum state and conventions") {
  CHECK(vacuum_wigner(0.0, 0.0) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-15));

  const GaussianState vac = make_vacuum();
  CHECK(vac.cov()(0, 0) == 1.0);
  CHECK(vac.cov()(1, 1) == 1.0);

  const Axis axis = symmetric_axis(8.0, 201);
  const GridWigner grid = gaussian_to_grid(vac, axis, axis);
  CHECK(grid.integral() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(marginal_variance(grid.marginal_x(), axis) == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(purity(grid) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("squeezed states") {
  const GaussianState s = make_squeezed(1.15);
  CHECK(s.cov()(0, 0) == doctest::Approx(std::exp(2.3)).epsilon(1e-14));
  CHECK(s.cov()(1, 1) == doctest::Approx(std::exp(-2.3)).epsilon(1e-14));
  for (double r : {-1.0, 0.0, 0.4, 1.15}) {
    const GaussianState state = make_squeezed(r);
    CHECK(state.cov().determinant() == doctest::Approx(1.0).epsilon(1e-12));
  }

  CHECK(make_squeezed(0.0).cov().isApprox(make_vacuum().cov()));
}

TEST_CASE("squeezed thermal states and the uncertainty guard") {
  const GaussianState ok = make_squeezed_thermal(0.2, 2000.0);
  CHECK(ok.cov()(0, 0) == doctest::Approx(0.2));
  CHECK(ok.cov()(1, 1) == doctest::Approx(2000.0));
  CHECK(make_squeezed_thermal(1.0, 1.0).cov().isApprox(make_vacuum().cov()));
  CHECK_THROWS_AS(make_squeezed_thermal(0.1, 5.0), InvalidStateError);
  CHECK_THROWS_AS(make_squeezed_thermal(-1.0, 5.0), InvalidStateError);
}

TEST_CASE("even cat closed form") {
  for (double alpha : {0.5, 1.0, 2.0, 3.0}) {
    CHECK(even_cat_wigner(0.0, 0.0, alpha) ==
          doctest::Approx(1.0 / kTwoPi).epsilon(1e-14));
  }

  const GridWigner degenerate = make_even_cat(0.0);
  const GridWigner vac =
      gaussian_to_grid(make_vacuum(), degenerate.x_axis, degenerate.p_axis);
  CHECK((degenerate.values - vac.values).cwiseAbs().maxCoeff() < 1e-12);

  const GridWigner cat = make_even_cat(2.0);
  CHECK(cat.integral() == doctest::Approx(1.0).epsilon(1e-9));
  // Interference fringes along p go negative.
  double min_on_p_axis = 1.0;
  const int mid = cat.x_axis.n / 2;
  for (int j = 0; j < cat.p_axis.n; ++j)
    min_on_p_axis = std::min(min_on_p_axis, cat.values(mid, j));
  CHECK(min_on_p_axis < -1e-3);

  // Coherent components sit near +-2 alpha in x.
  const auto marg = cat.marginal_x();
  const int peak_lo = static_cast<int>(std::round((-4.0 - cat.x_axis.min) / cat.dx()));
  CHECK(marg[static_cast<size_t>(peak_lo)] > 0.1 * marg[static_cast<size_t>(mid)]);
}

TEST_CASE("fock wigner functions") {
  const GridWigner zero = make_fock_wigner(0);
  const GridWigner vac = gaussian_to_grid(make_vacuum(), zero.x_axis, zero.p_axis);
  CHECK((zero.values - vac.values).cwiseAbs().maxCoeff() < 1e-12);

  CHECK(fock_wigner(0.0, 0.0, 1) == doctest::Approx(-1.0 / kTwoPi).epsilon(1e-15));
  for (int n = 0; n <= 4; ++n) {
    const GridWigner w = make_fock_wigner(n);
    CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-6));
    // Marginals stay non-negative even where W < 0.
    for (double v : w.marginal_x()) CHECK(v >= -1e-9);
    for (double v : w.marginal_p()) CHECK(v >= -1e-9);
  }
}

TEST_CASE("gaussian_to_grid coverage and moments") {
  const Axis wide = symmetric_axis(18.0, 501);
  const GridWigner squeezed = gaussian_to_grid(make_squeezed(1.15), wide, wide);
  CHECK(marginal_variance(squeezed.marginal_x(), wide) ==
        doctest::Approx(std::exp(2.3)).epsilon(1e-4));
  CHECK(marginal_variance(squeezed.marginal_p(), wide) ==
        doctest::Approx(std::exp(-2.3)).epsilon(1e-4));

  const GridWigner displaced =
      gaussian_to_grid(make_coherent(3.0, -2.0), symmetric_axis(10.0, 401),
                       symmetric_axis(10.0, 401));
  int imax = 0, jmax = 0;
  displaced.values.maxCoeff(&imax, &jmax);
  CHECK(displaced.x_axis.value(imax) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(displaced.p_axis.value(jmax) == doctest::Approx(-2.0).epsilon(1e-12));

  CHECK_THROWS_AS(gaussian_to_grid(make_squeezed(1.15), symmetric_axis(3.0, 101),
                                   symmetric_axis(3.0, 101)),
                  CoverageError);
}

TEST_CASE("negativity volume") {
  const Axis axis = symmetric_axis(8.0, 401);
  const GridWigner vac = gaussian_to_grid(make_vacuum(), axis, axis);
  CHECK(negativity_volume(vac) <= 1e-9);

  const GridWigner squeezed =
      gaussian_to_grid(make_squeezed(0.8), symmetric_axis(12.0, 401),
                       symmetric_axis(12.0, 401));
  CHECK(negativity_volume(squeezed) <= 1e-9);

  // 1D radial oracle: integral of |W_1| is integral |1 - u| e^{-u/2} du / 2
  // = 4 e^{-1/2} - 1, so the negativity volume is 4 e^{-1/2} - 2 = 0.42612...
  const double radial = adaptive_simpson(
      [](double u) { return std::abs(1.0 - u) * std::exp(-0.5 * u) / 2.0; }, 0.0,
      200.0, 1e-12);
  const double expected = radial - 1.0;
  CHECK(expected == doctest::Approx(4.0 * std::exp(-0.5) - 2.0).epsilon(1e-9));

  const GridWigner fock1 = make_fock_wigner(1, 401, 8.0);
  CHECK(negativity_volume(fock1) == doctest::Approx(expected).epsilon(1e-3));

  GridWigner unnormalized = fock1;
  unnormalized.normalized = false;
  CHECK_THROWS_AS(negativity_volume(unnormalized), InvalidStateError);
}

TEST_CASE("fidelity overlap") {
  const Axis axis = symmetric_axis(8.0, 401);
  const GridWigner vac = gaussian_to_grid(make_vacuum(), axis, axis);
  CHECK(fidelity_overlap(vac, vac) == doctest::Approx(1.0).epsilon(1e-6));

  const GridWigner fock1 = make_fock_wigner(1, 401, 8.0);
  CHECK(fidelity_overlap(vac, fock1) == doctest::Approx(0.0).epsilon(1e-6));

  // Gaussian-overlap oracle in this convention: a coherent state displaced to
  // mean (2, 0) gives overlap e^{-1} with the vacuum.
  const GridWigner coh = gaussian_to_grid(make_coherent(2.0, 0.0), axis, axis);
  CHECK(fidelity_overlap(vac, coh) == doctest::Approx(std::exp(-1.0)).epsilon(1e-3));

  const GridWigner other = make_fock_wigner(1, 301, 8.0);
  CHECK_THROWS_AS(fidelity_overlap(vac, other), GridError);
}

TEST_CASE("separable forms agree with the evaluators") {
  std::mt19937 rng(424242u);
  std::uniform_real_distribution<double> u(-6.0, 6.0);

  const auto check_separable = [&](const WignerFunction& w) {
    REQUIRE(!w.separable.empty());
    for (int i = 0; i < 200; ++i) {
      const double x = u(rng);
      const double p = u(rng);
      double sum = 0.0;
      for (const auto& term : w.separable) sum += term.f1(x) * term.f2(p);
      CHECK(sum == doctest::Approx(w.eval(x, p)).epsilon(1e-10));
    }
  };

  check_separable(WignerFunction::from_gaussian(make_squeezed(1.15)));
  check_separable(WignerFunction::from_gaussian(make_squeezed_thermal(0.2, 2000.0)));
  check_separable(WignerFunction::from_fock(3));
  check_separable(WignerFunction::from_even_cat(1.5, false));
  check_separable(WignerFunction::from_even_cat(1.5, true));
}

TEST_CASE("grid-backed evaluator") {
  const GridWigner cat = make_even_cat(1.0);
  const WignerFunction w = WignerFunction::from_grid(cat);
  CHECK(w.eval(0.0, 0.0) == doctest::Approx(1.0 / kTwoPi).epsilon(1e-4));
  CHECK(w.eval(100.0, 0.0) == 0.0);
  CHECK(w.separable.empty());
}
