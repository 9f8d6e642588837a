#include <doctest.h>

#include <cmath>
#include <random>

#include "torsim/errors.hpp"
#include "torsim/measurement.hpp"
#include "torsim/numerics.hpp"
#include "torsim/phase_space.hpp"
#include "torsim/protocols.hpp"
#include "torsim/symplectic.hpp"

using namespace torsim;

TEST_CASE("thermal occupation") {
  const double omega = kTwoPi * 500e3;
  const double n_bar = thermal_occupation(0.1, omega);
  CHECK(n_bar == doctest::Approx(4.17e3).epsilon(2e-3));
  // High-temperature limit.
  CHECK(n_bar == doctest::Approx(kBoltzmann * 0.1 / (kHbar * omega)).epsilon(2e-4));
  CHECK(thermal_occupation(0.0, omega) == 0.0);
  CHECK_THROWS_AS(thermal_occupation(-0.1, omega), InvalidParameterError);
}

TEST_CASE("single-pulse squeeze report") {
  const SqueezeReport rep = single_pulse_squeeze(1e4, 1.0);
  const double t = 2e4 + 1.0;
  CHECK(rep.var_theta_out == doctest::Approx(t / (1.0 + t)).epsilon(1e-12));
  CHECK(rep.var_l_out == doctest::Approx(t + 1.0).epsilon(1e-12));
  CHECK(rep.n_eff == doctest::Approx(70.2124).epsilon(2e-5));
  // Within one percent of the large-occupation asymptote sqrt(n/2 chi^2).
  CHECK(std::abs(rep.n_eff - std::sqrt(5e3)) / std::sqrt(5e3) < 0.01);
  CHECK(rep.var_theta_out * rep.var_l_out >= 1.0);

  // Pure inputs give a pure conditional state.
  const SqueezeReport pure = single_pulse_squeeze(0.0, 1.0);
  CHECK(pure.var_theta_out == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(pure.var_l_out == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(pure.n_eff == doctest::Approx(0.0).epsilon(1e-12));

  CHECK_THROWS_AS(single_pulse_squeeze(10.0, 0.0), InvalidParameterError);
  CHECK_THROWS_AS(single_pulse_squeeze(-1.0, 1.0), InvalidParameterError);
}

TEST_CASE("squeeze report equals explicit conditioning over random draws") {
  std::mt19937 rng(90210u);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double n_bar = 1e5 * u(rng);
    const double chi = 0.1 + 4.9 * u(rng);
    const double t = 2.0 * n_bar + 1.0;
    const SqueezeReport rep = single_pulse_squeeze(n_bar, chi);
    // Closed-form conditioning algebra, independent route.
    const double var_theta = t / (1.0 + chi * chi * t);
    const double var_l = t + chi * chi;
    CHECK(std::abs(rep.var_theta_out - var_theta) <= 1e-9 * var_theta);
    CHECK(std::abs(rep.var_l_out - var_l) <= 1e-9 * var_l);
  }
}

TEST_CASE("squeezing below vacuum for strong pulses") {
  for (double chi : {1.0, 1.5, 3.0}) {
    for (double n_bar : {0.0, 10.0, 1e4}) {
      CHECK(single_pulse_squeeze(n_bar, chi).var_theta_out <= 1.0 + 1e-12);
    }
  }
}

TEST_CASE("optimal tap transmittance") {
  CHECK(optimal_tap(1.15) == doctest::Approx(0.909).epsilon(1.2e-3));
  CHECK(optimal_tap(20.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(optimal_tap(1e-6) == doctest::Approx(0.5).epsilon(1e-5));
  CHECK_THROWS_AS(optimal_tap(0.0), InvalidParameterError);
  CHECK_THROWS_AS(optimal_tap(-1.0), InvalidParameterError);
}

TEST_CASE("closed-form transfer states") {
  const Axis axis = default_axis();

  const GridWigner fock_like = closed_form_fock_transfer(0.2, 2000.0, axis, axis);
  CHECK(fock_like.value_at(0.0, 0.0) < 0.0);
  CHECK(fock_like.min_value() < 0.0);
  CHECK(fock_like.integral() == doctest::Approx(1.0).epsilon(1e-9));

  const GridWigner nearly_fock =
      closed_form_fock_transfer(1e-3, 1e6, axis, axis);
  const GridWigner fock1 = make_fock_wigner(1);
  CHECK(fidelity_overlap(nearly_fock, fock1) > 0.999);

  const GridWigner no_cat = closed_form_cat_transfer(0.2, 2000.0, 0.0, axis, axis);
  CHECK(negativity_volume(no_cat) < 1e-9);

  const Axis wide = symmetric_axis(12.0, 481);
  const GridWigner nearly_cat =
      closed_form_cat_transfer(1e-3, 1e6, 2.0, wide, wide);
  const GridWigner cat = make_even_cat(2.0, 481);
  CHECK(fidelity_overlap(nearly_cat, cat) > 0.99);

  CHECK_THROWS_AS(closed_form_fock_transfer(0.1, 5.0, axis, axis),
                  InvalidParameterError);
}

TEST_CASE("cat transfer fringe period") {
  const Axis axis = default_axis();
  const GridWigner w = closed_form_cat_transfer(0.2, 2000.0, 2.0, axis, axis);
  // Divide out the envelope at theta = 0: the residual oscillation is
  // cos(2 alpha L / (1 + v_theta)) up to the flat cosh term.
  const int mid = axis.n / 2;
  const double damp = std::exp(-2.0 * 4.0 / 1.2);
  const double scale = (1.0 + damp) / w.values(mid, mid);
  const double freq = 2.0 * 2.0 / 1.2;  // period pi (1 + v_theta) / alpha
  for (int j = 0; j < axis.n; ++j) {
    const double l = axis.value(j);
    if (std::abs(l) > 6.0) continue;
    const double envelope = std::exp(-0.5 * l * l / 1.2);
    const double fringe = w.values(mid, j) * scale / envelope - damp;
    CHECK(fringe == doctest::Approx(std::cos(freq * l)).epsilon(1e-9));
  }
}

TEST_CASE("mechanical preparation reproduces the closed forms") {
  const Axis axis = default_axis();
  CatPrepConfig cfg;
  cfg.v_theta = 0.2;
  cfg.v_l = 2000.0;
  cfg.chi = 1.0;
  cfg.homodyne_outcome_p = 0.0;

  const ConditionalResult fock_out =
      mechanical_state_prep(WignerFunction::from_fock(1), cfg, axis, axis);
  const GridWigner fock_ref = closed_form_fock_transfer(0.2, 2000.0, axis, axis);
  CHECK((fock_out.state.values - fock_ref.values).cwiseAbs().maxCoeff() < 1e-6);

  const ConditionalResult cat_out = mechanical_state_prep(
      WignerFunction::from_even_cat(2.0, true), cfg, axis, axis);
  const GridWigner cat_ref = closed_form_cat_transfer(0.2, 2000.0, 2.0, axis, axis);
  CHECK((cat_out.state.values - cat_ref.values).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("decoupled transfer pulse returns the rotated input") {
  const Axis axis = default_axis();
  CatPrepConfig cfg;
  cfg.v_theta = 0.5;
  cfg.v_l = 6.0;
  cfg.chi = 0.0;
  const ConditionalResult out =
      mechanical_state_prep(WignerFunction::from_even_cat(2.0, true), cfg, axis, axis);
  // Quarter-period evolution swaps the variances.
  const GridWigner rotated =
      gaussian_to_grid(make_squeezed_thermal(6.0, 0.5), axis, axis);
  CHECK((out.state.values - rotated.values).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("gaussian optical input reproduces gaussian conditioning") {
  const Axis axis = default_axis();
  CatPrepConfig cfg;
  cfg.v_theta = 0.3;
  cfg.v_l = 8.0;
  cfg.chi = 0.9;
  cfg.homodyne_outcome_p = 0.4;

  const GaussianState optical = make_squeezed(0.7);
  const ConditionalResult grid_path = mechanical_state_prep(
      WignerFunction::from_gaussian(optical), cfg, axis, axis);

  // Exact route: evolve (optical x rotated mechanics), measure p_L.
  const GaussianState mech_rot =
      apply_gaussian(phase_rotation(kPi / 2.0), make_squeezed_thermal(0.3, 8.0));
  const GaussianState joint =
      apply_gaussian(om_interaction(0.9), tensor(optical, mech_rot));
  const GaussianConditional exact =
      condition_gaussian_homodyne(joint, 0, kPi / 2.0, 0.4);
  const GridWigner exact_grid = gaussian_to_grid(exact.state, axis, axis);

  CHECK((grid_path.state.values - exact_grid.values).cwiseAbs().maxCoeff() < 1e-6);
  CHECK(grid_path.success_weight ==
        doctest::Approx(exact.weight_density).epsilon(1e-6));
}

TEST_CASE("transfer success weights integrate to one over outcomes") {
  // A compact pair: the outcome density of the reference (0.2, 2000) pair
  // spreads over +-sqrt(2003), far beyond the +-10 sweep window.
  const Axis axis = symmetric_axis(10.0, 101);
  CatPrepConfig cfg;
  cfg.v_theta = 3.0;
  cfg.v_l = 0.5;
  cfg.chi = 1.0;
  const WignerFunction fock1 = WignerFunction::from_fock(1);
  double total = 0.0;
  const int samples = 101;
  for (int i = 0; i < samples; ++i) {
    cfg.homodyne_outcome_p = -10.0 + 20.0 * i / (samples - 1);
    total += mechanical_state_prep(fock1, cfg, axis, axis, 64).success_weight *
             20.0 / (samples - 1);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("gps cat states") {
  const Axis axis = symmetric_axis(16.0, 301);
  CatPrepConfig cfg;  // r1 = -r2 = 1.15, optimal tap, m = 1, eta = 1

  CatPrepConfig gaussian_case = cfg;
  gaussian_case.subtract_m = 0;
  const ConditionalResult vacuum_like = gps_optical_cat(gaussian_case, axis, axis);
  CHECK(negativity_volume(vacuum_like.state) < 1e-6);

  const ConditionalResult cat = gps_optical_cat(cfg, axis, axis);
  CHECK(negativity_volume(cat.state) > 0.01);
  CHECK(cat.success_weight > 0.0);
  CHECK(cat.success_weight < 1.0);
  CHECK(cfg.tap() == doctest::Approx(0.909).epsilon(1.2e-3));
}

TEST_CASE("loss degrades the cat") {
  const Axis axis = symmetric_axis(16.0, 201);
  CatPrepConfig cfg;
  double previous = 1e9;
  for (double eta : {1.0, 0.9, 0.8, 0.7, 0.6, 0.5}) {
    cfg.eta = eta;
    const double negativity = negativity_volume(gps_optical_cat(cfg, axis, axis).state);
    CHECK(negativity <= previous + 1e-9);
    previous = negativity;
  }
}

TEST_CASE("two-pulse chain") {
  const Axis axis = symmetric_axis(10.0, 161);
  CatPrepConfig cfg;

  // Decoupled second pulse: the final state is the rotated post-cooling
  // state. The m = 0 tap keeps the p = 0 outcome density nonzero (the m = 1
  // cat is odd along p, so conditioning on p = 0 would be degenerate).
  CatPrepConfig decoupled = cfg;
  decoupled.chi = 0.0;
  decoupled.subtract_m = 0;
  const TwoPulseResult idle = two_pulse_protocol(1.0, 1.0, decoupled, axis, axis, 161);
  const SqueezeReport cooling = single_pulse_squeeze(1.0, 1.0);
  const GridWigner rotated = gaussian_to_grid(
      apply_gaussian(phase_rotation(kPi / 2.0),
                     make_squeezed_thermal(cooling.var_theta_out, cooling.var_l_out)),
      axis, axis);
  CHECK((idle.final_state.state.values - rotated.values).cwiseAbs().maxCoeff() < 1e-9);

  // Reference configuration at laboratory occupation.
  const double n_bar = thermal_occupation(0.1, kTwoPi * 500e3);
  const TwoPulseResult cat_run = two_pulse_protocol(n_bar, 1.0, cfg, axis, axis, 161);
  CHECK(negativity_volume(cat_run.final_state.state) > 0.01);

  CatPrepConfig gaussian_case = cfg;
  gaussian_case.subtract_m = 0;
  const TwoPulseResult gauss_run =
      two_pulse_protocol(n_bar, 1.0, gaussian_case, axis, axis, 161);
  CHECK(negativity_volume(gauss_run.final_state.state) < 1e-4);
}
