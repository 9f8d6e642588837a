#include <doctest.h>

#include <cmath>

#include "torsim/errors.hpp"
#include "torsim/numerics.hpp"

using namespace torsim;

TEST_CASE("stable sinc") {
  CHECK(stable_sinc(0.0) == 1.0);
  CHECK(stable_sinc(1e-5) == doctest::Approx(std::sin(1e-5) / 1e-5).epsilon(1e-14));
  CHECK(stable_sinc(2.3) == doctest::Approx(std::sin(2.3) / 2.3).epsilon(1e-15));
  CHECK(stable_sinc(kPi) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(stable_sinc(-1.7) == stable_sinc(1.7));
}

TEST_CASE("simpson rules") {
  const auto f = [](double x) { return std::sin(x); };
  CHECK(simpson(f, 0.0, kPi, 200) == doctest::Approx(2.0).epsilon(1e-9));
  CHECK(adaptive_simpson(f, 0.0, kPi, 1e-12) == doctest::Approx(2.0).epsilon(1e-11));

  std::vector<double> samples(101);
  for (int i = 0; i <= 100; ++i) {
    const double x = i / 100.0;
    samples[static_cast<size_t>(i)] = x * x;
  }
  CHECK(simpson_samples(samples, 0.01) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(simpson_samples(std::vector<double>(4, 1.0), 0.1),
                  InvalidParameterError);
}

TEST_CASE("gauss-legendre quadrature") {
  // Order-n rules are exact for polynomials of degree 2n-1.
  const QuadratureRule& rule = gauss_legendre(5);
  double quartic = 0.0;
  double ninth = 0.0;
  for (size_t i = 0; i < rule.nodes.size(); ++i) {
    quartic += rule.weights[i] * std::pow(rule.nodes[i], 4);
    ninth += rule.weights[i] * std::pow(rule.nodes[i], 9);
  }
  CHECK(quartic == doctest::Approx(2.0 / 5.0).epsilon(1e-14));
  CHECK(ninth == doctest::Approx(0.0).epsilon(1e-14));

  const QuadratureRule mapped = gauss_legendre_on(48, -8.0, 8.0);
  double gauss = 0.0;
  for (size_t i = 0; i < mapped.nodes.size(); ++i) {
    gauss += mapped.weights[i] * std::exp(-0.5 * mapped.nodes[i] * mapped.nodes[i]);
  }
  CHECK(gauss == doctest::Approx(std::sqrt(kTwoPi)).epsilon(1e-12));
}

TEST_CASE("laguerre recurrences") {
  const double x = 1.37;
  CHECK(laguerre(0, x) == 1.0);
  CHECK(laguerre(1, x) == doctest::Approx(1.0 - x));
  CHECK(laguerre(2, x) == doctest::Approx(1.0 - 2.0 * x + x * x / 2.0).epsilon(1e-14));
  const auto all = laguerre_all(6, x);
  for (int n = 0; n <= 6; ++n)
    CHECK(all[static_cast<size_t>(n)] == doctest::Approx(laguerre(n, x)).epsilon(1e-14));
  // L_n^{(1)}(x) relates to ordinary polynomials: L_n^{(1)} = sum_k L_k.
  double sum = 0.0;
  for (int k = 0; k <= 4; ++k) sum += laguerre(k, x);
  CHECK(laguerre_assoc(4, 1, x) == doctest::Approx(sum).epsilon(1e-13));
}

TEST_CASE("log factorial and linear fit") {
  CHECK(log_factorial(0) == 0.0);
  CHECK(log_factorial(5) == doctest::Approx(std::log(120.0)).epsilon(1e-14));
  CHECK(log_factorial(10000) == doctest::Approx(std::lgamma(10001.0)).epsilon(1e-12));

  std::vector<double> xs, ys;
  for (int i = 0; i < 20; ++i) {
    xs.push_back(0.1 * i);
    ys.push_back(3.0 - 0.5 * 0.1 * i);
  }
  const LinearFit fit = linear_fit(xs, ys);
  CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
  CHECK(fit.intercept == doctest::Approx(3.0).epsilon(1e-12));
}
