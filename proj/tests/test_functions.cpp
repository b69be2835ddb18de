#include <doctest.h>

#include <cmath>

#include "sigmalab/functions.hpp"
#include "sigmalab/quadrature.hpp"

using sigmalab::CeilingFunction;
using sigmalab::WeightFunction;

TEST_SUITE("functions") {

TEST_CASE("adaptive simpson on known integrals") {
  CHECK(sigmalab::adaptive_simpson([](double z) { return z * z; }, 0, 1) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(sigmalab::adaptive_simpson([](double z) { return std::sin(z); }, 0,
                                   3.14159265358979323846) ==
        doctest::Approx(2.0).epsilon(1e-10));
  CHECK(sigmalab::adaptive_simpson([](double z) { return std::exp(z); }, 0, 1) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
  CHECK(sigmalab::adaptive_simpson([](double) { return 1.0; }, 2, 2) == 0.0);
}

TEST_CASE("catalog antiderivatives match quadrature") {
  const auto weights = {
      WeightFunction::constant(1.0),       WeightFunction::power(0.5),
      WeightFunction::power(2.0),          WeightFunction::affine(0.3, 2.0),
      WeightFunction::exp_decay(0.7),
      WeightFunction::piecewise_constant({1.0, 3.0}, {0.5, 2.0, 1.0}),
  };
  const auto pts = sigmalab::probe_grid(1e-6, 1e3, 28);
  for (const auto& w : weights) {
    for (double x : pts) {
      const double closed = w.antiderivative(x);
      const double quad =
          sigmalab::adaptive_simpson([&](double z) { return w(z); }, 0.0, x);
      CHECK(std::abs(closed - quad) <= 1e-8 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST_CASE("ceiling survival exponents match quadrature") {
  const auto ceilings = {CeilingFunction::zero(), CeilingFunction::proportional(0.5),
                         CeilingFunction::drawdown(1.0),
                         CeilingFunction::drawdown(0.25)};
  const auto pts = sigmalab::probe_grid(1.0, 32.0, 12);
  for (const auto& c : ceilings) {
    for (double x : pts) {
      const double closed = c.survival_exponent(x);
      const double quad = sigmalab::adaptive_simpson(
          [&](double z) { return 1.0 / (z - c(z)); }, 1.0, x);
      CHECK(std::abs(closed - quad) <= 1e-8 * std::max(1.0, std::abs(closed)));
    }
  }
}

TEST_CASE("weight evaluations and reciprocals") {
  CHECK(WeightFunction::parse("const:2")(17.0) == 2.0);
  CHECK(WeightFunction::parse("affine:0,2")(3.0) == 6.0);
  CHECK(WeightFunction::parse("power:2")(3.0) == 9.0);
  const auto pw = WeightFunction::parse("piecewise:1,3|0.5,2,1");
  CHECK(pw(0.5) == 0.5);
  CHECK(pw(2.0) == 2.0);
  CHECK(pw(10.0) == 1.0);
  CHECK(pw.antiderivative(4.0) == doctest::Approx(0.5 + 2.0 * 2.0 + 1.0));

  CHECK(WeightFunction::constant(2.0).reciprocal_antiderivative(3.0) == 1.5);
  CHECK(WeightFunction::power(0.5).reciprocal_antiderivative(4.0) ==
        doctest::Approx(4.0));
  CHECK(WeightFunction::exp_decay(2.0).reciprocal_antiderivative(1.0) ==
        doctest::Approx((std::exp(1.0) - 1.0) / 2.0));
  CHECK(WeightFunction::affine(1.0, 1.0).reciprocal_antiderivative(1.0) ==
        doctest::Approx(std::log(2.0)));

  CHECK_FALSE(WeightFunction::power(1.0).reciprocal_integrable());
  CHECK_FALSE(WeightFunction::power(1.5).reciprocal_integrable());
  CHECK_FALSE(WeightFunction::affine(0.0, 2.0).reciprocal_integrable());
  CHECK_THROWS_AS(WeightFunction::power(1.5).reciprocal_antiderivative(1.0),
                  std::domain_error);
}

TEST_CASE("invalid weights are rejected at construction") {
  CHECK_THROWS_AS(WeightFunction::constant(0.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::constant(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::power(-1.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::affine(-0.5, 2.0), std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::piecewise_constant({1.0}, {0.0, 1.0}),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::piecewise_constant({3.0, 1.0}, {1.0, 1.0, 1.0}),
                  std::invalid_argument);
  // Negative somewhere on the probe grid.
  CHECK_THROWS_AS(WeightFunction::generic([](double z) { return z - 1.0; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(WeightFunction::parse("nonsense:1"), std::invalid_argument);
}

TEST_CASE("invalid ceilings are rejected at construction") {
  CHECK_THROWS_AS(CeilingFunction::proportional(1.0), std::invalid_argument);
  CHECK_THROWS_AS(CeilingFunction::proportional(-0.1), std::invalid_argument);
  CHECK_THROWS_AS(CeilingFunction::drawdown(1.5), std::invalid_argument);
  CHECK_THROWS_AS(CeilingFunction::drawdown(0.0), std::invalid_argument);
  // psi(x) >= x fails the probe validation.
  CHECK_THROWS_AS(CeilingFunction::generic([](double x) { return x; }),
                  std::invalid_argument);
  CHECK_THROWS_AS(CeilingFunction::parse("nonsense"), std::invalid_argument);
}

TEST_CASE("induced weights") {
  CHECK(CeilingFunction::zero().induced_weight()(3.0) == 1.0);
  CHECK(CeilingFunction::proportional(0.25).induced_weight()(3.0) ==
        doctest::Approx(0.75));
  const auto w = CeilingFunction::drawdown(0.5).induced_weight();
  CHECK(w(1.0) == doctest::Approx(0.5 * std::exp(-1.0)));
  CHECK(w.antiderivative(0.0) == 0.0);

  const auto gen = CeilingFunction::generic(
      [](double x) { return 0.5 * x; }, nullptr, "half");
  const auto wg = gen.induced_weight();
  CHECK(wg(2.0) == doctest::Approx(0.5));
}

TEST_CASE("probe grid shape") {
  const auto pts = sigmalab::probe_grid(1e-6, 1e6, 512);
  CHECK(pts.size() == 512);
  CHECK(pts.front() == 1e-6);
  CHECK(pts.back() == 1e6);
  CHECK(std::is_sorted(pts.begin(), pts.end()));
}

}  // TEST_SUITE
