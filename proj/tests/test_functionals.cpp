#include <doctest.h>

#include <cmath>

#include "sigmalab/functionals.hpp"
#include "sigmalab/process_gen.hpp"
#include "sigmalab/rng.hpp"

using namespace sigmalab;

TEST_SUITE("functionals") {

TEST_CASE("first crossing: drawdown threshold with unit weight") {
  SigmaPath p;
  p.dt = 0.1;
  p.x = {0.0, 0.4, 0.9, 1.2, 0.3};
  p.n = p.x;
  p.a = {0.0, 0.0, 0.0, 0.0, 0.0};
  p.zero_indices = {0};
  const auto phi = WeightFunction::constant(1.0);
  const auto t = first_crossing(p, phi);
  REQUIRE(t.has_value());
  CHECK(*t == 3);

  SigmaPath flat = p;
  flat.x = {0.0, 0.0, 0.0, 0.0, 0.0};
  CHECK_FALSE(first_crossing(flat, phi).has_value());
}

TEST_CASE("first crossing minimality on simulated paths") {
  const auto phi = WeightFunction::constant(1.0);
  for (std::size_t i = 0; i < 25; ++i) {
    RngStream rng(41, i);
    const auto p = gen_reflected(TimeGrid(1e-3, 4000), rng);
    const auto t = first_crossing(p, phi);
    if (!t) continue;
    for (std::size_t j = 0; j < *t; ++j) {
      CHECK(phi(p.a[j]) * p.x[j] < 1.0);
    }
  }
}

TEST_CASE("last zero before: structural zeros") {
  RngStream rng(43, 2);
  const auto p = gen_reflected(TimeGrid(1e-3, 2000), rng);
  const auto phi = WeightFunction::constant(1.0);
  const auto t = first_crossing(p, phi);
  REQUIRE(t.has_value());
  const std::size_t g = last_zero_before(p, *t);
  CHECK(g < *t);
  CHECK(p.x[g] == 0.0);
  // No structural zero strictly between g and the cutoff.
  for (auto z : p.zero_indices) {
    CHECK((z <= g || z >= *t));
  }
}

TEST_CASE("last zero before: sup of the empty set is index 0") {
  SigmaPath p;
  p.dt = 0.01;
  p.x = {0.0, 0.01, 0.02, 0.03};  // monotone ramp, no structural zero list
  p.n = p.x;
  p.a = {0.0, 0.0, 0.0, 0.0};
  CHECK(last_zero_before(p, 4) == 0);
  CHECK(last_zero_before(p, 0) == 0);
}

TEST_CASE("balayage residual: constant weight is exact on structural paths") {
  RngStream rng(47, 1);
  const auto p = gen_reflected(TimeGrid(1e-3, 2000), rng);
  CHECK(balayage_residual(p, WeightFunction::constant(2.0)) == 0.0);

  SigmaPath zero;
  zero.dt = 0.1;
  zero.x = {0.0, 0.0};
  zero.n = {0.0, 0.0};
  zero.a = {0.0, 0.0};
  zero.zero_indices = {0, 1};
  CHECK(balayage_residual(zero, WeightFunction::power(1.0)) == 0.0);
}

TEST_CASE("balayage residual: linear weight shrinks with dt") {
  // Single-seed sanity check of the sqrt(dt) rate; the acceptance suite runs
  // the 100-seed median study.
  double coarse = 0.0;
  double fine = 0.0;
  for (std::size_t i = 0; i < 20; ++i) {
    RngStream rc(53, i);
    coarse += balayage_residual(gen_reflected(TimeGrid(4e-3, 250), rc),
                                WeightFunction::power(1.0));
    RngStream rf(54, i);
    fine += balayage_residual(gen_reflected(TimeGrid(1e-3, 1000), rf),
                              WeightFunction::power(1.0));
  }
  CHECK(coarse > fine);
  CHECK(fine > 0.0);
}

TEST_CASE("multiplicative check: structural paths are exact to rounding") {
  const auto phi = WeightFunction::constant(1.0);
  for (std::size_t i = 0; i < 50; ++i) {
    RngStream rng(59, i);
    const auto p = gen_reflected(TimeGrid(1e-3, 2000), rng);
    const auto t = first_crossing(p, phi);
    const auto res = multiplicative_check(p, phi, t);
    CHECK(res.max_rel_ybar <= 1e-9);
    CHECK(res.max_ratio <= 1e-9);
  }
  for (std::size_t i = 0; i < 25; ++i) {
    RngStream rng(61, i);
    const auto mp = gen_exp_martingale(TimeGrid(1e-3, 2000), rng);
    const auto [p, phi_ind] = transform_max_ratio(mp, CeilingFunction::zero());
    const auto res = multiplicative_check(p, phi_ind, std::nullopt);
    CHECK(res.max_rel_ybar <= 1e-9);
    CHECK(res.max_ratio <= 1e-9);
  }
}

TEST_CASE("multiplicative check: constant path is exactly clean") {
  SigmaPath p;
  p.dt = 0.1;
  p.x = {0.0, 0.0, 0.0};
  p.n = {0.0, 0.0, 0.0};
  p.a = {0.0, 0.0, 0.0};
  p.zero_indices = {0, 1, 2};
  const auto res = multiplicative_check(p, WeightFunction::constant(1.0), std::nullopt);
  CHECK(res.max_rel_ybar == 0.0);
  CHECK(res.max_ratio == 0.0);
}

TEST_CASE("multiplicative check flags dA leaking off the zero set") {
  SigmaPath p;
  p.dt = 0.1;
  p.x = {0.0, 0.5, 0.5, 0.5};
  p.n = {0.0, 0.5, 0.3, 0.1};
  p.a = {0.0, 0.0, 0.2, 0.4};  // A increases while X = 0.5 > 0
  p.zero_indices = {0};
  const auto res = multiplicative_check(p, WeightFunction::constant(1.0), std::nullopt);
  CHECK(res.max_rel_ybar > 1e-3);
}

TEST_CASE("Y is a mean-one martingale on [0, T]") {
  // E[Y_t] = 1 at every checkpoint; paired per-path values at 10 checkpoints.
  const auto phi = WeightFunction::constant(1.0);
  const TimeGrid grid(1e-3, 4000);
  const std::size_t n_paths = 20000;
  const std::size_t cps[10] = {4, 8, 16, 40, 100, 400, 1000, 2000, 3000, 4000};
  double sums[10] = {0};
  double sumsq[10] = {0};
  for (std::size_t i = 0; i < n_paths; ++i) {
    RngStream rng(67, i);
    const auto p = gen_reflected(grid, rng);
    const auto t = first_crossing(p, phi);
    const std::size_t stop = t.value_or(p.x.size() - 1);
    for (int c = 0; c < 10; ++c) {
      const std::size_t k = std::min(cps[c], stop);
      const double y = (1.0 - phi(p.a[k]) * p.x[k]) * std::exp(phi.antiderivative(p.a[k]));
      sums[c] += y;
      sumsq[c] += y * y;
    }
  }
  for (int c = 0; c < 10; ++c) {
    const double mean = sums[c] / n_paths;
    const double var = sumsq[c] / n_paths - mean * mean;
    const double se = std::sqrt(var / n_paths);
    CHECK(std::abs(mean - 1.0) <= 3.0 * se);
  }
}

TEST_CASE("dual projection increments") {
  MartingalePath mp;
  mp.dt = 0.1;
  mp.m = {1.0, 1.5, 1.2, 2.0};
  mp.m_max = {1.0, 1.5, 1.5, 2.0};

  const auto with_zero = dual_projection_increment(mp, CeilingFunction::zero());
  for (std::size_t k = 0; k < mp.m_max.size(); ++k) {
    CHECK(with_zero[k] == doctest::Approx(std::log(mp.m_max[k])).epsilon(1e-14));
  }

  const auto with_dd = dual_projection_increment(mp, CeilingFunction::drawdown(0.5));
  for (std::size_t k = 0; k < mp.m_max.size(); ++k) {
    CHECK(with_dd[k] == doctest::Approx((mp.m_max[k] - 1.0) / 0.5).epsilon(1e-12));
  }
  CHECK(std::is_sorted(with_dd.begin(), with_dd.end()));

  MartingalePath flat;
  flat.dt = 0.1;
  flat.m = {1.0, 1.0};
  flat.m_max = {1.0, 1.0};
  const auto zeros = dual_projection_increment(flat, CeilingFunction::proportional(0.5));
  CHECK(zeros[0] == 0.0);
  CHECK(zeros[1] == 0.0);
}

}  // TEST_SUITE
