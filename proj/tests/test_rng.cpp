#include <doctest.h>

#include <cmath>
#include <vector>

#include "sigmalab/rng.hpp"
#include "sigmalab/stats.hpp"

using sigmalab::RngStream;

namespace {

double normal_survival(double x) { return 0.5 * std::erfc(x / std::sqrt(2.0)); }

}  // namespace

TEST_SUITE("rng") {

TEST_CASE("streams are reproducible and index-separated") {
  RngStream a(123, 7);
  RngStream b(123, 7);
  RngStream c(123, 8);
  bool all_equal = true;
  bool any_diff = false;
  for (int i = 0; i < 64; ++i) {
    const auto va = a.next_u64();
    all_equal = all_equal && va == b.next_u64();
    any_diff = any_diff || va != c.next_u64();
  }
  CHECK(all_equal);
  CHECK(any_diff);
}

TEST_CASE("uniform moments") {
  RngStream rng(1, 0);
  const std::size_t n = 1000000;
  double sum = 0.0;
  double lo = 1.0;
  double hi = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double u = rng.uniform();
    sum += u;
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  CHECK(sum / n == doctest::Approx(0.5).epsilon(0.002));
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
}

TEST_CASE("normal moments up to kurtosis") {
  RngStream rng(2, 0);
  const std::size_t n = 2000000;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double z = rng.normal();
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  const double nn = static_cast<double>(n);
  // 3-sigma CLT bands on each moment estimator.
  CHECK(std::abs(s1 / nn) < 3.0 / std::sqrt(nn));
  CHECK(std::abs(s2 / nn - 1.0) < 3.0 * std::sqrt(2.0 / nn));
  CHECK(std::abs(s3 / nn) < 3.0 * std::sqrt(15.0 / nn));
  CHECK(std::abs(s4 / nn - 3.0) < 3.0 * std::sqrt(96.0 / nn));
}

TEST_CASE("normal distribution passes DKW band at one million draws") {
  RngStream rng(3, 5);
  std::vector<double> z(1000000);
  for (auto& v : z) v = rng.normal();
  const auto law = sigmalab::EmpiricalLaw::from_samples(std::move(z));
  const double ks = sigmalab::ks_against(law, normal_survival);
  CHECK(ks < sigmalab::dkw_threshold(1000000, 0.001));
}

TEST_CASE("normal tail beyond the ziggurat edge") {
  // The tail layer starts at r = 3.442619855899; miscounting there would
  // distort extreme quantiles.
  RngStream rng(4, 1);
  const std::size_t n = 4000000;
  const double r = 3.442619855899;
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(rng.normal()) > r) ++count;
  }
  const double p = 2.0 * normal_survival(r);
  const double expect = p * static_cast<double>(n);
  CHECK(std::abs(static_cast<double>(count) - expect) <
        4.0 * std::sqrt(expect));
}

TEST_CASE("exponential mean and positivity") {
  RngStream rng(5, 0);
  const std::size_t n = 500000;
  double sum = 0.0;
  bool positive = true;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = rng.exponential();
    positive = positive && e > 0.0;
    sum += e;
  }
  CHECK(positive);
  CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("adjacent streams are uncorrelated") {
  const std::size_t n = 100000;
  RngStream a(99, 0);
  RngStream b(99, 1);
  double dot = 0.0;
  for (std::size_t i = 0; i < n; ++i) dot += a.normal() * b.normal();
  CHECK(std::abs(dot / n) < 3.0 / std::sqrt(static_cast<double>(n)));
}

}  // TEST_SUITE
