#include "sigmalab/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sigmalab {

EmpiricalLaw EmpiricalLaw::from_samples(std::vector<double> samples) {
  if (samples.empty()) throw std::invalid_argument("EmpiricalLaw needs n >= 1");
  std::sort(samples.begin(), samples.end());
  return EmpiricalLaw{std::move(samples)};
}

double ks_against(const EmpiricalLaw& law,
                  const std::function<double(double)>& survival) {
  const std::size_t n = law.size();
  const double inv_n = 1.0 / static_cast<double>(n);
  double d = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double f = 1.0 - survival(law.sorted[i]);
    const double hi = static_cast<double>(i + 1) * inv_n - f;
    const double lo = f - static_cast<double>(i) * inv_n;
    d = std::max(d, std::max(hi, lo));
  }
  return d;
}

double ks_two_sample(const EmpiricalLaw& a, const EmpiricalLaw& b) {
  const double inv_na = 1.0 / static_cast<double>(a.size());
  const double inv_nb = 1.0 / static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double va = a.sorted[i];
    const double vb = b.sorted[j];
    if (va <= vb) ++i;
    if (vb <= va) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) * inv_na -
                             static_cast<double>(j) * inv_nb));
  }
  return d;
}

double dkw_threshold(std::size_t n, double alpha) {
  if (n < 1) throw std::invalid_argument("dkw_threshold: n must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("dkw_threshold: alpha must be in (0, 1)");
  }
  return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(n)));
}

MeanCi mean_ci(std::span<const double> samples) {
  const std::size_t n = samples.size();
  if (n < 2) throw std::invalid_argument("mean_ci: need n >= 2");
  double sum = 0.0;
  for (double v : samples) sum += v;
  const double mean = sum / static_cast<double>(n);
  double ss = 0.0;
  for (double v : samples) {
    const double d = v - mean;
    ss += d * d;
  }
  const double var = ss / static_cast<double>(n - 1);
  return {mean, std::sqrt(var / static_cast<double>(n))};
}

AgreementResult two_estimator_agreement(std::span<const double> a,
                                        std::span<const double> b, bool paired,
                                        double allowance) {
  AgreementResult r;
  if (paired) {
    if (a.size() != b.size()) {
      throw std::invalid_argument("paired agreement needs equal sample counts");
    }
    std::vector<double> diff(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) diff[i] = a[i] - b[i];
    const MeanCi d = mean_ci(diff);
    r.mean_a = mean_ci(a).mean;
    r.mean_b = mean_ci(b).mean;
    r.diff = d.mean;
    r.se = d.se;
  } else {
    const MeanCi ma = mean_ci(a);
    const MeanCi mb = mean_ci(b);
    r.mean_a = ma.mean;
    r.mean_b = mb.mean;
    r.diff = ma.mean - mb.mean;
    r.se = std::sqrt(ma.se * ma.se + mb.se * mb.se);
  }
  r.threshold = 3.0 * r.se + allowance;
  r.pass = std::abs(r.diff) <= r.threshold;
  return r;
}

}  // namespace sigmalab
