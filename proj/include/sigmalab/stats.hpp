#pragma once

#include <functional>
#include <span>
#include <vector>

namespace sigmalab {

/// Sorted sample values with their count; the empirical CDF is i/n at the
/// i-th order statistic.
struct EmpiricalLaw {
  std::vector<double> sorted;

  static EmpiricalLaw from_samples(std::vector<double> samples);
  std::size_t size() const { return sorted.size(); }
};

/// Two-sided Kolmogorov-Smirnov distance between the empirical CDF and the
/// reference law given by its survival function: sup over the sample's step
/// discontinuities of |F_n - (1 - survival)|.
double ks_against(const EmpiricalLaw& law,
                  const std::function<double(double)>& survival);

/// Two-sample KS distance between two empirical laws.
double ks_two_sample(const EmpiricalLaw& a, const EmpiricalLaw& b);

/// Dvoretzky-Kiefer-Wolfowitz band: sqrt(ln(2/alpha) / (2n)).
double dkw_threshold(std::size_t n, double alpha);

struct MeanCi {
  double mean = 0.0;
  double se = 0.0;  // sample stddev / sqrt(n)
};

/// Sample mean and standard error; requires n >= 2.
MeanCi mean_ci(std::span<const double> samples);

struct AgreementResult {
  double mean_a = 0.0;
  double mean_b = 0.0;
  double diff = 0.0;       // mean_a - mean_b
  double se = 0.0;         // SE of the paired difference (or pooled SE)
  double threshold = 0.0;  // 3*se + allowance
  bool pass = false;
};

/// Tests E[a] = E[b] at three standard errors. Paired inputs share paths and
/// use the SE of the per-path difference; unpaired inputs use the pooled SE.
/// `allowance` widens the band for documented discretization bias.
AgreementResult two_estimator_agreement(std::span<const double> a,
                                        std::span<const double> b, bool paired,
                                        double allowance = 0.0);

}  // namespace sigmalab
