#include "sigmalab/laws.hpp"

#include <cmath>
#include <stdexcept>

namespace sigmalab {

double survival_a_t(double x, const WeightFunction& phi) {
  if (!(x >= 0.0)) throw std::domain_error("survival_a_t: x must be >= 0");
  return std::exp(-phi.antiderivative(x));
}

double survival_a_inf(double x, const WeightFunction& phi) {
  if (!(x >= 0.0)) throw std::domain_error("survival_a_inf: x must be >= 0");
  return std::exp(-phi.reciprocal_antiderivative(x));
}

double survival_max(double x, const CeilingFunction& psi) {
  if (!(x >= 1.0)) throw std::domain_error("survival_max: x must be >= 1");
  return std::exp(-psi.survival_exponent(x));
}

double doob_start_z(double K, double z) {
  if (!(K > 0.0)) throw std::domain_error("doob_start_z: K must be > 0");
  if (!(z >= 0.0)) throw std::domain_error("doob_start_z: z must be >= 0");
  const double num = K - z;
  return num > 0.0 ? num / K : 0.0;
}

double exact_doob_sample(RngStream& stream) { return std::exp(stream.exponential()); }

}  // namespace sigmalab
