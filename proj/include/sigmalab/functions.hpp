#pragma once

#include <functional>
#include <string>
#include <vector>

namespace sigmalab {

/// Geometric probe grid on [lo, hi], n points including both endpoints.
/// The catalog's "for all x" conditions are validated on this grid.
std::vector<double> probe_grid(double lo, double hi, std::size_t n = 512);

/// Nonnegative weight function phi with its antiderivative Phi(x) = int_0^x phi,
/// and, where integrable, int_0^x dz/phi(z). Catalog variants carry closed
/// forms; generic callables fall back to adaptive Simpson quadrature.
///
/// Construction validates, on the probe grid over [1e-6, 1e6]:
///   phi(x) >= 0, phi(x) > 0 for x > 0, Phi(0) = 0, Phi nondecreasing.
class WeightFunction {
 public:
  enum class Kind { Constant, Power, Affine, PiecewiseConstant, ExpDecay, Generic };

  static WeightFunction constant(double c);
  /// z^p with p > -1 (so that Phi is finite at 0).
  static WeightFunction power(double p);
  /// a + b*z with a, b >= 0, a + b > 0.
  static WeightFunction affine(double a, double b);
  /// values[i] on [breaks[i-1], breaks[i]) with breaks[-1] = 0; all values > 0.
  static WeightFunction piecewise_constant(std::vector<double> breaks,
                                           std::vector<double> values);
  /// c*exp(-z); arises as the weight induced by a drawdown ceiling.
  static WeightFunction exp_decay(double c);
  static WeightFunction generic(std::function<double(double)> evaluate,
                                std::function<double(double)> antiderivative = nullptr,
                                std::function<double(double)> reciprocal_antiderivative = nullptr,
                                std::string description = "generic",
                                bool total_mass_infinite = false);

  /// Parse catalog spec strings: "const:1", "power:2", "affine:0,2",
  /// "piecewise:b1,..,bk|v0,..,vk", "expdecay:0.5".
  static WeightFunction parse(const std::string& spec);

  double operator()(double x) const;
  /// Phi(x) = int_0^x phi(z) dz.
  double antiderivative(double x) const;
  /// True when int_0^x dz/phi(z) is finite for finite x.
  bool reciprocal_integrable() const { return recip_ok_; }
  /// int_0^x dz/phi(z); throws if the reciprocal is not integrable at 0.
  double reciprocal_antiderivative(double x) const;
  /// True when int_0^inf phi = infinity (known per catalog variant).
  bool total_mass_infinite() const { return diverges_; }

  Kind kind() const { return kind_; }
  const std::string& describe() const { return desc_; }

 private:
  WeightFunction() = default;
  void validate();

  Kind kind_ = Kind::Generic;
  double p0_ = 0.0;
  double p1_ = 0.0;
  std::vector<double> breaks_;
  std::vector<double> values_;
  std::function<double(double)> eval_;
  std::function<double(double)> anti_;
  std::function<double(double)> recip_;
  std::string desc_;
  bool recip_ok_ = false;
  bool diverges_ = false;
};

/// Ceiling function psi with 0 <= psi(x) < x for x >= 1, together with
/// the survival exponent int_1^x dz/(z - psi(z)).
class CeilingFunction {
 public:
  enum class Kind { Zero, Proportional, Drawdown, Generic };

  static CeilingFunction zero();
  /// alpha*x with 0 <= alpha < 1.
  static CeilingFunction proportional(double alpha);
  /// x - c with 0 < c <= 1 (c <= 1 keeps psi >= 0 on [1, inf)).
  static CeilingFunction drawdown(double c);
  static CeilingFunction generic(std::function<double(double)> evaluate,
                                 std::function<double(double)> survival_exponent = nullptr,
                                 std::string description = "generic");

  /// Parse catalog spec strings: "zero", "prop:0.5", "drawdown:1".
  static CeilingFunction parse(const std::string& spec);

  double operator()(double x) const;
  /// int_1^x dz/(z - psi(z)) for x >= 1.
  double survival_exponent(double x) const;
  /// The weight induced by the max-ratio transform: phi(x) = 1 - psi(e^x)/e^x.
  WeightFunction induced_weight() const;

  Kind kind() const { return kind_; }
  const std::string& describe() const { return desc_; }

 private:
  CeilingFunction() = default;
  void validate();

  Kind kind_ = Kind::Generic;
  double p0_ = 0.0;
  std::function<double(double)> eval_;
  std::function<double(double)> surv_;
  std::string desc_;
};

}  // namespace sigmalab
