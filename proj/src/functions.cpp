#include "sigmalab/functions.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "sigmalab/quadrature.hpp"

namespace sigmalab {

namespace {

double simpson_rec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

std::vector<double> split_csv_doubles(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) throw std::invalid_argument("empty numeric field in '" + s + "'");
    out.push_back(std::stod(tok));
  }
  return out;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double tol, int max_depth) {
  if (a == b) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double m = 0.5 * (a + b);
  const double fm = f(m);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

std::vector<double> probe_grid(double lo, double hi, std::size_t n) {
  if (!(lo > 0.0) || !(hi > lo) || n < 2) {
    throw std::invalid_argument("probe_grid: need 0 < lo < hi and n >= 2");
  }
  std::vector<double> pts(n);
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (std::size_t i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    pts[i] = std::exp(llo + u * (lhi - llo));
  }
  pts.front() = lo;
  pts.back() = hi;
  return pts;
}

// ---------------------------------------------------------------------------
// WeightFunction
// ---------------------------------------------------------------------------

WeightFunction WeightFunction::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("constant weight must be positive");
  WeightFunction w;
  w.kind_ = Kind::Constant;
  w.p0_ = c;
  w.desc_ = "const:" + fmt(c);
  w.recip_ok_ = true;
  w.diverges_ = true;
  w.validate();
  return w;
}

WeightFunction WeightFunction::power(double p) {
  if (!(p > -1.0)) throw std::invalid_argument("power weight needs p > -1");
  WeightFunction w;
  w.kind_ = Kind::Power;
  w.p0_ = p;
  w.desc_ = "power:" + fmt(p);
  w.recip_ok_ = p < 1.0;  // int_0 z^-p diverges for p >= 1
  w.diverges_ = true;
  w.validate();
  return w;
}

WeightFunction WeightFunction::affine(double a, double b) {
  if (a < 0.0 || b < 0.0 || a + b <= 0.0) {
    throw std::invalid_argument("affine weight needs a, b >= 0 with a + b > 0");
  }
  WeightFunction w;
  w.kind_ = Kind::Affine;
  w.p0_ = a;
  w.p1_ = b;
  w.desc_ = "affine:" + fmt(a) + "," + fmt(b);
  w.recip_ok_ = a > 0.0;
  w.diverges_ = true;
  w.validate();
  return w;
}

WeightFunction WeightFunction::piecewise_constant(std::vector<double> breaks,
                                                  std::vector<double> values) {
  if (values.size() != breaks.size() + 1) {
    throw std::invalid_argument("piecewise weight needs one more value than breaks");
  }
  if (!std::is_sorted(breaks.begin(), breaks.end()) ||
      (!breaks.empty() && breaks.front() <= 0.0)) {
    throw std::invalid_argument("piecewise breaks must be positive and ascending");
  }
  for (double v : values) {
    if (!(v > 0.0)) throw std::invalid_argument("piecewise values must be positive");
  }
  WeightFunction w;
  w.kind_ = Kind::PiecewiseConstant;
  w.breaks_ = std::move(breaks);
  w.values_ = std::move(values);
  {
    std::ostringstream os;
    os << "piecewise:";
    for (std::size_t i = 0; i < w.breaks_.size(); ++i) os << (i ? "," : "") << w.breaks_[i];
    os << "|";
    for (std::size_t i = 0; i < w.values_.size(); ++i) os << (i ? "," : "") << w.values_[i];
    w.desc_ = os.str();
  }
  w.recip_ok_ = true;
  w.diverges_ = true;  // last piece is a positive constant
  w.validate();
  return w;
}

WeightFunction WeightFunction::exp_decay(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("exp_decay weight must be positive");
  WeightFunction w;
  w.kind_ = Kind::ExpDecay;
  w.p0_ = c;
  w.desc_ = "expdecay:" + fmt(c);
  w.recip_ok_ = true;
  w.diverges_ = false;  // int_0^inf c e^-z = c
  w.validate();
  return w;
}

WeightFunction WeightFunction::generic(std::function<double(double)> evaluate,
                                       std::function<double(double)> antiderivative,
                                       std::function<double(double)> reciprocal,
                                       std::string description,
                                       bool total_mass_infinite) {
  if (!evaluate) throw std::invalid_argument("generic weight needs an evaluator");
  WeightFunction w;
  w.kind_ = Kind::Generic;
  w.eval_ = std::move(evaluate);
  w.anti_ = std::move(antiderivative);
  w.recip_ = std::move(reciprocal);
  w.desc_ = std::move(description);
  // Reciprocals of generic callables are integrated only when the integrand is
  // bounded at 0; singular reciprocals must come with a declared closed form.
  w.recip_ok_ = static_cast<bool>(w.recip_);
  if (!w.recip_ok_) {
    const double f0 = w.eval_(0.0);
    w.recip_ok_ = std::isfinite(f0) && f0 > 1e-12;
  }
  w.diverges_ = total_mass_infinite;
  w.validate();
  return w;
}

double WeightFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::Constant:
      return p0_;
    case Kind::Power:
      return std::pow(x, p0_);
    case Kind::Affine:
      return p0_ + p1_ * x;
    case Kind::PiecewiseConstant: {
      const auto it = std::upper_bound(breaks_.begin(), breaks_.end(), x);
      return values_[static_cast<std::size_t>(it - breaks_.begin())];
    }
    case Kind::ExpDecay:
      return p0_ * std::exp(-x);
    case Kind::Generic:
      return eval_(x);
  }
  return 0.0;
}

double WeightFunction::antiderivative(double x) const {
  switch (kind_) {
    case Kind::Constant:
      return p0_ * x;
    case Kind::Power:
      return std::pow(x, p0_ + 1.0) / (p0_ + 1.0);
    case Kind::Affine:
      return p0_ * x + 0.5 * p1_ * x * x;
    case Kind::PiecewiseConstant: {
      double acc = 0.0;
      double prev = 0.0;
      std::size_t i = 0;
      for (; i < breaks_.size() && breaks_[i] < x; ++i) {
        acc += values_[i] * (breaks_[i] - prev);
        prev = breaks_[i];
      }
      return acc + values_[i] * (x - prev);
    }
    case Kind::ExpDecay:
      return p0_ * -std::expm1(-x);
    case Kind::Generic:
      if (anti_) return anti_(x);
      return adaptive_simpson(eval_, 0.0, x);
  }
  return 0.0;
}

double WeightFunction::reciprocal_antiderivative(double x) const {
  if (!recip_ok_) {
    throw std::domain_error("weight '" + desc_ + "': 1/phi is not integrable at 0");
  }
  switch (kind_) {
    case Kind::Constant:
      return x / p0_;
    case Kind::Power:
      return std::pow(x, 1.0 - p0_) / (1.0 - p0_);
    case Kind::Affine:
      if (p1_ == 0.0) return x / p0_;
      return std::log1p(p1_ * x / p0_) / p1_;
    case Kind::PiecewiseConstant: {
      double acc = 0.0;
      double prev = 0.0;
      std::size_t i = 0;
      for (; i < breaks_.size() && breaks_[i] < x; ++i) {
        acc += (breaks_[i] - prev) / values_[i];
        prev = breaks_[i];
      }
      return acc + (x - prev) / values_[i];
    }
    case Kind::ExpDecay:
      return std::expm1(x) / p0_;
    case Kind::Generic:
      if (recip_) return recip_(x);
      return adaptive_simpson([this](double z) { return 1.0 / eval_(z); }, 0.0, x);
  }
  return 0.0;
}

void WeightFunction::validate() {
  const auto pts = probe_grid(1e-6, 1e6);
  double prev_anti = 0.0;
  const double anti0 = antiderivative(0.0);
  if (!(std::abs(anti0) <= 1e-12)) {
    throw std::invalid_argument("weight '" + desc_ + "': antiderivative(0) != 0");
  }
  for (double x : pts) {
    const double v = (*this)(x);
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("weight '" + desc_ + "': negative or non-finite at x=" + fmt(x));
    }
    if (v == 0.0) {
      throw std::invalid_argument("weight '" + desc_ + "': vanishes at x=" + fmt(x) +
                                  " (phi must be positive for x > 0)");
    }
    const double a = antiderivative(x);
    if (!(a >= prev_anti - 1e-12 * std::max(1.0, std::abs(prev_anti)))) {
      throw std::invalid_argument("weight '" + desc_ + "': antiderivative not nondecreasing");
    }
    prev_anti = a;
  }
}

WeightFunction WeightFunction::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string tag = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (tag == "const") return constant(std::stod(args));
  if (tag == "power") return power(std::stod(args));
  if (tag == "affine") {
    const auto v = split_csv_doubles(args);
    if (v.size() != 2) throw std::invalid_argument("affine spec needs 'affine:a,b'");
    return affine(v[0], v[1]);
  }
  if (tag == "expdecay") return exp_decay(std::stod(args));
  if (tag == "piecewise") {
    const auto bar = args.find('|');
    if (bar == std::string::npos) {
      throw std::invalid_argument("piecewise spec needs 'piecewise:breaks|values'");
    }
    const std::string breaks_s = args.substr(0, bar);
    return piecewise_constant(breaks_s.empty() ? std::vector<double>{}
                                               : split_csv_doubles(breaks_s),
                              split_csv_doubles(args.substr(bar + 1)));
  }
  throw std::invalid_argument("unknown weight spec '" + spec + "'");
}

// ---------------------------------------------------------------------------
// CeilingFunction
// ---------------------------------------------------------------------------

CeilingFunction CeilingFunction::zero() {
  CeilingFunction c;
  c.kind_ = Kind::Zero;
  c.desc_ = "zero";
  c.validate();
  return c;
}

CeilingFunction CeilingFunction::proportional(double alpha) {
  if (!(alpha >= 0.0 && alpha < 1.0)) {
    throw std::invalid_argument("proportional ceiling needs 0 <= alpha < 1");
  }
  CeilingFunction c;
  c.kind_ = Kind::Proportional;
  c.p0_ = alpha;
  c.desc_ = "prop:" + fmt(alpha);
  c.validate();
  return c;
}

CeilingFunction CeilingFunction::drawdown(double offset) {
  if (!(offset > 0.0 && offset <= 1.0)) {
    throw std::invalid_argument("drawdown ceiling needs offset in (0, 1]");
  }
  CeilingFunction c;
  c.kind_ = Kind::Drawdown;
  c.p0_ = offset;
  c.desc_ = "drawdown:" + fmt(offset);
  c.validate();
  return c;
}

CeilingFunction CeilingFunction::generic(std::function<double(double)> evaluate,
                                         std::function<double(double)> survival_exponent,
                                         std::string description) {
  if (!evaluate) throw std::invalid_argument("generic ceiling needs an evaluator");
  CeilingFunction c;
  c.kind_ = Kind::Generic;
  c.eval_ = std::move(evaluate);
  c.surv_ = std::move(survival_exponent);
  c.desc_ = std::move(description);
  c.validate();
  return c;
}

double CeilingFunction::operator()(double x) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::Proportional:
      return p0_ * x;
    case Kind::Drawdown:
      return x - p0_;
    case Kind::Generic:
      return eval_(x);
  }
  return 0.0;
}

double CeilingFunction::survival_exponent(double x) const {
  if (!(x >= 1.0)) throw std::domain_error("survival_exponent needs x >= 1");
  switch (kind_) {
    case Kind::Zero:
      return std::log(x);
    case Kind::Proportional:
      return std::log(x) / (1.0 - p0_);
    case Kind::Drawdown:
      return (x - 1.0) / p0_;
    case Kind::Generic:
      if (surv_) return surv_(x);
      return adaptive_simpson([this](double z) { return 1.0 / (z - eval_(z)); }, 1.0, x);
  }
  return 0.0;
}

WeightFunction CeilingFunction::induced_weight() const {
  switch (kind_) {
    case Kind::Zero:
      return WeightFunction::constant(1.0);
    case Kind::Proportional:
      return WeightFunction::constant(1.0 - p0_);
    case Kind::Drawdown:
      return WeightFunction::exp_decay(p0_);
    case Kind::Generic:
      break;
  }
  auto psi = eval_;
  return WeightFunction::generic(
      [psi](double x) {
        const double e = std::exp(x);
        return 1.0 - psi(e) / e;
      },
      nullptr, nullptr, "induced(" + desc_ + ")");
}

void CeilingFunction::validate() {
  const auto pts = probe_grid(1.0, 1e6);
  for (double x : pts) {
    const double v = (*this)(x);
    if (!std::isfinite(v) || v < 0.0) {
      throw std::invalid_argument("ceiling '" + desc_ + "': negative or non-finite at x=" + fmt(x));
    }
    if (!(v < x)) {
      throw std::invalid_argument("ceiling '" + desc_ + "': psi(x) >= x at x=" + fmt(x));
    }
  }
  const double s1 = survival_exponent(1.0);
  if (!(std::abs(s1) <= 1e-12)) {
    throw std::invalid_argument("ceiling '" + desc_ + "': survival_exponent(1) != 0");
  }
}

CeilingFunction CeilingFunction::parse(const std::string& spec) {
  const auto colon = spec.find(':');
  const std::string tag = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (tag == "zero") return zero();
  if (tag == "prop") return proportional(std::stod(args));
  if (tag == "drawdown") return drawdown(std::stod(args));
  throw std::invalid_argument("unknown ceiling spec '" + spec + "'");
}

}  // namespace sigmalab
