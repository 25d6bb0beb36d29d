#include "tlstat/distributions.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "tlstat/error.hpp"

namespace tlstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct FamilyInfo {
  Family family;
  std::string_view name;
  std::size_t arity;
};

constexpr FamilyInfo kFamilies[] = {
    {Family::kUniform, "uniform", 2},         {Family::kExponential, "exponential", 1},
    {Family::kNormal, "normal", 2},           {Family::kPareto, "pareto", 2},
    {Family::kCauchy, "cauchy", 2},           {Family::kPointMass, "point_mass", 1},
    {Family::kTwoPointMixture, "two_point_mixture", 5},
};

const FamilyInfo& info(Family f) {
  for (const auto& i : kFamilies)
    if (i.family == f) return i;
  throw ParameterError("unknown distribution family");
}

std::vector<double> with_defaults(Family f, std::vector<double> p) {
  const auto& fi = info(f);
  if (p.size() > fi.arity) {
    throw ParameterError(std::string(fi.name) + " takes at most " + std::to_string(fi.arity) +
                         " parameters");
  }
  std::vector<double> defaults;
  switch (f) {
    case Family::kUniform: defaults = {0.0, 1.0}; break;
    case Family::kExponential: defaults = {1.0}; break;
    case Family::kNormal: defaults = {0.0, 1.0}; break;
    case Family::kPareto: defaults = {kInf, 1.0}; break;
    case Family::kCauchy: defaults = {0.0, 1.0}; break;
    case Family::kPointMass: defaults = {kInf}; break;
    case Family::kTwoPointMixture: defaults = {kInf, kInf, kInf, kInf, kInf}; break;
  }
  for (std::size_t i = p.size(); i < defaults.size(); ++i) {
    if (std::isinf(defaults[i])) {
      throw ParameterError(std::string(fi.name) + " requires parameter #" + std::to_string(i + 1));
    }
    p.push_back(defaults[i]);
  }
  for (double v : p)
    if (!std::isfinite(v)) throw ParameterError(std::string(fi.name) + " parameters must be finite");
  return p;
}

void validate(Family f, const std::vector<double>& p) {
  switch (f) {
    case Family::kUniform:
      if (!(p[0] < p[1])) throw ParameterError("uniform requires lo < hi");
      break;
    case Family::kExponential:
      if (!(p[0] > 0)) throw ParameterError("exponential rate must be positive");
      break;
    case Family::kNormal:
      if (!(p[1] > 0)) throw ParameterError("normal sd must be positive");
      break;
    case Family::kPareto:
      if (!(p[0] > 0)) throw ParameterError("pareto shape must be positive");
      if (!(p[1] > 0)) throw ParameterError("pareto scale must be positive");
      break;
    case Family::kCauchy:
      if (!(p[1] > 0)) throw ParameterError("cauchy scale must be positive");
      break;
    case Family::kPointMass:
      break;
    case Family::kTwoPointMixture:
      if (!(p[0] > 0 && p[0] < 1)) throw ParameterError("mixture weight must lie in (0,1)");
      if (!(p[1] < p[2] && p[2] <= p[3] && p[3] < p[4])) {
        throw ParameterError("mixture requires lo1 < hi1 <= lo2 < hi2");
      }
      break;
  }
}

}  // namespace

std::string_view family_name(Family f) { return info(f).name; }

Family family_from_name(std::string_view name) {
  for (const auto& i : kFamilies)
    if (i.name == name) return i.family;
  throw ParameterError("unknown distribution family '" + std::string(name) + "'");
}

Distribution::Distribution(Family family, std::vector<double> params)
    : family_(family), params_(with_defaults(family, std::move(params))) {
  validate(family_, params_);
}

Distribution Distribution::uniform(double lo, double hi) { return {Family::kUniform, {lo, hi}}; }
Distribution Distribution::exponential(double rate) { return {Family::kExponential, {rate}}; }
Distribution Distribution::normal(double mean, double sd) { return {Family::kNormal, {mean, sd}}; }
Distribution Distribution::pareto(double shape, double scale) {
  return {Family::kPareto, {shape, scale}};
}
Distribution Distribution::cauchy(double location, double scale) {
  return {Family::kCauchy, {location, scale}};
}
Distribution Distribution::point_mass(double a) { return {Family::kPointMass, {a}}; }
Distribution Distribution::two_point_mixture(double p, double lo1, double hi1, double lo2,
                                             double hi2) {
  return {Family::kTwoPointMixture, {p, lo1, hi1, lo2, hi2}};
}

double Distribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0,1]");
  if (u == 0.0 && unbounded_below()) {
    throw DomainError(std::string(family_name(family_)) + " quantile at 0 is -infinity");
  }
  if (u == 1.0 && unbounded_above()) {
    throw DomainError(std::string(family_name(family_)) + " quantile at 1 is +infinity");
  }
  return quantile_unchecked(u);
}

double Distribution::quantile_unchecked(double u) const {
  const auto& p = params_;
  switch (family_) {
    case Family::kUniform: return p[0] + (p[1] - p[0]) * u;
    case Family::kExponential: return -std::log1p(-u) / p[0];
    case Family::kNormal: return p[0] + p[1] * normal_quantile(u);
    case Family::kPareto: return p[1] * std::pow(1.0 - u, -1.0 / p[0]);
    case Family::kCauchy: return p[0] + p[1] * std::tan(std::numbers::pi * (u - 0.5));
    case Family::kPointMass: return p[0];
    case Family::kTwoPointMixture:
      if (u <= p[0]) return p[1] + (p[2] - p[1]) * (u / p[0]);
      return p[3] + (p[4] - p[3]) * ((u - p[0]) / (1.0 - p[0]));
  }
  return 0.0;
}

double Distribution::cdf(double x) const {
  const auto& p = params_;
  switch (family_) {
    case Family::kUniform:
      if (x <= p[0]) return 0.0;
      if (x >= p[1]) return 1.0;
      return (x - p[0]) / (p[1] - p[0]);
    case Family::kExponential:
      return x <= 0.0 ? 0.0 : -std::expm1(-p[0] * x);
    case Family::kNormal:
      return normal_cdf((x - p[0]) / p[1]);
    case Family::kPareto:
      return x <= p[1] ? 0.0 : -std::expm1(p[0] * std::log(p[1] / x));
    case Family::kCauchy:
      return 0.5 + std::atan((x - p[0]) / p[1]) / std::numbers::pi;
    case Family::kPointMass:
      return x < p[0] ? 0.0 : 1.0;
    case Family::kTwoPointMixture:
      if (x <= p[1]) return 0.0;
      if (x <= p[2]) return p[0] * (x - p[1]) / (p[2] - p[1]);
      if (x <= p[3]) return p[0];
      if (x <= p[4]) return p[0] + (1.0 - p[0]) * (x - p[3]) / (p[4] - p[3]);
      return 1.0;
  }
  return 0.0;
}

std::optional<double> Distribution::quantile_density(double u) const {
  const auto& p = params_;
  switch (family_) {
    case Family::kUniform: return p[1] - p[0];
    case Family::kExponential: return 1.0 / (p[0] * (1.0 - u));
    case Family::kNormal: {
      const double z = normal_quantile(u);
      return p[1] * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * z * z);
    }
    case Family::kPareto: return p[1] / p[0] * std::pow(1.0 - u, -1.0 / p[0] - 1.0);
    case Family::kCauchy: {
      const double s = std::sin(std::numbers::pi * u);
      return p[1] * std::numbers::pi / (s * s);
    }
    case Family::kPointMass: return std::nullopt;
    case Family::kTwoPointMixture:
      return u <= p[0] ? (p[2] - p[1]) / p[0] : (p[4] - p[3]) / (1.0 - p[0]);
  }
  return std::nullopt;
}

std::vector<double> Distribution::quantile_jumps() const {
  if (family_ == Family::kTwoPointMixture && params_[2] < params_[3]) return {params_[0]};
  return {};
}

double Distribution::moment_bound() const {
  switch (family_) {
    case Family::kPareto: return params_[0];
    case Family::kCauchy: return 0.0;
    case Family::kExponential:
    case Family::kNormal:
    case Family::kUniform:
    case Family::kPointMass:
    case Family::kTwoPointMixture: return kInf;
  }
  return kInf;
}

bool Distribution::unbounded_below() const {
  return family_ == Family::kNormal || family_ == Family::kCauchy;
}

bool Distribution::unbounded_above() const {
  return family_ == Family::kNormal || family_ == Family::kCauchy ||
         family_ == Family::kExponential || family_ == Family::kPareto;
}

bool Distribution::quantile_density_unbounded_low() const { return unbounded_below(); }
bool Distribution::quantile_density_unbounded_high() const { return unbounded_above(); }

std::vector<double> Distribution::sample(std::size_t n, Stream& stream) const {
  if (n == 0) throw ShapeError("cannot draw an empty sample");
  std::vector<double> out(n);
  for (auto& x : out) x = draw(stream);
  return out;
}

std::string Distribution::describe() const {
  std::ostringstream os;
  os << family_name(family_) << '(';
  for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
  os << ')';
  return os.str();
}

WinsorizedDistribution::WinsorizedDistribution(Distribution base, double alpha, double beta)
    : base_(std::move(base)), alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0 && alpha < 1.0 - beta && 1.0 - beta < 1.0)) {
    throw TrimError("Winsorization requires 0 < alpha < 1 - beta < 1");
  }
  lower_ = base_.quantile(alpha_);
  upper_ = base_.quantile(1.0 - beta_);
}

double WinsorizedDistribution::quantile(double u) const {
  if (!(u >= 0.0 && u <= 1.0)) throw DomainError("quantile argument outside [0,1]");
  if (u <= alpha_) return lower_;
  if (u > 1.0 - beta_) return upper_;
  return base_.quantile_unchecked(u);
}

std::optional<double> WinsorizedDistribution::quantile_density(double u) const {
  if (u <= alpha_ || u > 1.0 - beta_) return 0.0;
  return base_.quantile_density(u);
}

WinsorizedDistribution winsorized(const Distribution& dist, double alpha, double beta) {
  return WinsorizedDistribution(dist, alpha, beta);
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// Wichura's AS241 (PPND16), relative accuracy about 1e-16.
double normal_quantile(double p) {
  if (!(p > 0.0 && p < 1.0)) {
    if (p == 0.0) return -kInf;
    if (p == 1.0) return kInf;
    throw DomainError("normal quantile argument outside [0,1]");
  }
  const double q = p - 0.5;
  if (std::abs(q) <= 0.425) {
    const double r = 0.180625 - q * q;
    return q *
           (((((((2509.0809287301226727 * r + 33430.575583588128105) * r +
                 67265.770927008700853) * r + 45921.953931549871457) * r +
               13731.693765509461125) * r + 1971.5909503065514427) * r +
             133.14166789178437745) * r + 3.387132872796366608) /
           (((((((5226.495278852545925 * r + 28729.085735721942674) * r +
                 39307.89580009271061) * r + 21213.794301586595867) * r +
               5394.1960214247511077) * r + 687.1870074920579083) * r +
             42.313330701600911252) * r + 1.0);
  }
  double r = q < 0 ? p : 1.0 - p;
  r = std::sqrt(-std::log(r));
  double value;
  if (r <= 5.0) {
    r -= 1.6;
    value = (((((((7.7454501427834140764e-4 * r + 0.0227238449892691845833) * r +
                  0.24178072517745061177) * r + 1.27045825245236838258) * r +
                3.64784832476320460504) * r + 5.7694972214606914055) * r +
              4.6303378461565452959) * r + 1.42343711074968357734) /
            (((((((1.05075007164441684324e-9 * r + 5.475938084995344946e-4) * r +
                  0.0151986665636164571966) * r + 0.14810397642748007459) * r +
                0.68976733498510000455) * r + 1.6763848301838038494) * r +
              2.05319162663775882187) * r + 1.0);
  } else {
    r -= 5.0;
    value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                  0.0012426609473880784386) * r + 0.026532189526576123093) * r +
                0.29656057182850489123) * r + 1.7848265399172913358) * r +
              5.4637849111641143699) * r + 6.6579046435011037772) /
            (((((((2.04426310338993978564e-15 * r + 1.4215117583164458887e-7) * r +
                  1.8463183175100546818e-5) * r + 7.868691311456132591e-4) * r +
                0.0148753612908506148525) * r + 0.13692988092273580531) * r +
              0.59983220655588793769) * r + 1.0);
  }
  return q < 0 ? -value : value;
}

}  // namespace tlstat
