#include "tlstat/weights.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tlstat/error.hpp"

namespace tlstat {

WeightSpec WeightSpec::constant(double value, std::pair<double, double> domain,
                                std::optional<double> lipschitz) {
  WeightSpec w(Kind::kConstant, domain.first, domain.second);
  w.coefficients_ = {value};
  w.finish(lipschitz);
  return w;
}

WeightSpec WeightSpec::polynomial(std::vector<double> coefficients,
                                  std::pair<double, double> domain,
                                  std::optional<double> lipschitz) {
  if (coefficients.empty()) throw ParameterError("polynomial weight needs at least one coefficient");
  WeightSpec w(Kind::kPolynomial, domain.first, domain.second);
  w.coefficients_ = std::move(coefficients);
  w.finish(lipschitz);
  return w;
}

WeightSpec WeightSpec::piecewise_linear(std::vector<std::pair<double, double>> knots,
                                        std::optional<std::pair<double, double>> domain,
                                        std::optional<double> lipschitz) {
  if (knots.size() < 2) throw ParameterError("piecewise-linear weight needs at least two knots");
  for (std::size_t i = 1; i < knots.size(); ++i) {
    if (!(knots[i].first > knots[i - 1].first)) {
      throw ParameterError("piecewise-linear knots must be strictly increasing");
    }
  }
  const auto dom = domain.value_or(std::pair{std::max(0.0, knots.front().first),
                                             std::min(1.0, knots.back().first)});
  if (dom.first < knots.front().first || dom.second > knots.back().first) {
    throw ParameterError("piecewise-linear knots must cover the weight domain");
  }
  WeightSpec w(Kind::kPiecewiseLinear, dom.first, dom.second);
  w.knots_ = std::move(knots);
  w.finish(lipschitz);
  return w;
}

void WeightSpec::finish(std::optional<double> lipschitz) {
  if (!(lo_ >= 0.0 && lo_ < hi_ && hi_ <= 1.0)) {
    throw ParameterError("weight domain must satisfy 0 <= lo < hi <= 1");
  }
  for (double c : coefficients_)
    if (!std::isfinite(c)) throw ParameterError("weight coefficients must be finite");
  if (lipschitz && !(*lipschitz >= 0.0)) throw ParameterError("Lipschitz constant must be >= 0");
  lipschitz_ = lipschitz.value_or(analytic_lipschitz());
}

double WeightSpec::analytic_lipschitz() const {
  switch (kind_) {
    case Kind::kConstant: return 0.0;
    case Kind::kPolynomial: {
      const double r = std::max(std::abs(lo_), std::abs(hi_));
      double bound = 0.0;
      double power = 1.0;
      for (std::size_t j = 1; j < coefficients_.size(); ++j) {
        bound += static_cast<double>(j) * std::abs(coefficients_[j]) * power;
        power *= r;
      }
      return bound;
    }
    case Kind::kPiecewiseLinear: {
      double bound = 0.0;
      for (std::size_t i = 1; i < knots_.size(); ++i) {
        if (knots_[i].first <= lo_ || knots_[i - 1].first >= hi_) continue;
        const double slope = (knots_[i].second - knots_[i - 1].second) /
                             (knots_[i].first - knots_[i - 1].first);
        bound = std::max(bound, std::abs(slope));
      }
      return bound;
    }
  }
  return 0.0;
}

double WeightSpec::operator()(double u) const {
  switch (kind_) {
    case Kind::kConstant: return coefficients_[0];
    case Kind::kPolynomial: {
      double v = 0.0;
      for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) v = v * u + *it;
      return v;
    }
    case Kind::kPiecewiseLinear: {
      if (u <= knots_.front().first) return knots_.front().second;
      if (u >= knots_.back().first) return knots_.back().second;
      const auto it = std::upper_bound(knots_.begin(), knots_.end(), u,
                                       [](double x, const auto& k) { return x < k.first; });
      const auto& [u1, y1] = *it;
      const auto& [u0, y0] = *(it - 1);
      return y0 + (y1 - y0) * (u - u0) / (u1 - u0);
    }
  }
  return 0.0;
}

double WeightSpec::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (b < a) return -integral(b, a);
  switch (kind_) {
    case Kind::kConstant: return coefficients_[0] * (b - a);
    case Kind::kPolynomial: {
      // (b^{j+1} - a^{j+1}) / (j+1) = (b - a) h_j / (j+1), h_j = sum_k a^k b^{j-k}.
      double h = 1.0;
      double a_pow = 1.0;
      double sum = 0.0;
      for (std::size_t j = 0; j < coefficients_.size(); ++j) {
        if (j > 0) {
          a_pow *= a;
          h = b * h + a_pow;
        }
        sum += coefficients_[j] * h / static_cast<double>(j + 1);
      }
      return (b - a) * sum;
    }
    case Kind::kPiecewiseLinear: {
      double total = 0.0;
      double left = a;
      for (const auto& [u, y] : knots_) {
        if (u <= left) continue;
        if (u >= b) break;
        total += 0.5 * (u - left) * ((*this)(left) + y);
        left = u;
      }
      total += 0.5 * (b - left) * ((*this)(left) + (*this)(b));
      return total;
    }
  }
  return 0.0;
}

bool WeightSpec::is_zero() const {
  switch (kind_) {
    case Kind::kConstant:
    case Kind::kPolynomial:
      return std::all_of(coefficients_.begin(), coefficients_.end(),
                         [](double c) { return c == 0.0; });
    case Kind::kPiecewiseLinear:
      return std::all_of(knots_.begin(), knots_.end(), [](const auto& k) { return k.second == 0.0; });
  }
  return false;
}

std::vector<double> WeightSpec::breakpoints() const {
  std::vector<double> out;
  for (const auto& [u, y] : knots_)
    if (u > lo_ && u < hi_) out.push_back(u);
  return out;
}

std::string_view weight_kind_name(WeightSpec::Kind kind) {
  switch (kind) {
    case WeightSpec::Kind::kConstant: return "constant";
    case WeightSpec::Kind::kPolynomial: return "polynomial";
    case WeightSpec::Kind::kPiecewiseLinear: return "piecewise_linear";
  }
  return "constant";
}

ExtendedWeight::ExtendedWeight(WeightSpec weight, double alpha, double beta)
    : weight_(std::move(weight)), alpha_(alpha), beta_(beta) {
  if (!(alpha_ < 1.0 - beta_)) throw TrimError("weight extension needs alpha < 1 - beta");
  if (!(alpha_ > weight_.lo() || (alpha_ == 0.0 && weight_.lo() == 0.0)) ||
      !(1.0 - beta_ < weight_.hi() || (beta_ == 0.0 && weight_.hi() == 1.0))) {
    throw DomainError("trim points [alpha, 1-beta] must lie inside the weight domain");
  }
  left_ = weight_(alpha_);
  right_ = weight_(1.0 - beta_);
}

double ExtendedWeight::integral(double a, double b) const {
  if (a == b) return 0.0;
  if (b < a) return -integral(b, a);
  const double upper = 1.0 - beta_;
  double total = 0.0;
  if (a < alpha_) total += left_ * (std::min(b, alpha_) - a);
  const double mid_lo = std::max(a, alpha_);
  const double mid_hi = std::min(b, upper);
  if (mid_lo < mid_hi) total += weight_.integral(mid_lo, mid_hi);
  if (b > upper) total += right_ * (b - std::max(a, upper));
  return total;
}

ExtendedWeight extend_weight(const WeightSpec& weight, double alpha, double beta) {
  return ExtendedWeight(weight, alpha, beta);
}

std::vector<double> reference_coefficients(const WeightSpec& weight, const TrimSpec& trim) {
  const double n = static_cast<double>(trim.n());
  if (!weight.covers(trim.alpha_n(), 1.0 - trim.beta_n())) {
    throw DomainError("coefficient range [k/n, (n-m)/n] escapes the weight domain");
  }
  if (weight.kind() == WeightSpec::Kind::kConstant) {
    return std::vector<double>(trim.kept(), weight.coefficients()[0]);
  }
  std::vector<double> c(trim.kept());
  for (std::size_t j = 0; j < c.size(); ++j) {
    const double i = static_cast<double>(trim.k() + 1 + j);
    c[j] = n * weight.integral((i - 1.0) / n, i / n);
  }
  return c;
}

std::vector<double> extended_coefficients(const ExtendedWeight& weight, std::size_t n) {
  if (weight.base().kind() == WeightSpec::Kind::kConstant) {
    return std::vector<double>(n, weight.base().coefficients()[0]);
  }
  const double nd = static_cast<double>(n);
  std::vector<double> c(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double i = static_cast<double>(j + 1);
    c[j] = nd * weight.integral((i - 1.0) / nd, i / nd);
  }
  return c;
}

double perturbation_bound(std::size_t n, double epsilon) {
  if (n < 3) throw DomainError("perturbation bound needs n >= 3");
  if (!(epsilon > 0.0)) throw DomainError("perturbation exponent must be positive");
  const double log_n = std::log(static_cast<double>(n));
  return std::pow(log_n, -epsilon) * std::sqrt(static_cast<double>(n) / log_n);
}

std::vector<double> perturbed_coefficients(const std::vector<double>& reference, std::size_t n,
                                           double epsilon, double budget, Stream& stream) {
  const double total = budget * perturbation_bound(n, epsilon);
  std::vector<double> c = reference;
  if (c.empty() || total == 0.0) return c;
  const double magnitude = total / static_cast<double>(c.size());
  double sign = (stream.next_u64() >> 63) ? -1.0 : 1.0;
  for (auto& v : c) {
    v += sign * magnitude;
    sign = -sign;
  }
  return c;
}

std::vector<double> constant_perturbation(const std::vector<double>& reference, std::size_t n,
                                          double scale) {
  std::vector<double> c = reference;
  const double magnitude = scale / std::sqrt(static_cast<double>(n));
  double sign = 1.0;
  for (auto& v : c) {
    v += sign * magnitude;
    sign = -sign;
  }
  return c;
}

Perturbation::Kind perturbation_kind_from_name(std::string_view name) {
  if (name == "none") return Perturbation::Kind::kNone;
  if (name == "saturating") return Perturbation::Kind::kSaturating;
  if (name == "constant") return Perturbation::Kind::kConstant;
  throw ParameterError("unknown perturbation mode '" + std::string(name) + "'");
}

std::string_view perturbation_kind_name(Perturbation::Kind kind) {
  switch (kind) {
    case Perturbation::Kind::kNone: return "none";
    case Perturbation::Kind::kSaturating: return "saturating";
    case Perturbation::Kind::kConstant: return "constant";
  }
  return "none";
}

CoefficientScheme make_scheme(const WeightSpec& weight, const TrimSpec& trim,
                              const Perturbation& perturbation, Stream& stream) {
  CoefficientScheme scheme;
  scheme.reference = reference_coefficients(weight, trim);
  scheme.perturbation = perturbation;
  switch (perturbation.kind) {
    case Perturbation::Kind::kNone:
      scheme.exact = scheme.reference;
      break;
    case Perturbation::Kind::kSaturating:
      scheme.exact = perturbed_coefficients(scheme.reference, trim.n(), perturbation.epsilon,
                                            perturbation.budget, stream);
      break;
    case Perturbation::Kind::kConstant:
      scheme.exact = constant_perturbation(scheme.reference, trim.n(), perturbation.budget);
      break;
  }
  return scheme;
}

double lipschitz_estimate(const WeightSpec& weight, std::size_t grid_size) {
  if (grid_size < 2) throw DomainError("Lipschitz grid needs at least two points");
  return lipschitz_estimate(weight, weight.lo(), weight.hi(), grid_size);
}

}  // namespace tlstat
