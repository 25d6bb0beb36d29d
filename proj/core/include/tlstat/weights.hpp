#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string_view>
#include <utility>
#include <vector>

#include "tlstat/rng.hpp"
#include "tlstat/trim.hpp"

namespace tlstat {

// A Lipschitz weight function J on an open interval I = (lo, hi) of (0,1).
// Only families with closed-form antiderivatives are offered so that the
// coefficient integrals are exact.
class WeightSpec {
 public:
  enum class Kind { kConstant, kPolynomial, kPiecewiseLinear };

  // J(u) = value.
  static WeightSpec constant(double value, std::pair<double, double> domain = {0.0, 1.0},
                             std::optional<double> lipschitz = std::nullopt);
  // J(u) = sum_j coefficients[j] * u^j.
  static WeightSpec polynomial(std::vector<double> coefficients,
                               std::pair<double, double> domain = {0.0, 1.0},
                               std::optional<double> lipschitz = std::nullopt);
  // Linear interpolation through (u_j, y_j); knots must cover the domain.
  static WeightSpec piecewise_linear(std::vector<std::pair<double, double>> knots,
                                     std::optional<std::pair<double, double>> domain = std::nullopt,
                                     std::optional<double> lipschitz = std::nullopt);

  Kind kind() const { return kind_; }
  double lo() const { return lo_; }
  double hi() const { return hi_; }
  // Declared Lipschitz constant C. Defaults to an analytic upper bound.
  double lipschitz() const { return lipschitz_; }
  const std::vector<double>& coefficients() const { return coefficients_; }
  const std::vector<std::pair<double, double>>& knots() const { return knots_; }

  double operator()(double u) const;
  // Exact oriented integral of J over [a, b].
  double integral(double a, double b) const;

  // Whether [a, b] lies in the closure of I.
  bool covers(double a, double b) const { return a >= lo_ && b <= hi_; }

  bool is_zero() const;
  // Interior points of I where J has a kink (piecewise-linear knots).
  std::vector<double> breakpoints() const;

 private:
  WeightSpec(Kind kind, double lo, double hi) : kind_(kind), lo_(lo), hi_(hi) {}
  double analytic_lipschitz() const;
  void finish(std::optional<double> lipschitz);

  Kind kind_;
  double lo_, hi_;
  double lipschitz_ = 0.0;
  std::vector<double> coefficients_;
  std::vector<std::pair<double, double>> knots_;
};

std::string_view weight_kind_name(WeightSpec::Kind kind);

// J extended to [0,1] by the constants J(alpha) below alpha and J(1-beta)
// above 1-beta. Lipschitz with constant at most that of J.
class ExtendedWeight {
 public:
  ExtendedWeight(WeightSpec weight, double alpha, double beta);

  const WeightSpec& base() const { return weight_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }

  double operator()(double u) const {
    if (u <= alpha_) return left_;
    if (u > 1.0 - beta_) return right_;
    return weight_(u);
  }
  double integral(double a, double b) const;

 private:
  WeightSpec weight_;
  double alpha_, beta_;
  double left_, right_;
};

ExtendedWeight extend_weight(const WeightSpec& weight, double alpha, double beta);

// c0_{i,n} = n * int_{(i-1)/n}^{i/n} J(u) du for i = k+1 .. n-m (position j <-> i = k+1+j).
std::vector<double> reference_coefficients(const WeightSpec& weight, const TrimSpec& trim);

// n * int over cell i of J_w for i = 1..n.
std::vector<double> extended_coefficients(const ExtendedWeight& weight, std::size_t n);

// B(n) = (log n)^(-eps) * sqrt(n / log n): the coefficient-perturbation budget.
double perturbation_bound(std::size_t n, double epsilon);

// Adds signed perturbations of equal magnitude and alternating sign whose
// absolute values sum to budget * B(n). The stream picks the leading sign.
std::vector<double> perturbed_coefficients(const std::vector<double>& reference, std::size_t n,
                                           double epsilon, double budget, Stream& stream);

// Perturbations of magnitude scale / sqrt(n) at every index, alternating sign.
std::vector<double> constant_perturbation(const std::vector<double>& reference, std::size_t n,
                                          double scale);

struct Perturbation {
  enum class Kind { kNone, kSaturating, kConstant };
  Kind kind = Kind::kNone;
  double epsilon = 1.0;  // decay exponent for kSaturating
  double budget = 0.0;   // budget factor (kSaturating) or scale (kConstant)
};

Perturbation::Kind perturbation_kind_from_name(std::string_view name);
std::string_view perturbation_kind_name(Perturbation::Kind kind);

// Exact weights c_{i,n} next to the reference weights c0_{i,n}.
struct CoefficientScheme {
  std::vector<double> exact;
  std::vector<double> reference;
  Perturbation perturbation;
};

CoefficientScheme make_scheme(const WeightSpec& weight, const TrimSpec& trim,
                              const Perturbation& perturbation, Stream& stream);

// Largest |J(u) - J(v)| / |u - v| over adjacent points of a uniform grid on [lo, hi].
template <class F>
double lipschitz_estimate(const F& f, double lo, double hi, std::size_t grid_size) {
  double best = 0.0;
  double prev_u = lo;
  double prev_v = f(lo);
  for (std::size_t i = 1; i < grid_size; ++i) {
    const double u = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(grid_size - 1);
    const double v = f(u);
    const double slope = std::abs(v - prev_v) / (u - prev_u);
    if (slope > best) best = slope;
    prev_u = u;
    prev_v = v;
  }
  return best;
}

double lipschitz_estimate(const WeightSpec& weight, std::size_t grid_size);

}  // namespace tlstat
