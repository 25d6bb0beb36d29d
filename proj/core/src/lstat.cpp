#include "tlstat/lstat.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "tlstat/error.hpp"
#include "tlstat/quadrature.hpp"

namespace tlstat {

namespace {

void check_sample(std::span<const double> sorted_sample, const TrimSpec& trim) {
  if (sorted_sample.size() != trim.n()) {
    throw ShapeError("sample length " + std::to_string(sorted_sample.size()) +
                     " does not match n = " + std::to_string(trim.n()));
  }
  if (!std::is_sorted(sorted_sample.begin(), sorted_sample.end())) {
    throw ContractError("sample must be sorted ascending");
  }
}

void check_range(const WeightSpec& weight, double a, double b) {
  if (!weight.covers(std::min(a, b), std::max(a, b))) {
    throw DomainError("integration range escapes the weight domain");
  }
}

double dot_window(std::span<const double> sorted_sample, std::span<const double> coeffs,
                  std::size_t offset) {
  double total = 0.0;
  for (std::size_t j = 0; j < coeffs.size(); ++j) total += coeffs[j] * sorted_sample[offset + j];
  return total;
}

std::size_t count_at_most(std::span<const double> sorted_sample, double x) {
  return static_cast<std::size_t>(std::upper_bound(sorted_sample.begin(), sorted_sample.end(), x) -
                                  sorted_sample.begin());
}

struct Boundary {
  std::size_t n_alpha, n_upper;
  double a_n, upper_n;  // A_n and 1 - B_n
};

Boundary boundary(std::span<const double> sorted_sample, const WinsorizedDistribution& wdist) {
  const double nd = static_cast<double>(sorted_sample.size());
  Boundary b{};
  b.n_alpha = count_at_most(sorted_sample, wdist.lower());
  b.n_upper = count_at_most(sorted_sample, wdist.upper());
  b.a_n = static_cast<double>(b.n_alpha) / nd;
  b.upper_n = static_cast<double>(b.n_upper) / nd;
  return b;
}

double r1_from(std::span<const double> sorted_sample, const ExtendedWeight& jw,
               const WinsorizedDistribution& wdist, const Boundary& b) {
  auto w_int = [&](double x, double y) { return jw.integral(x, y); };
  const double alpha = wdist.alpha();
  const double upper = 1.0 - wdist.beta();
  const double lower_term = step_integral(sorted_sample, w_int, alpha, b.a_n) -
                            wdist.lower() * jw.integral(alpha, b.a_n);
  const double upper_term = step_integral(sorted_sample, w_int, upper, b.upper_n) -
                            wdist.upper() * jw.integral(upper, b.upper_n);
  return lower_term - upper_term;
}

double r2_from(std::span<const double> sorted_sample, const WeightSpec& weight,
               const TrimSpec& trim, double quad_lower, double quad_upper) {
  auto j_int = [&](double x, double y) { return weight.integral(x, y); };
  const double lower_term = step_integral(sorted_sample, j_int, trim.alpha_n(), trim.alpha()) -
                            quad_lower;
  const double upper_term =
      step_integral(sorted_sample, j_int, 1.0 - trim.beta_n(), 1.0 - trim.beta()) - quad_upper;
  return lower_term - upper_term;
}

double mu_w_from(const WeightSpec& weight, const WinsorizedDistribution& wdist) {
  const double alpha = wdist.alpha();
  const double beta = wdist.beta();
  return weight(alpha) * alpha * wdist.lower() +
         weighted_quantile_integral(weight, wdist.base(), alpha, 1.0 - beta) +
         weight(1.0 - beta) * beta * wdist.upper();
}

double winsorized_stat_sorted(std::span<const double> sorted_sample,
                              const WinsorizedDistribution& wdist,
                              std::span<const double> extended_coeffs) {
  double total = 0.0;
  for (std::size_t i = 0; i < sorted_sample.size(); ++i) {
    total += extended_coeffs[i] * wdist.winsorize(sorted_sample[i]);
  }
  return total / static_cast<double>(sorted_sample.size());
}

}  // namespace

double DecompositionResult::identity_residual() const {
  return std::abs((l0_n - mu_n) - (lw_n - mu_w) - r1 - r2);
}

double DecompositionResult::identity_tolerance() const { return 1e-10 * (1.0 + std::abs(l0_n)); }

double trimmed_lstat(std::span<const double> sorted_sample, std::span<const double> coeffs,
                     const TrimSpec& trim) {
  check_sample(sorted_sample, trim);
  if (coeffs.size() != trim.kept()) {
    throw ShapeError("coefficient count " + std::to_string(coeffs.size()) +
                     " does not match n - k - m = " + std::to_string(trim.kept()));
  }
  return dot_window(sorted_sample, coeffs, trim.k()) / static_cast<double>(trim.n());
}

double weighted_quantile_integral(const WeightSpec& weight, const Distribution& dist, double a,
                                  double b, double abs_tol) {
  if (a == b || weight.is_zero()) return 0.0;
  if (dist.family() == Family::kPointMass) return dist.params()[0] * weight.integral(a, b);
  std::vector<double> cuts = dist.quantile_jumps();
  for (double p : weight.breakpoints()) cuts.push_back(p);
  auto integrand = [&](double u) { return weight(u) * dist.quantile_unchecked(u); };
  return quad::integrate_split(integrand, a, b, cuts, {.abs_tol = abs_tol}).value;
}

double centering(const WeightSpec& weight, const Distribution& dist, const TrimSpec& trim) {
  check_range(weight, trim.alpha_n(), 1.0 - trim.beta_n());
  return weighted_quantile_integral(weight, dist, trim.alpha_n(), 1.0 - trim.beta_n());
}

double winsorized_lstat(std::span<const double> raw_sample, const WeightSpec& weight,
                        const TrimSpec& trim, const Distribution& dist) {
  if (raw_sample.size() != trim.n()) {
    throw ShapeError("sample length " + std::to_string(raw_sample.size()) +
                     " does not match n = " + std::to_string(trim.n()));
  }
  const auto wdist = winsorized(dist, trim.alpha(), trim.beta());
  std::vector<double> w(raw_sample.begin(), raw_sample.end());
  for (auto& x : w) x = wdist.winsorize(x);
  std::stable_sort(w.begin(), w.end());
  const auto coeffs =
      extended_coefficients(extend_weight(weight, trim.alpha(), trim.beta()), trim.n());
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) total += coeffs[i] * w[i];
  return total / static_cast<double>(trim.n());
}

double winsorized_centering(const WeightSpec& weight, const WinsorizedDistribution& wdist) {
  check_range(weight, wdist.alpha(), 1.0 - wdist.beta());
  return mu_w_from(weight, wdist);
}

double remainder_r1(std::span<const double> sorted_sample, const WeightSpec& weight,
                    const TrimSpec& trim, const Distribution& dist) {
  check_sample(sorted_sample, trim);
  const auto wdist = winsorized(dist, trim.alpha(), trim.beta());
  const auto jw = extend_weight(weight, trim.alpha(), trim.beta());
  return r1_from(sorted_sample, jw, wdist, boundary(sorted_sample, wdist));
}

double remainder_r2(std::span<const double> sorted_sample, const WeightSpec& weight,
                    const TrimSpec& trim, const Distribution& dist) {
  check_sample(sorted_sample, trim);
  check_range(weight, std::min(trim.alpha_n(), trim.alpha()),
              std::max(1.0 - trim.beta_n(), 1.0 - trim.beta()));
  const double quad_lower = weighted_quantile_integral(weight, dist, trim.alpha_n(), trim.alpha());
  const double quad_upper =
      weighted_quantile_integral(weight, dist, 1.0 - trim.beta_n(), 1.0 - trim.beta());
  return r2_from(sorted_sample, weight, trim, quad_lower, quad_upper);
}

Decomposer::Decomposer(const WeightSpec& weight, const CoefficientScheme& scheme,
                       const TrimSpec& trim, const Distribution& dist)
    : weight_(weight),
      extended_(weight, trim.alpha(), trim.beta()),
      trim_(trim),
      wdist_(dist, trim.alpha(), trim.beta()),
      reference_(scheme.reference),
      extended_coeffs_(extended_coefficients(extended_, trim.n())) {
  if (scheme.reference.size() != trim.kept() || scheme.exact.size() != trim.kept()) {
    throw ShapeError("coefficient scheme does not match the trim specification");
  }
  check_range(weight, std::min(trim.alpha_n(), trim.alpha()),
              std::max(1.0 - trim.beta_n(), 1.0 - trim.beta()));
  difference_.resize(trim.kept());
  for (std::size_t j = 0; j < difference_.size(); ++j) {
    difference_[j] = scheme.exact[j] - scheme.reference[j];
  }
  mu_n_ = centering(weight, dist, trim);
  mu_w_ = mu_w_from(weight, wdist_);
  quad_lower_ = weighted_quantile_integral(weight, dist, trim.alpha_n(), trim.alpha());
  quad_upper_ = weighted_quantile_integral(weight, dist, 1.0 - trim.beta_n(), 1.0 - trim.beta());
}

DecompositionResult Decomposer::operator()(std::span<const double> sorted_sample) const {
  check_sample(sorted_sample, trim_);
  const double nd = static_cast<double>(trim_.n());
  DecompositionResult r;
  r.l0_n = dot_window(sorted_sample, reference_, trim_.k()) / nd;
  r.v_n = dot_window(sorted_sample, difference_, trim_.k()) / nd;
  r.l_n = r.l0_n + r.v_n;
  r.lw_n = winsorized_stat_sorted(sorted_sample, wdist_, extended_coeffs_);
  r.mu_n = mu_n_;
  r.mu_w = mu_w_;
  const Boundary b = boundary(sorted_sample, wdist_);
  r.n_alpha = b.n_alpha;
  r.n_upper = b.n_upper;
  r.a_n = b.a_n;
  r.b_n = static_cast<double>(trim_.n() - b.n_upper) / nd;
  r.r1 = r1_from(sorted_sample, extended_, wdist_, b);
  r.r2 = r2_from(sorted_sample, weight_, trim_, quad_lower_, quad_upper_);
  return r;
}

DecompositionResult decompose(std::span<const double> raw_sample, const WeightSpec& weight,
                              const CoefficientScheme& scheme, const TrimSpec& trim,
                              const Distribution& dist) {
  std::vector<double> sorted(raw_sample.begin(), raw_sample.end());
  std::stable_sort(sorted.begin(), sorted.end());
  return Decomposer(weight, scheme, trim, dist)(sorted);
}

}  // namespace tlstat
