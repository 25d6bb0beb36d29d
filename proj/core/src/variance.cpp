#include "tlstat/variance.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "tlstat/error.hpp"
#include "tlstat/quadrature.hpp"

namespace tlstat {

namespace {

bool degenerate(const WeightSpec& weight, const Distribution& dist) {
  return weight.is_zero() || !dist.has_quantile_density();
}

void check_edges(const Distribution& dist, double alpha, double beta, double margin) {
  if (dist.quantile_density_unbounded_low() && alpha < margin) {
    throw DomainError("lower trim point within the edge margin of an unbounded quantile density");
  }
  if (dist.quantile_density_unbounded_high() && beta < margin) {
    throw DomainError("upper trim point within the edge margin of an unbounded quantile density");
  }
  for (double p : dist.quantile_jumps()) {
    if (p > alpha && p < 1.0 - beta) {
      throw DomainError("quantile function jumps inside the trim interval");
    }
  }
}

}  // namespace

VarianceResult kernel_triangle(const std::function<double(double)>& f, double lo, double hi,
                               std::span<const double> breakpoints, double abs_tol,
                               Triangle side) {
  const double width = hi - lo;
  const quad::Options inner_opts{.abs_tol = 0.1 * abs_tol, .rel_tol = 1e-13};
  double inner_error = 0.0;
  auto outer = [&](double s) {
    const double fs = f(s);
    if (fs == 0.0) return 0.0;
    if (side == Triangle::kBelow) {
      const auto inner = quad::integrate_split([&](double t) { return f(t) * t; }, lo, s,
                                               breakpoints, inner_opts);
      inner_error = std::max(inner_error, inner.abs_error);
      return fs * (1.0 - s) * inner.value;
    }
    const auto inner = quad::integrate_split([&](double t) { return f(t) * (1.0 - t); }, s, hi,
                                             breakpoints, inner_opts);
    inner_error = std::max(inner_error, inner.abs_error);
    return fs * s * inner.value;
  };
  const auto result =
      quad::integrate_split(outer, lo, hi, breakpoints, {.abs_tol = abs_tol, .rel_tol = 1e-13});
  return {result.value, result.abs_error + width * inner_error, "triangle-split"};
}

VarianceResult kernel_double_integral(const std::function<double(double)>& f, double lo,
                                      double hi, std::span<const double> breakpoints,
                                      double abs_tol) {
  const auto lower = kernel_triangle(f, lo, hi, breakpoints, 0.5 * abs_tol, Triangle::kBelow);
  const auto upper = kernel_triangle(f, lo, hi, breakpoints, 0.5 * abs_tol, Triangle::kAbove);
  return {lower.sigma2 + upper.sigma2, lower.abs_error + upper.abs_error, "triangle-split"};
}

VarianceResult asymptotic_variance(const WeightSpec& weight, const Distribution& dist,
                                   double alpha, double beta, const VarianceOptions& opts) {
  if (!(alpha >= 0.0 && beta >= 0.0 && alpha < 1.0 - beta)) {
    throw TrimError("variance requires 0 <= alpha < 1 - beta <= 1");
  }
  if (!weight.covers(alpha, 1.0 - beta)) {
    throw DomainError("trim interval [alpha, 1-beta] escapes the weight domain");
  }
  if (degenerate(weight, dist)) return {0.0, 0.0, "degenerate"};
  check_edges(dist, alpha, beta, opts.edge_margin);
  auto f = [&](double u) { return weight(u) * *dist.quantile_density(u); };
  std::vector<double> cuts = dist.quantile_jumps();
  for (double p : weight.breakpoints()) cuts.push_back(p);
  return kernel_double_integral(f, alpha, 1.0 - beta, cuts, opts.abs_tol);
}

VarianceResult winsorized_variance(const WeightSpec& weight, const WinsorizedDistribution& wdist,
                                   const VarianceOptions& opts) {
  const Distribution& base = wdist.base();
  if (degenerate(weight, base)) return {0.0, 0.0, "degenerate"};
  check_edges(base, wdist.alpha(), wdist.beta(), opts.edge_margin);
  const ExtendedWeight jw = extend_weight(weight, wdist.alpha(), wdist.beta());
  auto f = [&](double u) {
    const double q = *wdist.quantile_density(u);
    return q == 0.0 ? 0.0 : jw(u) * q;
  };
  std::vector<double> cuts = base.quantile_jumps();
  for (double p : weight.breakpoints()) cuts.push_back(p);
  cuts.push_back(wdist.alpha());
  cuts.push_back(1.0 - wdist.beta());
  return kernel_double_integral(f, 0.0, 1.0, cuts, opts.abs_tol);
}

}  // namespace tlstat
