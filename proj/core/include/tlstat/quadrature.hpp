#pragma once

// Globally adaptive Gauss-Kronrod (7/15) quadrature.
//
// The interval with the largest error estimate is bisected until the summed
// estimate meets max(abs_tol, rel_tol * |I|). Error estimates follow the
// QUADPACK QK15 heuristic. Integrals are oriented: integrate(f, b, a) is
// -integrate(f, a, b).

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <queue>
#include <span>
#include <vector>

#include "tlstat/error.hpp"

namespace tlstat::quad {

struct Result {
  double value = 0.0;
  double abs_error = 0.0;
  int evaluations = 0;
};

struct Options {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  int max_intervals = 4000;
};

namespace detail {

inline constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Piece {
  double a, b, value, error;
  bool operator<(const Piece& other) const { return error < other.error; }
};

template <class F>
Piece kronrod15(const F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double f_center = f(center);
  double kronrod = f_center * kKronrodWeights[7];
  double gauss = f_center * kGaussWeights[3];
  double abs_sum = std::abs(kronrod);
  std::array<double, 7> lo{}, hi{};
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kKronrodNodes[j];
    lo[j] = f(center - dx);
    hi[j] = f(center + dx);
    kronrod += kKronrodWeights[j] * (lo[j] + hi[j]);
    abs_sum += kKronrodWeights[j] * (std::abs(lo[j]) + std::abs(hi[j]));
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * (lo[j] + hi[j]);
  }
  const double mean = 0.5 * kronrod;
  double asc = kKronrodWeights[7] * std::abs(f_center - mean);
  for (int j = 0; j < 7; ++j)
    asc += kKronrodWeights[j] * (std::abs(lo[j] - mean) + std::abs(hi[j] - mean));

  const double width = std::abs(half);
  double error = std::abs((kronrod - gauss) * half);
  asc *= width;
  abs_sum *= width;
  if (asc != 0.0 && error != 0.0) error = asc * std::min(1.0, std::pow(200.0 * error / asc, 1.5));
  const double roundoff = 50.0 * std::numeric_limits<double>::epsilon() * abs_sum;
  if (error < roundoff) error = roundoff;
  return {a, b, kronrod * half, error};
}

}  // namespace detail

template <class F>
Result integrate(const F& f, double a, double b, const Options& opts = {}) {
  if (a == b) return {};
  if (b < a) {
    Result r = integrate(f, b, a, opts);
    r.value = -r.value;
    return r;
  }
  std::priority_queue<detail::Piece> pieces;
  pieces.push(detail::kronrod15(f, a, b));
  double value = pieces.top().value;
  double error = pieces.top().error;
  int evaluations = 15;
  int intervals = 1;
  while (error > std::max(opts.abs_tol, opts.rel_tol * std::abs(value))) {
    if (intervals >= opts.max_intervals) {
      throw NumericalError("adaptive quadrature did not converge", error);
    }
    const detail::Piece worst = pieces.top();
    pieces.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (mid <= worst.a || mid >= worst.b) {
      throw NumericalError("adaptive quadrature exhausted interval resolution", error);
    }
    const detail::Piece left = detail::kronrod15(f, worst.a, mid);
    const detail::Piece right = detail::kronrod15(f, mid, worst.b);
    evaluations += 30;
    ++intervals;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    pieces.push(left);
    pieces.push(right);
  }
  // Re-sum to drop the cancellation drift of the running updates.
  value = 0.0;
  error = 0.0;
  while (!pieces.empty()) {
    value += pieces.top().value;
    error += pieces.top().error;
    pieces.pop();
  }
  return {value, error, evaluations};
}

// Integrates over [a,b] (oriented) splitting at every breakpoint strictly
// inside the interval. The tolerance budget is shared evenly among pieces.
template <class F>
Result integrate_split(const F& f, double a, double b, std::span<const double> breakpoints,
                       const Options& opts = {}) {
  if (a == b) return {};
  const double sign = b < a ? -1.0 : 1.0;
  const double lo = std::min(a, b);
  const double hi = std::max(a, b);
  std::vector<double> cuts{lo};
  for (double p : breakpoints)
    if (p > lo && p < hi) cuts.push_back(p);
  std::sort(cuts.begin() + 1, cuts.end());
  cuts.push_back(hi);
  Options piece_opts = opts;
  piece_opts.abs_tol = opts.abs_tol / static_cast<double>(cuts.size() - 1);
  Result total;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const Result r = integrate(f, cuts[i], cuts[i + 1], piece_opts);
    total.value += r.value;
    total.abs_error += r.abs_error;
    total.evaluations += r.evaluations;
  }
  total.value *= sign;
  return total;
}

}  // namespace tlstat::quad
