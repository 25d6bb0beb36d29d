#pragma once

// Trimmed L-statistics, their Winsorized approximation and the exact
// remainder decomposition
//
//   L0_n - mu_n = (Lw_n - mu_w) + R1_n + R2_n,      L_n = L0_n + V_n,
//
// where Lw_n is the non-trimmed L-statistic of the Winsorized sample.
//
// The empirical quantile is F_n^-1(u) = X_{ceil(nu):n}, constant on each cell
// ((i-1)/n, i/n]. Integrals against it are evaluated as exact finite sums;
// only the smooth J(u) F^-1(u) integrals use quadrature.

#include <cstddef>
#include <span>
#include <vector>

#include "tlstat/distributions.hpp"
#include "tlstat/trim.hpp"
#include "tlstat/weights.hpp"

namespace tlstat {

// Absolute tolerance used for every J(u) F^-1(u) quadrature.
inline constexpr double kCenteringTolerance = 1e-12;

struct DecompositionResult {
  double l_n = 0.0;          // n^-1 sum c_{i,n} X_{i:n}
  double l0_n = 0.0;         // same with reference weights c0_{i,n}
  double lw_n = 0.0;         // Winsorized non-trimmed statistic
  double mu_n = 0.0;
  double mu_w = 0.0;
  double r1 = 0.0;
  double r2 = 0.0;
  double v_n = 0.0;          // L_n - L0_n
  double a_n = 0.0;          // N_alpha / n
  double b_n = 0.0;          // (n - N_{1-beta}) / n
  std::size_t n_alpha = 0;   // #{X_i <= xi_alpha}
  std::size_t n_upper = 0;   // #{X_i <= xi_{1-beta}}

  double remainder() const { return r1 + r2; }
  // |(L0_n - mu_n) - (Lw_n - mu_w) - R1 - R2|
  double identity_residual() const;
  // 1e-10 * (1 + |L0_n|)
  double identity_tolerance() const;
};

double trimmed_lstat(std::span<const double> sorted_sample, std::span<const double> coeffs,
                     const TrimSpec& trim);

// Integral of J(u) F^-1(u) over [a, b] (oriented), split at jumps of F^-1.
double weighted_quantile_integral(const WeightSpec& weight, const Distribution& dist, double a,
                                  double b, double abs_tol = kCenteringTolerance);

// mu_n = int_{alpha_n}^{1-beta_n} J(u) F^-1(u) du.
double centering(const WeightSpec& weight, const Distribution& dist, const TrimSpec& trim);

// Winsorizes raw_sample at (xi_alpha, xi_{1-beta}], sorts, and applies the
// coefficients n * int_cell J_w.
double winsorized_lstat(std::span<const double> raw_sample, const WeightSpec& weight,
                        const TrimSpec& trim, const Distribution& dist);

// mu_w = int_0^1 J_w(u) G^-1(u) du, flat pieces integrated exactly.
double winsorized_centering(const WeightSpec& weight, const WinsorizedDistribution& wdist);

double remainder_r1(std::span<const double> sorted_sample, const WeightSpec& weight,
                    const TrimSpec& trim, const Distribution& dist);
double remainder_r2(std::span<const double> sorted_sample, const WeightSpec& weight,
                    const TrimSpec& trim, const Distribution& dist);

// Oriented integral over [a, b] of w(u) F_n^-1(u), where weight_integral(x, y)
// returns the integral of w over [x, y] with x <= y.
template <class WeightIntegral>
double step_integral(std::span<const double> sorted_sample, const WeightIntegral& weight_integral,
                     double a, double b) {
  if (a == b) return 0.0;
  const double sign = a < b ? 1.0 : -1.0;
  const double lo = a < b ? a : b;
  const double hi = a < b ? b : a;
  const std::size_t n = sorted_sample.size();
  const double nd = static_cast<double>(n);
  std::size_t first = static_cast<std::size_t>(lo * nd);
  if (first < 1) first = 1;
  std::size_t last = static_cast<std::size_t>(hi * nd) + 1;
  if (last > n) last = n;
  double total = 0.0;
  for (std::size_t i = first; i <= last; ++i) {
    const double left = static_cast<double>(i - 1) / nd;
    const double right = static_cast<double>(i) / nd;
    const double x = left < lo ? lo : left;
    const double y = right > hi ? hi : right;
    if (x < y) total += sorted_sample[i - 1] * weight_integral(x, y);
  }
  return sign * total;
}

// Precomputes the deterministic pieces of the decomposition for a fixed
// (J, coefficients, trim, F) so that each sample costs O(n).
class Decomposer {
 public:
  Decomposer(const WeightSpec& weight, const CoefficientScheme& scheme, const TrimSpec& trim,
             const Distribution& dist);

  DecompositionResult operator()(std::span<const double> sorted_sample) const;

  const TrimSpec& trim() const { return trim_; }
  double mu_n() const { return mu_n_; }
  double mu_w() const { return mu_w_; }
  double xi_lower() const { return wdist_.lower(); }
  double xi_upper() const { return wdist_.upper(); }

 private:
  WeightSpec weight_;
  ExtendedWeight extended_;
  TrimSpec trim_;
  WinsorizedDistribution wdist_;
  std::vector<double> reference_;
  std::vector<double> difference_;
  std::vector<double> extended_coeffs_;
  double mu_n_;
  double mu_w_;
  double quad_lower_;  // int_{alpha_n}^{alpha} J F^-1
  double quad_upper_;  // int_{1-beta_n}^{1-beta} J F^-1
};

DecompositionResult decompose(std::span<const double> raw_sample, const WeightSpec& weight,
                              const CoefficientScheme& scheme, const TrimSpec& trim,
                              const Distribution& dist);

}  // namespace tlstat
