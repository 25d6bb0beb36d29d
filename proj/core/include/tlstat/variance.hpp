#pragma once

// Asymptotic variance of a trimmed L-statistic,
//
//   sigma^2 = int int J(u) J(v) (min(u,v) - uv) dF^-1(u) dF^-1(v),
//
// over the trim square, evaluated with the analytic quantile density
// q = dF^-1/du. The kernel has a kink on the diagonal, so the square is split
// into the triangles u <= v and u > v, each integrated by nested adaptive
// Gauss-Kronrod quadrature.

#include <functional>
#include <span>
#include <string>

#include "tlstat/distributions.hpp"
#include "tlstat/weights.hpp"

namespace tlstat {

struct VarianceResult {
  double sigma2 = 0.0;
  double abs_error = 0.0;
  std::string method;  // "triangle-split" or "degenerate"
};

struct VarianceOptions {
  double abs_tol = 1e-11;
  // Margin kept between the trim points and an edge where q is unbounded.
  double edge_margin = 0.01;
};

// Integrates the kernel against f(u) = weight(u) q(u) over [lo, hi]^2 as the
// sum of the two triangles.
VarianceResult kernel_double_integral(const std::function<double(double)>& f, double lo,
                                      double hi, std::span<const double> breakpoints,
                                      double abs_tol);

enum class Triangle {
  kBelow,  // inner t in [lo, s]: f(s) f(t) t (1 - s)
  kAbove   // inner t in [s, hi]: f(s) f(t) s (1 - t)
};

// One triangle of the square, outer variable s over [lo, hi]. By symmetry of
// the kernel both triangles carry the same mass.
VarianceResult kernel_triangle(const std::function<double(double)>& f, double lo, double hi,
                               std::span<const double> breakpoints, double abs_tol,
                               Triangle side);

VarianceResult asymptotic_variance(const WeightSpec& weight, const Distribution& dist,
                                   double alpha, double beta, const VarianceOptions& opts = {});

// sigma^2(J_w, G): the same kernel with the extended weight and the
// Winsorized quantile density, which vanishes outside (alpha, 1-beta].
VarianceResult winsorized_variance(const WeightSpec& weight, const WinsorizedDistribution& wdist,
                                   const VarianceOptions& opts = {});

}  // namespace tlstat
