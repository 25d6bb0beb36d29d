#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tlstat/rng.hpp"

namespace tlstat {

enum class Family {
  kUniform,       // params: lo, hi
  kExponential,   // params: rate
  kNormal,        // params: mean, sd
  kPareto,        // params: shape gamma, scale x_m
  kCauchy,        // params: location, scale
  kPointMass,     // params: a
  kTwoPointMixture  // params: p, lo1, hi1, lo2, hi2 (uniform pieces, gap -> jump of F^-1 at p)
};

std::string_view family_name(Family f);
Family family_from_name(std::string_view name);

// An analytic model of the distribution function F. Immutable after
// construction; every member function is safe to call concurrently.
class Distribution {
 public:
  // Missing trailing parameters take the family defaults (uniform(0,1),
  // exponential(1), normal(0,1), pareto(gamma, 1), cauchy(0,1)).
  Distribution(Family family, std::vector<double> params);

  static Distribution uniform(double lo = 0.0, double hi = 1.0);
  static Distribution exponential(double rate = 1.0);
  static Distribution normal(double mean = 0.0, double sd = 1.0);
  static Distribution pareto(double shape, double scale = 1.0);
  static Distribution cauchy(double location = 0.0, double scale = 1.0);
  static Distribution point_mass(double a);
  static Distribution two_point_mixture(double p, double lo1, double hi1, double lo2, double hi2);

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }

  // Left-continuous inverse F^-1(u) = inf{x : F(x) >= u}, with F^-1(0) = F^-1(0+).
  // Throws DomainError for u outside [0,1] or where the quantile is infinite.
  double quantile(double u) const;
  double cdf(double x) const;

  // dF^-1/du on (0,1); nullopt for families without one (point mass).
  // For the mixture this is the density of the continuous part (atoms of
  // dF^-1 are not represented).
  std::optional<double> quantile_density(double u) const;
  bool has_quantile_density() const { return family_ != Family::kPointMass; }

  // Points u in (0,1) where F^-1 jumps.
  std::vector<double> quantile_jumps() const;

  // sup{g : E|X|^g < inf}; infinity for bounded families, 0 for Cauchy.
  double moment_bound() const;

  bool unbounded_below() const;
  bool unbounded_above() const;
  // Whether q(u) blows up as u -> 0 / u -> 1.
  bool quantile_density_unbounded_low() const;
  bool quantile_density_unbounded_high() const;

  // Inverse-transform draw: quantile(U), U uniform on (0,1).
  double draw(Stream& stream) const { return quantile_unchecked(stream.uniform_open()); }
  std::vector<double> sample(std::size_t n, Stream& stream) const;

  // F^-1 without argument validation; u must lie in (0,1).
  double quantile_unchecked(double u) const;

  std::string describe() const;

 private:
  Family family_;
  std::vector<double> params_;
};

// X Winsorized outside (xi_alpha, xi_{1-beta}], where xi_nu = F^-1(nu).
class WinsorizedDistribution {
 public:
  WinsorizedDistribution(Distribution base, double alpha, double beta);

  const Distribution& base() const { return base_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double lower() const { return lower_; }
  double upper() const { return upper_; }

  // G^-1: xi_alpha on [0,alpha], F^-1 on (alpha, 1-beta], xi_{1-beta} above.
  double quantile(double u) const;
  // dG^-1/du: zero outside (alpha, 1-beta].
  std::optional<double> quantile_density(double u) const;

  double winsorize(double x) const {
    if (x <= lower_) return lower_;
    if (x > upper_) return upper_;
    return x;
  }

 private:
  Distribution base_;
  double alpha_;
  double beta_;
  double lower_;
  double upper_;
};

WinsorizedDistribution winsorized(const Distribution& dist, double alpha, double beta);

// Standard normal helpers.
double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace tlstat
