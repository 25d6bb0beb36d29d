#pragma once

// Finite-grid checks of the four hypotheses on (J, F, trims, coefficients).
// O(.) statements are checked as boundedness of the relevant ratio over an
// increasing n grid.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "tlstat/distributions.hpp"
#include "tlstat/experiment.hpp"
#include "tlstat/trim.hpp"
#include "tlstat/weights.hpp"

namespace tlstat {

enum class ConditionStatus { kPass, kFail, kNotApplicable };

std::string_view status_name(ConditionStatus s);

struct ConditionResult {
  std::string name;  // "i", "ii", "iii", "iv"
  ConditionStatus status = ConditionStatus::kNotApplicable;
  // Lipschitz estimate (i), decay exponent epsilon (ii, +inf when the
  // quantile is locally Lipschitz), maximal ratio (iii, iv).
  double measured = 0.0;
  std::string detail;
  std::vector<std::string> warnings;

  bool ok() const { return status != ConditionStatus::kFail; }
};

struct ConditionReport {
  std::vector<ConditionResult> results;
  std::optional<double> epsilon;        // from (ii)
  std::optional<double> epsilon_tilde;  // from (iv)
  std::optional<double> nu;             // min(epsilon, epsilon_tilde)

  bool all_ok() const;
  const ConditionResult& get(std::string_view name) const;
};

ConditionResult check_lipschitz(const WeightSpec& weight, std::size_t grid_size = 10000);

// Delta_n(t) = |F^-1(p + t sqrt(log n / n)) - F^-1(p)| at p = alpha and
// p = 1 - beta. Passes when log Delta_n decays against log log n with slope
// at most -(1 + epsilon) for every t.
ConditionResult check_quantile_smoothness(const Distribution& dist, double alpha, double beta,
                                          std::vector<double> t_grid,
                                          const std::vector<std::size_t>& n_grid,
                                          double epsilon);

ConditionResult check_trim_rate(const std::vector<TrimSpec>& trims, double bound);

ConditionResult check_coefficient_sum(
    const std::vector<std::pair<std::size_t, CoefficientScheme>>& schemes, double epsilon_tilde,
    double bound);

ConditionReport check_conditions(const ExperimentConfig& config);

}  // namespace tlstat
