#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "tlstat/distributions.hpp"
#include "tlstat/trim.hpp"
#include "tlstat/weights.hpp"

namespace tlstat {

enum class Normalization { kSigma, kEmpiricalVariance };

Normalization normalization_from_name(std::string_view name);
std::string_view normalization_name(Normalization n);

// x grid over [-A, c sqrt(log n)] with a fixed step.
struct GridSpec {
  double lower = 2.0;  // A
  double c = 1.0;
  double step = 0.25;
};

struct ConditionOptions {
  double epsilon = 0.5;  // required decay margin for the quantile smoothness check
  std::vector<double> t_grid = {-4.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 4.0};
  std::vector<std::size_t> n_grid = {500, 2000, 8000, 32000};
  double trim_bound = 1.0;  // bound on max(|a_n - a|, |b_n - b|) / sqrt(log n / n)
  double coef_bound = 1.0;  // bound on sum |c - c0| / B(n)
  std::size_t lipschitz_grid = 10000;
};

struct ExperimentConfig {
  Distribution distribution = Distribution::uniform();
  WeightSpec weight = WeightSpec::constant(1.0);
  Perturbation perturbation;
  std::size_t n = 2000;
  double alpha = 0.25;
  double beta = 0.25;
  TrimRule trim_rule;
  std::size_t replications = 1000;
  std::uint64_t seed = 0;
  Normalization normalization = Normalization::kSigma;
  GridSpec grid;
  std::vector<std::size_t> n_grid = {500, 2000, 8000};
  double md_band = 0.15;          // relative band for tail ratios
  double md_se_multiplier = 3.0;  // band widened to this many standard errors
  double tail_floor = 10.0;       // grid points need normal tail >= tail_floor / R
  double variance_band = 0.05;
  double diagnostics_epsilon = 0.1;  // epsilon_1 in delta_n = log(n+1)^(-1/2-epsilon_1)
  ConditionOptions conditions;

  TrimSpec trim_for(std::size_t sample_size) const {
    return TrimSpec::from_rule(sample_size, alpha, beta, trim_rule);
  }
  TrimSpec trim() const { return trim_for(n); }
  // Coefficient scheme at sample size n; the perturbation signs come from a
  // stream reserved for that n.
  CoefficientScheme scheme_for(std::size_t sample_size) const;
};

}  // namespace tlstat
