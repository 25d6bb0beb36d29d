#pragma once

// Reproducible Monte Carlo for the normalized trimmed L-statistic.
//
// Replicate r at sample size n draws from Stream(seed, n, r), so every
// estimate is a deterministic function of (config, seed) regardless of the
// number of worker threads. Per-replicate values are written by index and
// all reductions run in index order.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tlstat/experiment.hpp"

namespace tlstat {

// 1 - Phi(x).
double normal_tail(double x);

// sup_x |F_hat(x) - Phi(x)| for the empirical distribution of `values`.
double kolmogorov_distance(std::vector<double> values);

// Runs body(begin, end) over [0, count) in fixed-size blocks on `workers`
// threads (0 = hardware concurrency).
void parallel_blocks(std::size_t count, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t)>& body);

// Grid points -A, -A + step, ... up to c sqrt(log n) inclusive.
std::vector<double> tail_grid(const GridSpec& spec, std::size_t n);

struct TailRow {
  double x = 0.0;
  double p_upper = 0.0;  // P(T > x)
  double p_lower = 0.0;  // P(T <= -x)
  double normal_tail = 0.0;
  double ratio_upper = 0.0;
  double ratio_lower = 0.0;
  double se_upper = 0.0;
  double se_lower = 0.0;
};

struct TailReport {
  std::vector<TailRow> rows;
  std::size_t n = 0;
  std::size_t replications = 0;
  std::uint64_t seed = 0;
  double sigma = 0.0;
  double mu_n = 0.0;
  Normalization normalization = Normalization::kSigma;
  double kolmogorov = 0.0;
  std::vector<double> dropped;  // grid points removed by the tail floor
  double wall_seconds = 0.0;
  std::vector<double> statistics;  // normalized T values, kept on request
};

// Exceedance tallies of `values` over an increasing grid, one pass.
std::vector<TailRow> tally_tails(std::span<const double> values, std::span<const double> grid);

// Whether every row satisfies |ratio - 1| <= max(band, k * se / normal_tail)
// for both tails.
bool tails_within_band(const TailReport& report, double band, double se_multiplier);

struct TailOptions {
  std::size_t workers = 0;
  bool keep_statistics = false;
};

TailReport run_tails(const ExperimentConfig& config, const TailOptions& opts = {});

// Centered statistics L_n - mu_n of every replicate, plus the influence
// control variate when it is available.
struct ReplicateValues {
  std::vector<double> centered;
  std::vector<double> control;  // empty when no control variate
  double mu_n = 0.0;
};

ReplicateValues simulate_replicates(const ExperimentConfig& config, std::size_t n,
                                    bool with_control, std::size_t workers);

// Piecewise-linear approximation psi~(p) of the influence function of the
// statistic in the uniform scale p = F(x). Its mean and variance under
// U(0,1) are computed exactly, so n^-1 sum psi~(U_i) is a control variate
// with known variance.
class InfluenceTable {
 public:
  InfluenceTable(const WeightSpec& weight, const Distribution& dist, double alpha, double beta,
                 std::size_t cells = 4096);

  double operator()(double p) const;
  double mean() const { return mean_; }
  double variance() const { return variance_; }

 private:
  double lo_, hi_, step_;
  std::vector<double> values_;
  double mean_ = 0.0;
  double variance_ = 0.0;
};

struct VarianceRatio {
  std::size_t n = 0;
  std::size_t replications = 0;
  double sigma2 = 0.0;
  double ratio = 0.0;        // sqrt(n Var_hat(L_n)) / sigma
  double se = 0.0;           // jackknife over batches
  double ratio_plain = 0.0;  // plain sample variance, no control variate
  double se_plain = 0.0;
  bool control_variate = false;
};

// Throws ConfigError when sigma vanishes, or when the distribution has no
// finite moment of any positive order and check_moment is set.
VarianceRatio variance_ratio(const ExperimentConfig& config, std::size_t n,
                             std::size_t workers = 0, bool check_moment = true);

struct RemainderRow {
  std::size_t n = 0;
  double delta_n = 0.0;
  double p_remainder = 0.0;  // P(sqrt(n)|R_n|/sigma > delta_n)
  double p_perturbation = 0.0;  // P(sqrt(n)|V_n|/sigma > delta_n)
  double n_mean_r2 = 0.0;   // n E(R_n^2)
  double n_mean_r2_se = 0.0;
  double n_var_rv = 0.0;    // n Var(R_n + V_n)
  double max_identity_residual = 0.0;
};

std::vector<RemainderRow> remainder_diagnostics(const ExperimentConfig& config, double epsilon1,
                                                std::size_t workers = 0);

// Limiting sigma for the configuration; throws ConfigError if degenerate.
double configured_sigma(const ExperimentConfig& config);

}  // namespace tlstat
