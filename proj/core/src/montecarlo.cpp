#include "tlstat/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <exception>
#include <mutex>
#include <numbers>
#include <string>
#include <thread>

#include "tlstat/error.hpp"
#include "tlstat/lstat.hpp"
#include "tlstat/quadrature.hpp"
#include "tlstat/variance.hpp"

namespace tlstat {

namespace {

constexpr std::size_t kBlockSize = 256;
constexpr std::size_t kBatches = 20;

// Sorted uniforms of replicate r; F^-1 applied to them gives the order statistics.
void sorted_uniforms(std::uint64_t seed, std::size_t n, std::size_t r, std::vector<double>& u) {
  Stream stream(seed, n, r);
  u.resize(n);
  for (auto& v : u) v = stream.uniform_open();
  std::sort(u.begin(), u.end());
}

struct Moments {
  double count = 0.0;
  double sum_l = 0.0, sum_ll = 0.0, sum_h = 0.0, sum_hh = 0.0;

  Moments& operator+=(const Moments& o) {
    count += o.count;
    sum_l += o.sum_l;
    sum_ll += o.sum_ll;
    sum_h += o.sum_h;
    sum_hh += o.sum_hh;
    return *this;
  }
  Moments operator-(const Moments& o) const {
    return {count - o.count, sum_l - o.sum_l, sum_ll - o.sum_ll, sum_h - o.sum_h,
            sum_hh - o.sum_hh};
  }
  double var_l() const { return (sum_ll - sum_l * sum_l / count) / (count - 1.0); }
  double var_h() const { return (sum_hh - sum_h * sum_h / count) / (count - 1.0); }
};

double jackknife_se(const std::vector<double>& leave_one_out) {
  const double b = static_cast<double>(leave_one_out.size());
  double mean = 0.0;
  for (double v : leave_one_out) mean += v;
  mean /= b;
  double ss = 0.0;
  for (double v : leave_one_out) ss += (v - mean) * (v - mean);
  return std::sqrt((b - 1.0) / b * ss);
}

std::size_t batch_begin(std::size_t b, std::size_t batches, std::size_t count) {
  return b * count / batches;
}

}  // namespace

double normal_tail(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

double kolmogorov_distance(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  const double count = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double phi = normal_cdf(values[i]);
    d = std::max(d, static_cast<double>(i + 1) / count - phi);
    d = std::max(d, phi - static_cast<double>(i) / count);
  }
  return d;
}

void parallel_blocks(std::size_t count, std::size_t workers,
                     const std::function<void(std::size_t, std::size_t)>& body) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t blocks = (count + kBlockSize - 1) / kBlockSize;
  workers = std::min(workers, std::max<std::size_t>(blocks, 1));
  if (workers <= 1) {
    if (count > 0) body(0, count);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    try {
      for (std::size_t b = next++; b < blocks; b = next++) {
        body(b * kBlockSize, std::min(count, (b + 1) * kBlockSize));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next = blocks;
    }
  };
  {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);
}

std::vector<double> tail_grid(const GridSpec& spec, std::size_t n) {
  if (!(spec.step > 0.0)) throw ConfigError("grid step must be positive");
  if (!(spec.c > 0.0)) throw ConfigError("grid constant c must be positive");
  if (!(spec.lower >= 0.0)) throw ConfigError("grid lower extent A must be >= 0");
  const double top = spec.c * std::sqrt(std::log(static_cast<double>(n)));
  std::vector<double> grid;
  for (std::size_t j = 0;; ++j) {
    const double x = -spec.lower + static_cast<double>(j) * spec.step;
    if (x > top + 1e-9) break;
    grid.push_back(x);
  }
  return grid;
}

std::vector<TailRow> tally_tails(std::span<const double> values, std::span<const double> grid) {
  const std::size_t g = grid.size();
  // upper_bins[b]: values exceeding exactly the first b grid points.
  std::vector<std::size_t> upper_bins(g + 1, 0), lower_bins(g + 1, 0);
  for (double t : values) {
    ++upper_bins[std::lower_bound(grid.begin(), grid.end(), t) - grid.begin()];
    ++lower_bins[std::upper_bound(grid.begin(), grid.end(), -t) - grid.begin()];
  }
  const double count = static_cast<double>(values.size());
  std::vector<TailRow> rows(g);
  std::size_t upper = 0, lower = 0;
  for (std::size_t j = g; j-- > 0;) {
    upper += upper_bins[j + 1];
    lower += lower_bins[j + 1];
    TailRow& row = rows[j];
    row.x = grid[j];
    row.p_upper = static_cast<double>(upper) / count;
    row.p_lower = static_cast<double>(lower) / count;
    row.normal_tail = normal_tail(row.x);
    row.ratio_upper = row.p_upper / row.normal_tail;
    row.ratio_lower = row.p_lower / row.normal_tail;
    row.se_upper = std::sqrt(row.p_upper * (1.0 - row.p_upper) / count);
    row.se_lower = std::sqrt(row.p_lower * (1.0 - row.p_lower) / count);
  }
  return rows;
}

bool tails_within_band(const TailReport& report, double band, double se_multiplier) {
  for (const auto& row : report.rows) {
    const double upper_band = std::max(band, se_multiplier * row.se_upper / row.normal_tail);
    const double lower_band = std::max(band, se_multiplier * row.se_lower / row.normal_tail);
    if (std::abs(row.ratio_upper - 1.0) > upper_band) return false;
    if (std::abs(row.ratio_lower - 1.0) > lower_band) return false;
  }
  return true;
}

double configured_sigma(const ExperimentConfig& config) {
  const auto v = asymptotic_variance(config.weight, config.distribution, config.alpha, config.beta);
  if (!(v.sigma2 > std::max(v.abs_error, 1e-14))) {
    throw ConfigError("degenerate sigma: asymptotic variance is " + std::to_string(v.sigma2));
  }
  return std::sqrt(v.sigma2);
}

InfluenceTable::InfluenceTable(const WeightSpec& weight, const Distribution& dist, double alpha,
                               double beta, std::size_t cells)
    : lo_(alpha), hi_(1.0 - beta), step_((1.0 - beta - alpha) / static_cast<double>(cells)) {
  if (!dist.has_quantile_density()) throw DomainError("no quantile density");
  for (double p : dist.quantile_jumps()) {
    if (p > lo_ && p < hi_) throw DomainError("quantile function jumps inside the trim interval");
  }
  auto jq = [&](double u) { return weight(u) * *dist.quantile_density(u); };
  auto ujq = [&](double u) { return u * jq(u); };
  const quad::Options opts{.abs_tol = 1e-13};
  const std::vector<double> kinks = weight.breakpoints();
  std::vector<double> tail(cells + 1, 0.0);  // int_{p_j}^{hi} J q
  double k_total = 0.0;
  for (std::size_t j = cells; j-- > 0;) {
    const double a = lo_ + static_cast<double>(j) * step_;
    const double b = j + 1 == cells ? hi_ : lo_ + static_cast<double>(j + 1) * step_;
    tail[j] = tail[j + 1] + quad::integrate_split(jq, a, b, kinks, opts).value;
    k_total += quad::integrate_split(ujq, a, b, kinks, opts).value;
  }
  values_.resize(cells + 1);
  for (std::size_t j = 0; j <= cells; ++j) values_[j] = k_total - tail[j];

  const double below = values_.front();
  const double above = values_.back();
  double mean = alpha * below + beta * above;
  double second = alpha * below * below + beta * above * above;
  for (std::size_t j = 0; j < cells; ++j) {
    const double y0 = values_[j], y1 = values_[j + 1];
    mean += step_ * 0.5 * (y0 + y1);
    second += step_ * (y0 * y0 + y0 * y1 + y1 * y1) / 3.0;
  }
  mean_ = mean;
  variance_ = second - mean * mean;
}

double InfluenceTable::operator()(double p) const {
  if (p <= lo_) return values_.front();
  if (p >= hi_) return values_.back();
  const double pos = (p - lo_) / step_;
  std::size_t j = static_cast<std::size_t>(pos);
  if (j >= values_.size() - 1) j = values_.size() - 2;
  const double frac = pos - static_cast<double>(j);
  return values_[j] + frac * (values_[j + 1] - values_[j]);
}

ReplicateValues simulate_replicates(const ExperimentConfig& config, std::size_t n,
                                    bool with_control, std::size_t workers) {
  const TrimSpec trim = config.trim_for(n);
  const CoefficientScheme scheme = config.scheme_for(n);
  const Distribution& dist = config.distribution;
  ReplicateValues out;
  out.mu_n = centering(config.weight, dist, trim);

  std::optional<InfluenceTable> influence;
  if (with_control) {
    try {
      influence.emplace(config.weight, dist, config.alpha, config.beta);
    } catch (const Error&) {
      influence.reset();
    }
  }

  const std::size_t reps = config.replications;
  out.centered.resize(reps);
  if (influence) out.control.resize(reps);
  const double nd = static_cast<double>(n);
  const std::size_t k = trim.k();
  const auto& c = scheme.exact;
  parallel_blocks(reps, workers, [&](std::size_t begin, std::size_t end) {
    std::vector<double> u;
    for (std::size_t r = begin; r < end; ++r) {
      sorted_uniforms(config.seed, n, r, u);
      double l = 0.0;
      for (std::size_t j = 0; j < c.size(); ++j) l += c[j] * dist.quantile_unchecked(u[k + j]);
      out.centered[r] = l / nd - out.mu_n;
      if (influence) {
        double h = 0.0;
        for (double p : u) h += (*influence)(p);
        out.control[r] = h / nd - influence->mean();
      }
    }
  });
  return out;
}

TailReport run_tails(const ExperimentConfig& config, const TailOptions& opts) {
  if (config.replications < 1) throw ConfigError("replications must be >= 1");
  const auto start = std::chrono::steady_clock::now();
  TailReport report;
  report.n = config.n;
  report.replications = config.replications;
  report.seed = config.seed;
  report.normalization = config.normalization;

  double scale;
  ReplicateValues values;
  if (config.normalization == Normalization::kSigma) {
    report.sigma = configured_sigma(config);
    values = simulate_replicates(config, config.n, false, opts.workers);
    scale = report.sigma / std::sqrt(static_cast<double>(config.n));
  } else {
    values = simulate_replicates(config, config.n, false, opts.workers);
    double ss = 0.0, sum = 0.0;
    for (double v : values.centered) sum += v;
    const double mean = sum / static_cast<double>(values.centered.size());
    for (double v : values.centered) ss += (v - mean) * (v - mean);
    scale = values.centered.size() > 1
                ? std::sqrt(ss / static_cast<double>(values.centered.size() - 1))
                : 0.0;
    if (!(scale > 0.0)) throw ConfigError("degenerate sample variance of L_n");
    report.sigma = scale * std::sqrt(static_cast<double>(config.n));
  }
  report.mu_n = values.mu_n;

  std::vector<double> t(values.centered.size());
  for (std::size_t r = 0; r < t.size(); ++r) t[r] = values.centered[r] / scale;

  std::vector<double> grid = tail_grid(config.grid, config.n);
  const double floor = config.tail_floor / static_cast<double>(config.replications);
  std::vector<double> kept;
  for (double x : grid) (normal_tail(x) >= floor ? kept : report.dropped).push_back(x);
  report.rows = tally_tails(t, kept);
  report.kolmogorov = kolmogorov_distance(t);
  if (opts.keep_statistics) report.statistics = std::move(t);
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

VarianceRatio variance_ratio(const ExperimentConfig& config, std::size_t n, std::size_t workers,
                             bool check_moment) {
  if (check_moment && !(config.distribution.moment_bound() > 0.0)) {
    throw ConfigError("moment condition violated: " + config.distribution.describe() +
                      " has no finite absolute moment of positive order");
  }
  if (config.replications < 2 * kBatches) {
    throw ConfigError("variance ratio needs at least " + std::to_string(2 * kBatches) +
                      " replications");
  }
  const double sigma = configured_sigma(config);
  VarianceRatio out;
  out.n = n;
  out.replications = config.replications;
  out.sigma2 = sigma * sigma;

  const ReplicateValues values = simulate_replicates(config, n, true, workers);
  out.control_variate = !values.control.empty();
  double control_variance = 0.0;
  if (out.control_variate) {
    control_variance =
        InfluenceTable(config.weight, config.distribution, config.alpha, config.beta).variance();
  }

  const std::size_t reps = values.centered.size();
  std::vector<Moments> batches(kBatches);
  for (std::size_t b = 0; b < kBatches; ++b) {
    for (std::size_t r = batch_begin(b, kBatches, reps); r < batch_begin(b + 1, kBatches, reps);
         ++r) {
      const double l = values.centered[r];
      Moments& m = batches[b];
      m.count += 1.0;
      m.sum_l += l;
      m.sum_ll += l * l;
      if (out.control_variate) {
        const double h = values.control[r];
        m.sum_h += h;
        m.sum_hh += h * h;
      }
    }
  }
  Moments total;
  for (const auto& m : batches) total += m;

  const double nd = static_cast<double>(n);
  auto plain = [&](const Moments& m) { return std::sqrt(std::max(m.var_l(), 0.0) * nd) / sigma; };
  auto controlled = [&](const Moments& m) {
    const double v = m.var_l() - m.var_h() + control_variance / nd;
    return std::sqrt(std::max(v, 0.0) * nd) / sigma;
  };

  out.ratio_plain = plain(total);
  std::vector<double> loo(kBatches);
  for (std::size_t b = 0; b < kBatches; ++b) loo[b] = plain(total - batches[b]);
  out.se_plain = jackknife_se(loo);
  if (out.control_variate) {
    out.ratio = controlled(total);
    for (std::size_t b = 0; b < kBatches; ++b) loo[b] = controlled(total - batches[b]);
    out.se = jackknife_se(loo);
  } else {
    out.ratio = out.ratio_plain;
    out.se = out.se_plain;
  }
  return out;
}

std::vector<RemainderRow> remainder_diagnostics(const ExperimentConfig& config, double epsilon1,
                                                std::size_t workers) {
  if (!(epsilon1 > 0.0)) throw DomainError("epsilon_1 must be positive");
  if (config.replications < kBatches) {
    throw ConfigError("remainder diagnostics need at least " + std::to_string(kBatches) +
                      " replications");
  }
  const double sigma = configured_sigma(config);
  std::vector<RemainderRow> rows;
  for (std::size_t n : config.n_grid) {
    const TrimSpec trim = config.trim_for(n);
    const Decomposer decomposer(config.weight, config.scheme_for(n), trim, config.distribution);
    const std::size_t reps = config.replications;
    std::vector<double> rem(reps), pert(reps), resid(reps);
    parallel_blocks(reps, workers, [&](std::size_t begin, std::size_t end) {
      std::vector<double> x;
      for (std::size_t r = begin; r < end; ++r) {
        sorted_uniforms(config.seed, n, r, x);
        for (auto& v : x) v = config.distribution.quantile_unchecked(v);
        const DecompositionResult d = decomposer(x);
        rem[r] = d.remainder();
        pert[r] = d.v_n;
        resid[r] = d.identity_residual();
      }
    });

    const double nd = static_cast<double>(n);
    const double root_n = std::sqrt(nd);
    RemainderRow row;
    row.n = n;
    row.delta_n = std::pow(std::log(nd + 1.0), -0.5 - epsilon1);
    std::size_t exceed_r = 0, exceed_v = 0;
    double sum_rv = 0.0, sum_rv2 = 0.0;
    for (std::size_t r = 0; r < reps; ++r) {
      if (root_n * std::abs(rem[r]) / sigma > row.delta_n) ++exceed_r;
      if (root_n * std::abs(pert[r]) / sigma > row.delta_n) ++exceed_v;
      const double rv = rem[r] + pert[r];
      sum_rv += rv;
      sum_rv2 += rv * rv;
      row.max_identity_residual = std::max(row.max_identity_residual, resid[r]);
    }
    const double count = static_cast<double>(reps);
    row.p_remainder = static_cast<double>(exceed_r) / count;
    row.p_perturbation = static_cast<double>(exceed_v) / count;
    row.n_var_rv = nd * (sum_rv2 - sum_rv * sum_rv / count) / (count - 1.0);

    std::vector<double> batch_means(kBatches, 0.0);
    double total = 0.0;
    for (std::size_t b = 0; b < kBatches; ++b) {
      const std::size_t lo = batch_begin(b, kBatches, reps), hi = batch_begin(b + 1, kBatches, reps);
      double s = 0.0;
      for (std::size_t r = lo; r < hi; ++r) s += nd * rem[r] * rem[r];
      total += s;
      batch_means[b] = s / static_cast<double>(hi - lo);
    }
    row.n_mean_r2 = total / count;
    double ss = 0.0;
    for (double m : batch_means) ss += (m - row.n_mean_r2) * (m - row.n_mean_r2);
    row.n_mean_r2_se = std::sqrt(ss / static_cast<double>(kBatches - 1) / static_cast<double>(kBatches));
    rows.push_back(row);
  }
  return rows;
}

}  // namespace tlstat
