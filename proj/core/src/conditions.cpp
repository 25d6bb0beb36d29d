#include "tlstat/conditions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tlstat/error.hpp"

namespace tlstat {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Growth of Delta_n / (|t| h_n) across the n grid still regarded as bounded.
constexpr double kLipschitzGrowth = 2.0;

double rate(std::size_t n) {
  const double nd = static_cast<double>(n);
  return std::sqrt(std::log(nd) / nd);
}

double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double m = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

std::string format(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// Decay exponent epsilon at one point and one t; +inf for locally Lipschitz behavior.
double point_epsilon(const Distribution& dist, double p, double t,
                     const std::vector<std::size_t>& n_grid) {
  const double base = dist.quantile_unchecked(p);
  std::vector<double> log_log_n, log_delta, lipschitz_ratio;
  for (std::size_t n : n_grid) {
    const double h = rate(n);
    const double delta = std::abs(dist.quantile_unchecked(p + t * h) - base);
    lipschitz_ratio.push_back(delta / (std::abs(t) * h));
    if (delta > 0.0) {
      log_log_n.push_back(std::log(std::log(static_cast<double>(n))));
      log_delta.push_back(std::log(delta));
    }
  }
  if (log_delta.empty()) return kInf;
  const double first = lipschitz_ratio.front();
  const double worst = *std::max_element(lipschitz_ratio.begin(), lipschitz_ratio.end());
  if (first > 0.0 && worst <= kLipschitzGrowth * first) return kInf;
  if (log_delta.size() < 2) return -1.0;
  return -slope(log_log_n, log_delta) - 1.0;
}

}  // namespace

std::string_view status_name(ConditionStatus s) {
  switch (s) {
    case ConditionStatus::kPass: return "pass";
    case ConditionStatus::kFail: return "fail";
    case ConditionStatus::kNotApplicable: return "not-applicable";
  }
  return "not-applicable";
}

bool ConditionReport::all_ok() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.ok(); });
}

const ConditionResult& ConditionReport::get(std::string_view name) const {
  for (const auto& r : results)
    if (r.name == name) return r;
  throw Error("no condition named '" + std::string(name) + "'");
}

ConditionResult check_lipschitz(const WeightSpec& weight, std::size_t grid_size) {
  ConditionResult r;
  r.name = "i";
  r.measured = lipschitz_estimate(weight, grid_size);
  r.status = r.measured <= weight.lipschitz() + 1e-9 ? ConditionStatus::kPass
                                                     : ConditionStatus::kFail;
  r.detail = "estimate " + format(r.measured) + " vs declared " + format(weight.lipschitz());
  return r;
}

ConditionResult check_quantile_smoothness(const Distribution& dist, double alpha, double beta,
                                          std::vector<double> t_grid,
                                          const std::vector<std::size_t>& n_grid,
                                          double epsilon) {
  if (n_grid.size() < 2 || !std::is_sorted(n_grid.begin(), n_grid.end()) ||
      std::adjacent_find(n_grid.begin(), n_grid.end()) != n_grid.end() || n_grid.front() < 3) {
    throw DomainError("n grid must be strictly increasing with at least two values >= 3");
  }
  for (double t : t_grid) {
    if (!std::isfinite(t)) throw DomainError("t grid must be finite");
    if (std::find(t_grid.begin(), t_grid.end(), -t) == t_grid.end()) {
      throw DomainError("t grid must be symmetric about 0");
    }
  }
  ConditionResult r;
  r.name = "ii";
  const double h_max = rate(n_grid.front());  // h_n is decreasing for n >= 3
  std::vector<double> usable;
  for (double t : t_grid) {
    if (t == 0.0) continue;
    const bool inside = alpha + t * h_max > 0.0 && alpha + t * h_max < 1.0 &&
                        1.0 - beta + t * h_max > 0.0 && 1.0 - beta + t * h_max < 1.0;
    if (inside) {
      usable.push_back(t);
    } else {
      r.warnings.push_back("t = " + format(t) + " dropped: perturbed point leaves (0,1)");
    }
  }
  if (usable.empty()) {
    r.status = ConditionStatus::kNotApplicable;
    r.detail = "no usable t values";
    return r;
  }
  double eps = kInf;
  std::string worst_at;
  for (double p : {alpha, 1.0 - beta}) {
    for (double t : usable) {
      const double e = point_epsilon(dist, p, t, n_grid);
      if (e < eps) {
        eps = e;
        worst_at = "p=" + format(p) + " t=" + format(t);
      }
    }
  }
  r.measured = eps;
  r.status = eps >= epsilon ? ConditionStatus::kPass : ConditionStatus::kFail;
  r.detail = std::isinf(eps) ? "epsilon unbounded (locally Lipschitz)"
                             : "epsilon " + format(eps) + " at " + worst_at +
                                   ", required " + format(epsilon);
  return r;
}

ConditionResult check_trim_rate(const std::vector<TrimSpec>& trims, double bound) {
  ConditionResult r;
  r.name = "iii";
  if (trims.size() < 3) {
    r.status = ConditionStatus::kNotApplicable;
    r.detail = "needs at least three sample sizes";
    return r;
  }
  double worst = 0.0;
  for (const auto& trim : trims) {
    const double dev =
        std::max(std::abs(trim.alpha_n() - trim.alpha()), std::abs(trim.beta_n() - trim.beta()));
    worst = std::max(worst, dev / rate(trim.n()));
  }
  r.measured = worst;
  r.status = worst <= bound ? ConditionStatus::kPass : ConditionStatus::kFail;
  r.detail = "max ratio " + format(worst) + " vs bound " + format(bound);
  return r;
}

ConditionResult check_coefficient_sum(
    const std::vector<std::pair<std::size_t, CoefficientScheme>>& schemes, double epsilon_tilde,
    double bound) {
  ConditionResult r;
  r.name = "iv";
  if (schemes.empty()) {
    r.status = ConditionStatus::kNotApplicable;
    r.detail = "no sample sizes";
    return r;
  }
  double worst = 0.0;
  for (const auto& [n, scheme] : schemes) {
    double sum = 0.0;
    for (std::size_t j = 0; j < scheme.exact.size(); ++j) {
      sum += std::abs(scheme.exact[j] - scheme.reference[j]);
    }
    worst = std::max(worst, sum / perturbation_bound(n, epsilon_tilde));
  }
  r.measured = worst;
  r.status = worst <= bound * (1.0 + 1e-9) ? ConditionStatus::kPass : ConditionStatus::kFail;
  r.detail = "max ratio " + format(worst) + " vs bound " + format(bound);
  return r;
}

ConditionReport check_conditions(const ExperimentConfig& config) {
  const ConditionOptions& opts = config.conditions;
  ConditionReport report;
  report.results.push_back(check_lipschitz(config.weight, opts.lipschitz_grid));
  report.results.push_back(check_quantile_smoothness(config.distribution, config.alpha,
                                                     config.beta, opts.t_grid, opts.n_grid,
                                                     opts.epsilon));
  std::vector<TrimSpec> trims;
  std::vector<std::pair<std::size_t, CoefficientScheme>> schemes;
  for (std::size_t n : opts.n_grid) {
    trims.push_back(config.trim_for(n));
    schemes.emplace_back(n, config.scheme_for(n));
  }
  report.results.push_back(check_trim_rate(trims, opts.trim_bound));
  report.results.push_back(
      check_coefficient_sum(schemes, config.perturbation.epsilon, opts.coef_bound));

  const auto& smooth = report.get("ii");
  if (smooth.status == ConditionStatus::kPass) report.epsilon = smooth.measured;
  if (report.get("iv").status == ConditionStatus::kPass) {
    report.epsilon_tilde =
        config.perturbation.kind == Perturbation::Kind::kNone ? kInf : config.perturbation.epsilon;
  }
  if (report.epsilon && report.epsilon_tilde) {
    report.nu = std::min(*report.epsilon, *report.epsilon_tilde);
  }
  return report;
}

}  // namespace tlstat
