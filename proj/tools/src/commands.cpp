#include "tlstat/cli/commands.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <ostream>
#include <vector>

#include "tlstat/cli/csv.hpp"
#include "tlstat/conditions.hpp"
#include "tlstat/error.hpp"
#include "tlstat/lstat.hpp"
#include "tlstat/montecarlo.hpp"

namespace tlstat::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

json metadata(const RunManifest& m, const char* table, Clock::time_point start) {
  const auto& c = m.config.experiment;
  return {{"table", table},
          {"command", m.command},
          {"config_hash", hex64(m.config.hash)},
          {"seed", c.seed},
          {"n", c.n},
          {"R", c.replications},
          {"timestamp", m.timestamp},
          {"wall_seconds", seconds_since(start)}};
}

json optional_number(const std::optional<double>& v) {
  if (!v) return nullptr;
  if (std::isinf(*v)) return "inf";
  return *v;
}

std::string fmt(double v) { return format_number(v); }
template <std::integral T>
std::string fmt(T v) {
  return format_number(v);
}

int worst(int a, int b) {
  if (a == kExitConfig || b == kExitConfig) return kExitConfig;
  return std::max(a, b);
}

ConditionReport write_conditions(const RunManifest& m, std::ostream& log) {
  const auto start = Clock::now();
  const ConditionReport report = check_conditions(m.config.experiment);
  CsvTable table({"condition", "status", "measured", "detail"});
  for (const auto& r : report.results) {
    std::string detail = r.detail;
    for (const auto& w : r.warnings) detail += "; warning: " + w;
    std::replace(detail.begin(), detail.end(), ',', ';');
    table.add_row({r.name, std::string(status_name(r.status)), fmt(r.measured), detail});
    for (const auto& w : r.warnings) log << "warning: condition (" << r.name << "): " << w << '\n';
  }
  json meta = metadata(m, "conditions", start);
  meta["epsilon"] = optional_number(report.epsilon);
  meta["epsilon_tilde"] = optional_number(report.epsilon_tilde);
  meta["nu"] = optional_number(report.nu);
  table.write(m.out_dir / "conditions.csv", meta);
  for (const auto& r : report.results) {
    log << "condition (" << r.name << "): " << status_name(r.status) << " - " << r.detail << '\n';
  }
  return report;
}

std::string failed_conditions(const ConditionReport& report) {
  std::string out;
  for (const auto& r : report.results)
    if (!r.ok()) out += (out.empty() ? "(" : ", (") + r.name + ")";
  return out;
}

}  // namespace

int cmd_identity(const RunManifest& m, const RunOptions& opts, std::ostream& log) {
  const auto start = Clock::now();
  const ExperimentConfig& c = m.config.experiment;
  const TrimSpec trim = c.trim();
  const Decomposer decomposer(c.weight, c.scheme_for(c.n), trim, c.distribution);
  std::vector<DecompositionResult> results(c.replications);
  parallel_blocks(c.replications, opts.workers, [&](std::size_t begin, std::size_t end) {
    for (std::size_t r = begin; r < end; ++r) {
      Stream stream(c.seed, c.n, r);
      auto x = c.distribution.sample(c.n, stream);
      std::sort(x.begin(), x.end());
      results[r] = decomposer(x);
    }
  });

  CsvTable table({"replicate", "l_n", "l0_n", "lw_n", "mu_n", "mu_w", "r1", "r2", "v_n", "a_n",
                  "b_n", "n_alpha", "n_upper", "residual"});
  double max_residual = 0.0, max_l0 = 0.0;
  for (std::size_t r = 0; r < results.size(); ++r) {
    const auto& d = results[r];
    max_residual = std::max(max_residual, d.identity_residual());
    max_l0 = std::max(max_l0, std::abs(d.l0_n));
    table.add_row({fmt(r), fmt(d.l_n), fmt(d.l0_n), fmt(d.lw_n), fmt(d.mu_n), fmt(d.mu_w),
                   fmt(d.r1), fmt(d.r2), fmt(d.v_n), fmt(d.a_n), fmt(d.b_n), fmt(d.n_alpha),
                   fmt(d.n_upper), fmt(d.identity_residual())});
  }
  const double tolerance = 1e-10 * (1.0 + max_l0);
  const bool ok = max_residual <= tolerance;
  json meta = metadata(m, "identity", start);
  meta["max_residual"] = max_residual;
  meta["tolerance"] = tolerance;
  table.write(m.out_dir / "identity.csv", meta);
  log << "identity: max residual " << max_residual << " vs tolerance " << tolerance
      << (ok ? " - ok" : " - BREACH") << '\n';
  return ok ? kExitOk : kExitBreach;
}

int cmd_mdratio(const RunManifest& m, const RunOptions& opts, std::ostream& log) {
  const ExperimentConfig& c = m.config.experiment;
  const ConditionReport conditions = write_conditions(m, log);

  const auto start = Clock::now();
  const TailReport report = run_tails(c, {opts.workers, false});
  if (!report.dropped.empty()) {
    log << "warning: tail floor: " << report.dropped.size()
        << " grid point(s) have normal tail below " << c.tail_floor << "/R and were dropped (x >= "
        << report.dropped.front() << ")\n";
  }
  CsvTable table({"x", "p_upper", "p_lower", "normal_tail", "ratio_upper", "ratio_lower", "se",
                  "n", "R", "seed"});
  for (const auto& row : report.rows) {
    table.add_row({fmt(row.x), fmt(row.p_upper), fmt(row.p_lower), fmt(row.normal_tail),
                   fmt(row.ratio_upper), fmt(row.ratio_lower),
                   fmt(std::max(row.se_upper, row.se_lower)), fmt(report.n),
                   fmt(report.replications), fmt(report.seed)});
  }
  const bool within = tails_within_band(report, c.md_band, c.md_se_multiplier);
  json meta = metadata(m, "tails", start);
  meta["sigma"] = report.sigma;
  meta["mu_n"] = report.mu_n;
  meta["normalization"] = normalization_name(report.normalization);
  meta["kolmogorov"] = report.kolmogorov;
  meta["dropped"] = report.dropped;
  meta["within_band"] = within;
  table.write(m.out_dir / "tails.csv", meta);
  log << "mdratio: " << report.rows.size() << " grid points, Kolmogorov distance "
      << report.kolmogorov << ", band " << (within ? "holds" : "BREACHED") << '\n';

  if (!conditions.all_ok() && !opts.ignore_conditions) {
    log << "mdratio: hypotheses violated " << failed_conditions(conditions)
        << "; pass --ignore-conditions to judge the band alone\n";
    return kExitBreach;
  }
  return within ? kExitOk : kExitBreach;
}

int cmd_variance(const RunManifest& m, const RunOptions& opts, std::ostream& log) {
  const ExperimentConfig& c = m.config.experiment;
  if (!(c.distribution.moment_bound() > 0.0) && !opts.ignore_conditions) {
    throw ConfigError("moment condition violated: " + c.distribution.describe() +
                      " has no finite absolute moment of positive order");
  }
  const auto start = Clock::now();
  CsvTable table({"n", "R", "seed", "sigma2", "ratio", "se", "ratio_plain", "se_plain",
                  "control_variate", "deviation"});
  VarianceRatio last;
  for (std::size_t n : c.n_grid) {
    last = variance_ratio(c, n, opts.workers, !opts.ignore_conditions);
    table.add_row({fmt(n), fmt(last.replications), fmt(c.seed), fmt(last.sigma2), fmt(last.ratio),
                   fmt(last.se), fmt(last.ratio_plain), fmt(last.se_plain),
                   last.control_variate ? "1" : "0", fmt(std::abs(last.ratio - 1.0))});
    log << "variance: n=" << n << " ratio " << last.ratio << " (se " << last.se << ")\n";
  }
  const bool ok = std::abs(last.ratio - 1.0) <= c.variance_band;
  json meta = metadata(m, "variance", start);
  meta["band"] = c.variance_band;
  meta["within_band"] = ok;
  table.write(m.out_dir / "variance.csv", meta);
  log << "variance: final ratio " << (ok ? "within" : "OUTSIDE") << " 1 +/- " << c.variance_band
      << '\n';
  return ok ? kExitOk : kExitBreach;
}

int cmd_conditions(const RunManifest& m, const RunOptions&, std::ostream& log) {
  return write_conditions(m, log).all_ok() ? kExitOk : kExitBreach;
}

int cmd_diagnostics(const RunManifest& m, const RunOptions& opts, std::ostream& log) {
  const ExperimentConfig& c = m.config.experiment;
  const auto start = Clock::now();
  const auto rows = remainder_diagnostics(c, c.diagnostics_epsilon, opts.workers);
  CsvTable table({"n", "delta_n", "p_remainder", "p_perturbation", "n_mean_r2", "n_mean_r2_se",
                  "n_var_rv", "max_identity_residual"});
  for (const auto& r : rows) {
    table.add_row({fmt(r.n), fmt(r.delta_n), fmt(r.p_remainder), fmt(r.p_perturbation),
                   fmt(r.n_mean_r2), fmt(r.n_mean_r2_se), fmt(r.n_var_rv),
                   fmt(r.max_identity_residual)});
    log << "diagnostics: n=" << r.n << " n*E(R^2) " << r.n_mean_r2 << " (se " << r.n_mean_r2_se
        << ")\n";
  }
  json meta = metadata(m, "diagnostics", start);
  meta["epsilon1"] = c.diagnostics_epsilon;
  table.write(m.out_dir / "diagnostics.csv", meta);
  return kExitOk;
}

int cmd_simulate(const RunManifest& m, const RunOptions& opts, std::ostream& log) {
  int code = cmd_identity(m, opts, log);
  code = worst(code, cmd_mdratio(m, opts, log));
  try {
    code = worst(code, cmd_variance(m, opts, log));
  } catch (const ConfigError& e) {
    log << "variance: " << e.what() << '\n';
    code = worst(code, kExitConfig);
  }
  code = worst(code, cmd_diagnostics(m, opts, log));
  return code;
}

bool is_command(std::string_view name) {
  static constexpr std::array<std::string_view, 6> kNames = {
      "identity", "mdratio", "variance", "conditions", "diagnostics", "simulate"};
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

int run_command(std::string_view command, const std::filesystem::path& config_path,
                const RunOptions& opts, std::ostream& log) {
  try {
    if (!is_command(command)) throw ConfigError("unknown command '" + std::string(command) + "'");
    RunManifest m;
    m.command = command;
    m.config_path = config_path;
    m.config = load_config(config_path);
    if (opts.seed) {
      ExperimentConfig c = m.config.experiment;
      c.seed = *opts.seed;
      m.config = resolve(std::move(c));
    }
    m.out_dir = opts.out_dir;
    m.timestamp = utc_timestamp();
    std::filesystem::create_directories(m.out_dir);
    {
      std::ofstream out(m.out_dir / "manifest.json");
      out << json{{"config_path", m.config_path.string()},
                  {"command", m.command},
                  {"out_dir", m.out_dir.string()},
                  {"timestamp", m.timestamp},
                  {"config_hash", hex64(m.config.hash)},
                  {"config", m.config.canonical}}
                 .dump(2)
          << '\n';
    }
    if (command == "identity") return cmd_identity(m, opts, log);
    if (command == "mdratio") return cmd_mdratio(m, opts, log);
    if (command == "variance") return cmd_variance(m, opts, log);
    if (command == "conditions") return cmd_conditions(m, opts, log);
    if (command == "diagnostics") return cmd_diagnostics(m, opts, log);
    return cmd_simulate(m, opts, log);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace tlstat::cli
