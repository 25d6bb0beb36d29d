#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "tlstat/cli/config.hpp"

namespace tlstat::cli {

enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitBreach = 2 };

struct RunOptions {
  std::filesystem::path out_dir = ".";
  std::size_t workers = 0;
  bool ignore_conditions = false;
  std::optional<std::uint64_t> seed;
};

struct RunManifest {
  std::filesystem::path config_path;
  ResolvedConfig config;
  std::string command;
  std::filesystem::path out_dir;
  std::string timestamp;  // UTC, ISO 8601
};

// Each command writes its CSV into manifest.out_dir and returns an exit code.
// Library errors propagate as exceptions.
int cmd_identity(const RunManifest& manifest, const RunOptions& opts, std::ostream& log);
int cmd_mdratio(const RunManifest& manifest, const RunOptions& opts, std::ostream& log);
int cmd_variance(const RunManifest& manifest, const RunOptions& opts, std::ostream& log);
int cmd_conditions(const RunManifest& manifest, const RunOptions& opts, std::ostream& log);
int cmd_diagnostics(const RunManifest& manifest, const RunOptions& opts, std::ostream& log);
// identity, conditions, mdratio, variance and diagnostics in turn.
int cmd_simulate(const RunManifest& manifest, const RunOptions& opts, std::ostream& log);

bool is_command(std::string_view name);

// Loads the config, applies overrides, writes manifest.json, dispatches, and
// maps every error to exit code 1.
int run_command(std::string_view command, const std::filesystem::path& config_path,
                const RunOptions& opts, std::ostream& log);

}  // namespace tlstat::cli
