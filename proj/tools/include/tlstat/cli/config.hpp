#pragma once

// JSON experiment configuration: parsing with defaults, the canonical
// resolved form, and its hash.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "tlstat/experiment.hpp"

namespace tlstat::cli {

struct ResolvedConfig {
  ExperimentConfig experiment;
  nlohmann::json canonical;  // every key, defaults applied
  std::uint64_t hash = 0;    // FNV-1a of the canonical dump
};

// Throws ConfigError for unknown, missing or ill-typed keys and TrimError for
// violations of 0 < alpha < 1 - beta < 1.
ResolvedConfig parse_config(std::string_view text);
ResolvedConfig load_config(const std::filesystem::path& path);

// Canonical form and hash of an already built configuration.
nlohmann::json canonical_json(const ExperimentConfig& config);
ResolvedConfig resolve(ExperimentConfig config);

std::uint64_t fnv1a(std::string_view bytes);
std::string hex64(std::uint64_t v);

}  // namespace tlstat::cli
