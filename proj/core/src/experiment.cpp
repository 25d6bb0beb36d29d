#include "tlstat/experiment.hpp"

#include <string>

#include "tlstat/error.hpp"

namespace tlstat {

Normalization normalization_from_name(std::string_view name) {
  if (name == "sigma") return Normalization::kSigma;
  if (name == "empirical_variance") return Normalization::kEmpiricalVariance;
  throw ConfigError("unknown normalization '" + std::string(name) + "'");
}

std::string_view normalization_name(Normalization n) {
  return n == Normalization::kSigma ? "sigma" : "empirical_variance";
}

CoefficientScheme ExperimentConfig::scheme_for(std::size_t sample_size) const {
  Stream stream(seed, sample_size, std::uint64_t{1} << 63);
  return make_scheme(weight, trim_for(sample_size), perturbation, stream);
}

}  // namespace tlstat
