#include "tlstat/rng.hpp"

#include <array>

namespace tlstat {

namespace {

std::mt19937_64 seeded_engine(std::uint64_t seed, std::uint64_t key0, std::uint64_t key1) {
  const std::array<std::uint32_t, 6> words = {
      static_cast<std::uint32_t>(seed),       static_cast<std::uint32_t>(seed >> 32),
      static_cast<std::uint32_t>(key0),       static_cast<std::uint32_t>(key0 >> 32),
      static_cast<std::uint32_t>(key1),       static_cast<std::uint32_t>(key1 >> 32)};
  std::seed_seq seq(words.begin(), words.end());
  return std::mt19937_64(seq);
}

}  // namespace

Stream::Stream(std::uint64_t seed, std::uint64_t key0, std::uint64_t key1)
    : engine_(seeded_engine(seed, key0, key1)) {}

}  // namespace tlstat
