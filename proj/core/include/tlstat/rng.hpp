#pragma once

#include <cstdint>
#include <random>

namespace tlstat {

// A single-owner random stream. Streams are derived from a base seed and a
// pair of counters, so replicate r of an experiment always sees the same
// numbers no matter which worker thread runs it.
class Stream {
 public:
  Stream(std::uint64_t seed, std::uint64_t key0, std::uint64_t key1 = 0);

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on the open interval (0,1) with 53 random bits.
  double uniform_open() {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace tlstat
