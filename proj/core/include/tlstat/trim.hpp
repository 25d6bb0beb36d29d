#pragma once

#include <cstddef>
#include <string_view>

namespace tlstat {

// How k_n and m_n follow from (n, alpha, beta). The target proportion is
// alpha + offset_scale * n^(-offset_exponent) (same for beta), then rounded.
struct TrimRule {
  enum class Rounding { kFloor, kRound, kCeil };
  Rounding rounding = Rounding::kFloor;
  double offset_scale = 0.0;
  double offset_exponent = 0.25;
};

TrimRule::Rounding rounding_from_name(std::string_view name);
std::string_view rounding_name(TrimRule::Rounding r);

// Heavy trimming: the lowest k and highest m order statistics of a sample of
// size n are discarded, with k/n -> alpha, m/n -> beta and
// 0 < alpha < 1 - beta < 1.
class TrimSpec {
 public:
  TrimSpec(std::size_t n, std::size_t k, std::size_t m, double alpha, double beta);

  static TrimSpec from_rule(std::size_t n, double alpha, double beta, const TrimRule& rule = {});

  std::size_t n() const { return n_; }
  std::size_t k() const { return k_; }
  std::size_t m() const { return m_; }
  double alpha() const { return alpha_; }
  double beta() const { return beta_; }
  double alpha_n() const { return static_cast<double>(k_) / static_cast<double>(n_); }
  double beta_n() const { return static_cast<double>(m_) / static_cast<double>(n_); }
  // Number of retained order statistics, n - m - k.
  std::size_t kept() const { return n_ - m_ - k_; }

 private:
  std::size_t n_, k_, m_;
  double alpha_, beta_;
};

}  // namespace tlstat
