#include "tlstat/trim.hpp"

#include <cmath>
#include <string>

#include "tlstat/error.hpp"

namespace tlstat {

TrimRule::Rounding rounding_from_name(std::string_view name) {
  if (name == "floor") return TrimRule::Rounding::kFloor;
  if (name == "round") return TrimRule::Rounding::kRound;
  if (name == "ceil") return TrimRule::Rounding::kCeil;
  throw TrimError("unknown trim rounding '" + std::string(name) + "'");
}

std::string_view rounding_name(TrimRule::Rounding r) {
  switch (r) {
    case TrimRule::Rounding::kFloor: return "floor";
    case TrimRule::Rounding::kRound: return "round";
    case TrimRule::Rounding::kCeil: return "ceil";
  }
  return "floor";
}

TrimSpec::TrimSpec(std::size_t n, std::size_t k, std::size_t m, double alpha, double beta)
    : n_(n), k_(k), m_(m), alpha_(alpha), beta_(beta) {
  if (!(alpha > 0.0 && alpha < 1.0 - beta && 1.0 - beta < 1.0)) {
    throw TrimError("heavy trimming violated: need 0 < alpha < 1 - beta < 1");
  }
  if (n == 0 || !(k < n - std::min(m, n)) || m > n) {
    throw TrimError("trim counts violate 0 <= k < n - m <= n (n=" + std::to_string(n) +
                    ", k=" + std::to_string(k) + ", m=" + std::to_string(m) + ")");
  }
}

TrimSpec TrimSpec::from_rule(std::size_t n, double alpha, double beta, const TrimRule& rule) {
  const double nd = static_cast<double>(n);
  const double offset = rule.offset_scale * std::pow(nd, -rule.offset_exponent);
  auto count = [&](double proportion) -> std::size_t {
    const double target = nd * (proportion + offset);
    double c = 0.0;
    switch (rule.rounding) {
      case TrimRule::Rounding::kFloor: c = std::floor(target + 1e-9); break;
      case TrimRule::Rounding::kRound: c = std::round(target); break;
      case TrimRule::Rounding::kCeil: c = std::ceil(target - 1e-9); break;
    }
    if (c < 0.0) c = 0.0;
    if (c > nd) c = nd;
    return static_cast<std::size_t>(c);
  };
  return TrimSpec(n, count(alpha), count(beta), alpha, beta);
}

}  // namespace tlstat
