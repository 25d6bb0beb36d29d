#include <cmath>
#include <vector>

#include "doctest.h"
#include "tlstat/conditions.hpp"
#include "tlstat/error.hpp"

using namespace tlstat;

namespace {

const std::vector<double> kT{-4, -2, -1, -0.5, 0.5, 1, 2, 4};
const std::vector<std::size_t> kN{500, 2000, 8000, 32000};

std::vector<std::pair<std::size_t, CoefficientScheme>> schemes(const Perturbation& p) {
  std::vector<std::pair<std::size_t, CoefficientScheme>> out;
  for (std::size_t n : kN) {
    Stream s(7, n, 1);
    out.emplace_back(n, make_scheme(WeightSpec::polynomial({0.0, 1.0}),
                                    TrimSpec::from_rule(n, 0.25, 0.25), p, s));
  }
  return out;
}

std::vector<TrimSpec> trims(double scale) {
  std::vector<TrimSpec> out;
  for (std::size_t n : kN) {
    out.push_back(TrimSpec::from_rule(n, 0.2, 0.2, {TrimRule::Rounding::kFloor, scale, 0.25}));
  }
  return out;
}

}  // namespace

TEST_CASE("status names") {
  CHECK(status_name(ConditionStatus::kPass) == "pass");
  CHECK(status_name(ConditionStatus::kFail) == "fail");
  CHECK(status_name(ConditionStatus::kNotApplicable) == "not-applicable");
}

TEST_CASE("condition (i)") {
  CHECK(check_lipschitz(WeightSpec::constant(1.0, {0, 1}, 0.0)).status == ConditionStatus::kPass);
  CHECK(check_lipschitz(WeightSpec::polynomial({0, 1}, {0, 1}, 0.5)).status == ConditionStatus::kFail);
  CHECK(check_lipschitz(WeightSpec::polynomial({0, 0, 1}, {0.1, 0.9}, 1.8)).status ==
        ConditionStatus::kPass);
}

TEST_CASE("condition (ii)") {
  const auto u = check_quantile_smoothness(Distribution::uniform(), 0.25, 0.25, kT, kN, 0.5);
  CHECK(u.status == ConditionStatus::kPass);
  CHECK(std::isinf(u.measured));
  CHECK(u.detail.find("unbounded") != std::string::npos);

  const auto mix = Distribution::two_point_mixture(0.25, 0.0, 1.0, 2.0, 3.0);
  CHECK(check_quantile_smoothness(mix, 0.25, 0.25, kT, kN, 0.5).status == ConditionStatus::kFail);
  const auto pm = check_quantile_smoothness(Distribution::point_mass(1.0), 0.25, 0.25, kT, kN, 0.5);
  CHECK(pm.status == ConditionStatus::kPass);

  for (const auto& d : {Distribution::normal(), Distribution::exponential(), Distribution::pareto(2.0),
                        Distribution::cauchy()}) {
    CHECK(check_quantile_smoothness(d, 0.1, 0.2, kT, kN, 0.5).status == ConditionStatus::kPass);
  }
}

TEST_CASE("condition (ii) grid handling") {
  const auto r = check_quantile_smoothness(Distribution::normal(), 0.05, 0.25, kT, kN, 0.5);
  CHECK_FALSE(r.warnings.empty());
  CHECK(r.status == ConditionStatus::kPass);
  CHECK_THROWS_AS(check_quantile_smoothness(Distribution::normal(), 0.25, 0.25, {1.0, -2.0}, kN, 0.5),
                  DomainError);
  CHECK_THROWS_AS(check_quantile_smoothness(Distribution::normal(), 0.25, 0.25, kT, {2000, 500}, 0.5),
                  DomainError);
}

TEST_CASE("condition (iii)") {
  CHECK(check_trim_rate(trims(0.0), 1.0).status == ConditionStatus::kPass);
  CHECK(check_trim_rate(trims(1.0), 1.0).status == ConditionStatus::kFail);
  std::vector<TrimSpec> exact;
  for (std::size_t n : kN) exact.push_back(TrimSpec::from_rule(n, 0.25, 0.25));
  const auto r = check_trim_rate(exact, 1.0);
  CHECK(r.status == ConditionStatus::kPass);
  CHECK(r.measured == 0.0);
  CHECK(check_trim_rate({exact[0], exact[1]}, 1.0).status == ConditionStatus::kNotApplicable);
}

TEST_CASE("condition (iv)") {
  const auto none = check_coefficient_sum(schemes({}), 1.0, 1.0);
  CHECK(none.status == ConditionStatus::kPass);
  CHECK(none.measured == 0.0);
  const auto sat = check_coefficient_sum(schemes({Perturbation::Kind::kSaturating, 0.5, 1.0}), 0.5, 1.0);
  CHECK(sat.status == ConditionStatus::kPass);
  CHECK(std::abs(sat.measured - 1.0) <= 1e-12);
  CHECK(check_coefficient_sum(schemes({Perturbation::Kind::kConstant, 1.0, 1.0}), 1.0, 1.0).status ==
        ConditionStatus::kFail);
}

TEST_CASE("positive and negative controls") {
  ExperimentConfig pos;
  pos.distribution = Distribution::normal();
  pos.weight = WeightSpec::polynomial({0.0, 0.0, 1.0});
  pos.perturbation = {Perturbation::Kind::kSaturating, 0.5, 1.0};
  const auto rp = check_conditions(pos);
  CHECK(rp.all_ok());
  REQUIRE(rp.nu.has_value());
  CHECK(*rp.nu == std::min(*rp.epsilon, *rp.epsilon_tilde));
  CHECK(*rp.nu == 0.5);

  ExperimentConfig neg;
  neg.distribution = Distribution::two_point_mixture(0.25, 0.0, 1.0, 2.0, 3.0);
  const auto rn = check_conditions(neg);
  CHECK(rn.get("i").status == ConditionStatus::kPass);
  CHECK(rn.get("ii").status == ConditionStatus::kFail);
  CHECK(rn.get("iii").status == ConditionStatus::kPass);
  CHECK(rn.get("iv").status == ConditionStatus::kPass);
  CHECK_FALSE(rn.nu.has_value());
  CHECK_THROWS_AS((void)rn.get("v"), Error);
}
