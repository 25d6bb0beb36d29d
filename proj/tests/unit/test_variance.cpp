#include <cmath>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tlstat/error.hpp"
#include "tlstat/variance.hpp"

using namespace tlstat;
using oracle::near;

namespace {

std::vector<Distribution> continuous_families() {
  return {Distribution::uniform(), Distribution::uniform(-2.0, 3.0), Distribution::exponential(),
          Distribution::exponential(3.0), Distribution::normal(), Distribution::normal(1.0, 0.5),
          Distribution::pareto(3.0), Distribution::pareto(0.8, 2.0), Distribution::cauchy(),
          Distribution::cauchy(1.0, 2.0)};
}

std::vector<WeightSpec> builtin_weights() {
  return {WeightSpec::constant(1.0), WeightSpec::polynomial({0.0, 1.0}),
          WeightSpec::polynomial({0.0, 0.0, 1.0}),
          WeightSpec::piecewise_linear({{0.0, 1.0}, {0.5, 0.2}, {1.0, 1.5}})};
}

}  // namespace

TEST_CASE("variance examples") {
  CHECK(asymptotic_variance(WeightSpec::constant(0.0), Distribution::normal(), .25, .25).sigma2 ==
        0.0);
  const auto full = asymptotic_variance(WeightSpec::constant(1.0), Distribution::uniform(), 0, 0);
  CHECK(near(full.sigma2, 1.0 / 12.0, 1e-8));
  CHECK(full.method == "triangle-split");

  const auto trimmed =
      asymptotic_variance(WeightSpec::constant(1.0), Distribution::uniform(), .25, .25);
  const double dense = oracle::sigma2_dense([](double) { return 1.0; }, [](double) { return 1.0; },
                                            0.25, 0.75, 4000);
  CHECK(near(trimmed.sigma2, dense, 1e-6));
  // Closed form for J = 1, uniform: Var of the clipped uniform on [.25,.75].
  CHECK(near(trimmed.sigma2, 1.0 / 24.0, 1e-12));
}

TEST_CASE("variance against the dense-grid oracle") {
  const auto w = WeightSpec::polynomial({0.0, 0.0, 1.0});
  for (const auto& d : {Distribution::exponential(), Distribution::normal(), Distribution::pareto(2.0)}) {
    const double v = asymptotic_variance(w, d, 0.2, 0.3).sigma2;
    const double dense = oracle::sigma2_dense(
        [&](double u) { return w(u); }, [&](double u) { return *d.quantile_density(u); }, 0.2, 0.7,
        3000);
    INFO(d.describe());
    CHECK(near(v, dense, 1e-6));
  }
}

TEST_CASE("degenerate and invalid inputs") {
  const auto pm = asymptotic_variance(WeightSpec::constant(1.0), Distribution::point_mass(2.0), .25, .25);
  CHECK(pm.sigma2 == 0.0);
  CHECK(pm.method == "degenerate");
  CHECK(winsorized_variance(WeightSpec::constant(1.0), winsorized(Distribution::point_mass(2.0), .25, .25))
            .sigma2 == 0.0);
  CHECK(winsorized_variance(WeightSpec::constant(0.0), winsorized(Distribution::normal(), .25, .25))
            .sigma2 == 0.0);
  CHECK_THROWS_AS(asymptotic_variance(WeightSpec::constant(1.0), Distribution::exponential(), .25, 0.0),
                  DomainError);
  CHECK_THROWS_AS(asymptotic_variance(WeightSpec::constant(1.0), Distribution::cauchy(), .005, .25),
                  DomainError);
  CHECK_THROWS_AS(asymptotic_variance(WeightSpec::constant(1.0),
                                      Distribution::two_point_mixture(0.5, 0, 1, 2, 3), .25, .25),
                  DomainError);
  CHECK_THROWS_AS(asymptotic_variance(WeightSpec::constant(1.0, {0.3, 0.9}), Distribution::normal(),
                                      .25, .25),
                  DomainError);
  CHECK_THROWS_AS(asymptotic_variance(WeightSpec::constant(1.0), Distribution::normal(), .6, .5),
                  TrimError);
}

TEST_CASE("mixture with the jump outside the trim interval") {
  const auto mix = Distribution::two_point_mixture(0.25, 0.0, 1.0, 2.0, 3.0);
  const auto v = asymptotic_variance(WeightSpec::constant(1.0), mix, 0.3, 0.2);
  CHECK(v.sigma2 > 0.0);
  const auto u = asymptotic_variance(WeightSpec::constant(1.0), Distribution::uniform(2.0, 3.0 + 1.0 / 3.0),
                                     0.3, 0.2);
  // On (0.25, 1) the mixture quantile is uniform with slope 4/3.
  CHECK(near(v.sigma2, u.sigma2, 1e-10));
}

TEST_CASE("property: Winsorized variance equals the asymptotic variance") {
  for (const auto& d : continuous_families()) {
    for (const auto& w : builtin_weights()) {
      for (auto [a, b] : {std::pair{0.25, 0.25}, {0.1, 0.3}}) {
        const auto plain = asymptotic_variance(w, d, a, b);
        const auto wins = winsorized_variance(w, winsorized(d, a, b));
        INFO(d.describe() << " a=" << a << " b=" << b);
        CHECK(near(plain.sigma2, wins.sigma2, 1e-8));
        CHECK(near(plain.sigma2, wins.sigma2, 2 * (plain.abs_error + wins.abs_error) + 1e-15));
      }
    }
  }
}

TEST_CASE("property: the two triangles carry the same mass") {
  for (const auto& d : {Distribution::normal(), Distribution::exponential(), Distribution::pareto(2.0)}) {
    const auto w = WeightSpec::polynomial({1.0, -1.0, 2.0});
    auto f = [&](double u) { return w(u) * *d.quantile_density(u); };
    const std::vector<double> none;
    const auto below = kernel_triangle(f, 0.2, 0.7, none, 1e-11, Triangle::kBelow);
    const auto above = kernel_triangle(f, 0.2, 0.7, none, 1e-11, Triangle::kAbove);
    CHECK(near(below.sigma2, above.sigma2, 1e-12));
  }
}

TEST_CASE("property: location-scale changes multiply by the squared scale") {
  const auto w = WeightSpec::polynomial({0.0, 1.0});
  const double base = asymptotic_variance(w, Distribution::normal(), 0.2, 0.2).sigma2;
  const double moved = asymptotic_variance(w, Distribution::normal(-3.0, 2.5), 0.2, 0.2).sigma2;
  CHECK(near(moved, 6.25 * base, 1e-8));
  const double cb = asymptotic_variance(w, Distribution::cauchy(), 0.2, 0.2).sigma2;
  const double cm = asymptotic_variance(w, Distribution::cauchy(4.0, 0.5), 0.2, 0.2).sigma2;
  CHECK(near(cm, 0.25 * cb, 1e-8));
}

TEST_CASE("property: positivity for constant weights") {
  for (const auto& d : continuous_families()) {
    CHECK(asymptotic_variance(WeightSpec::constant(1.0), d, 0.25, 0.25).sigma2 > 0.0);
  }
}
