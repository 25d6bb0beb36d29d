#include <cmath>
#include <numeric>
#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "tlstat/error.hpp"
#include "tlstat/weights.hpp"

using namespace tlstat;
using oracle::near;

namespace {

std::vector<WeightSpec> builtin_weights() {
  return {WeightSpec::constant(1.0), WeightSpec::polynomial({0.0, 1.0}),
          WeightSpec::polynomial({0.0, 0.0, 1.0}), WeightSpec::polynomial({1.0, -2.0, 3.0, -0.5}),
          WeightSpec::piecewise_linear({{0.0, 0.0}, {0.4, 1.0}, {0.7, 0.2}, {1.0, 0.5}})};
}

double abs_sum_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

}  // namespace

TEST_CASE("extend_weight examples") {
  const auto one = extend_weight(WeightSpec::constant(1.0), 0.3, 0.1);
  for (double u : {0.0, 0.1, 0.3, 0.5, 0.9, 1.0}) CHECK(one(u) == 1.0);
  CHECK(extend_weight(WeightSpec::polynomial({0.0, 1.0}), 0.25, 0.25)(0.1) == 0.25);
  CHECK(near(extend_weight(WeightSpec::polynomial({0.0, 0.0, 1.0}), 0.25, 0.25)(0.9), 0.5625,
             1e-15));
  CHECK_THROWS_AS(extend_weight(WeightSpec::constant(1.0, {0.3, 0.9}), 0.25, 0.25), DomainError);
  CHECK_THROWS_AS(extend_weight(WeightSpec::constant(1.0, {0.1, 0.75}), 0.25, 0.25), DomainError);
}

TEST_CASE("reference_coefficients examples") {
  const auto c = reference_coefficients(WeightSpec::constant(1.0), TrimSpec(10, 2, 2, 0.2, 0.2));
  CHECK(c == std::vector<double>(6, 1.0));
  const auto lin = reference_coefficients(WeightSpec::polynomial({0.0, 1.0}),
                                          TrimSpec(4, 1, 1, 0.25, 0.25));
  REQUIRE(lin.size() == 2);
  CHECK(near(lin[0], 0.375, 1e-15));
  CHECK(near(lin[1], 0.625, 1e-15));
  CHECK_THROWS_AS(reference_coefficients(WeightSpec::constant(1.0, {0.3, 0.9}),
                                         TrimSpec(10, 2, 2, 0.35, 0.2)),
                  DomainError);
}

TEST_CASE("weight integrals agree with a midpoint oracle") {
  for (const auto& w : builtin_weights()) {
    for (auto [a, b] : {std::pair{0.0, 1.0}, {0.13, 0.77}, {0.6, 0.2}}) {
      CHECK(near(w.integral(a, b), oracle::midpoint([&](double u) { return w(u); }, a, b, 200000),
                 1e-10));
    }
  }
}

TEST_CASE("perturbation examples") {
  const auto ref = reference_coefficients(WeightSpec::polynomial({0.0, 1.0}),
                                          TrimSpec(55, 13, 13, 0.25, 0.25));
  Stream s(5, 55, 1);
  CHECK(perturbed_coefficients(ref, 55, 1.0, 0.0, s) == ref);

  Stream s2(5, 55, 1);
  const auto c = perturbed_coefficients(ref, 55, 1.0, 1.0, s2);
  const double bound = perturbation_bound(55, 1.0);
  CHECK(near(bound, 0.9244813736242844, 1e-15));
  CHECK(near(abs_sum_diff(c, ref), bound, 1e-12));
  CHECK(near(perturbation_bound(static_cast<std::size_t>(std::round(std::exp(4.0))), 1.0),
             0.25 * std::sqrt(55.0 / 4.0), 0.01));

  Stream s3(5, 55, 1);
  CHECK(near(abs_sum_diff(perturbed_coefficients(ref, 55, 0.5, 3.0, s3), ref),
             3.0 * perturbation_bound(55, 0.5), 1e-12));
  CHECK_THROWS_AS(perturbation_bound(2, 1.0), DomainError);
  CHECK_THROWS_AS(perturbation_bound(100, 0.0), DomainError);
}

TEST_CASE("perturbation signs alternate and depend on the stream") {
  const std::vector<double> ref(10, 1.0);
  Stream s(9, 10, 1);
  const auto c = perturbed_coefficients(ref, 10, 1.0, 1.0, s);
  for (std::size_t i = 1; i < c.size(); ++i) CHECK((c[i] - 1.0) * (c[i - 1] - 1.0) < 0.0);
  const auto k = constant_perturbation(ref, 100, 1.0);
  CHECK(near(abs_sum_diff(k, ref), 1.0, 1e-14));
}

TEST_CASE("lipschitz_estimate examples") {
  CHECK(lipschitz_estimate(WeightSpec::constant(1.0), 1000) == 0.0);
  CHECK(near(lipschitz_estimate(WeightSpec::polynomial({0.0, 1.0}), 1000), 1.0, 1e-12));
  const double est = lipschitz_estimate(WeightSpec::polynomial({0.0, 0.0, 1.0}, {0.1, 0.9}), 1000);
  CHECK(est <= 1.8);
  CHECK(est >= 1.8 - 2.0 / 1000);
}

TEST_CASE("declared Lipschitz constants") {
  CHECK(WeightSpec::polynomial({0.0, 0.0, 1.0}, {0.1, 0.9}).lipschitz() >= 1.8);
  CHECK(WeightSpec::polynomial({0.0, 1.0}, {0.0, 1.0}, 0.5).lipschitz() == 0.5);
  CHECK(WeightSpec::piecewise_linear({{0.0, 0.0}, {0.5, 2.0}, {1.0, 0.0}}).lipschitz() == 4.0);
}

TEST_CASE("property: extension restricted to the trim interval is J") {
  for (const auto& w : builtin_weights()) {
    const auto jw = extend_weight(w, 0.2, 0.3);
    for (int i = 1; i <= 1000; ++i) {
      const double u = 0.2 + 0.5 * i / 1000.0;
      CHECK(near(jw(u), w(u), 1e-15));
    }
  }
}

TEST_CASE("property: extended coefficients telescope") {
  for (const auto& w : builtin_weights()) {
    const auto jw = extend_weight(w, 0.25, 0.15);
    for (std::size_t n : {7u, 100u, 2001u}) {
      const auto c = extended_coefficients(jw, n);
      const double total = std::accumulate(c.begin(), c.end(), 0.0);
      CHECK(near(total, static_cast<double>(n) * jw.integral(0.0, 1.0), 1e-12 * n));
    }
  }
}

TEST_CASE("property: constant weights give constant coefficients") {
  for (double k : {0.0, 1.0, -2.5}) {
    for (auto [n, lo, hi] : {std::tuple{10u, 2u, 3u}, {997u, 100u, 400u}}) {
      const auto c = reference_coefficients(WeightSpec::constant(k), TrimSpec(n, lo, hi, 0.2, 0.3));
      for (double v : c) CHECK(near(v, k, 1e-12));
    }
  }
}

TEST_CASE("property: extension does not increase the Lipschitz constant") {
  for (const auto& w : builtin_weights()) {
    const auto jw = extend_weight(w, 0.25, 0.25);
    const double cw = lipschitz_estimate([&](double u) { return jw(u); }, 0.0, 1.0, 10000);
    CHECK(cw <= lipschitz_estimate(w, 10000) + 1e-9);
  }
}

TEST_CASE("make_scheme respects the perturbation kind") {
  const TrimSpec trim(200, 50, 50, 0.25, 0.25);
  const auto w = WeightSpec::polynomial({0.0, 1.0});
  Stream s(1, 200, 1);
  const auto none = make_scheme(w, trim, {}, s);
  CHECK(none.exact == none.reference);
  CHECK(none.reference.size() == trim.kept());
  const auto sat = make_scheme(w, trim, {Perturbation::Kind::kSaturating, 0.5, 2.0}, s);
  CHECK(near(abs_sum_diff(sat.exact, sat.reference), 2.0 * perturbation_bound(200, 0.5), 1e-12));
  CHECK(perturbation_kind_from_name(perturbation_kind_name(Perturbation::Kind::kConstant)) ==
        Perturbation::Kind::kConstant);
}
