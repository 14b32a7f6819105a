#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include "riggedframes/errors.hpp"
#include "riggedframes/measure_grid.hpp"
#include "riggedframes/schwartz.hpp"

using namespace rigged;

TEST_CASE("build_grid exactness and measure") {
  const auto g = build_grid(1.0, 1, 2);
  double x2 = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    x2 += g.weights[static_cast<std::size_t>(j)] * g.nodes[static_cast<std::size_t>(j)] *
          g.nodes[static_cast<std::size_t>(j)];
  }
  CHECK(std::abs(x2 - 2.0 / 3.0) <= 1e-14);

  const auto g5 = build_grid(5.0, 10, 8);
  CHECK(std::abs(g5.measure() - 10.0) <= 1e-12);

  const auto gd = default_stage(32).grid();
  CHECK(gd.half_width >= 16.0);
  double h0 = 0.0;
  for (int j = 0; j < gd.size(); ++j) {
    h0 += gd.weights[static_cast<std::size_t>(j)] *
          std::pow(hermite_eval(0, gd.nodes[static_cast<std::size_t>(j)]), 2);
  }
  CHECK(std::abs(h0 - 1.0) <= 1e-12);
}

TEST_CASE("grid invariants") {
  for (auto [L, panels, order] : {std::tuple{1.0, 1, 2}, std::tuple{3.5, 7, 5}, std::tuple{16.0, 40, 16}}) {
    const auto g = build_grid(L, panels, order);
    REQUIRE(g.size() == panels * order);
    CHECK(std::abs(g.measure() - 2 * L) <= 1e-10 * 2 * L);
    for (int j = 0; j < g.size(); ++j) {
      CHECK(g.weights[static_cast<std::size_t>(j)] > 0.0);
      CHECK(std::abs(g.nodes[static_cast<std::size_t>(j)]) <= L);
      if (j > 0) CHECK(g.nodes[static_cast<std::size_t>(j)] > g.nodes[static_cast<std::size_t>(j - 1)]);
      // Symmetry under x -> -x.
      const auto mirror = static_cast<std::size_t>(g.size() - 1 - j);
      CHECK(std::abs(g.nodes[static_cast<std::size_t>(j)] + g.nodes[mirror]) <= 1e-14);
      CHECK(std::abs(g.weights[static_cast<std::size_t>(j)] - g.weights[mirror]) <= 1e-14);
    }
  }
}

TEST_CASE("refinement preserves polynomial integrals within exactness degree") {
  // Degree 7 is integrated exactly by every rule with order >= 4.
  auto poly = [](double x) { return 1.0 - 2.0 * x + 3.0 * std::pow(x, 4) - 0.5 * std::pow(x, 7) + std::pow(x, 6); };
  const double L = 2.0;
  const double exact = 2 * L + 3.0 * 2 * std::pow(L, 5) / 5 + 2 * std::pow(L, 7) / 7;
  for (auto [panels, order] : {std::pair{1, 4}, std::pair{3, 4}, std::pair{5, 9}, std::pair{17, 12}}) {
    const auto g = build_grid(L, panels, order);
    double s = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      s += g.weights[static_cast<std::size_t>(j)] * poly(g.nodes[static_cast<std::size_t>(j)]);
    }
    CHECK(std::abs(s - exact) <= 1e-12 * exact);
  }
}

TEST_CASE("build_grid rejects invalid configs") {
  CHECK_THROWS_AS(build_grid(0.0, 1, 2), ConfigError);
  CHECK_THROWS_AS(build_grid(-1.0, 1, 2), ConfigError);
  CHECK_THROWS_AS(build_grid(1.0, 0, 2), ConfigError);
  CHECK_THROWS_AS(build_grid(1.0, 1, 1), ConfigError);
}

TEST_CASE("l2x_inner") {
  const auto g = build_grid(3.0, 4, 6);
  const GridFunction one = sample_on(g, [](double) { return 1.0; });
  CHECK(std::abs(l2x_inner(one, one, g) - 6.0) <= 1e-13);

  const auto gd = default_stage(16).grid();
  const auto h0 = sample_on(gd, [](double x) { return hermite_eval(0, x); });
  const auto h1 = sample_on(gd, [](double x) { return hermite_eval(1, x); });
  CHECK(std::abs(l2x_inner(h0, h1, gd)) <= 1e-12);

  std::mt19937_64 rng(9);
  std::normal_distribution<double> gauss;
  for (int t = 0; t < 50; ++t) {
    CVector a(g.size());
    CVector b(g.size());
    for (int j = 0; j < g.size(); ++j) {
      const double ar = gauss(rng);
      a[j] = cplx(ar, gauss(rng));
      const double br = gauss(rng);
      b[j] = cplx(br, gauss(rng));
    }
    const GridFunction xi(a);
    const GridFunction eta(b);
    CHECK(std::abs(l2x_inner(xi, eta, g)) <= l2x_norm(xi, g) * l2x_norm(eta, g) * (1 + 1e-14));
  }
  CHECK_THROWS_AS(l2x_inner(GridFunction(CVector::Zero(3)), one, g), DimensionError);
}

TEST_CASE("default_ladder") {
  const auto single = default_ladder(8);
  REQUIRE(single.size() == 1);
  CHECK(single.stages[0].truncation == 8);
  CHECK(single.stages[0].half_width == doctest::Approx(std::sqrt(17.0) + 8.0));
  CHECK(single.stages[0].node_count() >= 80);

  const auto three = default_ladder(32);
  REQUIRE(three.size() == 3);
  for (std::size_t i = 0; i < three.size(); ++i) {
    const auto& s = three.stages[i];
    CHECK(s.truncation == (8 << i));
    CHECK(s.node_count() >= 10 * s.truncation);
    CHECK(s.half_width >= std::sqrt(2.0 * s.truncation + 1.0) + 8.0 - 1e-12);
    if (i > 0) CHECK(s.half_width > three.stages[i - 1].half_width);
    // The highest Hermite function of the stage is integrated to 1.
    const auto g = s.grid();
    double norm = 0.0;
    for (int j = 0; j < g.size(); ++j) {
      norm += g.weights[static_cast<std::size_t>(j)] *
              std::pow(hermite_eval(s.truncation - 1, g.nodes[static_cast<std::size_t>(j)]), 2);
    }
    CHECK(std::abs(norm - 1.0) <= 1e-9);
  }
  CHECK_THROWS_AS(default_ladder(24), ConfigError);
  CHECK_THROWS_AS(default_ladder(4), ConfigError);
  CHECK_THROWS_AS(ladder_from_truncations({16, 8}), ConfigError);
  CHECK_THROWS_AS(ladder_from_truncations({}), ConfigError);
}

TEST_CASE("coarse grid stays inside the bulk with at most N/2 nodes") {
  for (int N : {8, 16, 32, 64, 128}) {
    const auto g = coarse_grid(N);
    CHECK(g.size() <= N / 2);
    CHECK(g.half_width < std::sqrt(2.0 * N + 1.0));
  }
  CHECK_THROWS_AS(coarse_grid(2), ConfigError);
}
