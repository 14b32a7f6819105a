#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>

#include "riggedframes/errors.hpp"
#include "riggedframes/frame_ops.hpp"
#include "riggedframes/map_catalog.hpp"
#include "riggedframes/measure_grid.hpp"
#include "riggedframes/schwartz.hpp"

using namespace rigged;

namespace {

// f(x) by direct Hermite summation
cplx point_value(const TestFunction& f, double x) {
  cplx s = 0.0;
  for (int n = 0; n < f.truncation(); ++n) s += f[n] * hermite_eval(n, x);
  return s;
}

}  // namespace

TEST_CASE("MapSpec validation") {
  CHECK_NOTHROW(MapSpec::dirac().validate());
  CHECK_THROWS_AS(MapSpec(MapKind::WeightedDirac).validate(), ConfigError);
  CHECK_THROWS_AS(MapSpec::bump_dirac(1.0, 1.0), ConfigError);
  CHECK_THROWS_AS(MapSpec::bump_dirac(2.0, -1.0), ConfigError);
  CHECK_THROWS_AS(MapSpec::weighted_dirac("sin("), ParseError);
  CHECK(map_kind_from_string("dirac_derivative") == MapKind::DiracDerivative);
  CHECK(to_string(MapKind::BumpDirac) == "bump_dirac");
  CHECK_THROWS_AS(map_kind_from_string("gabor"), ConfigError);
}

TEST_CASE("sample_kernel examples") {
  const auto grid = build_grid(1.0, 1, 3);  // middle node is exactly 0
  REQUIRE(grid.nodes[1] == 0.0);
  const auto dirac = sample_kernel(MapSpec::dirac(), grid, 4);
  CHECK(dirac.entries()(1, 1) == cplx(0.0));
  CHECK(dirac.entries()(1, 0) == cplx(hermite_eval(0, 0.0)));

  const auto fine = default_stage(16).grid();
  const auto w = sample_kernel(MapSpec::weighted_dirac("2+sin(x)"), fine, 16);
  for (int j = 0; j < fine.size(); j += 37) {
    const double x = fine.nodes[static_cast<std::size_t>(j)];
    for (int n = 0; n < 16; ++n) {
      CHECK(std::abs(w.entries()(j, n) - (2 + std::sin(x)) * hermite_eval(n, x)) <= 1e-15 * (1 + std::abs(hermite_eval(n, x))));
    }
  }

  // Fourier analysis of h_3 samples i*h_3.
  const auto F = sample_kernel(MapSpec::fourier(), fine, 16);
  const auto a = analysis(F, TestFunction::basis(3, 16));
  for (int j = 0; j < fine.size(); ++j) {
    const double x = fine.nodes[static_cast<std::size_t>(j)];
    CHECK(std::abs(a.values[j] - cplx(0.0, 1.0) * hermite_eval(3, x)) <= 1e-15);
  }
}

TEST_CASE("weighted analysis equals w(x) f(x)") {
  const auto grid = default_stage(32).grid();
  std::mt19937_64 rng(17);
  for (const char* weight : {"2+sin(x)", "1+x^2", "exp(-x^2/4)"}) {
    const auto spec = MapSpec::weighted_dirac(weight);
    const auto omega = sample_kernel(spec, grid, 32);
    const auto f = TestFunction::random(32, rng);
    const auto a = analysis(omega, f);
    double worst = 0.0;
    for (int j = 0; j < grid.size(); ++j) {
      const double x = grid.nodes[static_cast<std::size_t>(j)];
      const cplx expect = eval_weight(*spec.weight, x) * point_value(f, x);
      worst = std::max(worst, std::abs(a.values[j] - expect));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("bump rows vanish off the support") {
  const auto grid = default_stage(32).grid();
  const auto omega = sample_kernel(MapSpec::bump_dirac(-1.0, 1.0), grid, 32);
  int inside = 0;
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.nodes[static_cast<std::size_t>(j)];
    if (x <= -1.0 || x >= 1.0) {
      CHECK(omega.entries().row(j).cwiseAbs().maxCoeff() == 0.0);
    } else {
      ++inside;
    }
  }
  CHECK(inside > 0);
  CHECK(bump_weight(0.0, -1.0, 1.0) == 1.0);
  CHECK(bump_weight(1.0, -1.0, 1.0) == 0.0);
  CHECK(bump_weight(3.0, 2.0, 4.0) == 1.0);
  for (double x = -0.99; x < 1.0; x += 0.01) CHECK(bump_weight(x, -1.0, 1.0) <= 1.0);
}

TEST_CASE("dirac derivative analysis norm equals |f'|^2") {
  std::mt19937_64 rng(23);
  for (int N : {16, 32}) {
    const auto grid = default_stage(N).grid();
    const auto omega = sample_kernel(MapSpec::dirac_derivative(), grid, N);
    for (int t = 0; t < 10; ++t) {
      // Leave the top coefficient out so f' stays inside the truncation.
      CVector c = TestFunction::random(N, rng).coeffs();
      c[N - 1] = 0.0;
      const TestFunction f(c);
      const double lhs = std::pow(l2x_norm(analysis(omega, f), grid), 2);
      const double rhs = std::pow(derivative_coeffs(f).derivative.norm(), 2);
      CHECK(std::abs(lhs - rhs) <= 1e-6 * std::max(1.0, rhs));
    }
  }
}

TEST_CASE("custom kernel CSV") {
  const auto grid = default_stage(8).grid();
  const auto omega = sample_kernel(MapSpec::dirac(), grid, 8);
  std::stringstream buffer;
  write_custom_kernel(buffer, omega);
  const std::string text = buffer.str();

  SUBCASE("round trip") {
    std::istringstream in(text);
    const auto back = read_custom_kernel(in, grid, 8);
    CHECK(back.entries() == omega.entries());
  }
  SUBCASE("wrong row count") {
    std::istringstream in(text.substr(0, text.rfind('\n', text.size() - 2) + 1));
    CHECK_THROWS_AS(read_custom_kernel(in, grid, 8), DimensionError);
  }
  SUBCASE("wrong column count") {
    std::istringstream in(text);
    CHECK_THROWS_AS(read_custom_kernel(in, grid, 7), DimensionError);
  }
  SUBCASE("non-numeric cell") {
    std::string bad = text;
    const auto second_line = bad.find('\n', bad.find('\n') + 1) + 1;
    const auto comma = bad.find(',', second_line);
    bad.replace(second_line, comma - second_line, "oops");
    std::istringstream in(bad);
    try {
      read_custom_kernel(in, grid, 8);
      FAIL("expected ParseError");
    } catch (const ParseError& e) {
      const std::string what = e.what();
      INFO(what);
      CHECK(what.find("row 2") != std::string::npos);
      CHECK(what.find("column 1") != std::string::npos);
    }
  }
  CHECK_THROWS_AS(load_custom_kernel("/nonexistent/kernel.csv", grid, 8), ConfigError);
  CHECK_THROWS_AS(KernelMatrix(CMatrix::Zero(3, 8), grid), DimensionError);
}

TEST_CASE("parallel assembly is bit-identical to sequential") {
  const auto grid = default_stage(64).grid();
  const MapSpec specs[] = {MapSpec::dirac(), MapSpec::fourier(), MapSpec::dirac_derivative(),
                           MapSpec::weighted_dirac("2+sin(x)"), MapSpec::bump_dirac(-1.0, 2.0)};
  for (const auto& spec : specs) {
    ::setenv("RIGGEDFRAMES_THREADS", "1", 1);
    const auto sequential = sample_kernel(spec, grid, 64);
    ::setenv("RIGGEDFRAMES_THREADS", "7", 1);
    const auto parallel = sample_kernel(spec, grid, 64);
    CHECK(sequential.entries() == parallel.entries());
  }
  ::unsetenv("RIGGEDFRAMES_THREADS");
}
