#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "riggedframes/duality.hpp"
#include "riggedframes/errors.hpp"
#include "riggedframes/frame_ops.hpp"
#include "riggedframes/map_catalog.hpp"
#include "riggedframes/measure_grid.hpp"
#include "riggedframes/schwartz.hpp"

using namespace rigged;

namespace {

KernelMatrix stage_kernel(const MapSpec& spec, int N) {
  return sample_kernel(spec, default_stage(N).grid(), N);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

const MapSpec kSin = MapSpec::weighted_dirac("2+sin(x)");

}  // namespace

TEST_CASE("canonical_dual") {
  const auto dirac = canonical_dual(stage_kernel(MapSpec::dirac(), 32));
  CHECK(max_abs(dirac.theta.entries() - dirac.omega.entries()) <= 1e-10);
  CHECK(dirac.duality_defect <= 1e-10);

  CHECK_THROWS_AS(canonical_dual(stage_kernel(MapSpec::bump_dirac(-1.0, 1.0), 32)), NotAFrameError);
  try {
    canonical_dual(stage_kernel(MapSpec::bump_dirac(-1.0, 1.0), 32));
  } catch (const NotAFrameError& e) {
    CHECK(e.lambda_min() < 1e-12 * e.lambda_max());
  }
}

TEST_CASE("canonical dual of 2+sin acts as the weight 1/(2+sin x)") {
  // analysis_theta(f) = analysis(S^{-1} f); for f well inside the truncation
  // this converges to f(x)/(2+sin x) at interior points.
  const auto pair = canonical_dual(stage_kernel(kSin, 128));
  const auto a = analysis(pair.theta, TestFunction::basis(0, 128));
  const auto& grid = pair.omega.grid();
  double worst = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    const double x = grid.nodes[static_cast<std::size_t>(j)];
    if (std::abs(x) >= 2.0) continue;
    worst = std::max(worst, std::abs(a.values[j] - hermite_eval(0, x) / (2 + std::sin(x))));
  }
  CHECK(worst <= 1e-8);
  CHECK(pair.duality_defect <= 1e-8);
}

TEST_CASE("verify_duality") {
  const auto omega = stage_kernel(kSin, 32);
  const auto pair = canonical_dual(omega);
  CHECK(verify_duality(pair, 20) <= 1e-8);

  // Direct-summation oracle for one pair.
  std::mt19937_64 rng(1);
  const auto f = TestFunction::random(32, rng);
  const auto g = TestFunction::random(32, rng);
  const auto at = analysis(pair.theta, f);
  const auto ao = analysis(omega, g);
  cplx sum = 0.0;
  for (int j = 0; j < omega.nodes(); ++j) {
    sum += omega.grid().weights[static_cast<std::size_t>(j)] * at.values[j] * std::conj(ao.values[j]);
  }
  CHECK(std::abs(sum - inner_product(f, g)) <= 1e-8 * f.norm() * g.norm());

  const auto doubled = pair.theta.scaled(2.0);
  const double d = verify_duality(omega, doubled, 20);
  CHECK(d == doctest::Approx(1.0).epsilon(0.05));
  CHECK(verify_duality(omega, omega, 20) > 0.5);
}

TEST_CASE("dual_bounds") {
  const auto dirac = dual_bounds(canonical_dual(stage_kernel(MapSpec::dirac(), 16)));
  CHECK(std::abs(dirac.lower_theta - 1.0) <= 1e-10);
  CHECK(std::abs(dirac.upper_theta - 1.0) <= 1e-10);

  const auto sin_pair = canonical_dual(stage_kernel(kSin, 32));
  const auto b = dual_bounds(sin_pair);
  CHECK(b.inequality_holds);
  CHECK(b.lower_theta >= 1.0 / 9.0 - 1e-8);
  CHECK(b.upper_theta <= 1.0 + 1e-8);

  for (cplx c : {cplx(2.0, 0.0), cplx(0.0, -0.5)}) {
    const auto scaled = dual_bounds(canonical_dual(sin_pair.omega.scaled(c)));
    CHECK(scaled.lower_theta == doctest::Approx(b.lower_theta / std::norm(c)).epsilon(1e-9));
    CHECK(scaled.upper_theta == doctest::Approx(b.upper_theta / std::norm(c)).epsilon(1e-9));
  }
}

TEST_CASE("reconstruct") {
  std::mt19937_64 rng(12);
  const auto dirac = canonical_dual(stage_kernel(MapSpec::dirac(), 16));
  const auto sin_pair = canonical_dual(stage_kernel(kSin, 16));
  const auto S = frame_operator(sin_pair.omega).S;
  for (int t = 0; t < 20; ++t) {
    const auto f = TestFunction::random(16, rng);
    CHECK(reconstruct(dirac, f).rel_error <= 1e-9);
    for (auto order : {ReconstructionOrder::DualSynthesis, ReconstructionOrder::FrameSynthesis}) {
      const auto r = reconstruct(sin_pair, f, order);
      CHECK(r.rel_error <= 1e-8);
    }
    // Oracle: solve S y = S f directly and compare.
    const CVector y = S.ldlt().solve(S * f.coeffs());
    CHECK((reconstruct(sin_pair, f).f_rec.coeffs() - y).norm() <= 1e-8 * f.norm());
  }
  const auto zero = reconstruct(sin_pair, TestFunction::zero(16));
  CHECK(zero.f_rec.norm() == 0.0);
  CHECK(zero.rel_error == 0.0);
}

TEST_CASE("parseval_check") {
  CHECK(parseval_check(stage_kernel(MapSpec::dirac(), 32)).parseval);
  CHECK(parseval_check(stage_kernel(MapSpec::fourier(), 32)).parseval);
  const auto s = parseval_check(stage_kernel(kSin, 32));
  CHECK_FALSE(s.parseval);
  CHECK(s.defect > 1.0);
  for (const auto& spec : {MapSpec::dirac(), MapSpec::fourier(), MapSpec::dirac_derivative(), kSin,
                           MapSpec::weighted_dirac("1+x^2"), MapSpec::bump_dirac(-1.0, 1.0)}) {
    CAPTURE(spec.describe());
    CHECK(parseval_check(stage_kernel(spec, 32)).routes_agree);
  }
}

TEST_CASE("gelfand_check") {
  const auto ladder = default_ladder(32);
  const auto d = gelfand_check(MapSpec::dirac(), ladder);
  CHECK(d.gelfand);
  // diagnostic only: the truncated reproducing kernel is not diagonal on coarse nodes
  CHECK(std::isfinite(d.isometry_defect));
  CHECK(d.isometry_defect >= 0.0);
  CHECK(gelfand_check(MapSpec::fourier(), ladder).gelfand);
  CHECK_FALSE(gelfand_check(MapSpec::bump_dirac(-1.0, 1.0), ladder).gelfand);
  CHECK_FALSE(gelfand_check(kSin, ladder).gelfand);
}

TEST_CASE("riesz_check") {
  const auto ladder = default_ladder(32);
  const auto s = riesz_check(kSin, ladder);
  CHECK(s.riesz);
  CHECK(s.sigma_min >= 1.0 - 1e-8);
  CHECK(s.sigma_max <= 3.0 + 1e-8);
  CHECK(riesz_check(MapSpec::dirac(), ladder).riesz);
  CHECK_FALSE(riesz_check(MapSpec::dirac_derivative(), ladder).riesz);
}

TEST_CASE("dual_semiframe_check") {
  const auto ladder = default_ladder(32);
  const auto d = dual_semiframe_check(MapSpec::dirac(), ladder);
  CHECK(d.holds);
  const auto s = dual_semiframe_check(kSin, ladder);
  CHECK(s.holds);
  CHECK(s.margins.size() == ladder.size());
  CHECK_THROWS_AS(dual_semiframe_check(MapSpec::dirac_derivative(), ladder), ConfigError);
}

TEST_CASE("dual of the dual and S_theta = S^{-1}") {
  const auto omega = stage_kernel(kSin, 32);
  const auto pair = canonical_dual(omega);
  const auto back = canonical_dual(pair.theta);
  CHECK(max_abs(back.theta.entries() - omega.entries()) <= 1e-8);

  const CMatrix S = frame_operator(omega).S;
  const CMatrix St = frame_operator(pair.theta).S;
  CHECK(max_abs(St - S.inverse()) <= 1e-9);
}
