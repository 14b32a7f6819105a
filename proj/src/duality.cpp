#include "riggedframes/duality.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "riggedframes/errors.hpp"

namespace rigged {

namespace {

void require_compatible(const KernelMatrix& a, const KernelMatrix& b) {
  if (a.nodes() != b.nodes() || a.truncation() != b.truncation()) {
    throw DimensionError("dual pair kernels differ in shape");
  }
}

}  // namespace

DualPair canonical_dual(const KernelMatrix& omega, double inverse_cutoff) {
  const auto S = frame_operator(omega);
  const auto eig = hermitian_eigenpairs(S);
  const int N = S.truncation();
  const double lmin = N ? eig.values[0] : 0.0;
  const double lmax = N ? eig.values[N - 1] : 0.0;
  if (!(lmax > 0.0) || lmin <= inverse_cutoff * lmax) throw NotAFrameError(lmin, lmax);
  const CMatrix S_inv =
      eig.vectors * eig.values.cwiseInverse().asDiagonal() * eig.vectors.adjoint();
  DualPair pair{omega, omega.with_entries(omega.entries() * S_inv, omega.provenance() + "~dual"),
                0.0};
  pair.duality_defect = verify_duality(pair, 8);
  return pair;
}

double verify_duality(const KernelMatrix& omega, const KernelMatrix& theta, int trials,
                      std::uint64_t seed) {
  require_compatible(omega, theta);
  if (trials < 1) throw ConfigError("verify_duality: trials must be >= 1");
  std::mt19937_64 rng(seed);
  const int N = omega.truncation();
  double worst = 0.0;
  for (int t = 0; t < trials; ++t) {
    const auto f = TestFunction::random(N, rng);
    const auto g = TestFunction::random(N, rng);
    const auto xi_theta = analysis(theta, f);
    // The diagonal pair (f, f) makes rescaled duals visible at full size.
    for (const TestFunction* other : {&g, &f}) {
      const cplx lhs = inner_product(f, *other);
      const cplx rhs = l2x_inner(xi_theta, analysis(omega, *other), omega.grid());
      worst = std::max(worst, std::abs(lhs - rhs) / (f.norm() * other->norm()));
    }
  }
  return worst;
}

double verify_duality(const DualPair& pair, int trials, std::uint64_t seed) {
  return verify_duality(pair.omega, pair.theta, trials, seed);
}

DualBounds dual_bounds(const DualPair& pair) {
  const auto omega_bounds = frame_bounds(frame_operator(pair.omega));
  const auto theta_bounds = frame_bounds(frame_operator(pair.theta));
  DualBounds out;
  out.lower_omega = omega_bounds.lower;
  out.upper_omega = omega_bounds.upper;
  out.lower_theta = theta_bounds.lower;
  out.upper_theta = theta_bounds.upper;
  if (out.lower_omega > 0.0) {
    const double tol = 1e-8 / out.lower_omega;
    out.inequality_holds = out.lower_theta >= 1.0 / out.upper_omega - tol &&
                           out.upper_theta <= 1.0 / out.lower_omega + tol;
  }
  return out;
}

Reconstruction reconstruct(const DualPair& pair, const TestFunction& f,
                           ReconstructionOrder order) {
  require_compatible(pair.omega, pair.theta);
  const KernelMatrix& analyzer =
      order == ReconstructionOrder::DualSynthesis ? pair.omega : pair.theta;
  const KernelMatrix& synthesizer =
      order == ReconstructionOrder::DualSynthesis ? pair.theta : pair.omega;
  const auto xi = analysis(analyzer, f);
  Reconstruction out;
  out.f_rec = synthesis(synthesizer, xi).representer();
  const double norm = f.norm();
  const double err = (out.f_rec - f).norm();
  out.rel_error = norm > 0.0 ? err / norm : err;
  return out;
}

ParsevalResult parseval_check(const KernelMatrix& omega, double tolerance, std::uint64_t seed) {
  ParsevalResult out;
  const auto S = frame_operator(omega);
  const int N = S.truncation();
  out.defect = N ? (S.S - CMatrix::Identity(N, N)).cwiseAbs().maxCoeff() : 0.0;
  out.parseval = out.defect <= tolerance;
  // A Parseval map is self-dual, so the identity route reuses verify_duality.
  out.identity_defect = verify_duality(omega, omega, 16, seed);
  out.routes_agree = (out.identity_defect <= tolerance) == out.parseval;
  return out;
}

GelfandResult gelfand_check(const MapSpec& spec, const RefinementLadder& ladder,
                            const Thresholds& thresholds) {
  const auto report = classify(spec, ladder, thresholds);
  GelfandResult out;
  out.parseval = report.has(Label::Parseval);
  out.mu_independent = report.has(Label::MuIndependent);
  out.gelfand = report.has(Label::GelfandBasis);
  const auto coarse = coarse_kernel(spec, ladder.stages.back().truncation);
  const CMatrix A = coarse.weighted();
  const CMatrix gram = A * A.adjoint();
  out.isometry_defect =
      (gram - CMatrix::Identity(gram.rows(), gram.cols())).cwiseAbs().maxCoeff();
  return out;
}

RieszResult riesz_check(const MapSpec& spec, const RefinementLadder& ladder,
                        const Thresholds& thresholds) {
  const auto report = classify(spec, ladder, thresholds);
  RieszResult out;
  out.frame = report.has(Label::Frame);
  out.mu_independent = report.has(Label::MuIndependent);
  out.riesz = report.has(Label::RieszBasis);
  out.sigma_min = report.stages.back().sigma_min;
  out.sigma_max = report.stages.back().sigma_max;
  return out;
}

DualSemiframeResult dual_semiframe_check(const MapSpec& spec, const RefinementLadder& ladder,
                                         const Thresholds& thresholds) {
  const auto report = classify(spec, ladder, thresholds);
  if (!report.has(Label::UpperSemiFrame)) {
    throw ConfigError("dual_semiframe_check: " + spec.describe() +
                      " is not an upper semi-frame with a bounded upper bound");
  }
  DualSemiframeResult out;
  out.holds = true;
  for (const auto& stage : ladder.stages) {
    const auto omega = sample_kernel(spec, stage.grid(), stage.truncation);
    const auto pair = canonical_dual(omega, thresholds.inverse_cutoff);
    const auto b = dual_bounds(pair);
    const double tol = 1e-8 / b.lower_omega;
    const double margin = b.lower_theta - (1.0 / b.upper_omega - tol);
    out.margins.push_back(margin);
    out.holds = out.holds && margin >= 0.0;
  }
  return out;
}

}  // namespace rigged
