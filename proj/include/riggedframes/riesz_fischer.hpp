#pragma once

// The moment problem <f, omega_x> = h(x) on a sampled map.

#include <cstdint>

#include "riggedframes/duality.hpp"
#include "riggedframes/frame_ops.hpp"

namespace rigged {

struct LeastSquaresResult {
  CVector x;
  double residual = 0.0;  // attained weighted norm |A x - b|_w
  int rank = 0;
  RVector singular_values;
  CMatrix null_basis;  // orthonormal columns spanning the numerical null space
};

/// Minimum-norm minimizer of sum_j w_j |(A x)_j - b_j|^2. Singular values
/// below cutoff * sigma_max are treated as zero.
LeastSquaresResult weighted_least_squares(const CMatrix& A, const CVector& b,
                                          const RVector& weights, double cutoff = 1e-10);

struct MomentSolution {
  TestFunction f;
  double residual = 0.0;  // relative to l2x_norm(h); absolute when h = 0
  bool least_norm = true;
  int null_dim = 0;
  CMatrix null_basis;  // numerical omega^perp
};

MomentSolution solve_moment(const KernelMatrix& omega, const GridFunction& h,
                            double cutoff = 1e-10);

struct RieszFischerScore {
  double score = 0.0;  // fraction of probes solved to residual <= 1e-6
  double worst_residual = 0.0;
  int probes = 0;
};

/// Solves the moment problem for normalized panel indicators spread across the grid.
RieszFischerScore rf_diagnostic(const KernelMatrix& omega, int probes);

/// Smallest C with p_k(f) <= C |h|_2 over least-norm solutions at this truncation.
/// Infinite for a zero kernel.
double continuity_constant(const KernelMatrix& omega, SeminormIndex k, double cutoff = 1e-10);

/// e_k(x_j) = sup over p_k(f) <= 1 of |<f, omega_{x_j}>|.
GridFunction envelope(const KernelMatrix& omega, SeminormIndex k);

struct EnvelopeCheck {
  bool satisfied = false;
  double r = 0.0;  // smallest r with |h| <= r e_k; infinite if unattainable
};

EnvelopeCheck envelope_condition_check(const KernelMatrix& omega, const GridFunction& h,
                                       SeminormIndex k);

struct DualBesselResult {
  bool bessel = false;
  int k = -1;
  double constant = 0.0;
};

/// Checks that the canonical dual of a Riesz-Fischer map obeys a seminorm
/// Bessel bound along the ladder. Throws ConfigError when the map fails the
/// Riesz-Fischer probe on the coarse grid of the finest stage.
DualBesselResult dual_bessel_check(const MapSpec& spec, const RefinementLadder& ladder,
                                   const Thresholds& thresholds = {}, int probes = 64);

}  // namespace rigged
