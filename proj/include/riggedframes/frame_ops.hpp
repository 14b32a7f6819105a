#pragma once

// Analysis, synthesis and frame operators of a sampled map, plus the
// ladder-based classifier.
//
// With W = diag(w_j):
//   analysis   c -> Omega c                      (grid function <f, omega_x>)
//   synthesis  xi -> Omega^H W xi                (representer of T xi)
//   frame op   S = Omega^H W Omega               (<S f, g> = int <f,w_x><w_x,g>)

#include <string>
#include <string_view>
#include <vector>

#include "riggedframes/map_catalog.hpp"
#include "riggedframes/measure_grid.hpp"
#include "riggedframes/schwartz.hpp"
#include "riggedframes/types.hpp"

namespace rigged {

/// Tunable cutoffs of the classifier. Defaults are the documented ones.
struct Thresholds {
  double stability = 0.05;       // max relative change between the last two stages
  double growth = 1.3;           // min per-stage ratio for a "growing" trend
  double rank_cutoff = 1e-6;     // sigma_min / sigma_max cutoff for injectivity
  double tight_tolerance = 1e-6; // |A - B| <= tol * B
  double null_cutoff = 1e-10;    // numerical null space of the analysis map
  double inverse_cutoff = 1e-12; // lambda_min / lambda_max cutoff for inverting S
  int k_max = 6;                 // largest seminorm index tried for Bessel witnesses
};

struct FrameOperatorMatrix {
  CMatrix S;
  std::string provenance;

  int truncation() const { return static_cast<int>(S.rows()); }
};

GridFunction analysis(const KernelMatrix& omega, const TestFunction& f);

/// Returns T xi as a distribution sample, <h_n, T xi>.
TemperedDistributionSample synthesis(const KernelMatrix& omega, const GridFunction& xi);

/// The matrix Omega^H W of the synthesis map onto representer coefficients.
CMatrix synthesis_matrix(const KernelMatrix& omega);

FrameOperatorMatrix frame_operator(const KernelMatrix& omega);

struct EigenPairs {
  RVector values;  // ascending
  CMatrix vectors; // columns, orthonormal
};

/// Dense Hermitian eigendecomposition; throws NumericError if the residuals
/// exceed 1e-10 * |S|.
EigenPairs hermitian_eigenpairs(const CMatrix& S);
EigenPairs hermitian_eigenpairs(const FrameOperatorMatrix& S);

struct FrameBounds {
  double lower = 0.0;  // lambda_min(S)
  double upper = 0.0;  // lambda_max(S)
};

FrameBounds frame_bounds(const FrameOperatorMatrix& S);

struct TotalityResult {
  bool total = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  /// Near-annihilated direction; meaningful when !total.
  TestFunction witness;
};

TotalityResult totality_test(const KernelMatrix& omega, double threshold);

struct MuIndependenceResult {
  bool independent = false;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  /// Grid function synthesized to (nearly) zero; meaningful when !independent.
  GridFunction witness;
};

/// Requires nodes <= truncation; otherwise throws ConfigError.
MuIndependenceResult mu_independence_test(const KernelMatrix& omega, double threshold);

/// C_k = sup |analysis f|_{L2} / p_k(f) over the truncated space.
double bessel_constant(const FrameOperatorMatrix& S, SeminormIndex k);

struct BesselWitness {
  int k = -1;  // -1 if no index settled
  double constant = 0.0;
};

/// Smallest k whose constant C_k changes by at most `stability` (relative)
/// between the last two stages. constants[stage][k].
BesselWitness bessel_witness(const std::vector<std::vector<double>>& constants,
                             double stability);

enum class Trend { Bounded, Growing, Decreasing, Vanishing, Undetermined };
std::string_view to_string(Trend t);

enum class Label {
  Bessel,
  BoundedBessel,
  Total,
  MuIndependent,
  UpperSemiFrame,
  LowerSemiFrame,
  Frame,
  Tight,
  Parseval,
  GelfandBasis,
  RieszBasis,
};
std::string_view to_string(Label l);

struct StageResult {
  int truncation = 0;
  double half_width = 0.0;
  int nodes = 0;
  double lower = 0.0;      // A_N
  double upper = 0.0;      // B_N
  double sigma_min = 0.0;  // of the weighted analysis matrix
  double sigma_max = 0.0;
  bool total = false;
  bool mu_independent = false;
  bool mu_evaluated = false;
  std::vector<double> bessel_constants;  // C_k, k = 0..k_max
};

struct FrameReport {
  std::vector<StageResult> stages;
  Trend upper_trend = Trend::Undetermined;
  Trend lower_trend = Trend::Undetermined;
  double upper_ratio = 1.0;  // B_last / B_prev
  double lower_ratio = 1.0;  // A_last / A_prev
  int bessel_k = -1;         // witnessing seminorm index, -1 if none
  double bessel_constant = 0.0;
  std::vector<Label> labels;  // in declaration order of Label

  bool has(Label l) const;
  std::vector<std::string> label_names() const;
};

/// One stage of diagnostics. `coarse` may be null, in which case
/// mu-independence is evaluated on `fine` when its node count allows.
StageResult evaluate_stage(const KernelMatrix& fine, const KernelMatrix* coarse,
                           const Thresholds& thresholds);

/// Trends and labels from already evaluated stages.
FrameReport summarize(std::vector<StageResult> stages, const Thresholds& thresholds);

/// Runs every ladder stage for a built-in map. Custom maps go through
/// classify_kernel.
FrameReport classify(const MapSpec& spec, const RefinementLadder& ladder,
                     const Thresholds& thresholds = {});

FrameReport classify_kernel(const KernelMatrix& fine, const KernelMatrix* coarse,
                            const Thresholds& thresholds = {});

/// Kernel of a built-in map on the coarse grid used for mu-independence.
KernelMatrix coarse_kernel(const MapSpec& spec, int truncation);

}  // namespace rigged
