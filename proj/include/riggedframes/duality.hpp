#pragma once

// Canonical duals, reconstruction, and the Parseval / Gel'fand / Riesz checks.

#include <cstdint>
#include <vector>

#include "riggedframes/frame_ops.hpp"
#include "riggedframes/map_catalog.hpp"

namespace rigged {

inline constexpr std::uint64_t kDefaultSeed = 0x5eedf2a3e5ULL;

struct DualPair {
  KernelMatrix omega;
  KernelMatrix theta;
  double duality_defect = 0.0;
};

/// theta = Omega S^{-1}, i.e. analysis_theta(f) = analysis_omega(S^{-1} f).
/// Throws NotAFrameError when lambda_min(S) <= inverse_cutoff * lambda_max(S).
DualPair canonical_dual(const KernelMatrix& omega, double inverse_cutoff = 1e-12);

/// max |<f,g> - sum_j w_j (theta f)_j conj((omega g)_j)| / (|f| |g|) over random
/// pairs (f, g) and the diagonal pairs (f, f).
double verify_duality(const KernelMatrix& omega, const KernelMatrix& theta, int trials,
                      std::uint64_t seed = kDefaultSeed);
double verify_duality(const DualPair& pair, int trials, std::uint64_t seed = kDefaultSeed);

struct DualBounds {
  double lower_theta = 0.0;
  double upper_theta = 0.0;
  double lower_omega = 0.0;
  double upper_omega = 0.0;
  /// 1/B - tol <= A_theta and B_theta <= 1/A + tol, tol = 1e-8 / A.
  bool inequality_holds = false;
};

DualBounds dual_bounds(const DualPair& pair);

enum class ReconstructionOrder {
  DualSynthesis,   // f = T_theta T_omega^x f
  FrameSynthesis,  // f = T_omega T_theta^x f
};

struct Reconstruction {
  TestFunction f_rec;
  double rel_error = 0.0;
};

Reconstruction reconstruct(const DualPair& pair, const TestFunction& f,
                           ReconstructionOrder order = ReconstructionOrder::DualSynthesis);

struct ParsevalResult {
  bool parseval = false;
  double defect = 0.0;           // |S - I|_max
  double identity_defect = 0.0;  // random-pair form of <f,g> = int <f,w_x><w_x,g>
  bool routes_agree = false;
};

ParsevalResult parseval_check(const KernelMatrix& omega, double tolerance = 1e-6,
                              std::uint64_t seed = kDefaultSeed);

struct GelfandResult {
  bool gelfand = false;
  bool parseval = false;
  bool mu_independent = false;
  /// max |Gram of the weighted coarse synthesis columns - I|; reported only.
  double isometry_defect = 0.0;
};

GelfandResult gelfand_check(const MapSpec& spec, const RefinementLadder& ladder,
                            const Thresholds& thresholds = {});

struct RieszResult {
  bool riesz = false;
  bool frame = false;
  bool mu_independent = false;
  /// Singular values of the weighted synthesis map at the finest stage.
  double sigma_min = 0.0;
  double sigma_max = 0.0;
};

RieszResult riesz_check(const MapSpec& spec, const RefinementLadder& ladder,
                        const Thresholds& thresholds = {});

struct DualSemiframeResult {
  bool holds = false;
  /// Per stage: A_theta - (1/B_omega - tol).
  std::vector<double> margins;
};

/// Requires the map to classify as an upper semi-frame with a bounded B;
/// otherwise throws ConfigError.
DualSemiframeResult dual_semiframe_check(const MapSpec& spec, const RefinementLadder& ladder,
                                         const Thresholds& thresholds = {});

}  // namespace rigged
