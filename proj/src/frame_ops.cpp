#include "riggedframes/frame_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "riggedframes/errors.hpp"

namespace rigged {

namespace {

void require_truncation(const KernelMatrix& omega, int N, const char* what) {
  if (omega.truncation() != N) {
    throw DimensionError(std::string(what) + ": kernel truncation " +
                         std::to_string(omega.truncation()) + " vs " + std::to_string(N));
  }
}

void require_grid_length(const KernelMatrix& omega, int M, const char* what) {
  if (omega.nodes() != M) {
    throw DimensionError(std::string(what) + ": grid function length " + std::to_string(M) +
                         " vs " + std::to_string(omega.nodes()) + " nodes");
  }
}

bool relatively_stable(double prev, double last, double tolerance) {
  const double scale = std::max(std::abs(prev), std::abs(last));
  if (scale == 0.0) return true;
  return std::abs(last - prev) <= tolerance * std::abs(prev);
}

}  // namespace

GridFunction analysis(const KernelMatrix& omega, const TestFunction& f) {
  require_truncation(omega, f.truncation(), "analysis");
  return GridFunction(omega.entries() * f.coeffs());
}

CMatrix synthesis_matrix(const KernelMatrix& omega) {
  return omega.entries().adjoint() * weight_vector(omega.grid()).asDiagonal();
}

TemperedDistributionSample synthesis(const KernelMatrix& omega, const GridFunction& xi) {
  require_grid_length(omega, xi.size(), "synthesis");
  const RVector w = weight_vector(omega.grid());
  const CVector weighted = w.cwiseProduct(xi.values).eval();
  // Representer coefficients Omega^H W xi; the pairings are their conjugates.
  const CVector rep = omega.entries().adjoint() * weighted;
  return TemperedDistributionSample(rep.conjugate());
}

FrameOperatorMatrix frame_operator(const KernelMatrix& omega) {
  const RVector w = weight_vector(omega.grid());
  const CMatrix weighted_rows = w.asDiagonal() * omega.entries();
  FrameOperatorMatrix out;
  out.S.resize(omega.truncation(), omega.truncation());
  // Column by column, in the same reduction order as synthesis(analysis(h_n)).
  for (int n = 0; n < omega.truncation(); ++n) {
    const CVector column = weighted_rows.col(n);
    out.S.col(n) = omega.entries().adjoint() * column;
  }
  out.provenance = omega.provenance();
  return out;
}

EigenPairs hermitian_eigenpairs(const CMatrix& S) {
  if (S.rows() != S.cols()) throw DimensionError("hermitian_eigenpairs: matrix is not square");
  if (S.size() == 0) return {RVector(), CMatrix()};
  if (!S.allFinite()) throw NumericError("hermitian_eigenpairs: matrix has non-finite entries");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(S);
  if (solver.info() != Eigen::Success) {
    throw NumericError("hermitian_eigenpairs: eigensolver failed to converge for " +
                       std::to_string(S.rows()) + "x" + std::to_string(S.cols()) + " matrix");
  }
  EigenPairs pairs{solver.eigenvalues(), solver.eigenvectors()};
  const double scale = std::max(S.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
  const double norm = std::max(S.norm(), scale);
  double worst = 0.0;
  for (Eigen::Index i = 0; i < S.cols(); ++i) {
    const CVector r = S * pairs.vectors.col(i) - pairs.values[i] * pairs.vectors.col(i);
    worst = std::max(worst, r.norm());
  }
  if (!(worst <= 1e-10 * norm)) {
    throw NumericError("hermitian_eigenpairs: residual " + std::to_string(worst) +
                       " exceeds 1e-10 * |S| = " + std::to_string(1e-10 * norm));
  }
  return pairs;
}

EigenPairs hermitian_eigenpairs(const FrameOperatorMatrix& S) {
  return hermitian_eigenpairs(S.S);
}

FrameBounds frame_bounds(const FrameOperatorMatrix& S) {
  if (S.truncation() == 0) return {};
  const auto pairs = hermitian_eigenpairs(S);
  return {pairs.values[0], pairs.values[pairs.values.size() - 1]};
}

TotalityResult totality_test(const KernelMatrix& omega, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("totality_test: threshold must be positive");
  const int N = omega.truncation();
  TotalityResult out;
  Eigen::JacobiSVD<CMatrix> svd(omega.weighted(), Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  // Fewer rows than columns leaves an exact null space.
  const double smin = omega.nodes() < N ? 0.0 : s[s.size() - 1];
  out.sigma_max = s.size() ? s[0] : 0.0;
  out.sigma_min = smin;
  out.total = out.sigma_max > 0.0 && smin > threshold * out.sigma_max;
  if (out.sigma_max == 0.0) {
    out.witness = TestFunction::basis(0, N);
  } else if (omega.nodes() < N) {
    Eigen::JacobiSVD<CMatrix> full(omega.weighted(), Eigen::ComputeFullV);
    out.witness = TestFunction(full.matrixV().col(N - 1));
  } else {
    out.witness = TestFunction(svd.matrixV().col(N - 1));
  }
  return out;
}

MuIndependenceResult mu_independence_test(const KernelMatrix& omega, double threshold) {
  if (!(threshold > 0.0)) throw ConfigError("mu_independence_test: threshold must be positive");
  const int M = omega.nodes();
  if (M > omega.truncation()) {
    throw ConfigError("mu_independence_test: grid has " + std::to_string(M) +
                      " nodes, more than the truncation " +
                      std::to_string(omega.truncation()) + "; use a coarse grid");
  }
  MuIndependenceResult out;
  // Synthesis on weighted grid functions u = W^{1/2} xi is A^H with A = W^{1/2} Omega.
  Eigen::JacobiSVD<CMatrix> svd(omega.weighted(), Eigen::ComputeFullU);
  const RVector& s = svd.singularValues();
  out.sigma_max = s.size() ? s[0] : 0.0;
  out.sigma_min = s.size() ? s[s.size() - 1] : 0.0;
  out.independent = out.sigma_max > 0.0 && out.sigma_min > threshold * out.sigma_max;
  const RVector inv_sqrt_w = weight_vector(omega.grid()).cwiseSqrt().cwiseInverse();
  CVector u = svd.matrixU().col(M - 1);
  out.witness = GridFunction(inv_sqrt_w.cwiseProduct(u).eval());
  return out;
}

double bessel_constant(const FrameOperatorMatrix& S, SeminormIndex k) {
  const RVector inv = seminorm_weights(S.truncation(), k).cwiseInverse();
  const CMatrix scaled = inv.asDiagonal() * S.S * inv.asDiagonal();
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(scaled, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericError("bessel_constant: eigensolver failed");
  return std::sqrt(std::max(0.0, solver.eigenvalues().maxCoeff()));
}

BesselWitness bessel_witness(const std::vector<std::vector<double>>& constants,
                             double stability) {
  BesselWitness out;
  if (constants.empty()) return out;
  const auto& last = constants.back();
  const std::vector<double>* prev = constants.size() >= 2 ? &constants[constants.size() - 2] : nullptr;
  for (std::size_t k = 0; k < last.size(); ++k) {
    if (!std::isfinite(last[k])) continue;
    if (prev && (k >= prev->size() || !relatively_stable((*prev)[k], last[k], stability))) continue;
    out.k = static_cast<int>(k);
    out.constant = last[k];
    break;
  }
  return out;
}

std::string_view to_string(Trend t) {
  switch (t) {
    case Trend::Bounded: return "bounded";
    case Trend::Growing: return "growing";
    case Trend::Decreasing: return "decreasing";
    case Trend::Vanishing: return "vanishing";
    case Trend::Undetermined: return "undetermined";
  }
  return "undetermined";
}

std::string_view to_string(Label l) {
  switch (l) {
    case Label::Bessel: return "bessel";
    case Label::BoundedBessel: return "bounded_bessel";
    case Label::Total: return "total";
    case Label::MuIndependent: return "mu_independent";
    case Label::UpperSemiFrame: return "upper_semi_frame";
    case Label::LowerSemiFrame: return "lower_semi_frame";
    case Label::Frame: return "frame";
    case Label::Tight: return "tight";
    case Label::Parseval: return "parseval";
    case Label::GelfandBasis: return "gelfand_basis";
    case Label::RieszBasis: return "riesz_basis";
  }
  return "unknown";
}

bool FrameReport::has(Label l) const {
  return std::find(labels.begin(), labels.end(), l) != labels.end();
}

std::vector<std::string> FrameReport::label_names() const {
  std::vector<std::string> out;
  for (Label l : labels) out.emplace_back(to_string(l));
  return out;
}

StageResult evaluate_stage(const KernelMatrix& fine, const KernelMatrix* coarse,
                           const Thresholds& thresholds) {
  StageResult r;
  r.truncation = fine.truncation();
  r.half_width = fine.grid().half_width;
  r.nodes = fine.nodes();
  const auto S = frame_operator(fine);
  const auto bounds = frame_bounds(S);
  r.lower = bounds.lower;
  r.upper = bounds.upper;
  const auto tot = totality_test(fine, thresholds.rank_cutoff);
  r.total = tot.total;
  r.sigma_min = tot.sigma_min;
  r.sigma_max = tot.sigma_max;
  const KernelMatrix* mu_kernel = coarse;
  if (!mu_kernel && fine.nodes() <= fine.truncation()) mu_kernel = &fine;
  if (mu_kernel) {
    r.mu_independent = mu_independence_test(*mu_kernel, thresholds.rank_cutoff).independent;
    r.mu_evaluated = true;
  }
  for (int k = 0; k <= thresholds.k_max; ++k) {
    r.bessel_constants.push_back(bessel_constant(S, SeminormIndex{k}));
  }
  return r;
}

FrameReport summarize(std::vector<StageResult> stages, const Thresholds& thresholds) {
  FrameReport rep;
  rep.stages = std::move(stages);
  if (rep.stages.empty()) return rep;
  const auto& last = rep.stages.back();
  const bool multi = rep.stages.size() >= 2;
  const StageResult* prev = multi ? &rep.stages[rep.stages.size() - 2] : nullptr;

  const bool degenerate = last.upper <= 0.0;
  const bool lower_positive = !degenerate && last.lower > thresholds.rank_cutoff * last.upper;

  if (!multi) {
    rep.upper_trend = Trend::Undetermined;
    rep.lower_trend = lower_positive ? Trend::Undetermined : Trend::Vanishing;
  } else {
    rep.upper_ratio = prev->upper > 0.0 ? last.upper / prev->upper : 1.0;
    rep.lower_ratio = prev->lower > 0.0 ? last.lower / prev->lower : 1.0;
    if (relatively_stable(prev->upper, last.upper, thresholds.stability)) {
      rep.upper_trend = Trend::Bounded;
    } else if (rep.upper_ratio >= thresholds.growth) {
      rep.upper_trend = Trend::Growing;
    } else {
      rep.upper_trend = Trend::Undetermined;
    }
    if (!lower_positive) {
      rep.lower_trend = Trend::Vanishing;
    } else if (relatively_stable(prev->lower, last.lower, thresholds.stability)) {
      rep.lower_trend = Trend::Bounded;
    } else if (last.lower < prev->lower) {
      rep.lower_trend = Trend::Decreasing;
    } else {
      rep.lower_trend = Trend::Undetermined;
    }
  }

  std::vector<std::vector<double>> constants;
  for (const auto& st : rep.stages) constants.push_back(st.bessel_constants);
  const auto witness = bessel_witness(constants, thresholds.stability);
  rep.bessel_k = witness.k;
  rep.bessel_constant = witness.constant;

  // A single stage carries no trend; its values are taken at face value.
  const bool upper_stable = rep.upper_trend == Trend::Bounded ||
                            (!multi && rep.upper_trend == Trend::Undetermined);
  const bool lower_stable =
      lower_positive && (rep.lower_trend == Trend::Bounded || !multi);
  const bool total = last.total;
  const bool mu = last.mu_evaluated && last.mu_independent;
  const bool frame = upper_stable && lower_stable;
  const bool tight =
      frame && std::abs(last.upper - last.lower) <= thresholds.tight_tolerance * last.upper;
  const bool parseval = tight && std::abs(last.upper - 1.0) <= thresholds.tight_tolerance;

  auto add = [&](Label l, bool cond) {
    if (cond) rep.labels.push_back(l);
  };
  add(Label::Bessel, rep.bessel_k >= 0);
  add(Label::BoundedBessel, upper_stable);
  add(Label::Total, total);
  add(Label::MuIndependent, mu);
  add(Label::UpperSemiFrame, upper_stable && total);
  add(Label::LowerSemiFrame, lower_stable);
  add(Label::Frame, frame);
  add(Label::Tight, tight);
  add(Label::Parseval, parseval);
  add(Label::GelfandBasis, parseval && mu);
  add(Label::RieszBasis, frame && mu);
  return rep;
}

KernelMatrix coarse_kernel(const MapSpec& spec, int truncation) {
  return sample_kernel(spec, coarse_grid(truncation), truncation);
}

FrameReport classify(const MapSpec& spec, const RefinementLadder& ladder,
                     const Thresholds& thresholds) {
  validate_ladder(ladder);
  spec.validate();
  if (spec.kind == MapKind::Custom) {
    throw ConfigError("classify: custom kernels have a fixed grid; use classify_kernel");
  }
  std::vector<StageResult> stages;
  for (const auto& stage : ladder.stages) {
    const auto fine = sample_kernel(spec, stage.grid(), stage.truncation);
    const auto coarse = coarse_kernel(spec, stage.truncation);
    stages.push_back(evaluate_stage(fine, &coarse, thresholds));
  }
  return summarize(std::move(stages), thresholds);
}

FrameReport classify_kernel(const KernelMatrix& fine, const KernelMatrix* coarse,
                            const Thresholds& thresholds) {
  std::vector<StageResult> stages;
  stages.push_back(evaluate_stage(fine, coarse, thresholds));
  return summarize(std::move(stages), thresholds);
}

}  // namespace rigged
