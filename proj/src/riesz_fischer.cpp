#include "riggedframes/riesz_fischer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/SVD>

#include "riggedframes/errors.hpp"

namespace rigged {

LeastSquaresResult weighted_least_squares(const CMatrix& A, const CVector& b,
                                          const RVector& weights, double cutoff) {
  if (A.rows() != b.size() || A.rows() != weights.size()) {
    throw DimensionError("weighted_least_squares: " + std::to_string(A.rows()) + " rows, " +
                         std::to_string(b.size()) + " rhs entries, " +
                         std::to_string(weights.size()) + " weights");
  }
  if (!A.allFinite() || !b.allFinite() || !weights.allFinite()) {
    throw NumericError("weighted_least_squares: non-finite input");
  }
  const RVector sw = weights.cwiseSqrt();
  const CMatrix As = sw.asDiagonal() * A;
  const CVector bs = sw.cwiseProduct(b).eval();
  const Eigen::Index n = A.cols();

  LeastSquaresResult out;
  Eigen::BDCSVD<CMatrix> svd(As, Eigen::ComputeThinU | Eigen::ComputeFullV);
  out.singular_values = svd.singularValues();
  const double smax = out.singular_values.size() ? out.singular_values[0] : 0.0;
  int rank = 0;
  while (rank < out.singular_values.size() && smax > 0.0 &&
         out.singular_values[rank] > cutoff * smax) {
    ++rank;
  }
  out.rank = rank;
  const CVector coeffs = svd.matrixU().leftCols(rank).adjoint() * bs;
  out.x = svd.matrixV().leftCols(rank) *
          out.singular_values.head(rank).cwiseInverse().cast<cplx>().cwiseProduct(coeffs);
  out.residual = (As * out.x - bs).norm();
  out.null_basis = svd.matrixV().rightCols(n - rank);
  return out;
}

MomentSolution solve_moment(const KernelMatrix& omega, const GridFunction& h, double cutoff) {
  if (h.size() != omega.nodes()) {
    throw DimensionError("solve_moment: h has " + std::to_string(h.size()) +
                         " samples, grid has " + std::to_string(omega.nodes()));
  }
  const auto ls =
      weighted_least_squares(omega.entries(), h.values, weight_vector(omega.grid()), cutoff);
  MomentSolution out;
  out.f = TestFunction(ls.x);
  const double h_norm = l2x_norm(h, omega.grid());
  out.residual = h_norm > 0.0 ? ls.residual / h_norm : ls.residual;
  out.null_dim = static_cast<int>(ls.null_basis.cols());
  out.null_basis = ls.null_basis;
  return out;
}

RieszFischerScore rf_diagnostic(const KernelMatrix& omega, int probes) {
  if (probes < 1) throw ConfigError("rf_diagnostic: probes must be >= 1");
  const auto& grid = omega.grid();
  RieszFischerScore out;
  out.probes = std::min(probes, grid.panels);
  int solved = 0;
  for (int i = 0; i < out.probes; ++i) {
    const int panel = static_cast<int>((i + 0.5) * grid.panels / out.probes);
    const auto [begin, end] = grid.panel_range(panel);
    double mass = 0.0;
    for (int j = begin; j < end; ++j) mass += grid.weights[static_cast<std::size_t>(j)];
    CVector probe = CVector::Zero(grid.size());
    for (int j = begin; j < end; ++j) probe[j] = 1.0 / std::sqrt(mass);
    const auto sol = solve_moment(omega, GridFunction(std::move(probe)));
    out.worst_residual = std::max(out.worst_residual, sol.residual);
    if (sol.residual <= 1e-6) ++solved;
  }
  out.score = static_cast<double>(solved) / out.probes;
  return out;
}

double continuity_constant(const KernelMatrix& omega, SeminormIndex k, double cutoff) {
  const CMatrix A = omega.weighted();
  Eigen::JacobiSVD<CMatrix> svd(A, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const RVector& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return std::numeric_limits<double>::infinity();
  int rank = 0;
  while (rank < s.size() && s[rank] > cutoff * s[0]) ++rank;
  // Least-norm map h -> f is V_r S_r^{-1} U_r^H; U_r is an isometry.
  const CMatrix map = seminorm_weights(omega.truncation(), k).asDiagonal() *
                      svd.matrixV().leftCols(rank) *
                      s.head(rank).cwiseInverse().asDiagonal();
  Eigen::JacobiSVD<CMatrix> outer(map);
  return outer.singularValues()[0];
}

GridFunction envelope(const KernelMatrix& omega, SeminormIndex k) {
  const RVector inv = seminorm_weights(omega.truncation(), k).cwiseInverse();
  const CMatrix scaled = omega.entries() * inv.asDiagonal();
  CVector e(omega.nodes());
  for (int j = 0; j < omega.nodes(); ++j) e[j] = scaled.row(j).norm();
  return GridFunction(std::move(e));
}

EnvelopeCheck envelope_condition_check(const KernelMatrix& omega, const GridFunction& h,
                                       SeminormIndex k) {
  if (h.size() != omega.nodes()) {
    throw DimensionError("envelope_condition_check: h length does not match grid");
  }
  const auto e = envelope(omega, k);
  EnvelopeCheck out;
  for (int j = 0; j < h.size(); ++j) {
    const double hj = std::abs(h.values[j]);
    const double ej = e.values[j].real();
    if (hj == 0.0) continue;
    if (ej == 0.0) {
      out.r = std::numeric_limits<double>::infinity();
      break;
    }
    out.r = std::max(out.r, hj / ej);
  }
  out.satisfied = std::isfinite(out.r);
  return out;
}

DualBesselResult dual_bessel_check(const MapSpec& spec, const RefinementLadder& ladder,
                                   const Thresholds& thresholds, int probes) {
  validate_ladder(ladder);
  const auto coarse = coarse_kernel(spec, ladder.stages.back().truncation);
  const auto rf = rf_diagnostic(coarse, probes);
  if (rf.score < 1.0) {
    throw ConfigError("dual_bessel_check: " + spec.describe() +
                      " is not Riesz-Fischer at desk scale (score " + std::to_string(rf.score) +
                      ")");
  }
  std::vector<std::vector<double>> constants;
  for (const auto& stage : ladder.stages) {
    const auto omega = sample_kernel(spec, stage.grid(), stage.truncation);
    const auto pair = canonical_dual(omega, thresholds.inverse_cutoff);
    const auto S_theta = frame_operator(pair.theta);
    std::vector<double> row;
    for (int k = 0; k <= thresholds.k_max; ++k) {
      row.push_back(bessel_constant(S_theta, SeminormIndex{k}));
    }
    constants.push_back(std::move(row));
  }
  const auto witness = bessel_witness(constants, thresholds.stability);
  return {witness.k >= 0, witness.k, witness.constant};
}

}  // namespace rigged
