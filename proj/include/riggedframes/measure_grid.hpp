#pragma once

// Quadrature discretization of the measure space (X, mu) = ([-L, L], Lebesgue).

#include <string>
#include <vector>

#include "riggedframes/types.hpp"

namespace rigged {

struct QuadratureGrid {
  std::vector<double> nodes;    // ascending, inside [-L, L]
  std::vector<double> weights;  // positive
  double half_width = 0.0;
  int panels = 0;
  int order = 0;

  int size() const { return static_cast<int>(nodes.size()); }
  double measure() const;
  /// Short stable description used to tag derived objects.
  std::string fingerprint() const;
  /// Node indices belonging to panel p.
  std::pair<int, int> panel_range(int p) const;
};

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

/// Composite Gauss-Legendre rule with `panels` equal panels over [-L, L].
QuadratureGrid build_grid(double half_width, int panels, int order);

struct GridFunction {
  CVector values;

  GridFunction() = default;
  explicit GridFunction(CVector v) : values(std::move(v)) {}

  int size() const { return static_cast<int>(values.size()); }
};

/// Samples of a real or complex callable at the grid nodes.
template <typename Fn>
GridFunction sample_on(const QuadratureGrid& grid, Fn&& fn) {
  CVector v(grid.size());
  for (int j = 0; j < grid.size(); ++j) v[j] = fn(grid.nodes[static_cast<std::size_t>(j)]);
  return GridFunction(std::move(v));
}

/// Diagonal of quadrature weights as an Eigen vector.
RVector weight_vector(const QuadratureGrid& grid);

/// sum_j w_j xi_j conj(eta_j)
cplx l2x_inner(const GridFunction& xi, const GridFunction& eta, const QuadratureGrid& grid);
double l2x_norm(const GridFunction& xi, const QuadratureGrid& grid);

struct LadderStage {
  int truncation = 0;
  double half_width = 0.0;
  int panels = 0;
  int order = 0;

  int node_count() const { return panels * order; }
  QuadratureGrid grid() const { return build_grid(half_width, panels, order); }
};

struct RefinementLadder {
  std::vector<LadderStage> stages;

  bool empty() const { return stages.empty(); }
  std::size_t size() const { return stages.size(); }
};

/// Margin added to the Hermite turning point sqrt(2N+1).
inline constexpr double kHalfWidthMargin = 8.0;
inline constexpr int kStageOrder = 16;

/// Quadrature stage for truncation N: L = sqrt(2N+1) + 8 and at least 20 N nodes.
LadderStage default_stage(int truncation);

/// Stages N = 8, 16, ..., n_max. n_max must be 8 times a power of two.
RefinementLadder default_ladder(int n_max);

/// Ladder with explicit truncations, each at its default stage; validated.
RefinementLadder ladder_from_truncations(const std::vector<int>& truncations);

/// Throws ConfigError unless the ladder satisfies its invariants.
void validate_ladder(const RefinementLadder& ladder);

/// Coarse grid with at most N/2 nodes inside the Hermite bulk, used where
/// the number of nodes must not exceed the truncation.
QuadratureGrid coarse_grid(int truncation);

}  // namespace rigged
