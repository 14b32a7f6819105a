#include "riggedframes/measure_grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "riggedframes/errors.hpp"

namespace rigged {

double QuadratureGrid::measure() const {
  double sum = 0.0;
  for (double w : weights) sum += w;
  return sum;
}

std::string QuadratureGrid::fingerprint() const {
  std::ostringstream os;
  os.precision(17);
  os << "gl[L=" << half_width << ",panels=" << panels << ",order=" << order << "]";
  return os.str();
}

std::pair<int, int> QuadratureGrid::panel_range(int p) const {
  return {p * order, (p + 1) * order};
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.assign(static_cast<std::size_t>(order), 0.0);
  weights.assign(static_cast<std::size_t>(order), 0.0);
  const int half = (order + 1) / 2;
  for (int i = 0; i < half; ++i) {
    // Tricomi initial guess, then Newton on P_order.
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int k = 2; k <= order; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) <= 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (int k = 2; k <= order; ++k) {
      const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
      p0 = p1;
      p1 = p2;
    }
    dp = order * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    nodes[static_cast<std::size_t>(i)] = -x;
    nodes[static_cast<std::size_t>(order - 1 - i)] = x;
    weights[static_cast<std::size_t>(i)] = w;
    weights[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  if (order % 2 == 1) nodes[static_cast<std::size_t>(order / 2)] = 0.0;
}

QuadratureGrid build_grid(double half_width, int panels, int order) {
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    throw ConfigError("grid half_width must be positive and finite");
  }
  if (panels < 1) throw ConfigError("grid panels must be >= 1");
  if (order < 2) throw ConfigError("grid order must be >= 2");

  std::vector<double> ref_nodes;
  std::vector<double> ref_weights;
  gauss_legendre(order, ref_nodes, ref_weights);

  QuadratureGrid grid;
  grid.half_width = half_width;
  grid.panels = panels;
  grid.order = order;
  grid.nodes.reserve(static_cast<std::size_t>(panels * order));
  grid.weights.reserve(static_cast<std::size_t>(panels * order));
  const double width = 2.0 * half_width / panels;
  for (int p = 0; p < panels; ++p) {
    // Mirror panel p onto panel (panels-1-p) exactly so the grid is symmetric.
    const double centre = -half_width + (p + 0.5) * width;
    const int mirror = panels - 1 - p;
    const double mirror_centre = -half_width + (mirror + 0.5) * width;
    const double c = (p < mirror) ? centre : (p == mirror ? 0.0 : -mirror_centre);
    for (int i = 0; i < order; ++i) {
      grid.nodes.push_back(c + 0.5 * width * ref_nodes[static_cast<std::size_t>(i)]);
      grid.weights.push_back(0.5 * width * ref_weights[static_cast<std::size_t>(i)]);
    }
  }
  return grid;
}

RVector weight_vector(const QuadratureGrid& grid) {
  return Eigen::Map<const RVector>(grid.weights.data(), grid.size());
}

cplx l2x_inner(const GridFunction& xi, const GridFunction& eta, const QuadratureGrid& grid) {
  if (xi.size() != grid.size() || eta.size() != grid.size()) {
    throw DimensionError("l2x_inner: grid function length does not match grid (" +
                         std::to_string(xi.size()) + ", " + std::to_string(eta.size()) +
                         " vs " + std::to_string(grid.size()) + ")");
  }
  cplx sum = 0.0;
  for (int j = 0; j < grid.size(); ++j) {
    sum += grid.weights[static_cast<std::size_t>(j)] * xi.values[j] * std::conj(eta.values[j]);
  }
  return sum;
}

double l2x_norm(const GridFunction& xi, const QuadratureGrid& grid) {
  return std::sqrt(std::max(0.0, l2x_inner(xi, xi, grid).real()));
}

LadderStage default_stage(int truncation) {
  if (truncation < 1) throw ConfigError("truncation must be >= 1");
  LadderStage s;
  s.truncation = truncation;
  s.half_width = std::sqrt(2.0 * truncation + 1.0) + kHalfWidthMargin;
  s.order = kStageOrder;
  s.panels = (20 * truncation + kStageOrder - 1) / kStageOrder;
  return s;
}

RefinementLadder default_ladder(int n_max) {
  if (n_max < 8 || n_max % 8 != 0 || ((n_max / 8) & (n_max / 8 - 1)) != 0) {
    throw ConfigError("ladder n_max must be 8 times a power of two, got " +
                      std::to_string(n_max));
  }
  RefinementLadder ladder;
  for (int n = 8; n <= n_max; n *= 2) ladder.stages.push_back(default_stage(n));
  return ladder;
}

RefinementLadder ladder_from_truncations(const std::vector<int>& truncations) {
  RefinementLadder ladder;
  for (int n : truncations) ladder.stages.push_back(default_stage(n));
  validate_ladder(ladder);
  return ladder;
}

void validate_ladder(const RefinementLadder& ladder) {
  if (ladder.empty()) throw ConfigError("ladder: at least one stage is required");
  for (std::size_t i = 0; i < ladder.size(); ++i) {
    const auto& s = ladder.stages[i];
    const std::string where = "ladder.stages[" + std::to_string(i) + "]";
    if (s.truncation < 1) throw ConfigError(where + ".N must be >= 1");
    if (s.half_width < std::sqrt(2.0 * s.truncation + 1.0)) {
      throw ConfigError(where + ".L is inside the Hermite turning point");
    }
    if (s.panels < 1 || s.order < 2) throw ConfigError(where + ": invalid panels/order");
    if (i > 0) {
      const auto& prev = ladder.stages[i - 1];
      if (s.truncation <= prev.truncation) {
        throw ConfigError(where + ".N must increase along the ladder");
      }
    }
  }
}

QuadratureGrid coarse_grid(int truncation) {
  if (truncation < 4) throw ConfigError("coarse grid needs truncation >= 4");
  const int nodes = truncation / 2;
  const int order = std::min(nodes, 4);
  const int panels = nodes / order;
  return build_grid(0.5 * std::sqrt(2.0 * truncation + 1.0), panels, order);
}

}  // namespace rigged
