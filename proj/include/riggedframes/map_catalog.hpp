#pragma once

// Sampled weakly measurable maps x -> omega_x in S^x(R).
//
// A map is stored as its kernel Omega[j][n] = <h_n, omega_{x_j}> over the
// nodes of a quadrature grid, so that <f, omega_{x_j}> = (Omega c(f))_j.

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "riggedframes/measure_grid.hpp"
#include "riggedframes/types.hpp"
#include "riggedframes/weight_expr.hpp"

namespace rigged {

enum class MapKind { Fourier, Dirac, DiracDerivative, WeightedDirac, BumpDirac, Custom };

std::string_view to_string(MapKind kind);
/// Throws ConfigError for unknown names.
MapKind map_kind_from_string(std::string_view name);

struct MapSpec {
  explicit MapSpec(MapKind k = MapKind::Dirac) : kind(k) {}

  MapKind kind = MapKind::Dirac;
  std::optional<WeightExpr> weight;
  std::optional<std::pair<double, double>> bump_support;
  std::shared_ptr<const CMatrix> custom_kernel;
  std::string custom_path;

  static MapSpec dirac() { return MapSpec(MapKind::Dirac); }
  static MapSpec fourier() { return MapSpec(MapKind::Fourier); }
  static MapSpec dirac_derivative() { return MapSpec(MapKind::DiracDerivative); }
  static MapSpec weighted_dirac(std::string_view weight);
  static MapSpec bump_dirac(double a, double b);

  /// Throws ConfigError when the kind-specific fields are missing or invalid.
  void validate() const;
  std::string describe() const;
};

class KernelMatrix {
 public:
  KernelMatrix() = default;
  KernelMatrix(CMatrix entries, QuadratureGrid grid, std::string provenance = "custom");

  const CMatrix& entries() const { return entries_; }
  const QuadratureGrid& grid() const { return grid_; }
  int truncation() const { return static_cast<int>(entries_.cols()); }
  int nodes() const { return static_cast<int>(entries_.rows()); }
  const std::string& provenance() const { return provenance_; }

  /// diag(sqrt(w)) * Omega; its singular values are the square roots of the
  /// frame operator's eigenvalues.
  CMatrix weighted() const;

  KernelMatrix scaled(cplx c) const;
  KernelMatrix with_entries(CMatrix entries, std::string provenance) const;

 private:
  CMatrix entries_;
  QuadratureGrid grid_;
  std::string provenance_;
};

/// The smooth bump exp(1 - 1/(1 - t^2)) on (a, b), with maximum 1 at the midpoint.
double bump_weight(double x, double a, double b);

/// Thread cap from RIGGEDFRAMES_THREADS (default: hardware concurrency).
int assembly_threads();

KernelMatrix sample_kernel(const MapSpec& spec, const QuadratureGrid& grid, int truncation);

/// Custom-kernel CSV: header re0,im0,...,re{N-1},im{N-1}; one row per grid node.
KernelMatrix load_custom_kernel(const std::string& path, const QuadratureGrid& grid,
                                int truncation);
KernelMatrix read_custom_kernel(std::istream& in, const QuadratureGrid& grid, int truncation);
void write_custom_kernel(std::ostream& out, const KernelMatrix& kernel);

}  // namespace rigged
