#include "riggedframes/map_catalog.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "riggedframes/errors.hpp"
#include "riggedframes/schwartz.hpp"

namespace rigged {

std::string_view to_string(MapKind kind) {
  switch (kind) {
    case MapKind::Fourier: return "fourier";
    case MapKind::Dirac: return "dirac";
    case MapKind::DiracDerivative: return "dirac_derivative";
    case MapKind::WeightedDirac: return "weighted_dirac";
    case MapKind::BumpDirac: return "bump_dirac";
    case MapKind::Custom: return "custom";
  }
  return "unknown";
}

MapKind map_kind_from_string(std::string_view name) {
  for (MapKind k : {MapKind::Fourier, MapKind::Dirac, MapKind::DiracDerivative,
                    MapKind::WeightedDirac, MapKind::BumpDirac, MapKind::Custom}) {
    if (to_string(k) == name) return k;
  }
  throw ConfigError("unknown map kind '" + std::string(name) + "'");
}

MapSpec MapSpec::weighted_dirac(std::string_view weight) {
  MapSpec s(MapKind::WeightedDirac);
  s.weight = parse_weight(weight);
  return s;
}

MapSpec MapSpec::bump_dirac(double a, double b) {
  MapSpec s(MapKind::BumpDirac);
  s.bump_support = std::make_pair(a, b);
  s.validate();
  return s;
}

void MapSpec::validate() const {
  switch (kind) {
    case MapKind::WeightedDirac:
      if (!weight || weight->empty()) throw ConfigError("weighted_dirac requires a weight");
      break;
    case MapKind::BumpDirac:
      if (!bump_support) throw ConfigError("bump_dirac requires a support interval");
      if (!(bump_support->first < bump_support->second)) {
        throw ConfigError("bump_dirac support must satisfy a < b");
      }
      break;
    case MapKind::Custom:
      if (!custom_kernel) throw ConfigError("custom map requires a kernel matrix");
      break;
    default: break;
  }
}

std::string MapSpec::describe() const {
  std::string out(to_string(kind));
  if (weight) out += "[" + weight->to_string() + "]";
  if (bump_support) {
    std::ostringstream os;
    os.precision(17);
    os << "(" << bump_support->first << "," << bump_support->second << ")";
    out += os.str();
  }
  if (kind == MapKind::Custom && !custom_path.empty()) out += "<" + custom_path + ">";
  return out;
}

KernelMatrix::KernelMatrix(CMatrix entries, QuadratureGrid grid, std::string provenance)
    : entries_(std::move(entries)), grid_(std::move(grid)), provenance_(std::move(provenance)) {
  if (entries_.rows() != grid_.size()) {
    throw DimensionError("kernel has " + std::to_string(entries_.rows()) + " rows but grid has " +
                         std::to_string(grid_.size()) + " nodes");
  }
}

CMatrix KernelMatrix::weighted() const {
  const RVector sw = weight_vector(grid_).cwiseSqrt();
  return sw.asDiagonal() * entries_;
}

KernelMatrix KernelMatrix::scaled(cplx c) const {
  return with_entries(entries_ * c, provenance_ + "*scaled");
}

KernelMatrix KernelMatrix::with_entries(CMatrix entries, std::string provenance) const {
  return KernelMatrix(std::move(entries), grid_, std::move(provenance));
}

double bump_weight(double x, double a, double b) {
  if (!(x > a && x < b)) return 0.0;
  const double t = (2.0 * x - a - b) / (b - a);
  const double s = 1.0 - t * t;
  if (s <= 0.0) return 0.0;
  return std::exp(1.0 - 1.0 / s);
}

int assembly_threads() {
  if (const char* env = std::getenv("RIGGEDFRAMES_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

namespace {

// Fills row j of the kernel. Every entry depends only on (spec, x_j, n).
void fill_row(const MapSpec& spec, double x, int N, CMatrix& out, int j) {
  switch (spec.kind) {
    case MapKind::Dirac: {
      const auto h = hermite_table(N, x);
      for (int n = 0; n < N; ++n) out(j, n) = h[static_cast<std::size_t>(n)];
      return;
    }
    case MapKind::Fourier: {
      const auto h = hermite_table(N, x);
      for (int n = 0; n < N; ++n) out(j, n) = minus_i_power(n) * h[static_cast<std::size_t>(n)];
      return;
    }
    case MapKind::DiracDerivative: {
      // <h_n, delta'_x> = -h_n'(x)
      const auto h = hermite_table(N + 1, x);
      for (int n = 0; n < N; ++n) {
        const double down = n > 0 ? std::sqrt(n / 2.0) * h[static_cast<std::size_t>(n - 1)] : 0.0;
        const double up = std::sqrt((n + 1) / 2.0) * h[static_cast<std::size_t>(n + 1)];
        out(j, n) = -(down - up);
      }
      return;
    }
    case MapKind::WeightedDirac: {
      const double w = spec.weight->eval(x);
      const auto h = hermite_table(N, x);
      for (int n = 0; n < N; ++n) out(j, n) = w * h[static_cast<std::size_t>(n)];
      return;
    }
    case MapKind::BumpDirac: {
      const double w = bump_weight(x, spec.bump_support->first, spec.bump_support->second);
      if (w == 0.0) {
        out.row(j).setZero();
        return;
      }
      const auto h = hermite_table(N, x);
      for (int n = 0; n < N; ++n) out(j, n) = w * h[static_cast<std::size_t>(n)];
      return;
    }
    case MapKind::Custom: break;
  }
}

}  // namespace

KernelMatrix sample_kernel(const MapSpec& spec, const QuadratureGrid& grid, int truncation) {
  spec.validate();
  if (truncation < 1) throw ConfigError("truncation must be >= 1");
  const std::string provenance = spec.describe() + "@" + grid.fingerprint() + "/N=" +
                                 std::to_string(truncation);
  if (spec.kind == MapKind::Custom) {
    const CMatrix& k = *spec.custom_kernel;
    if (k.rows() != grid.size() || k.cols() != truncation) {
      throw DimensionError("custom kernel is " + std::to_string(k.rows()) + "x" +
                           std::to_string(k.cols()) + ", expected " +
                           std::to_string(grid.size()) + "x" + std::to_string(truncation));
    }
    return KernelMatrix(k, grid, provenance);
  }

  const int rows = grid.size();
  CMatrix entries(rows, truncation);
  const int threads = std::max(1, std::min(assembly_threads(), rows / 64));
  if (threads == 1) {
    for (int j = 0; j < rows; ++j) {
      fill_row(spec, grid.nodes[static_cast<std::size_t>(j)], truncation, entries, j);
    }
  } else {
    std::vector<std::jthread> pool;
    const int chunk = (rows + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const int begin = t * chunk;
      const int end = std::min(rows, begin + chunk);
      pool.emplace_back([&, begin, end] {
        for (int j = begin; j < end; ++j) {
          fill_row(spec, grid.nodes[static_cast<std::size_t>(j)], truncation, entries, j);
        }
      });
    }
  }
  return KernelMatrix(std::move(entries), grid, provenance);
}

KernelMatrix read_custom_kernel(std::istream& in, const QuadratureGrid& grid, int truncation) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError("custom kernel: missing header", 0);
  {
    std::istringstream header(line);
    std::string cell;
    int count = 0;
    while (std::getline(header, cell, ',')) ++count;
    if (count != 2 * truncation) {
      throw DimensionError("custom kernel header has " + std::to_string(count) +
                           " columns, expected " + std::to_string(2 * truncation));
    }
  }
  std::vector<std::vector<double>> rows;
  std::size_t offset = line.size() + 1;
  int row_index = 0;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) {
      offset += 1;
      continue;
    }
    std::vector<double> values;
    std::istringstream cells(line);
    std::string cell;
    int col = 0;
    while (std::getline(cells, cell, ',')) {
      char* end = nullptr;
      const double v = std::strtod(cell.c_str(), &end);
      const bool blank = cell.find_first_not_of(" \t") == std::string::npos;
      if (blank || end == cell.c_str() || *end != '\0' || !std::isfinite(v)) {
        throw ParseError("custom kernel: non-numeric cell at row " + std::to_string(row_index + 1) +
                             " column " + std::to_string(col + 1),
                         offset);
      }
      values.push_back(v);
      ++col;
    }
    if (static_cast<int>(values.size()) != 2 * truncation) {
      throw DimensionError("custom kernel row " + std::to_string(row_index + 1) + " has " +
                           std::to_string(values.size()) + " cells, expected " +
                           std::to_string(2 * truncation));
    }
    rows.push_back(std::move(values));
    offset += line.size() + 1;
    ++row_index;
  }
  if (static_cast<int>(rows.size()) != grid.size()) {
    throw DimensionError("custom kernel has " + std::to_string(rows.size()) +
                         " rows, grid has " + std::to_string(grid.size()) + " nodes");
  }
  CMatrix entries(grid.size(), truncation);
  for (int j = 0; j < grid.size(); ++j) {
    for (int n = 0; n < truncation; ++n) {
      const auto& r = rows[static_cast<std::size_t>(j)];
      entries(j, n) = cplx(r[static_cast<std::size_t>(2 * n)], r[static_cast<std::size_t>(2 * n + 1)]);
    }
  }
  return KernelMatrix(std::move(entries), grid, "custom@" + grid.fingerprint());
}

KernelMatrix load_custom_kernel(const std::string& path, const QuadratureGrid& grid,
                                int truncation) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open custom kernel file '" + path + "'");
  return read_custom_kernel(in, grid, truncation);
}

void write_custom_kernel(std::ostream& out, const KernelMatrix& kernel) {
  const int N = kernel.truncation();
  for (int n = 0; n < N; ++n) {
    out << (n ? "," : "") << "re" << n << ",im" << n;
  }
  out << '\n';
  char buf[64];
  for (int j = 0; j < kernel.nodes(); ++j) {
    for (int n = 0; n < N; ++n) {
      const cplx v = kernel.entries()(j, n);
      std::snprintf(buf, sizeof buf, "%s%.17g,%.17g", n ? "," : "", v.real(), v.imag());
      out << buf;
    }
    out << '\n';
  }
}

}  // namespace rigged
