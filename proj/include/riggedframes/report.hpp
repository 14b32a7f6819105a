#pragma once

// Config ingestion, experiment orchestration and report emission for the CLI.

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "riggedframes/duality.hpp"
#include "riggedframes/frame_ops.hpp"
#include "riggedframes/map_catalog.hpp"
#include "riggedframes/measure_grid.hpp"

namespace rigged {

using ordered_json = nlohmann::ordered_json;

enum class OutputFormat { Json, Csv };

struct CustomKernelConfig {
  std::string path;
  int truncation = 0;
  double half_width = 0.0;
  int panels = 0;
  int order = 0;
};

struct RunConfig {
  MapSpec map;
  std::optional<CustomKernelConfig> custom;
  RefinementLadder ladder;
  Thresholds thresholds;
  std::uint64_t seed = kDefaultSeed;
  int trials = 20;
  std::string output_path;  // empty: stdout
  OutputFormat format = OutputFormat::Json;
  ordered_json echo;  // normalized config, written back into the report
};

/// Validates and normalizes a JSON config. Errors name the offending field,
/// e.g. "config.map.weight: ...".
RunConfig parse_config(const ordered_json& doc);
RunConfig load_config(const std::string& path);

struct StageRow {
  int N = 0;
  double L = 0.0;
  int nodes = 0;
  double A = 0.0;
  double B = 0.0;
  double sigma_min = 0.0;
  double sigma_max = 0.0;
  bool total = false;
  bool mu_independent = false;

  friend bool operator==(const StageRow&, const StageRow&) = default;
};

struct DualSection {
  double A_theta = 0.0;
  double B_theta = 0.0;
  double defect = 0.0;

  friend bool operator==(const DualSection&, const DualSection&) = default;
};

struct MomentSection {
  double score = 0.0;
  double worst_residual = 0.0;

  friend bool operator==(const MomentSection&, const MomentSection&) = default;
};

struct ReportDocument {
  ordered_json config;
  std::vector<StageRow> stages;
  std::vector<std::string> labels;
  std::optional<DualSection> dual;
  std::optional<MomentSection> moment;
  ordered_json details = ordered_json::object();
  double seconds = 0.0;  // timing; excluded from determinism
  bool success = true;   // false when a `demo` check failed
};

inline constexpr std::string_view kCommands[] = {"classify", "bounds", "dual", "reconstruct",
                                                 "moment-solve", "sweep", "demo"};

/// Executes one command. Numeric failures are rethrown with stage context.
ReportDocument run(std::string_view command, const RunConfig& config);

std::string emit(const ReportDocument& report, OutputFormat format);
/// Inverse of emit(json); timing is read back too.
ReportDocument parse_report(std::string_view json_text);

/// Writes via a temporary file and rename so readers never see partial output.
void write_atomically(const std::string& path, const std::string& contents);

}  // namespace rigged
