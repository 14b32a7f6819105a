#include "riggedframes/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "riggedframes/acceptance.hpp"
#include "riggedframes/duality.hpp"
#include "riggedframes/errors.hpp"
#include "riggedframes/riesz_fischer.hpp"

namespace rigged {

namespace {

[[noreturn]] void field_error(const std::string& path, const std::string& what) {
  throw ConfigError(path + ": " + what);
}

void reject_unknown(const ordered_json& obj, const std::string& path,
                    std::initializer_list<std::string_view> known) {
  for (const auto& [key, value] : obj.items()) {
    bool ok = false;
    for (auto k : known) ok = ok || key == k;
    if (!ok) field_error(path + "." + key, "unknown field");
  }
}

const ordered_json& require_object(const ordered_json& v, const std::string& path) {
  if (!v.is_object()) field_error(path, "expected an object");
  return v;
}

double get_number(const ordered_json& v, const std::string& path) {
  if (!v.is_number()) field_error(path, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) field_error(path, "must be finite");
  return d;
}

int get_int(const ordered_json& v, const std::string& path) {
  if (!v.is_number_integer()) field_error(path, "expected an integer");
  return v.get<int>();
}

std::string get_string(const ordered_json& v, const std::string& path) {
  if (!v.is_string()) field_error(path, "expected a string");
  return v.get<std::string>();
}

// Non-finite doubles are not representable in JSON.
ordered_json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

StageRow to_row(const StageResult& s) {
  return {s.truncation, s.half_width, s.nodes, s.lower, s.upper, s.sigma_min, s.sigma_max,
          s.total, s.mu_independent};
}

struct StageKernels {
  KernelMatrix fine;
  std::optional<KernelMatrix> coarse;
};

template <typename Fn>
auto with_stage_context(int N, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const NotAFrameError&) {
    throw;
  } catch (const NumericError& e) {
    throw NumericError("stage N=" + std::to_string(N) + ": " + e.what());
  }
}

std::vector<StageKernels> stage_kernels(const RunConfig& cfg) {
  std::vector<StageKernels> out;
  if (cfg.map.kind == MapKind::Custom) {
    const auto& c = *cfg.custom;
    const auto grid = build_grid(c.half_width, c.panels, c.order);
    out.push_back({sample_kernel(cfg.map, grid, c.truncation), std::nullopt});
    return out;
  }
  for (const auto& stage : cfg.ladder.stages) {
    out.push_back({sample_kernel(cfg.map, stage.grid(), stage.truncation),
                   coarse_kernel(cfg.map, stage.truncation)});
  }
  return out;
}

FrameReport classify_stages(const RunConfig& cfg, const std::vector<StageKernels>& kernels) {
  std::vector<StageResult> stages;
  for (const auto& k : kernels) {
    stages.push_back(with_stage_context(k.fine.truncation(), [&] {
      return evaluate_stage(k.fine, k.coarse ? &*k.coarse : nullptr, cfg.thresholds);
    }));
  }
  return summarize(std::move(stages), cfg.thresholds);
}

ordered_json trend_details(const FrameReport& rep) {
  ordered_json t;
  t["upper"] = std::string(to_string(rep.upper_trend));
  t["lower"] = std::string(to_string(rep.lower_trend));
  t["upper_ratio"] = num(rep.upper_ratio);
  t["lower_ratio"] = num(rep.lower_ratio);
  return t;
}

void fill_classification(ReportDocument& doc, const FrameReport& rep) {
  for (const auto& s : rep.stages) doc.stages.push_back(to_row(s));
  doc.labels = rep.label_names();
  doc.details["trends"] = trend_details(rep);
  ordered_json bessel;
  bessel["k"] = rep.bessel_k;
  bessel["constant"] = num(rep.bessel_constant);
  doc.details["bessel"] = bessel;
}

DualPair finest_dual(const RunConfig& cfg, const StageKernels& k) {
  return with_stage_context(k.fine.truncation(),
                            [&] { return canonical_dual(k.fine, cfg.thresholds.inverse_cutoff); });
}

void fill_dual(ReportDocument& doc, const DualPair& pair) {
  const auto b = dual_bounds(pair);
  doc.dual = DualSection{b.lower_theta, b.upper_theta, pair.duality_defect};
  doc.details["dual_inequality_holds"] = b.inequality_holds;
}

const KernelMatrix& moment_kernel(const StageKernels& k) { return k.coarse ? *k.coarse : k.fine; }

void fill_moment(ReportDocument& doc, const StageKernels& k) {
  const auto rf = rf_diagnostic(moment_kernel(k), 64);
  doc.moment = MomentSection{rf.score, rf.worst_residual};
}

ReportDocument run_demo(const RunConfig&) {
  ReportDocument doc;
  ordered_json checks = ordered_json::array();
  for (const auto& r : run_acceptance()) {
    ordered_json c;
    c["id"] = r.id;
    c["name"] = r.name;
    c["passed"] = r.passed;
    c["detail"] = r.detail;
    checks.push_back(c);
    doc.success = doc.success && r.passed;
  }
  doc.details["checks"] = checks;
  doc.details["all_passed"] = doc.success;
  return doc;
}

}  // namespace

RunConfig parse_config(const ordered_json& doc) {
  RunConfig cfg;
  require_object(doc, "config");
  reject_unknown(doc, "config", {"map", "ladder", "thresholds", "seed", "trials", "output"});

  if (doc.contains("map")) {
    const auto& m = require_object(doc["map"], "config.map");
    reject_unknown(m, "config.map", {"kind", "weight", "support", "path", "truncation", "grid"});
    if (!m.contains("kind")) field_error("config.map.kind", "missing");
    try {
      cfg.map = MapSpec(map_kind_from_string(get_string(m["kind"], "config.map.kind")));
    } catch (const ConfigError& e) {
      field_error("config.map.kind", e.what());
    }
    if (m.contains("weight")) {
      const auto text = get_string(m["weight"], "config.map.weight");
      try {
        cfg.map.weight = parse_weight(text);
      } catch (const ParseError& e) {
        field_error("config.map.weight", e.what());
      }
    }
    if (m.contains("support")) {
      const auto& s = m["support"];
      if (!s.is_array() || s.size() != 2) field_error("config.map.support", "expected [a, b]");
      cfg.map.bump_support = std::make_pair(get_number(s[0], "config.map.support[0]"),
                                            get_number(s[1], "config.map.support[1]"));
    }
    if (cfg.map.kind == MapKind::Custom) {
      CustomKernelConfig c;
      if (!m.contains("path")) field_error("config.map.path", "missing for custom map");
      if (!m.contains("truncation")) field_error("config.map.truncation", "missing for custom map");
      if (!m.contains("grid")) field_error("config.map.grid", "missing for custom map");
      c.path = get_string(m["path"], "config.map.path");
      c.truncation = get_int(m["truncation"], "config.map.truncation");
      const auto& g = require_object(m["grid"], "config.map.grid");
      reject_unknown(g, "config.map.grid", {"half_width", "panels", "order"});
      for (const char* key : {"half_width", "panels", "order"}) {
        if (!g.contains(key)) field_error(std::string("config.map.grid.") + key, "missing");
      }
      c.half_width = get_number(g["half_width"], "config.map.grid.half_width");
      c.panels = get_int(g["panels"], "config.map.grid.panels");
      c.order = get_int(g["order"], "config.map.grid.order");
      QuadratureGrid grid;
      try {
        grid = build_grid(c.half_width, c.panels, c.order);
      } catch (const ConfigError& e) {
        field_error("config.map.grid", e.what());
      }
      try {
        const auto kernel = load_custom_kernel(c.path, grid, c.truncation);
        cfg.map.custom_kernel = std::make_shared<const CMatrix>(kernel.entries());
      } catch (const Error& e) {
        field_error("config.map.path", e.what());
      }
      cfg.map.custom_path = c.path;
      cfg.custom = c;
    }
    try {
      cfg.map.validate();
    } catch (const ConfigError& e) {
      field_error("config.map", e.what());
    }
  }

  cfg.ladder = default_ladder(32);
  if (doc.contains("ladder")) {
    const auto& l = require_object(doc["ladder"], "config.ladder");
    reject_unknown(l, "config.ladder", {"n_max", "stages"});
    try {
      if (l.contains("stages")) {
        if (!l["stages"].is_array()) field_error("config.ladder.stages", "expected an array");
        std::vector<int> ns;
        for (std::size_t i = 0; i < l["stages"].size(); ++i) {
          ns.push_back(get_int(l["stages"][i], "config.ladder.stages[" + std::to_string(i) + "]"));
        }
        cfg.ladder = ladder_from_truncations(ns);
      } else if (l.contains("n_max")) {
        cfg.ladder = default_ladder(get_int(l["n_max"], "config.ladder.n_max"));
      }
    } catch (const ConfigError& e) {
      const std::string what = e.what();
      if (what.rfind("config.", 0) == 0) throw;
      field_error("config.ladder", what);
    }
  }

  if (doc.contains("thresholds")) {
    const auto& t = require_object(doc["thresholds"], "config.thresholds");
    reject_unknown(t, "config.thresholds",
                   {"stability", "growth", "rank_cutoff", "tight_tolerance", "null_cutoff",
                    "inverse_cutoff", "k_max"});
    auto positive = [&](const char* key, double& slot) {
      if (!t.contains(key)) return;
      const std::string path = std::string("config.thresholds.") + key;
      slot = get_number(t[key], path);
      if (!(slot > 0.0)) field_error(path, "must be positive");
    };
    positive("stability", cfg.thresholds.stability);
    positive("growth", cfg.thresholds.growth);
    positive("rank_cutoff", cfg.thresholds.rank_cutoff);
    positive("tight_tolerance", cfg.thresholds.tight_tolerance);
    positive("null_cutoff", cfg.thresholds.null_cutoff);
    positive("inverse_cutoff", cfg.thresholds.inverse_cutoff);
    if (t.contains("k_max")) {
      cfg.thresholds.k_max = get_int(t["k_max"], "config.thresholds.k_max");
      if (cfg.thresholds.k_max < 0) field_error("config.thresholds.k_max", "must be >= 0");
    }
  }

  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_unsigned()) field_error("config.seed", "expected an unsigned integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("trials")) {
    cfg.trials = get_int(doc["trials"], "config.trials");
    if (cfg.trials < 1) field_error("config.trials", "must be >= 1");
  }
  if (doc.contains("output")) {
    const auto& o = require_object(doc["output"], "config.output");
    reject_unknown(o, "config.output", {"path", "format"});
    if (o.contains("path")) cfg.output_path = get_string(o["path"], "config.output.path");
    if (o.contains("format")) {
      const auto f = get_string(o["format"], "config.output.format");
      if (f == "json") {
        cfg.format = OutputFormat::Json;
      } else if (f == "csv") {
        cfg.format = OutputFormat::Csv;
      } else {
        field_error("config.output.format", "expected json or csv");
      }
    }
  }

  // Normalized echo: everything that influences the numbers.
  ordered_json echo;
  ordered_json map;
  map["kind"] = std::string(to_string(cfg.map.kind));
  if (cfg.map.weight) map["weight"] = cfg.map.weight->to_string();
  if (cfg.map.bump_support) {
    map["support"] = {cfg.map.bump_support->first, cfg.map.bump_support->second};
  }
  if (cfg.custom) {
    map["path"] = cfg.custom->path;
    map["truncation"] = cfg.custom->truncation;
    map["grid"] = {{"half_width", cfg.custom->half_width},
                   {"panels", cfg.custom->panels},
                   {"order", cfg.custom->order}};
  }
  echo["map"] = map;
  ordered_json stages = ordered_json::array();
  for (const auto& s : cfg.ladder.stages) stages.push_back(s.truncation);
  echo["ladder"] = {{"stages", stages}};
  echo["thresholds"] = {{"stability", cfg.thresholds.stability},
                        {"growth", cfg.thresholds.growth},
                        {"rank_cutoff", cfg.thresholds.rank_cutoff},
                        {"tight_tolerance", cfg.thresholds.tight_tolerance},
                        {"null_cutoff", cfg.thresholds.null_cutoff},
                        {"inverse_cutoff", cfg.thresholds.inverse_cutoff},
                        {"k_max", cfg.thresholds.k_max}};
  echo["seed"] = cfg.seed;
  echo["trials"] = cfg.trials;
  cfg.echo = echo;
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  ordered_json doc;
  try {
    doc = ordered_json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  return parse_config(doc);
}

ReportDocument run(std::string_view command, const RunConfig& cfg) {
  const auto start = std::chrono::steady_clock::now();
  ReportDocument doc;
  if (command == "demo") {
    doc = run_demo(cfg);
  } else {
    const auto kernels = stage_kernels(cfg);
    const auto& finest = kernels.back();
    if (command == "classify") {
      fill_classification(doc, classify_stages(cfg, kernels));
      try {
        fill_dual(doc, finest_dual(cfg, finest));
      } catch (const NotAFrameError& e) {
        doc.details["dual_error"] = e.what();
      }
      fill_moment(doc, finest);
    } else if (command == "bounds") {
      const auto rep = classify_stages(cfg, kernels);
      for (const auto& s : rep.stages) doc.stages.push_back(to_row(s));
      doc.details["trends"] = trend_details(rep);
    } else if (command == "dual") {
      fill_dual(doc, finest_dual(cfg, finest));
    } else if (command == "reconstruct") {
      const auto pair = finest_dual(cfg, finest);
      fill_dual(doc, pair);
      std::mt19937_64 rng(cfg.seed);
      double worst_dual = 0.0;
      double worst_frame = 0.0;
      for (int t = 0; t < cfg.trials; ++t) {
        const auto f = TestFunction::random(pair.omega.truncation(), rng);
        worst_dual = std::max(worst_dual,
                              reconstruct(pair, f, ReconstructionOrder::DualSynthesis).rel_error);
        worst_frame = std::max(worst_frame,
                               reconstruct(pair, f, ReconstructionOrder::FrameSynthesis).rel_error);
      }
      doc.details["trials"] = cfg.trials;
      doc.details["dual_synthesis_max_error"] = num(worst_dual);
      doc.details["frame_synthesis_max_error"] = num(worst_frame);
    } else if (command == "moment-solve") {
      fill_moment(doc, finest);
      const auto& omega = moment_kernel(finest);
      std::mt19937_64 rng(cfg.seed);
      double worst_residual = 0.0;
      double worst_recovery = 0.0;
      int null_dim = 0;
      for (int t = 0; t < cfg.trials; ++t) {
        const auto f0 = TestFunction::random(omega.truncation(), rng);
        const auto sol = solve_moment(omega, analysis(omega, f0), cfg.thresholds.null_cutoff);
        const CMatrix& Z = sol.null_basis;
        const CVector rep = f0.coeffs() - Z * (Z.adjoint() * f0.coeffs());
        worst_residual = std::max(worst_residual, sol.residual);
        worst_recovery = std::max(worst_recovery, (sol.f.coeffs() - rep).norm() / f0.norm());
        null_dim = sol.null_dim;
      }
      doc.details["instances"] = cfg.trials;
      doc.details["nodes"] = omega.nodes();
      doc.details["null_dim"] = null_dim;
      doc.details["max_residual"] = num(worst_residual);
      doc.details["max_recovery_error"] = num(worst_recovery);
      ordered_json constants = ordered_json::array();
      for (int k = 0; k <= 2; ++k) {
        constants.push_back(
            {{"k", k}, {"C", num(continuity_constant(finest.fine, SeminormIndex{k},
                                                     cfg.thresholds.null_cutoff))}});
      }
      doc.details["continuity"] = constants;
    } else if (command == "sweep") {
      const auto rep = classify_stages(cfg, kernels);
      fill_classification(doc, rep);
      ordered_json per_stage = ordered_json::array();
      for (std::size_t i = 0; i < kernels.size(); ++i) {
        ordered_json row;
        row["N"] = rep.stages[i].truncation;
        ordered_json bessel = ordered_json::array();
        for (double c : rep.stages[i].bessel_constants) bessel.push_back(num(c));
        row["bessel_constants"] = bessel;
        row["continuity_k0"] = num(continuity_constant(kernels[i].fine, SeminormIndex{0},
                                                       cfg.thresholds.null_cutoff));
        per_stage.push_back(row);
      }
      doc.details["sweep"] = per_stage;
    } else {
      throw ConfigError("unknown command '" + std::string(command) + "'");
    }
  }
  doc.config = cfg.echo;
  doc.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return doc;
}

std::string emit(const ReportDocument& report, OutputFormat format) {
  if (format == OutputFormat::Csv) {
    std::string out = "N,L,nodes,A,B,sigma_min,sigma_max,total,mu_independent\n";
    char buf[512];
    for (const auto& s : report.stages) {
      std::snprintf(buf, sizeof buf, "%d,%.17g,%d,%.17g,%.17g,%.17g,%.17g,%s,%s\n", s.N, s.L,
                    s.nodes, s.A, s.B, s.sigma_min, s.sigma_max, s.total ? "true" : "false",
                    s.mu_independent ? "true" : "false");
      out += buf;
    }
    return out;
  }
  ordered_json doc;
  doc["config"] = report.config;
  ordered_json stages = ordered_json::array();
  for (const auto& s : report.stages) {
    ordered_json row;
    row["N"] = s.N;
    row["L"] = s.L;
    row["nodes"] = s.nodes;
    row["A"] = s.A;
    row["B"] = s.B;
    row["sigma_min"] = s.sigma_min;
    row["sigma_max"] = s.sigma_max;
    row["total"] = s.total;
    row["mu_independent"] = s.mu_independent;
    stages.push_back(row);
  }
  doc["stages"] = stages;
  doc["labels"] = report.labels;
  if (report.dual) {
    doc["dual"] = {{"A_theta", report.dual->A_theta},
                   {"B_theta", report.dual->B_theta},
                   {"defect", report.dual->defect}};
  } else {
    doc["dual"] = nullptr;
  }
  if (report.moment) {
    doc["moment"] = {{"score", report.moment->score},
                     {"worst_residual", report.moment->worst_residual}};
  } else {
    doc["moment"] = nullptr;
  }
  doc["details"] = report.details;
  doc["timing"] = {{"seconds", report.seconds}};
  return doc.dump(2) + "\n";
}

ReportDocument parse_report(std::string_view json_text) {
  const auto doc = ordered_json::parse(json_text);
  ReportDocument r;
  r.config = doc.at("config");
  for (const auto& s : doc.at("stages")) {
    r.stages.push_back({s.at("N").get<int>(), s.at("L").get<double>(), s.at("nodes").get<int>(),
                        s.at("A").get<double>(), s.at("B").get<double>(),
                        s.at("sigma_min").get<double>(), s.at("sigma_max").get<double>(),
                        s.at("total").get<bool>(), s.at("mu_independent").get<bool>()});
  }
  r.labels = doc.at("labels").get<std::vector<std::string>>();
  if (!doc.at("dual").is_null()) {
    const auto& d = doc.at("dual");
    r.dual = DualSection{d.at("A_theta").get<double>(), d.at("B_theta").get<double>(),
                         d.at("defect").get<double>()};
  }
  if (!doc.at("moment").is_null()) {
    const auto& m = doc.at("moment");
    r.moment = MomentSection{m.at("score").get<double>(), m.at("worst_residual").get<double>()};
  }
  r.details = doc.value("details", ordered_json::object());
  if (doc.contains("timing")) r.seconds = doc["timing"].value("seconds", 0.0);
  if (r.details.contains("all_passed")) r.success = r.details["all_passed"].get<bool>();
  return r;
}

void write_atomically(const std::string& path, const std::string& contents) {
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("output: cannot write '" + tmp.string() + "'");
    out << contents;
    if (!out) throw ConfigError("output: write failed for '" + tmp.string() + "'");
  }
  std::filesystem::rename(tmp, target);
}

}  // namespace rigged
