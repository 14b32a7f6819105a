// riggedframes: command-line front end for the frame toolkit.
//
//   riggedframes classify --config map.json --format json
//   riggedframes demo

#include <cstdint>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "riggedframes/errors.hpp"
#include "riggedframes/report.hpp"

namespace {

enum ExitCode { kOk = 0, kCheckFailed = 1, kConfigError = 2, kNumericError = 3 };

std::vector<int> parse_stage_list(const std::string& text) {
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      const int n = std::stoi(item, &used);
      if (used != item.size()) throw std::invalid_argument(item);
      out.push_back(n);
    } catch (const std::exception&) {
      throw rigged::ConfigError("--stages: '" + item + "' is not an integer");
    }
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distribution frames over S(R) in a truncated Hermite model"};
  std::string command;
  std::string config_path;
  std::string output_path;
  std::string format;
  std::uint64_t seed = 0;
  std::string stages;

  std::vector<std::string> commands(std::begin(rigged::kCommands), std::end(rigged::kCommands));
  app.add_option("command", command, "classify | bounds | dual | reconstruct | moment-solve | sweep | demo")
      ->required()
      ->check(CLI::IsMember(commands));
  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--output", output_path, "Report path (default: stdout)");
  app.add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = app.add_option("--seed", seed, "Seed for random test vectors");
  app.add_option("--stages", stages, "Comma-separated truncations, e.g. 8,16,32");
  CLI11_PARSE(app, argc, argv);

  try {
    rigged::RunConfig cfg = config_path.empty() ? rigged::parse_config(rigged::ordered_json::object())
                                                : rigged::load_config(config_path);
    if (*seed_opt) {
      cfg.seed = seed;
      cfg.echo["seed"] = seed;
    }
    if (!stages.empty()) {
      cfg.ladder = rigged::ladder_from_truncations(parse_stage_list(stages));
      rigged::ordered_json list = rigged::ordered_json::array();
      for (const auto& s : cfg.ladder.stages) list.push_back(s.truncation);
      cfg.echo["ladder"] = {{"stages", list}};
    }
    if (!format.empty()) {
      cfg.format = format == "csv" ? rigged::OutputFormat::Csv : rigged::OutputFormat::Json;
    }
    if (!output_path.empty()) cfg.output_path = output_path;

    const auto report = rigged::run(command, cfg);
    const auto text = rigged::emit(report, cfg.format);
    if (cfg.output_path.empty()) {
      std::cout << text;
    } else {
      rigged::write_atomically(cfg.output_path, text);
    }
    if (command == "demo") {
      for (const auto& c : report.details["checks"]) {
        std::cerr << (c["passed"].get<bool>() ? "[PASS] " : "[FAIL] ") << c["id"].get<int>() << " "
                  << c["name"].get<std::string>() << "\n";
      }
    }
    return report.success ? kOk : kCheckFailed;
  } catch (const rigged::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const rigged::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const rigged::DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kConfigError;
  } catch (const rigged::Error& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return kNumericError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumericError;
  }
}
