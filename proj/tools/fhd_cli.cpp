#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "fhd/config.hpp"
#include "fhd/properties.hpp"
#include "fhd/report.hpp"
#include "fhd/verify.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitSolver = 1;
constexpr int kExitConfig = 2;

bool write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << text;
  return static_cast<bool>(out);
}

int cmd_run(const std::string& config_path, std::string out_csv, std::string out_json, bool parallel,
            bool stdout_only) {
  fhd::RunConfig cfg;
  try {
    cfg = fhd::load_config(config_path);
  } catch (const fhd::ConfigError& e) {
    std::cerr << e.what() << '\n';
    return kExitConfig;
  }
  if (out_csv.empty()) out_csv = cfg.out_csv;
  if (out_json.empty()) out_json = cfg.out_json;

  fhd::StudyOptions opts = cfg.study_options();
  opts.parallel_levels = parallel;
  fhd::StudyReport report;
  try {
    report = fhd::run_convergence_study(opts);
  } catch (const std::invalid_argument& e) {
    std::cerr << "config: " << e.what() << '\n';
    return kExitConfig;
  }

  const std::string csv = fhd::to_csv(report);
  if (stdout_only || out_csv.empty()) {
    std::cout << csv;
  } else if (!write_file(out_csv, csv)) {
    std::cerr << "cannot write '" << out_csv << "'\n";
    return kExitConfig;
  }
  if (!stdout_only && !out_json.empty() && !write_file(out_json, fhd::to_json(report, cfg))) {
    std::cerr << "cannot write '" << out_json << "'\n";
    return kExitConfig;
  }
  if (report.failed) {
    std::cerr << "solver failure at N=" << report.failed_level << ": " << report.failure << '\n';
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_check(std::uint64_t seed, bool broken_alpha) {
  fhd::PropertyOptions opts;
  opts.seed = seed;
  if (broken_alpha) opts.alpha_override = fhd::clipped_alpha_law(opts.params);
  const auto results = fhd::run_property_battery(opts);
  fhd::write_property_lines(results, std::cout);
  for (const auto& r : results) {
    if (!r.pass) {
      std::cerr << "first failing property: " << r.name << '\n';
      return 1;
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decoupled finite element solver for stationary ferrohydrodynamics"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_csv;
  std::string out_json;
  bool parallel = false;
  auto* run = app.add_subcommand("run", "Run a convergence study and write CSV/JSON reports");
  run->add_option("--config", config_path, "Configuration file")->required();
  run->add_option("--out-csv", out_csv, "CSV output path (overrides out_csv)");
  run->add_option("--out-json", out_json, "JSON output path (overrides out_json)");
  run->add_flag("--parallel-levels", parallel, "Solve levels concurrently");

  std::string table_config;
  auto* table = app.add_subcommand("table", "Run a study and print the CSV table to stdout");
  table->add_option("--config", table_config, "Configuration file")->required();

  std::uint64_t seed = 42;
  bool broken_alpha = false;
  auto* check = app.add_subcommand("check", "Run the property battery");
  check->add_option("--seed", seed, "Random seed for sampled properties");
  check->add_flag("--broken-alpha", broken_alpha, "Negative control: clip alpha below 1");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (*run) return cmd_run(config_path, out_csv, out_json, parallel, false);
  if (*table) return cmd_run(table_config, "", "", false, true);
  if (*check) return cmd_check(seed, broken_alpha);
  return kExitConfig;
}
