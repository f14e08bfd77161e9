// tangentlab: batch experiment runner and trajectory diff tool.
//
//   tangentlab run <config-file> [--output DIR] [--seed N] [--svg]
//   tangentlab compare <a.csv> <b.csv> --tol X [--cols t,a,p]
//
// Exit status: 0 all checks passed, 1 tolerance failure, 2 invalid
// configuration or schema.
#include <CLI11.hpp>
#include <cstdio>
#include <cstdlib>
#include <string>

#include <tangentlab/errors.hpp>
#include <tangentlab/version.hpp>

#include "compare.hpp"
#include "config.hpp"
#include "csv.hpp"
#include "experiments.hpp"

using namespace tangentlab;
using namespace tangentlab::diag;

namespace {

int do_run(const std::string& config_path, std::string output_dir, long long seed_override,
           bool svg_flag) {
  Config cfg = Config::parse_file(config_path);
  if (seed_override >= 0) cfg.set("seed", std::to_string(seed_override));

  if (output_dir.empty()) {
    if (const char* env = std::getenv("TANGENTLAB_OUTPUT_DIR")) output_dir = env;
  }
  if (output_dir.empty()) output_dir = cfg.has("output.dir") ? cfg.text("output.dir") : "out";
  cfg.set("output.dir", output_dir);

  const bool svg = svg_flag || (cfg.has("output.svg") && cfg.flag_or("output.svg", false));

  const ExperimentResult result = run_experiment(std::move(cfg), output_dir, svg);
  for (const auto& c : result.checks)
    std::printf("[%s] %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
  std::printf("artifacts in %s:", output_dir.c_str());
  for (const auto& a : result.artifacts) std::printf(" %s", a.c_str());
  std::printf("\n");
  if (!result.all_passed()) {
    std::fprintf(stderr, "tolerance checks failed\n");
    return 1;
  }
  return 0;
}

int do_compare(const std::string& a_path, const std::string& b_path, double tolerance,
               const std::string& cols) {
  const CsvFile a = read_csv(a_path);
  const CsvFile b = read_csv(b_path);
  std::vector<std::string> columns;
  if (!cols.empty()) {
    std::string item;
    std::istringstream in(cols);
    while (std::getline(in, item, ',')) columns.push_back(item);
  }
  const CompareReport rep = compare_records(a.record, b.record, tolerance, columns);
  for (const auto& c : rep.columns)
    std::printf("%-20s max %-14s mean %s\n", c.name.c_str(), format_double(c.max_dev).c_str(),
                format_double(c.mean_dev).c_str());
  if (!rep.pass) {
    std::string names;
    for (const auto& n : rep.failed_columns) names += " " + n;
    std::fprintf(stderr, "FAIL: deviation above %s in:%s\n", format_double(tolerance).c_str(),
                 names.c_str());
    return 1;
  }
  std::printf("PASS: all deviations within %s\n", format_double(tolerance).c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tangentlab: projected quantum dynamics laboratory"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::string config_path, output_dir, cols;
  long long seed_override = -1;
  bool svg = false;
  double tolerance = 0.0;
  std::string a_path, b_path;

  CLI::App* run = app.add_subcommand("run", "run an experiment from a config file");
  run->add_option("config", config_path, "configuration file")->required();
  run->add_option("--output", output_dir, "output directory (overrides output.dir)");
  run->add_option("--seed", seed_override, "seed override");
  run->add_flag("--svg", svg, "emit SVG plots");

  CLI::App* cmp = app.add_subcommand("compare", "diff two trajectory CSV files");
  cmp->add_option("a", a_path, "first file")->required();
  cmp->add_option("b", b_path, "second file")->required();
  cmp->add_option("--tol", tolerance, "max absolute deviation")->required();
  cmp->add_option("--cols", cols, "comma-separated column subset");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return do_run(config_path, output_dir, seed_override, svg);
    return do_compare(a_path, b_path, tolerance, cols);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "configuration error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
