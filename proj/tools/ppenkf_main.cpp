#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "ppenkf/config.hpp"
#include "ppenkf/parallel.hpp"
#include "ppenkf/report.hpp"
#include "ppenkf/version.hpp"

namespace fs = std::filesystem;
using namespace ppenkf;

namespace {

struct CommonOptions {
  std::string config_path;
  std::string out_dir = "out";
  std::optional<std::uint64_t> seed;
  int jobs = 0;  // 0 = all cores
  std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOptions& opt) {
  cmd->add_option("--config", opt.config_path, "Config file (nested-key text or JSON)");
  cmd->add_option("--out", opt.out_dir, "Output directory");
  cmd->add_option("--seed", opt.seed, "Master seed override");
  cmd->add_option("--jobs", opt.jobs, "Worker threads (0 = all cores)");
  cmd->add_option("--format", opt.format, "Output format: csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
}

ParsedConfig load_config(const CommonOptions& opt) {
  ParsedConfig cfg =
      opt.config_path.empty() ? parse_config_text("") : parse_config(opt.config_path);
  const int jobs = opt.jobs > 0 ? opt.jobs : default_jobs();
  cfg.experiment.jobs = jobs;
  cfg.suite.jobs = jobs;
  cfg.compare.jobs = jobs;
  if (opt.seed) {
    cfg.experiment.master_seed = *opt.seed;
    cfg.suite.master_seed = *opt.seed;
    cfg.compare.master_seed = *opt.seed;
    cfg.generate.master_seed = *opt.seed;
  }
  return cfg;
}

int run_generate(const CommonOptions& opt) {
  const ParsedConfig cfg = load_config(opt);
  const Scenario scenario = make_scenario(cfg.generate.scenario);
  const GaussianFieldGenerator gen(scenario.grid, cfg.generate.variogram.to_variogram());
  for (int f = 0; f < cfg.generate.count; ++f) {
    Rng rng(RngSpec{cfg.generate.master_seed, static_cast<std::uint32_t>(f), Stream::FieldExport});
    char name[32];
    std::snprintf(name, sizeof(name), "field_%04d.csv", f);
    emit_field_csv(gen.generate(rng), scenario.grid, fs::path(opt.out_dir) / name);
  }
  emit_manifest("generate-fields", cfg.resolved_json, cfg.generate.master_seed, opt.out_dir);
  std::cout << "wrote " << cfg.generate.count << " field(s) to " << opt.out_dir << "\n";
  return 0;
}

int run_single(const CommonOptions& opt) {
  const ParsedConfig cfg = load_config(opt);
  const ExperimentReport report = run_synthetic_experiment(cfg.experiment);
  emit_experiment_report(report, make_scenario(cfg.experiment.scenario).grid, opt.out_dir);
  emit_manifest("run", cfg.resolved_json, cfg.experiment.master_seed, opt.out_dir);
  if (report.failed) {
    std::cerr << "experiment failed: " << report.failure << "\n";
    return 2;
  }
  std::cout << "rmse=" << format_number(report.rmse)
            << " std=" << format_number(report.overall_std) << " -> " << opt.out_dir << "\n";
  return 0;
}

int run_suite_cmd(const CommonOptions& opt) {
  const ParsedConfig cfg = load_config(opt);
  const SuiteResult result = run_suite(cfg.suite);
  emit_suite_result(result, opt.out_dir, report_format_from_string(opt.format));
  emit_manifest("suite", cfg.resolved_json, cfg.suite.master_seed, opt.out_dir);
  int failures = 0;
  for (const auto& r : result.records)
    if (r.status != "ok") ++failures;
  std::cout << result.records.size() << " experiments (" << failures << " failed) -> "
            << opt.out_dir << "\n";
  return 0;
}

int run_benchmark(const CommonOptions& opt) {
  const ParsedConfig cfg = load_config(opt);
  ExperimentConfig base = cfg.experiment;
  const BenchmarkResult bench =
      run_reference_benchmark(base, cfg.suite.reference_size, cfg.suite.reference_seeds);
  const Grid grid = make_scenario(base.scenario).grid;
  {
    std::ofstream out(fs::path(opt.out_dir) / "benchmark_std.csv", std::ios::binary);
    out << "seed,std\n";
    for (std::size_t s = 0; s < bench.per_seed_std.size(); ++s)
      out << s << ',' << format_number(bench.per_seed_std[s]) << '\n';
    out << "mean," << format_number(bench.benchmark_std) << '\n';
  }
  for (std::size_t f = 0; f < bench.reference_correlation_fields.size(); ++f) {
    const auto& p = bench.correlation_points[f];
    emit_field_csv(bench.reference_correlation_fields[f], grid,
                   fs::path(opt.out_dir) / ("reference_correlation_" + to_string(p.kind) +
                                            "_cell" + std::to_string(p.cell) + ".csv"));
  }
  emit_manifest("benchmark", cfg.resolved_json, base.master_seed, opt.out_dir);
  std::cout << "benchmark std=" << format_number(bench.benchmark_std) << " -> " << opt.out_dir
            << "\n";
  return 0;
}

int run_compare_cmd(const CommonOptions& opt) {
  const ParsedConfig cfg = load_config(opt);
  const CompareResult result = run_compare(cfg.compare);
  emit_compare_result(result, opt.out_dir, report_format_from_string(opt.format));
  emit_manifest("compare", cfg.resolved_json, cfg.compare.master_seed, opt.out_dir);
  for (const auto& [method, mean] : result.mean_per_method)
    std::cout << method << " mean correlation RMSE = " << format_number(mean) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pilot point ensemble Kalman filter twin-experiment harness"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  CommonOptions generate_opt, run_opt, suite_opt, bench_opt, compare_opt;
  auto* generate = app.add_subcommand("generate-fields", "Export Gaussian random fields as CSV");
  add_common(generate, generate_opt);
  auto* run = app.add_subcommand("run", "Run one synthetic experiment");
  add_common(run, run_opt);
  auto* suite = app.add_subcommand("suite", "Run a method-comparison suite");
  add_common(suite, suite_opt);
  auto* bench = app.add_subcommand("benchmark", "Run the large-ensemble reference benchmark");
  add_common(bench, bench_opt);
  auto* compare = app.add_subcommand("compare", "Correlation-field comparison vs a reference");
  add_common(compare, compare_opt);

  try {
    app.parse(argc, argv);
    if (generate->parsed()) return run_generate(generate_opt);
    if (run->parsed()) return run_single(run_opt);
    if (suite->parsed()) return run_suite_cmd(suite_opt);
    if (bench->parsed()) return run_benchmark(bench_opt);
    if (compare->parsed()) return run_compare_cmd(compare_opt);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
