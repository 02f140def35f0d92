#include "ppenkf/suite.hpp"

#include <cmath>
#include <stdexcept>

#include "ppenkf/metrics.hpp"

namespace ppenkf {

namespace {

ExperimentConfig experiment_config_for(const SuiteConfig& suite, ScenarioKind scenario,
                                       double corr_factor) {
  ExperimentConfig cfg = default_experiment_config(scenario);
  cfg.prior.correlation_length_m *= corr_factor;
  cfg.master_seed = suite.master_seed;
  cfg.filter = suite.filter;
  cfg.pilot_grid = suite.pilot_grid;
  cfg.prp0_source = suite.prp0_source;
  cfg.prp0_fields = suite.prp0_fields;
  cfg.max_assimilation_times = suite.max_assimilation_times;
  cfg.specific_storage = suite.specific_storage;
  cfg.jobs = suite.jobs;
  return cfg;
}

}  // namespace

SuiteResult run_suite(const SuiteConfig& suite) {
  if (suite.seeds < 1) throw std::invalid_argument("run_suite: seeds must be >= 1");
  if (suite.methods.empty() || suite.ensemble_sizes.empty() || suite.scenarios.empty() ||
      suite.correlation_length_factors.empty())
    throw std::invalid_argument("run_suite: empty suite dimension");

  SuiteResult result;
  for (ScenarioKind scenario : suite.scenarios) {
    // values per method over (corr_len, n_e) cells, in loop order
    std::map<std::string, std::vector<double>> rmse_cells;
    std::map<std::string, std::vector<double>> std_cells;

    for (double factor : suite.correlation_length_factors) {
      const ExperimentConfig base = experiment_config_for(suite, scenario, factor);
      const ExperimentFixtures fixtures = make_fixtures(base);
      for (int n_e : suite.ensemble_sizes) {
        for (FilterVariant method : suite.methods) {
          double rmse_sum = 0.0, std_sum = 0.0;
          int n_ok = 0;
          for (int seed = 0; seed < suite.seeds; ++seed) {
            ExperimentConfig cfg = base;
            cfg.filter.variant = method;
            cfg.ensemble_size = n_e;
            cfg.experiment_index = static_cast<std::uint32_t>(seed);
            const ExperimentReport report = run_synthetic_experiment(cfg, fixtures);

            ExperimentRecord rec;
            rec.scenario = to_string(scenario);
            rec.method = to_string(method);
            rec.n_e = n_e;
            rec.corr_len = cfg.prior.correlation_length_m;
            rec.seed = static_cast<std::uint32_t>(seed);
            rec.rmse = report.rmse;
            rec.overall_std = report.overall_std;
            rec.status = report.failed ? report.failure : "ok";
            rec.wall_seconds = suite.record_timings ? report.wall_seconds : 0.0;
            result.records.push_back(rec);
            if (!report.failed) {
              rmse_sum += report.rmse;
              std_sum += report.overall_std;
              ++n_ok;
            }
          }
          AggregateCell cell;
          cell.scenario = to_string(scenario);
          cell.method = to_string(method);
          cell.n_e = n_e;
          cell.corr_len = base.prior.correlation_length_m;
          cell.n_ok = n_ok;
          cell.mean_rmse = n_ok > 0 ? rmse_sum / n_ok : std::nan("");
          cell.mean_std = n_ok > 0 ? std_sum / n_ok : std::nan("");
          result.aggregates.push_back(cell);
          rmse_cells[to_string(method)].push_back(cell.mean_rmse);
          if (factor == 1.0) std_cells[to_string(method)].push_back(cell.mean_std);
        }
      }
    }

    const auto ranks = rank_methods(rmse_cells);
    for (const auto& [method, rank] : ranks) result.rmse_ranks[method][to_string(scenario)] = rank;

    if (suite.std_ranking) {
      const ExperimentConfig base = experiment_config_for(suite, scenario, 1.0);
      const BenchmarkResult bench =
          run_reference_benchmark(base, suite.reference_size, suite.reference_seeds);
      result.benchmark_std[to_string(scenario)] = bench.benchmark_std;
      std::map<std::string, std::vector<double>> distance_cells;
      for (const auto& [method, values] : std_cells) {
        for (double v : values)
          distance_cells[method].push_back(std::abs(v - bench.benchmark_std));
      }
      const auto std_rank = rank_methods(distance_cells);
      for (const auto& [method, rank] : std_rank)
        result.std_ranks[method][to_string(scenario)] = rank;
    }
  }
  return result;
}

CompareResult run_compare(const CompareConfig& compare) {
  if (compare.seeds < 1) throw std::invalid_argument("run_compare: seeds must be >= 1");
  ExperimentConfig base = default_experiment_config(compare.scenario);
  base.master_seed = compare.master_seed;
  base.filter = compare.filter;
  base.pilot_grid = compare.pilot_grid;
  base.prp0_source = compare.prp0_source;
  base.prp0_fields = compare.prp0_fields;
  base.jobs = compare.jobs;
  base.ensemble_size = compare.ensemble_size;
  base.compute_correlation_fields = true;

  const BenchmarkResult reference = run_reference_benchmark(base, compare.reference_size, 1);
  const ExperimentFixtures fixtures = make_fixtures(base);

  CompareResult result;
  for (FilterVariant method : compare.methods) {
    double sum = 0.0;
    int n_ok = 0;
    for (int seed = 0; seed < compare.seeds; ++seed) {
      ExperimentConfig cfg = base;
      cfg.filter.variant = method;
      cfg.experiment_index = static_cast<std::uint32_t>(seed);
      const ExperimentReport report = run_synthetic_experiment(cfg, fixtures);
      CompareRecord rec;
      rec.method = to_string(method);
      rec.seed = static_cast<std::uint32_t>(seed);
      rec.status = report.failed ? report.failure : "ok";
      if (!report.failed) {
        rec.correlation_rmse =
            correlation_rmse(report.correlation_fields, reference.reference_correlation_fields);
        sum += rec.correlation_rmse;
        ++n_ok;
      }
      result.records.push_back(rec);
    }
    result.mean_per_method[to_string(method)] = n_ok > 0 ? sum / n_ok : std::nan("");
  }
  return result;
}

}  // namespace ppenkf
