#include "ppenkf/report.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include <nlohmann/json.hpp>

#include "ppenkf/version.hpp"

namespace ppenkf {

using nlohmann::json;
namespace fs = std::filesystem;

ReportFormat report_format_from_string(const std::string& name) {
  if (name == "csv") return ReportFormat::Csv;
  if (name == "json") return ReportFormat::Json;
  throw std::invalid_argument("unknown report format '" + name + "' (expected csv or json)");
}

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

namespace {

std::ofstream open_out(const fs::path& path) {
  fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);  // \n line endings everywhere
  if (!out) throw std::runtime_error("cannot open output file " + path.string());
  return out;
}

void write_json_file(const json& j, const fs::path& path) {
  auto out = open_out(path);
  out << j.dump(2) << "\n";
}

json record_to_json(const ExperimentRecord& r) {
  return json{{"method", r.method},          {"n_e", r.n_e},
              {"corr_len", r.corr_len},      {"seed", r.seed},
              {"rmse", r.rmse},              {"std", r.overall_std},
              {"status", r.status},          {"wall_time", r.wall_seconds},
              {"scenario", r.scenario}};
}

}  // namespace

void emit_records(const std::vector<ExperimentRecord>& records, const fs::path& out_dir,
                  ReportFormat format) {
  if (records.empty()) throw std::invalid_argument("emit_records: no records");
  std::set<std::string> scenarios;
  for (const auto& r : records) scenarios.insert(r.scenario);
  for (const auto& scenario : scenarios) {
    if (format == ReportFormat::Csv) {
      auto out = open_out(out_dir / ("records_" + scenario + ".csv"));
      out << "method,n_e,corr_len,seed,rmse,std,status,wall_time\n";
      for (const auto& r : records) {
        if (r.scenario != scenario) continue;
        out << r.method << ',' << r.n_e << ',' << format_number(r.corr_len) << ',' << r.seed
            << ',' << format_number(r.rmse) << ',' << format_number(r.overall_std) << ','
            << r.status << ',' << format_number(r.wall_seconds) << '\n';
      }
    } else {
      json arr = json::array();
      for (const auto& r : records)
        if (r.scenario == scenario) arr.push_back(record_to_json(r));
      write_json_file(arr, out_dir / ("records_" + scenario + ".json"));
    }
  }
}

void emit_aggregates(const std::vector<AggregateCell>& cells, const fs::path& out_dir,
                     ReportFormat format) {
  if (format == ReportFormat::Csv) {
    auto out = open_out(out_dir / "aggregates.csv");
    out << "scenario,corr_len,n_e,method,mean_rmse,mean_std,n_seeds\n";
    for (const auto& c : cells)
      out << c.scenario << ',' << format_number(c.corr_len) << ',' << c.n_e << ',' << c.method
          << ',' << format_number(c.mean_rmse) << ',' << format_number(c.mean_std) << ','
          << c.n_ok << '\n';
  } else {
    json arr = json::array();
    for (const auto& c : cells)
      arr.push_back(json{{"scenario", c.scenario},
                         {"corr_len", c.corr_len},
                         {"n_e", c.n_e},
                         {"method", c.method},
                         {"mean_rmse", c.mean_rmse},
                         {"mean_std", c.mean_std},
                         {"n_seeds", c.n_ok}});
    write_json_file(arr, out_dir / "aggregates.json");
  }
}

void emit_rank_table(const std::map<std::string, std::map<std::string, double>>& ranks,
                     const fs::path& path) {
  auto out = open_out(path);
  out << "method,tracer_avg_rank,well_avg_rank\n";
  for (const auto& [method, per_scenario] : ranks) {
    out << method << ',';
    if (auto it = per_scenario.find("tracer"); it != per_scenario.end())
      out << format_number(it->second);
    out << ',';
    if (auto it = per_scenario.find("well"); it != per_scenario.end())
      out << format_number(it->second);
    out << '\n';
  }
}

void emit_suite_result(const SuiteResult& result, const fs::path& out_dir, ReportFormat format) {
  emit_records(result.records, out_dir, format);
  emit_aggregates(result.aggregates, out_dir, format);
  emit_rank_table(result.rmse_ranks, out_dir / "rank_rmse.csv");
  if (!result.std_ranks.empty()) {
    emit_rank_table(result.std_ranks, out_dir / "rank_std.csv");
    auto out = open_out(out_dir / "benchmark_std.csv");
    out << "scenario,benchmark_std\n";
    for (const auto& [scenario, value] : result.benchmark_std)
      out << scenario << ',' << format_number(value) << '\n';
  }
}

void emit_compare_result(const CompareResult& result, const fs::path& out_dir,
                         ReportFormat format) {
  if (format == ReportFormat::Csv) {
    auto out = open_out(out_dir / "correlation_rmse.csv");
    out << "method,seed,correlation_rmse,status\n";
    for (const auto& r : result.records)
      out << r.method << ',' << r.seed << ',' << format_number(r.correlation_rmse) << ','
          << r.status << '\n';
  } else {
    json arr = json::array();
    for (const auto& r : result.records)
      arr.push_back(json{{"method", r.method},
                         {"seed", r.seed},
                         {"correlation_rmse", r.correlation_rmse},
                         {"status", r.status}});
    write_json_file(arr, out_dir / "correlation_rmse.json");
  }
  auto out = open_out(out_dir / "correlation_rmse_summary.csv");
  out << "method,mean_correlation_rmse\n";
  for (const auto& [method, mean] : result.mean_per_method)
    out << method << ',' << format_number(mean) << '\n';
}

void emit_field_csv(const Eigen::VectorXd& field, const Grid& grid, const fs::path& path) {
  if (field.size() != grid.n_cells())
    throw std::invalid_argument("emit_field_csv: field length mismatch");
  auto out = open_out(path);
  out << "cell_index,x,y,value\n";
  for (int c = 0; c < field.size(); ++c)
    out << c << ',' << format_number(grid.cell_x(c)) << ',' << format_number(grid.cell_y(c))
        << ',' << format_number(field[c]) << '\n';
}

void emit_experiment_report(const ExperimentReport& report, const Grid& grid,
                            const fs::path& out_dir) {
  json j{{"rmse", report.rmse},
         {"std", report.overall_std},
         {"seed", report.master_seed},
         {"experiment_index", report.experiment_index},
         {"status", report.failed ? report.failure : "ok"},
         {"wall_time", report.wall_seconds}};
  write_json_file(j, out_dir / "report.json");
  if (report.posterior_mean_field.size() > 0)
    emit_field_csv(report.posterior_mean_field, grid, out_dir / "posterior_mean.csv");
  if (report.posterior_variance_field.size() > 0)
    emit_field_csv(report.posterior_variance_field, grid, out_dir / "posterior_variance.csv");
  if (report.truth_field.size() > 0)
    emit_field_csv(report.truth_field, grid, out_dir / "truth.csv");
  for (std::size_t f = 0; f < report.correlation_fields.size(); ++f) {
    const auto& p = report.correlation_points[f];
    emit_field_csv(report.correlation_fields[f], grid,
                   out_dir / ("correlation_" + to_string(p.kind) + "_cell" +
                              std::to_string(p.cell) + ".csv"));
  }
}

void emit_manifest(const std::string& command, const std::string& resolved_config_json,
                   std::uint64_t master_seed, const fs::path& out_dir) {
  json j{{"command", command},
         {"master_seed", master_seed},
         {"version", kVersion},
         {"config", json::parse(resolved_config_json)}};
  write_json_file(j, out_dir / "manifest.json");
}

}  // namespace ppenkf
