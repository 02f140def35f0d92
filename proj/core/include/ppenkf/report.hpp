#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ppenkf/experiment.hpp"
#include "ppenkf/suite.hpp"

namespace ppenkf {

enum class ReportFormat { Csv, Json };

ReportFormat report_format_from_string(const std::string& name);

/// Fixed 6-significant-digit decimal formatting used by every emitted table.
std::string format_number(double v);

/// Per-experiment records, one file per scenario
/// (records_<scenario>.csv/.json). Columns: method, n_e, corr_len, seed,
/// rmse, std, status, wall_time.
void emit_records(const std::vector<ExperimentRecord>& records,
                  const std::filesystem::path& out_dir, ReportFormat format);

/// Aggregate mean RMSE/STD per (scenario, corr_len, n_e, method).
void emit_aggregates(const std::vector<AggregateCell>& cells,
                     const std::filesystem::path& out_dir, ReportFormat format);

/// Average-rank tables with columns method, tracer_avg_rank, well_avg_rank;
/// scenarios without results leave their column empty.
void emit_rank_table(const std::map<std::string, std::map<std::string, double>>& ranks,
                     const std::filesystem::path& path);

void emit_suite_result(const SuiteResult& result, const std::filesystem::path& out_dir,
                       ReportFormat format);

void emit_compare_result(const CompareResult& result, const std::filesystem::path& out_dir,
                         ReportFormat format);

/// Single-experiment report (report.json plus optional correlation fields).
void emit_experiment_report(const ExperimentReport& report, const Grid& grid,
                            const std::filesystem::path& out_dir);

/// A field as CSV rows cell_index,x,y,value.
void emit_field_csv(const Eigen::VectorXd& field, const Grid& grid,
                    const std::filesystem::path& path);

/// Resolved-configuration echo written next to every output for provenance:
/// command, config source, master seed, artifact version.
void emit_manifest(const std::string& command, const std::string& resolved_config_json,
                   std::uint64_t master_seed, const std::filesystem::path& out_dir);

}  // namespace ppenkf
