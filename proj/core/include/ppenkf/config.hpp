#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "ppenkf/experiment.hpp"
#include "ppenkf/suite.hpp"

namespace ppenkf {

/// Field-generation export settings (generate-fields command).
struct GenerateFieldsConfig {
  ScenarioKind scenario = ScenarioKind::Tracer;
  VariogramSpec variogram{-12.5, 0.5, 50.0};
  int count = 1;
  std::uint64_t master_seed = 93530241;
};

/// Parsed content of one config file. Every key has a default equal to the
/// published setup values, so an empty file is a valid configuration.
struct ParsedConfig {
  ExperimentConfig experiment;
  SuiteConfig suite;
  CompareConfig compare;
  GenerateFieldsConfig generate;
  bool has_suite_section = false;
  std::string resolved_json;  // full echo for provenance
};

/// Reads a config file in the nested-key text format (`a.b.c = value` lines)
/// or JSON, applies defaults, and validates. Unknown keys, type mismatches
/// and invariant violations throw std::invalid_argument with a
/// path-qualified message.
ParsedConfig parse_config(const std::filesystem::path& path);

/// Parses config text directly (same semantics as parse_config).
ParsedConfig parse_config_text(const std::string& text);

void validate_experiment_config(const ExperimentConfig& config);
void validate_suite_config(const SuiteConfig& config);

}  // namespace ppenkf
