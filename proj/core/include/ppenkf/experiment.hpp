#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ppenkf/analysis.hpp"
#include "ppenkf/forward_model.hpp"
#include "ppenkf/prior_covariance.hpp"
#include "ppenkf/random_field.hpp"
#include "ppenkf/rng.hpp"
#include "ppenkf/scenario.hpp"

namespace ppenkf {

/// Spatial prior/truth model spec: spherical variogram from mean, std and
/// correlation length (range defaults to twice the correlation length).
struct VariogramSpec {
  double mean = -12.5;
  double std = 0.5;
  double correlation_length_m = 50.0;
  double range_factor = Variogram::kDefaultRangeFactor;

  Variogram to_variogram() const {
    return Variogram::spherical(mean, std, correlation_length_m, range_factor);
  }
  bool operator==(const VariogramSpec&) const = default;
};

enum class PilotGridKind { Standard, Regular, Diagonal, Doubled, Custom };

std::string to_string(PilotGridKind kind);
PilotGridKind pilot_grid_kind_from_string(const std::string& name);

struct PilotGridSpec {
  PilotGridKind kind = PilotGridKind::Standard;
  int k = 7;                      // Regular grids only
  std::vector<int> custom_cells;  // Custom only
  bool operator==(const PilotGridSpec&) const = default;
};

/// Pilot cells for a scenario; measurement cells are always included.
std::vector<int> resolve_pilot_cells(const PilotGridSpec& spec, const Scenario& scenario);

/// One synthetic twin experiment: truth generation, observation synthesis,
/// sequential assimilation with the configured variant, and metrics.
struct ExperimentConfig {
  ScenarioKind scenario = ScenarioKind::Tracer;
  VariogramSpec truth{-12.0, 0.5, 50.0};
  VariogramSpec prior{-12.5, 0.5, 50.0};
  int ensemble_size = 50;
  FilterConfig filter;
  PilotGridSpec pilot_grid;

  std::uint64_t master_seed = 93530241;
  std::uint32_t experiment_index = 0;
  /// Paper behavior: one fixed truth per scenario, experiments differ only in
  /// ensemble initialization and measurement noise. When false the truth
  /// field also varies with the experiment index.
  bool fixed_truth = true;

  CovarianceSource prp0_source = CovarianceSource::Empirical;
  int prp0_fields = 10000;

  bool assimilate_concentration = true;
  /// Assimilate only the first k observation times (0 = all).
  int max_assimilation_times = 0;

  double sigma_head = 5e-2;
  double sigma_conc = 7.1e-3;
  double specific_storage = 1e-4;
  /// Inflate observation noise variance (no-information limit tests).
  double r_inflation = 1.0;

  bool compute_correlation_fields = false;
  int jobs = 1;
};

/// Defaults for one scenario (correlation lengths 50 m tracer / 60 m well).
ExperimentConfig default_experiment_config(ScenarioKind scenario);

/// Immutable per-setup state shared across experiments that differ only in
/// seed, method or ensemble size: scenario, layout, schedule, field
/// generators, the fixed prior cross covariance, and (for fixed-truth runs)
/// the truth trajectory.
struct ExperimentFixtures {
  Scenario scenario;
  StateLayout layout;
  ObservationSchedule schedule;
  ObservationOperator h;
  std::shared_ptr<const GaussianFieldGenerator> prior_generator;
  std::shared_ptr<const GaussianFieldGenerator> truth_generator;
  PriorCrossCovariance prp0;
  PriorKrigingModel prior_kriging;
  // Fixed-truth cache (empty when config.fixed_truth is false).
  Eigen::VectorXd truth_field;
  Eigen::MatrixXd truth_observed;  // n_m x n_times, noise free
};

ExperimentFixtures make_fixtures(const ExperimentConfig& config);

/// Hook called after every analysis step; used by verification suites.
struct UpdateObserver {
  virtual ~UpdateObserver() = default;
  virtual void on_analysis(int time_index, double time_days, const Ensemble& forecast,
                           const Ensemble& analysis) = 0;
};

struct ExperimentReport {
  double rmse = 0.0;
  double overall_std = 0.0;
  Eigen::VectorXd posterior_mean_field;
  Eigen::VectorXd posterior_variance_field;
  Eigen::VectorXd truth_field;
  std::vector<Eigen::VectorXd> correlation_fields;
  std::vector<ObservationPoint> correlation_points;
  double wall_seconds = 0.0;
  std::uint64_t master_seed = 0;
  std::uint32_t experiment_index = 0;
  bool failed = false;
  std::string failure;
};

ExperimentReport run_synthetic_experiment(const ExperimentConfig& config);
ExperimentReport run_synthetic_experiment(const ExperimentConfig& config,
                                          const ExperimentFixtures& fixtures,
                                          UpdateObserver* observer = nullptr);

/// Observation points whose correlation fields the paper compares: the
/// concentration points in the tracer setup, the head points in the well
/// setup.
std::vector<ObservationPoint> correlation_points(const Scenario& scenario,
                                                 const ObservationSchedule& schedule);

/// Classical EnKF at a large reference ensemble size: the STD baseline and
/// the reference correlation fields. The correlation fields come from the
/// first seed; the STD is averaged over all seeds.
struct BenchmarkResult {
  double benchmark_std = 0.0;
  std::vector<double> per_seed_std;
  std::vector<Eigen::VectorXd> reference_correlation_fields;
  std::vector<ObservationPoint> correlation_points;
};

BenchmarkResult run_reference_benchmark(ExperimentConfig config, int reference_size,
                                        int n_seeds);

}  // namespace ppenkf
