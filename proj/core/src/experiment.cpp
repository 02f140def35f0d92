#include "ppenkf/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <stdexcept>

#include "ppenkf/metrics.hpp"
#include "ppenkf/parallel.hpp"

namespace ppenkf {

std::string to_string(PilotGridKind kind) {
  switch (kind) {
    case PilotGridKind::Standard: return "standard";
    case PilotGridKind::Regular: return "regular";
    case PilotGridKind::Diagonal: return "diagonal";
    case PilotGridKind::Doubled: return "doubled";
    case PilotGridKind::Custom: return "custom";
  }
  return "unknown";
}

PilotGridKind pilot_grid_kind_from_string(const std::string& name) {
  for (PilotGridKind k : {PilotGridKind::Standard, PilotGridKind::Regular, PilotGridKind::Diagonal,
                          PilotGridKind::Doubled, PilotGridKind::Custom})
    if (to_string(k) == name) return k;
  throw std::invalid_argument("unknown pilot grid kind '" + name + "'");
}

std::vector<int> resolve_pilot_cells(const PilotGridSpec& spec, const Scenario& scenario) {
  const Grid& grid = scenario.grid;
  switch (spec.kind) {
    case PilotGridKind::Standard:
      return pilot_cells_standard(grid);
    case PilotGridKind::Regular:
      return pilot_cells_regular(grid, spec.k, measurement_cells(scenario));
    case PilotGridKind::Diagonal:
      return pilot_cells_diagonal(grid);
    case PilotGridKind::Doubled:
      return pilot_cells_regular(grid, 13, measurement_cells(scenario));
    case PilotGridKind::Custom: {
      auto cells = spec.custom_cells;
      for (int c : measurement_cells(scenario))
        if (std::find(cells.begin(), cells.end(), c) == cells.end()) cells.push_back(c);
      return cells;
    }
  }
  throw std::invalid_argument("resolve_pilot_cells: bad kind");
}

ExperimentConfig default_experiment_config(ScenarioKind scenario) {
  ExperimentConfig cfg;
  cfg.scenario = scenario;
  const double corr = scenario == ScenarioKind::Tracer ? 50.0 : 60.0;
  cfg.truth = VariogramSpec{-12.0, 0.5, corr};
  cfg.prior = VariogramSpec{-12.5, 0.5, corr};
  return cfg;
}

namespace {

Scenario scenario_for(const ExperimentConfig& config) {
  Scenario sc = make_scenario(config.scenario);
  sc.specific_storage = config.specific_storage;
  return sc;
}

ObservationSchedule schedule_for(const ExperimentConfig& config, const Scenario& scenario) {
  ObservationSchedule sched = make_schedule(scenario);
  sched.sigma_head = config.sigma_head;
  sched.sigma_conc = config.sigma_conc;
  if (!config.assimilate_concentration) {
    std::erase_if(sched.points,
                  [](const ObservationPoint& p) { return p.kind == DynamicKind::Concentration; });
  }
  return sched;
}

std::uint32_t truth_experiment_index(const ExperimentConfig& config) {
  return config.fixed_truth ? 0u : config.experiment_index + 1u;
}

/// Noise-free observed values of one parameter field's trajectory.
Eigen::MatrixXd simulate_observed(const ForwardModel& fm, const ObservationSchedule& schedule,
                                  const ObservationOperator& h,
                                  const Eigen::VectorXd& param_field) {
  Eigen::MatrixXd observed(h.n_m(), schedule.times_days.size());
  StateVector state = fm.initial_state(param_field);
  double t = 0.0;
  for (std::size_t k = 0; k < schedule.times_days.size(); ++k) {
    state = fm.simulate_window(state, t, schedule.times_days[k]);
    t = schedule.times_days[k];
    observed.col(k) = h.apply(state);
  }
  return observed;
}

}  // namespace

ExperimentFixtures make_fixtures(const ExperimentConfig& config) {
  ExperimentFixtures fx;
  fx.scenario = scenario_for(config);
  fx.layout = build_state_layout(fx.scenario.grid,
                                 resolve_pilot_cells(config.pilot_grid, fx.scenario),
                                 fx.scenario.dynamic_kinds());
  fx.schedule = schedule_for(config, fx.scenario);
  validate_schedule(fx.schedule, fx.layout);
  fx.h = make_observation_operator(fx.schedule, fx.layout);

  fx.prior_generator =
      std::make_shared<GaussianFieldGenerator>(fx.scenario.grid, config.prior.to_variogram());
  fx.truth_generator =
      std::make_shared<GaussianFieldGenerator>(fx.scenario.grid, config.truth.to_variogram());

  fx.prp0 = build_prior_cross_covariance(
      fx.layout, config.prior.to_variogram(), config.prp0_source, config.prp0_fields,
      RngSpec{config.master_seed, 0, Stream::CrossCovarianceFields});
  fx.prior_kriging = make_prior_kriging(fx.prp0, config.prior.mean, fx.layout);

  if (config.fixed_truth) {
    Rng rng(RngSpec{config.master_seed, truth_experiment_index(config), Stream::TruthField});
    fx.truth_field = fx.truth_generator->generate(rng);
    const ForwardModel fm(fx.scenario, fx.layout);
    fx.truth_observed = simulate_observed(fm, fx.schedule, fx.h, fx.truth_field);
  }
  return fx;
}

namespace {

Ensemble propagate_ensemble(const ForwardModel& fm, const Ensemble& ens, double t0, double t1,
                            int jobs) {
  Eigen::MatrixXd members(ens.members.rows(), ens.members.cols());
  parallel_for(ens.size(), jobs, [&](int i) {
    members.col(i) = fm.simulate_window(ens.members.col(i), t0, t1);
  });
  return Ensemble(ens.layout, std::move(members));
}

Ensemble initial_ensemble(const ExperimentConfig& config, const ExperimentFixtures& fx,
                          const ForwardModel& fm) {
  Eigen::MatrixXd members(fx.layout.n_s(), config.ensemble_size);
  parallel_for(config.ensemble_size, config.jobs, [&](int i) {
    Rng rng(RngSpec{config.master_seed, config.experiment_index, Stream::PriorField,
                    static_cast<std::uint32_t>(i)});
    members.col(i) = fm.initial_state(fx.prior_generator->generate(rng));
  });
  return Ensemble(fx.layout, std::move(members));
}

struct AssimilationDriver {
  const ExperimentConfig& config;
  const ExperimentFixtures& fx;
  const ForwardModel& fm;

  Ensemble apply(const Ensemble& forecast, const ObservationBatch& batch,
                 const Ensemble& window_start, double t0, double t) const {
    const FilterConfig& f = config.filter;
    switch (f.variant) {
      case FilterVariant::Enkf:
        return enkf_analysis(forecast, batch);
      case FilterVariant::Damped:
        return damped_analysis(forecast, batch, f.damping);
      case FilterVariant::Local:
        return local_analysis(forecast, batch, f.localization_length_m);
      case FilterVariant::Hybrid:
        return hybrid_analysis(forecast, batch, f.hybrid_alpha, f.hybrid_background_variance);
      case FilterVariant::NormalScore:
        return normal_score_analysis(forecast, batch, f.ns_transform_dynamic);
      case FilterVariant::PpEnkf:
        return ppenkf_analysis(forecast, batch, fx.prp0.rp);
      case FilterVariant::Interpolated:
        return interpolated_analysis(forecast, batch, fx.prior_kriging);
      case FilterVariant::Dual: {
        DualContext ctx{window_start, t0, t,
                        [this](const Ensemble& e, double a, double b) {
                          return propagate_ensemble(fm, e, a, b, config.jobs);
                        }};
        return dual_analysis(forecast, batch, ctx);
      }
      case FilterVariant::Iterative: {
        IterativeContext ctx{[this, t](const Ensemble& analysis) {
          Eigen::MatrixXd members = analysis.members;
          parallel_for(analysis.size(), config.jobs, [&](int i) {
            StateVector st = fm.initial_state(fx.layout.param_field_from_state(members.col(i)));
            members.col(i) = fm.simulate_window(st, 0.0, t);
          });
          return Ensemble(analysis.layout, std::move(members));
        }};
        return iterative_analysis(forecast, batch, ctx);
      }
    }
    throw std::invalid_argument("unknown filter variant");
  }
};

}  // namespace

std::vector<ObservationPoint> correlation_points(const Scenario& scenario,
                                                 const ObservationSchedule& schedule) {
  const DynamicKind wanted =
      scenario.kind == ScenarioKind::Tracer ? DynamicKind::Concentration : DynamicKind::Head;
  std::vector<ObservationPoint> points;
  for (const auto& p : schedule.points)
    if (p.kind == wanted) points.push_back(p);
  return points;
}

ExperimentReport run_synthetic_experiment(const ExperimentConfig& config) {
  return run_synthetic_experiment(config, make_fixtures(config));
}

ExperimentReport run_synthetic_experiment(const ExperimentConfig& config,
                                          const ExperimentFixtures& fx,
                                          UpdateObserver* observer) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport report;
  report.master_seed = config.master_seed;
  report.experiment_index = config.experiment_index;
  try {
    const ForwardModel fm(fx.scenario, fx.layout);

    // Truth and noise-free observed values, cached for fixed-truth setups.
    Eigen::VectorXd truth_field;
    Eigen::MatrixXd truth_observed;
    if (config.fixed_truth && fx.truth_field.size() > 0) {
      truth_field = fx.truth_field;
      truth_observed = fx.truth_observed;
    } else {
      Rng rng(RngSpec{config.master_seed, truth_experiment_index(config), Stream::TruthField});
      truth_field = fx.truth_generator->generate(rng);
      truth_observed = simulate_observed(fm, fx.schedule, fx.h, truth_field);
    }
    report.truth_field = truth_field;

    // Noisy measurements per scheduled time.
    const Eigen::VectorXd sigma = fx.schedule.noise_std_vector();
    Eigen::VectorXd r_diag = sigma.array().square() * config.r_inflation;
    const int n_times_total = static_cast<int>(fx.schedule.times_days.size());
    const int n_times = config.max_assimilation_times > 0
                            ? std::min(config.max_assimilation_times, n_times_total)
                            : n_times_total;
    Eigen::MatrixXd measurements(fx.h.n_m(), n_times);
    for (int k = 0; k < n_times; ++k) {
      Rng rng(RngSpec{config.master_seed, config.experiment_index, Stream::ObservationNoise, 0,
                      static_cast<std::uint32_t>(k)});
      measurements.col(k) = truth_observed.col(k) + sigma.cwiseProduct(rng.normal_vector(fx.h.n_m()));
    }

    Ensemble ens = initial_ensemble(config, fx, fm);
    if (config.filter.variant == FilterVariant::Interpolated)
      ens = reconstruct_nonpilot(ens, fx.prior_kriging);

    const AssimilationDriver driver{config, fx, fm};
    const bool freeze_conc =
        fx.scenario.has_tracer && !config.assimilate_concentration;
    double t_prev = 0.0;
    Ensemble window_start = ens;
    for (int k = 0; k < n_times; ++k) {
      const double t = fx.schedule.times_days[k];
      Ensemble forecast = propagate_ensemble(fm, ens, t_prev, t, config.jobs);
      const ObservationBatch batch = make_observation_batch(
          measurements.col(k), r_diag, fx.h, ens.size(),
          RngSpec{config.master_seed, config.experiment_index, Stream::ObservationPerturbation, 0,
                  static_cast<std::uint32_t>(k)});
      Ensemble analysis = driver.apply(forecast, batch, window_start, t_prev, t);
      if (freeze_conc) {
        const int n_g = fx.layout.grid().n_cells();
        const int conc0 = fx.layout.dynamic_index(DynamicKind::Concentration, 0);
        analysis.members.middleRows(conc0, n_g) = forecast.members.middleRows(conc0, n_g);
      }
      if (observer) observer->on_analysis(k, t, forecast, analysis);
      window_start = analysis;
      ens = std::move(analysis);
      t_prev = t;
    }

    const Eigen::MatrixXd fields = ens.parameter_fields();
    report.posterior_mean_field = fields.rowwise().mean();
    const Eigen::MatrixXd dev = fields.colwise() - report.posterior_mean_field;
    report.posterior_variance_field =
        dev.array().square().rowwise().sum() / double(ens.size() - 1);
    report.rmse = compute_rmse(report.posterior_mean_field, truth_field);
    report.overall_std = compute_overall_std(fields);

    if (config.compute_correlation_fields) {
      report.correlation_points = correlation_points(fx.scenario, fx.schedule);
      for (const auto& p : report.correlation_points)
        report.correlation_fields.push_back(compute_correlation_field(ens, p));
    }
  } catch (const std::exception& e) {
    report.failed = true;
    report.failure = e.what();
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

BenchmarkResult run_reference_benchmark(ExperimentConfig config, int reference_size, int n_seeds) {
  if (n_seeds < 1) throw std::invalid_argument("run_reference_benchmark: need >= 1 seed");
  config.filter.variant = FilterVariant::Enkf;
  config.ensemble_size = reference_size;
  config.compute_correlation_fields = true;
  const ExperimentFixtures fx = make_fixtures(config);

  BenchmarkResult result;
  for (int s = 0; s < n_seeds; ++s) {
    ExperimentConfig cfg = config;
    cfg.experiment_index = static_cast<std::uint32_t>(s);
    cfg.compute_correlation_fields = (s == 0);
    const ExperimentReport report = run_synthetic_experiment(cfg, fx);
    if (report.failed)
      throw std::runtime_error("reference benchmark seed " + std::to_string(s) +
                               " failed: " + report.failure);
    result.per_seed_std.push_back(report.overall_std);
    if (s == 0) {
      result.reference_correlation_fields = report.correlation_fields;
      result.correlation_points = report.correlation_points;
    }
  }
  double sum = 0.0;
  for (double v : result.per_seed_std) sum += v;
  result.benchmark_std = sum / double(n_seeds);
  return result;
}

}  // namespace ppenkf
