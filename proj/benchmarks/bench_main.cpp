#include <benchmark/benchmark.h>

#include "ppenkf/analysis.hpp"
#include "ppenkf/experiment.hpp"
#include "ppenkf/forward_model.hpp"
#include "ppenkf/random_field.hpp"

using namespace ppenkf;

namespace {

ExperimentConfig bench_config(ScenarioKind kind, int n_e) {
  ExperimentConfig cfg = default_experiment_config(kind);
  cfg.ensemble_size = n_e;
  cfg.prp0_source = CovarianceSource::Analytic;
  return cfg;
}

struct AnalysisSetup {
  ExperimentFixtures fx;
  Ensemble ens;
  ObservationBatch batch;
};

AnalysisSetup analysis_setup(ScenarioKind kind, int n_e) {
  const ExperimentConfig cfg = bench_config(kind, n_e);
  AnalysisSetup s{make_fixtures(cfg), {}, {}};
  const ForwardModel fm(s.fx.scenario, s.fx.layout);
  Eigen::MatrixXd members(s.fx.layout.n_s(), n_e);
  for (int i = 0; i < n_e; ++i) {
    Rng rng(RngSpec{1, 0, Stream::PriorField, static_cast<std::uint32_t>(i)});
    members.col(i) = fm.simulate_window(
        fm.initial_state(s.fx.prior_generator->generate(rng)), 0.0, s.fx.schedule.times_days[0]);
  }
  s.ens = Ensemble(s.fx.layout, std::move(members));
  const Eigen::VectorXd sigma = s.fx.schedule.noise_std_vector();
  s.batch = make_observation_batch(s.fx.truth_observed.col(0), sigma.array().square(), s.fx.h,
                                   n_e, RngSpec{2, 0, Stream::ObservationPerturbation});
  return s;
}

}  // namespace

static void BM_FlowStep(benchmark::State& state) {
  const Scenario sc = tracer_scenario();
  const Eigen::VectorXd cond = permeability_to_conductivity(
      Eigen::VectorXd::Constant(sc.grid.n_cells(), -12.5), sc.fluid);
  const FlowSolver flow(sc, cond, 86400.0);
  Eigen::VectorXd head = Eigen::VectorXd::Constant(sc.grid.n_cells(), 10.0);
  for (auto _ : state) {
    head = flow.step(head);
    benchmark::DoNotOptimize(head);
  }
}
BENCHMARK(BM_FlowStep);

static void BM_FlowFactorize(benchmark::State& state) {
  const Scenario sc = tracer_scenario();
  const GaussianFieldGenerator gen(sc.grid, Variogram::spherical(-12.5, 0.5, 50.0));
  Rng rng(RngSpec{3, 0, Stream::PriorField});
  const Eigen::VectorXd cond = permeability_to_conductivity(gen.generate(rng), sc.fluid);
  for (auto _ : state) {
    FlowSolver flow(sc, cond, 86400.0);
    benchmark::DoNotOptimize(flow);
  }
}
BENCHMARK(BM_FlowFactorize);

static void BM_FieldGeneration(benchmark::State& state) {
  const Scenario sc = tracer_scenario();
  const GaussianFieldGenerator gen(sc.grid, Variogram::spherical(-12.5, 0.5, 50.0));
  Rng rng(RngSpec{4, 0, Stream::PriorField});
  for (auto _ : state) {
    benchmark::DoNotOptimize(gen.generate(rng));
  }
}
BENCHMARK(BM_FieldGeneration);

static void BM_EnkfAnalysisWell(benchmark::State& state) {
  const auto setup = analysis_setup(ScenarioKind::Well, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(enkf_analysis(setup.ens, setup.batch));
  }
}
BENCHMARK(BM_EnkfAnalysisWell)->Arg(50)->Arg(250);

static void BM_PpEnkfAnalysisWell(benchmark::State& state) {
  const auto setup = analysis_setup(ScenarioKind::Well, static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(ppenkf_analysis(setup.ens, setup.batch, setup.fx.prp0.rp));
  }
}
BENCHMARK(BM_PpEnkfAnalysisWell)->Arg(50)->Arg(250);

static void BM_SimulateWindowTracer(benchmark::State& state) {
  const ExperimentConfig cfg = bench_config(ScenarioKind::Tracer, 2);
  const ExperimentFixtures fx = make_fixtures(cfg);
  const ForwardModel fm(fx.scenario, fx.layout);
  Rng rng(RngSpec{5, 0, Stream::PriorField});
  const StateVector initial = fm.initial_state(fx.prior_generator->generate(rng));
  for (auto _ : state) {
    benchmark::DoNotOptimize(fm.simulate_window(initial, 0.0, 12.0));
  }
}
BENCHMARK(BM_SimulateWindowTracer);

BENCHMARK_MAIN();
