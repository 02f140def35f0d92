#include <doctest.h>

#include <cmath>

#include "ppenkf/experiment.hpp"
#include "ppenkf/metrics.hpp"
#include "ppenkf/suite.hpp"

using namespace ppenkf;

namespace {

ExperimentConfig small_tracer(FilterVariant variant, int n_e = 12, int max_times = 4) {
  ExperimentConfig cfg = default_experiment_config(ScenarioKind::Tracer);
  cfg.filter.variant = variant;
  cfg.ensemble_size = n_e;
  cfg.max_assimilation_times = max_times;
  cfg.prp0_source = CovarianceSource::Analytic;
  cfg.jobs = 2;
  return cfg;
}

}  // namespace

TEST_CASE("rmse basics and brute-force oracle") {
  Eigen::VectorXd truth = Eigen::VectorXd::Random(961);
  CHECK(compute_rmse(truth, truth) == 0.0);
  CHECK(compute_rmse(truth.array() + 0.5, truth) == doctest::Approx(0.5).epsilon(1e-13));

  Rng rng(1u);
  const Eigen::VectorXd a = rng.normal_vector(961), b = rng.normal_vector(961);
  double acc = 0.0;
  for (int i = 0; i < 961; ++i) acc += (a[i] - b[i]) * (a[i] - b[i]);
  CHECK(compute_rmse(a, b) == doctest::Approx(std::sqrt(acc / 961)).epsilon(1e-14));
  CHECK_THROWS_AS(compute_rmse(a, b.head(3)), std::invalid_argument);
}

TEST_CASE("overall std basics and brute-force oracle") {
  Eigen::MatrixXd identical(5, 4);
  identical.colwise() = Eigen::VectorXd::LinSpaced(5, 0.0, 1.0);
  CHECK(compute_overall_std(identical) == 0.0);

  // two members y +/- a per cell -> sqrt(2) * rms(a)
  Eigen::MatrixXd two(3, 2);
  const Eigen::Vector3d y(0.1, -0.4, 2.0), a(0.5, 0.5, 0.5);
  two.col(0) = y + a;
  two.col(1) = y - a;
  CHECK(compute_overall_std(two) == doctest::Approx(std::sqrt(2.0) * 0.5).epsilon(1e-13));

  Rng rng(2u);
  Eigen::MatrixXd fields(30, 9);
  for (int i = 0; i < 9; ++i) fields.col(i) = rng.normal_vector(30);
  double var_acc = 0.0;
  for (int c = 0; c < 30; ++c) {
    double mean = 0.0;
    for (int i = 0; i < 9; ++i) mean += fields(c, i);
    mean /= 9;
    double var = 0.0;
    for (int i = 0; i < 9; ++i) var += (fields(c, i) - mean) * (fields(c, i) - mean);
    var_acc += var / 8;
  }
  CHECK(compute_overall_std(fields) ==
        doctest::Approx(std::sqrt(var_acc / 30)).epsilon(1e-13));
  CHECK_THROWS_AS(compute_overall_std(fields.leftCols(1)), std::invalid_argument);
}

TEST_CASE("correlation field basics and brute-force oracle") {
  const Grid g(3, 3, 1.0, 1.0);
  const StateLayout layout =
      build_state_layout(g, {0, 4, 8}, {DynamicKind::Head});
  const int n_e = 50;
  Rng rng(3u);
  Eigen::MatrixXd members(layout.n_s(), n_e);
  for (int i = 0; i < n_e; ++i) members.col(i) = rng.normal_vector(layout.n_s());
  // duplicate the observed head into the parameter at cell 4
  const int obs_row = layout.dynamic_index(DynamicKind::Head, 4);
  members.row(layout.param_index(4)) = members.row(obs_row);
  const Ensemble ens(layout, members);

  const Eigen::VectorXd rho = compute_correlation_field(ens, {4, DynamicKind::Head});
  CHECK(rho.size() == 9);
  CHECK(rho[4] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK((rho.array().abs() <= 1.0 + 1e-12).all());

  // brute-force Pearson loop
  for (int c = 0; c < 9; ++c) {
    double mo = 0, mp = 0;
    const int prow = layout.param_index(c);
    for (int i = 0; i < n_e; ++i) {
      mo += members(obs_row, i);
      mp += members(prow, i);
    }
    mo /= n_e;
    mp /= n_e;
    double cov = 0, vo = 0, vp = 0;
    for (int i = 0; i < n_e; ++i) {
      cov += (members(obs_row, i) - mo) * (members(prow, i) - mp);
      vo += (members(obs_row, i) - mo) * (members(obs_row, i) - mo);
      vp += (members(prow, i) - mp) * (members(prow, i) - mp);
    }
    CHECK(rho[c] == doctest::Approx(cov / std::sqrt(vo * vp)).epsilon(1e-12));
  }

  // degenerate observed variable flags as zero
  Eigen::MatrixXd flat = members;
  flat.row(obs_row).setConstant(7.0);
  CHECK(compute_correlation_field(Ensemble(layout, flat), {4, DynamicKind::Head}).norm() == 0.0);
}

TEST_CASE("independent draws give small spurious correlation at n_e = 10^4") {
  const Grid g(4, 1, 1.0, 1.0);
  const StateLayout layout = build_state_layout(g, {0, 1, 2, 3}, {DynamicKind::Head});
  const int n_e = 10000;
  Rng rng(5u);
  Eigen::MatrixXd members(layout.n_s(), n_e);
  for (int i = 0; i < n_e; ++i) members.col(i) = rng.normal_vector(layout.n_s());
  const Eigen::VectorXd rho =
      compute_correlation_field(Ensemble(layout, members), {1, DynamicKind::Head});
  CHECK(rho.cwiseAbs().maxCoeff() < 0.05);  // 3 sigma of 1/sqrt(n_e) with margin
}

TEST_CASE("correlation rmse") {
  Eigen::VectorXd f = Eigen::VectorXd::Random(961);
  CHECK(correlation_rmse(f, f) == 0.0);
  CHECK(correlation_rmse(Eigen::VectorXd(f.array() + 0.1), f) ==
        doctest::Approx(0.1).epsilon(1e-12));
  const std::vector<Eigen::VectorXd> many{f, Eigen::VectorXd(f.array() + 0.2)};
  const std::vector<Eigen::VectorXd> ref{f, f};
  CHECK(correlation_rmse(many, ref) == doctest::Approx(0.2 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("rank_methods") {
  SUBCASE("single method ranks 1.0") {
    const auto r = rank_methods({{"only", {0.3, 0.1}}});
    CHECK(r.at("only") == 1.0);
  }
  SUBCASE("strict dominance") {
    const auto r = rank_methods({{"best", {0.1, 0.2}}, {"worst", {0.3, 0.4}}});
    CHECK(r.at("best") == 1.0);
    CHECK(r.at("worst") == 2.0);
  }
  SUBCASE("ties share the mean rank") {
    const auto r = rank_methods({{"a", {0.1}}, {"b", {0.1}}, {"c", {0.5}}});
    CHECK(r.at("a") == 1.5);
    CHECK(r.at("b") == 1.5);
    CHECK(r.at("c") == 3.0);
  }
  SUBCASE("missing cells are reported") {
    CHECK_THROWS_WITH_AS(rank_methods({{"a", {0.1, 0.2}}, {"b", {0.1}}}),
                         doctest::Contains("b"), std::invalid_argument);
    CHECK_THROWS_AS(rank_methods({{"a", {0.1, std::nan("")}}, {"b", {0.1, 0.2}}}),
                    std::invalid_argument);
  }
}

TEST_CASE("synthetic experiment determinism and structure" * doctest::timeout(900)) {
  const ExperimentConfig cfg = small_tracer(FilterVariant::PpEnkf);
  const ExperimentFixtures fx = make_fixtures(cfg);

  ExperimentConfig with_fields = cfg;
  with_fields.compute_correlation_fields = true;
  const ExperimentReport a = run_synthetic_experiment(with_fields, fx);
  const ExperimentReport b = run_synthetic_experiment(with_fields, fx);
  CHECK(!a.failed);
  CHECK(a.rmse == b.rmse);
  CHECK(a.overall_std == b.overall_std);
  CHECK((a.posterior_mean_field - b.posterior_mean_field).norm() == 0.0);

  CHECK(a.correlation_fields.size() == 2);  // two concentration locations
  for (const auto& f : a.correlation_fields) {
    CHECK(f.size() == 961);
    CHECK((f.array().abs() <= 1.0 + 1e-12).all());
  }
  CHECK(a.rmse >= 0.0);
  CHECK(a.overall_std >= 0.0);

  // a different seed changes the outcome
  ExperimentConfig other = with_fields;
  other.experiment_index = 9;
  const ExperimentReport c = run_synthetic_experiment(other, fx);
  CHECK(c.rmse != a.rmse);
}

TEST_CASE("no-information limit approaches the prior" * doctest::timeout(900)) {
  ExperimentConfig cfg = small_tracer(FilterVariant::Enkf, 16, 3);
  cfg.r_inflation = 1e12;
  const ExperimentReport closed = run_synthetic_experiment(cfg);
  CHECK(!closed.failed);

  // open loop: the prior ensemble against the same truth
  const ExperimentFixtures fx = make_fixtures(cfg);
  Eigen::MatrixXd fields(961, cfg.ensemble_size);
  for (int i = 0; i < cfg.ensemble_size; ++i) {
    Rng rng(RngSpec{cfg.master_seed, cfg.experiment_index, Stream::PriorField,
                    static_cast<std::uint32_t>(i)});
    fields.col(i) = fx.prior_generator->generate(rng);
  }
  const double open_rmse = compute_rmse(fields.rowwise().mean(), fx.truth_field);
  CHECK(closed.rmse == doctest::Approx(open_rmse).epsilon(1e-4));
}

TEST_CASE("well experiment runs every variant" * doctest::timeout(1200)) {
  for (FilterVariant v :
       {FilterVariant::Enkf, FilterVariant::Damped, FilterVariant::Local, FilterVariant::Hybrid,
        FilterVariant::Iterative, FilterVariant::Dual, FilterVariant::NormalScore,
        FilterVariant::PpEnkf, FilterVariant::Interpolated}) {
    ExperimentConfig cfg = default_experiment_config(ScenarioKind::Well);
    cfg.filter.variant = v;
    cfg.ensemble_size = 10;
    cfg.max_assimilation_times = 2;
    cfg.prp0_source = CovarianceSource::Analytic;
    cfg.jobs = 2;
    const ExperimentReport report = run_synthetic_experiment(cfg);
    CAPTURE(to_string(v));
    CHECK(!report.failed);
    CHECK(report.rmse > 0.0);
    CHECK(report.overall_std > 0.0);
  }
}

TEST_CASE("reference benchmark reduces to a plain enkf run" * doctest::timeout(900)) {
  ExperimentConfig cfg = small_tracer(FilterVariant::Enkf, 10, 3);
  cfg.compute_correlation_fields = true;
  const BenchmarkResult bench = run_reference_benchmark(cfg, cfg.ensemble_size, 1);
  const ExperimentReport direct = run_synthetic_experiment(cfg);
  CHECK(bench.per_seed_std.size() == 1);
  CHECK(bench.benchmark_std == doctest::Approx(direct.overall_std).epsilon(1e-12));
  REQUIRE(bench.reference_correlation_fields.size() == direct.correlation_fields.size());
  for (std::size_t f = 0; f < bench.reference_correlation_fields.size(); ++f)
    CHECK((bench.reference_correlation_fields[f] - direct.correlation_fields[f]).norm() == 0.0);
}
