#include <doctest.h>

#include <cmath>

#include "netconc/error.hpp"
#include "netconc/experiments.hpp"
#include "netconc/rng.hpp"
#include "support/reference.hpp"

using namespace netconc;

namespace {

ExperimentConfig sparse_sa_config(std::uint64_t seed) {
  ExperimentConfig cfg;
  cfg.ensemble_for_n = [](int n) { return EnsembleSpec{ErSparse{n, 5.0}, 0}; };
  cfg.n_list = {20, 40, 80};
  cfg.functional = Functional::bipartition();
  cfg.constraint = Constraint::zero_mag();
  cfg.optimizer.kind = OptimizerPolicy::Kind::sa;
  cfg.replicates = 100;
  cfg.master_seed = seed;
  cfg.workers = 4;
  return cfg;
}

}  // namespace

TEST_CASE("empirical_tail counts strict exceedances") {
  const std::vector<double> zeros = {0, 0, 0, 0};
  CHECK(empirical_tail(zeros, 0.0, std::vector<double>{0.5})[0] == 0.0);
  const std::vector<double> pair = {-1, 1};
  CHECK(empirical_tail(pair, 0.0, std::vector<double>{0.5})[0] == 1.0);
  const std::vector<double> five = {1, 2, 3, 4, 5};
  CHECK(empirical_tail(five, 3.0, std::vector<double>{1.5})[0] == doctest::Approx(0.4));
  CHECK_THROWS_AS(empirical_tail(std::vector<double>{}, 0.0, std::vector<double>{1.0}), Error);
  CHECK_THROWS_AS(empirical_tail(std::vector<double>{1.0}, 0.0, std::vector<double>{1.0}),
                  Error);
  // default center is the sample mean
  const std::vector<double> shifted = {9.0, 11.0};
  CHECK(empirical_tail(shifted, std::vector<double>{0.5})[0] == 1.0);
  CHECK(empirical_tail(shifted, std::vector<double>{1.5})[0] == 0.0);
}

TEST_CASE("fit_scaling recovers exact power laws") {
  {
    std::vector<std::pair<double, double>> pts;
    for (double n : {10.0, 20.0, 40.0}) pts.emplace_back(n, std::pow(n, -0.5));
    const ScalingFit fit = fit_scaling(pts);
    CHECK(fit.slope == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(fit.stderr_ == doctest::Approx(0.0).epsilon(1e-10));
  }
  {
    std::vector<std::pair<double, double>> pts;
    for (double n : {10.0, 30.0, 90.0, 270.0}) pts.emplace_back(n, 3.0 / n);
    CHECK(fit_scaling(pts).slope == doctest::Approx(-1.0).epsilon(1e-12));
  }
}

TEST_CASE("fit_scaling tolerates small multiplicative noise") {
  Rng rng(17);
  std::vector<std::pair<double, double>> pts;
  for (double n : {10.0, 20.0, 40.0, 80.0, 160.0}) {
    const double noise = 1.0 + 0.01 * (2.0 * rng.next_double() - 1.0);
    pts.emplace_back(n, std::pow(n, -0.5) * noise);
  }
  const ScalingFit fit = fit_scaling(pts);
  CHECK(std::abs(fit.slope + 0.5) <= 0.05);
}

TEST_CASE("fit_scaling rejects degenerate input") {
  std::vector<std::pair<double, double>> two = {{10.0, 0.1}, {20.0, 0.05}};
  CHECK_THROWS_AS(fit_scaling(two), Error);
  std::vector<std::pair<double, double>> flat = {{10.0, 0.1}, {20.0, 0.0}, {40.0, 0.01}};
  CHECK_THROWS_AS(fit_scaling(flat), Error);
}

TEST_CASE("run_concentration on a deterministic ensemble") {
  ExperimentConfig cfg;
  cfg.ensemble_for_n = [](int n) { return EnsembleSpec{ErDense{n, 1.0}, 0}; };
  cfg.n_list = {3};
  cfg.functional = Functional::bipartition();
  cfg.optimizer.kind = OptimizerPolicy::Kind::exhaustive;
  cfg.replicates = 2;
  const ConcentrationReport report = run_concentration(cfg);
  REQUIRE(report.per_n.size() == 1);
  CHECK(report.per_n[0].mean_h == doctest::Approx(-2.0).epsilon(1e-14));
  CHECK(report.per_n[0].std_h == 0.0);
  CHECK(report.samples.size() == 2);
  for (const SampleRow& row : report.samples) {
    CHECK(row.h == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(row.exact);
    CHECK(row.m == 3);
  }
  CHECK(!report.fit.has_value());
  CHECK(!report.fit_note.empty());
}

TEST_CASE("normalization bookkeeping divides by N") {
  ExperimentConfig cfg;
  cfg.ensemble_for_n = [](int n) { return EnsembleSpec{ErDense{n, 1.0}, 0}; };
  cfg.n_list = {4};
  cfg.functional = Functional::bipartition();
  cfg.optimizer.kind = OptimizerPolicy::Kind::exhaustive;
  cfg.replicates = 2;
  cfg.normalization = Normalization::h_over_n;
  const ConcentrationReport report = run_concentration(cfg);
  // K4: H = -2m/N = -3, normalized -3/4
  CHECK(report.per_n[0].mean_h == doctest::Approx(-0.75).epsilon(1e-14));
  // samples keep the raw value
  CHECK(report.samples[0].h == doctest::Approx(-3.0).epsilon(1e-14));
}

TEST_CASE("run_concentration is reproducible and worker-count independent") {
  ExperimentConfig cfg = sparse_sa_config(2025);
  cfg.n_list = {10, 14};
  cfg.replicates = 16;
  cfg.constraint = Constraint::none();
  cfg.optimizer.schedule.sweeps = 40;
  cfg.optimizer.schedule.restarts = 2;
  const ConcentrationReport a = run_concentration(cfg);
  cfg.workers = 4;
  const ConcentrationReport b = run_concentration(cfg);
  CHECK(samples_csv(a) == samples_csv(b));
  CHECK(report_csv(a) == report_csv(b));
  CHECK(tails_csv(a) == tails_csv(b));
  CHECK(scaling_csv(a) == scaling_csv(b));
  const ConcentrationReport c = run_concentration(cfg);
  CHECK(samples_csv(b) == samples_csv(c));
}

TEST_CASE("fluctuation shrinks with N across master seeds") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const ConcentrationReport report = run_concentration(sparse_sa_config(seed));
    REQUIRE(report.per_n.size() == 3);
    CHECK(report.per_n[0].std_h > report.per_n[1].std_h);
    CHECK(report.per_n[1].std_h > report.per_n[2].std_h);
  }
}

TEST_CASE("empirical tails never cross the clamped degree-bounded bound") {
  ExperimentConfig cfg;
  cfg.ensemble_for_n = [](int n) {
    return EnsembleSpec{KBound{ErSparse{n, 4.0}, 8}, 0};
  };
  cfg.n_list = {30, 50};
  cfg.functional = Functional::bipartition();
  cfg.optimizer.kind = OptimizerPolicy::Kind::sa;
  cfg.optimizer.schedule.sweeps = 60;
  cfg.optimizer.schedule.restarts = 3;
  cfg.replicates = 60;
  cfg.master_seed = 7;
  BoundSpec bound;
  bound.theorem = Theorem::t9;
  bound.params["K"] = 8.0;
  cfg.bound = bound;
  const ConcentrationReport report = run_concentration(cfg);
  CHECK(report.tails.size() == 2 * 20);
  for (const TailRow& row : report.tails) {
    REQUIRE(row.bound_clamped.has_value());
    CHECK(row.empirical <= *row.bound_clamped + 1e-12);
  }
}

TEST_CASE("conditioning on the edge count recombines to the plain tail") {
  ExperimentConfig cfg;
  cfg.ensemble_for_n = [](int n) { return EnsembleSpec{ErDense{n, 0.4}, 0}; };
  cfg.n_list = {16};
  cfg.functional = Functional::bipartition();
  cfg.optimizer.kind = OptimizerPolicy::Kind::exhaustive;
  cfg.replicates = 80;
  cfg.master_seed = 40;
  const ConcentrationReport report = run_concentration(cfg);

  std::vector<double> values, low, high;
  const double mu = 0.1, p = 0.4;
  const double threshold = (p - mu) * 16.0 * 16.0 / 2.0;
  for (const SampleRow& row : report.samples) {
    values.push_back(row.h);
    (static_cast<double>(row.m) < threshold ? low : high).push_back(row.h);
  }
  double center = 0.0;
  for (double v : values) center += v;
  center /= static_cast<double>(values.size());

  const std::vector<double> ts = {0.0, 0.1, 0.2, 0.5, 1.0};
  const std::vector<double> whole = empirical_tail(values, center, ts);
  REQUIRE(low.size() >= 2);
  REQUIRE(high.size() >= 2);
  const std::vector<double> low_tail = empirical_tail(low, center, ts);
  const std::vector<double> high_tail = empirical_tail(high, center, ts);
  for (size_t k = 0; k < ts.size(); ++k) {
    const double recombined =
        (low_tail[k] * static_cast<double>(low.size()) +
         high_tail[k] * static_cast<double>(high.size())) /
        static_cast<double>(values.size());
    CHECK(whole[k] == doctest::Approx(recombined).epsilon(1e-12));
  }
}

TEST_CASE("gamma sweep locates the community threshold") {
  const Graph g = refcheck::two_triangles_bridge();
  const std::vector<int> comm1 = {0, 1, 2}, comm2 = {3, 4, 5};
  std::vector<double> gammas;
  for (int k = 0; k <= 12; ++k) gammas.push_back(0.01 * k);
  const auto rows = gamma_sweep(g, comm1, comm2, 1.0, 2, gammas);
  REQUIRE(rows.size() == gammas.size());
  CHECK(rows.front().merged);        // gamma = 0: ferromagnetic term dominates
  CHECK_FALSE(rows.back().merged);   // gamma well above threshold
  // the merged -> split switch brackets gamma* = J/18
  const double threshold = gamma_star(ThresholdSpec{1.0, 3, 3, 1});
  CHECK(threshold == doctest::Approx(1.0 / 18.0).epsilon(1e-15));
  double last_merged = -1.0, first_split = -1.0;
  for (const auto& row : rows) {
    if (row.merged) last_merged = row.gamma;
    if (!row.merged && first_split < 0.0) first_split = row.gamma;
  }
  CHECK(last_merged < first_split);
  CHECK(last_merged <= threshold);
  CHECK(threshold <= first_split);
  CHECK(first_split - last_merged == doctest::Approx(0.01).epsilon(1e-9));

  // a very large gamma also splits
  const auto big = gamma_sweep(g, comm1, comm2, 1.0, 2, std::vector<double>{1.0});
  CHECK_FALSE(big[0].merged);
}

TEST_CASE("gamma sweep input validation") {
  const Graph g = refcheck::two_triangles_bridge();
  CHECK_THROWS_AS(gamma_sweep(g, std::vector<int>{0, 1}, std::vector<int>{1, 2}, 1.0, 2,
                              std::vector<double>{0.0}),
                  Error);
  CHECK_THROWS_AS(gamma_sweep(g, std::vector<int>{}, std::vector<int>{1}, 1.0, 2,
                              std::vector<double>{0.0}),
                  Error);
}

TEST_CASE("experiment config validation") {
  ExperimentConfig cfg;
  cfg.ensemble_for_n = [](int n) { return EnsembleSpec{ErSparse{n, 3.0}, 0}; };
  cfg.n_list = {10, 10};
  cfg.functional = Functional::bipartition();
  cfg.replicates = 4;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.n_list = {10, 12};
  cfg.replicates = 1;
  CHECK_THROWS_AS(cfg.validate(), Error);
  cfg.replicates = 4;
  cfg.validate();
  cfg.optimizer.kind = OptimizerPolicy::Kind::exhaustive;
  cfg.n_list = {10, 40};  // exhaustive at N=40 blows the budget
  CHECK_THROWS_AS(cfg.validate(), Error);
}

TEST_CASE("csv outputs carry documented headers") {
  ExperimentConfig cfg;
  cfg.ensemble_for_n = [](int n) { return EnsembleSpec{ErDense{n, 1.0}, 0}; };
  cfg.n_list = {3};
  cfg.functional = Functional::bipartition();
  cfg.optimizer.kind = OptimizerPolicy::Kind::exhaustive;
  cfg.replicates = 2;
  const ConcentrationReport report = run_concentration(cfg);
  CHECK(samples_csv(report).rfind("N,replicate,seed,m,H,evaluations,exact\n", 0) == 0);
  CHECK(report_csv(report).find("N,mean_H,std_H,min_H,max_H,replicates\n") !=
        std::string::npos);
  CHECK(tails_csv(report).find("N,t,empirical,bound_raw,bound_clamped\n") !=
        std::string::npos);
  CHECK(scaling_csv(report).find("N,std,fitted\n") != std::string::npos);
}
