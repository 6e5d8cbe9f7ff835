#include "netconc/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "netconc/csv.hpp"
#include "netconc/error.hpp"
#include "netconc/parallel.hpp"
#include "netconc/rng.hpp"

namespace netconc {

namespace {

double normalize_value(double h, int n, Normalization norm) {
  return norm == Normalization::h_over_n ? h / n : h;
}

NStats stats_of(int n, std::span<const double> values) {
  NStats s;
  s.n = n;
  s.replicates = static_cast<int>(values.size());
  double sum = 0.0;
  double lo = values.front(), hi = values.front();
  for (double v : values) {
    sum += v;
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  s.mean_h = sum / s.replicates;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean_h) * (v - s.mean_h);
  s.std_h = s.replicates > 1 ? std::sqrt(ss / (s.replicates - 1)) : 0.0;
  s.min_h = lo;
  s.max_h = hi;
  return s;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!ensemble_for_n) fail(ErrorKind::invalid_spec, "experiment needs an ensemble family");
  if (replicates < 2) fail(ErrorKind::invalid_spec, "experiment needs replicates >= 2");
  if (n_list.empty()) fail(ErrorKind::invalid_spec, "experiment needs at least one N");
  for (size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      fail(ErrorKind::invalid_spec, "N list must be strictly increasing");
  functional.validate();
  if (tail_grid_size < 1) fail(ErrorKind::invalid_spec, "tail grid needs at least one point");
  for (int n : n_list) {
    const EnsembleSpec spec = ensemble_for_n(n);
    netconc::validate(spec);
    constraint.validate(n, functional.spin_states());
    if (optimizer.kind == OptimizerPolicy::Kind::exhaustive) {
      const std::uint64_t states =
          exhaustive_state_count(functional.spin_states(), n, constraint.label_symmetric());
      if (states > ExhaustiveOptions{}.budget)
        fail(ErrorKind::invalid_spec,
             "exhaustive optimizer exceeds the enumeration budget at N=" + std::to_string(n));
    } else {
      optimizer.schedule.validate();
    }
  }
}

std::uint64_t ExperimentConfig::ensemble_seed(int n) const {
  return mix64(master_seed, 2ull * static_cast<std::uint64_t>(n));
}

std::uint64_t ExperimentConfig::optimizer_seed(int n, int replicate) const {
  return mix64(mix64(master_seed, 2ull * static_cast<std::uint64_t>(n) + 1),
               static_cast<std::uint64_t>(replicate));
}

ConcentrationReport run_concentration(const ExperimentConfig& cfg) {
  cfg.validate();
  ConcentrationReport report;
  report.normalization = cfg.normalization;
  report.bound = cfg.bound;
  if (cfg.optimizer.kind == OptimizerPolicy::Kind::exhaustive) {
    report.optimizer_note = "optimizer = exhaustive";
  } else {
    const AnnealSchedule& s = cfg.optimizer.schedule;
    report.optimizer_note = "optimizer = sa(t " + format_double(s.t_start) + "->" +
                            format_double(s.t_end) + ", sweeps " + std::to_string(s.sweeps) +
                            ", restarts " + std::to_string(s.restarts) + ")";
  }
  report.optimizer_note +=
      "; seeds: ensemble mix64(master,2N) per replicate, optimizer "
      "mix64(mix64(master,2N+1),replicate), master = " +
      std::to_string(cfg.master_seed);

  std::vector<std::pair<double, double>> scaling_points;
  bool fit_degenerate = false;

  for (int n : cfg.n_list) {
    EnsembleSpec spec = cfg.ensemble_for_n(n);
    spec.seed = cfg.ensemble_seed(n);

    std::vector<SampleRow> rows(cfg.replicates);
    parallel_for(cfg.replicates, cfg.workers, [&](int rep) {
      const Graph g = sample(spec, static_cast<std::uint64_t>(rep));
      const std::uint64_t opt_seed = cfg.optimizer_seed(n, rep);
      OptimizeResult result;
      if (cfg.optimizer.kind == OptimizerPolicy::Kind::exhaustive)
        result = optimize_exhaustive(cfg.functional, g, cfg.constraint);
      else
        result = optimize_sa(cfg.functional, g, cfg.constraint, cfg.optimizer.schedule,
                             opt_seed);
      rows[rep] =
          SampleRow{n, rep, opt_seed, g.m(), result.best_value, result.evaluations,
                    result.exact};
    });

    // Deterministic reduction in replicate order, regardless of worker count.
    std::vector<double> values(cfg.replicates);
    for (int rep = 0; rep < cfg.replicates; ++rep)
      values[rep] = normalize_value(rows[rep].h, n, cfg.normalization);
    report.samples.insert(report.samples.end(), rows.begin(), rows.end());

    const NStats stats = stats_of(n, values);
    report.per_n.push_back(stats);
    if (stats.std_h > 0.0)
      scaling_points.emplace_back(static_cast<double>(n), stats.std_h);
    else
      fit_degenerate = true;

    std::vector<double> ts(cfg.tail_grid_size);
    const double t_max = cfg.tail_grid_sigmas * stats.std_h;
    for (int k = 0; k < cfg.tail_grid_size; ++k)
      ts[k] = cfg.tail_grid_size > 1 ? t_max * k / (cfg.tail_grid_size - 1) : 0.0;
    const std::vector<double> tail = empirical_tail(values, stats.mean_h, ts);
    for (int k = 0; k < cfg.tail_grid_size; ++k) {
      TailRow row;
      row.n = n;
      row.t = ts[k];
      row.empirical = tail[k];
      if (cfg.bound) {
        BoundSpec bound = *cfg.bound;
        bound.params["N"] = static_cast<double>(n);
        const BoundValue value = bound_eval(bound, ts[k]);
        row.bound_raw = value.raw;
        row.bound_clamped = value.clamped;
      }
      report.tails.push_back(row);
    }
  }

  if (fit_degenerate) {
    report.fit_note = "fit omitted: some N has zero sample standard deviation; "
                      "take more replicates";
  } else if (scaling_points.size() < 3) {
    report.fit_note = "fit omitted: needs at least 3 N values";
  } else {
    report.fit = fit_scaling(scaling_points);
  }
  return report;
}

std::vector<double> empirical_tail(std::span<const double> values, double center,
                                   std::span<const double> ts) {
  if (values.empty()) fail(ErrorKind::invalid_input, "empirical tail of an empty sample");
  if (values.size() < 2)
    fail(ErrorKind::invalid_input, "empirical tail needs at least 2 values");
  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    long long count = 0;
    for (double v : values)
      if (std::abs(v - center) > t) ++count;
    out.push_back(static_cast<double>(count) / static_cast<double>(values.size()));
  }
  return out;
}

std::vector<double> empirical_tail(std::span<const double> values,
                                   std::span<const double> ts) {
  if (values.empty()) fail(ErrorKind::invalid_input, "empirical tail of an empty sample");
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  return empirical_tail(values, mean, ts);
}

ScalingFit fit_scaling(std::span<const std::pair<double, double>> points) {
  if (points.size() < 3)
    fail(ErrorKind::invalid_input, "scaling fit needs at least 3 points");
  for (const auto& [n, std_h] : points)
    if (!(std_h > 0.0))
      fail(ErrorKind::invalid_input,
           "scaling fit needs positive std at every N; take more replicates");
  const int k = static_cast<int>(points.size());
  double sx = 0.0, sy = 0.0;
  std::vector<double> xs(k), ys(k);
  for (int i = 0; i < k; ++i) {
    xs[i] = std::log(points[i].first);
    ys[i] = std::log(points[i].second);
    sx += xs[i];
    sy += ys[i];
  }
  const double xbar = sx / k, ybar = sy / k;
  double sxx = 0.0, sxy = 0.0;
  for (int i = 0; i < k; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  if (sxx == 0.0) fail(ErrorKind::invalid_input, "scaling fit needs distinct N values");
  const double slope = sxy / sxx;
  const double intercept = ybar - slope * xbar;
  double ssr = 0.0;
  for (int i = 0; i < k; ++i) {
    const double r = ys[i] - (intercept + slope * xs[i]);
    ssr += r * r;
  }
  ScalingFit fit;
  fit.slope = slope;
  fit.stderr_ = std::sqrt(ssr / (k - 2) / sxx);
  return fit;
}

std::vector<GammaSweepRow> gamma_sweep(const Graph& g, std::span<const int> community1,
                                       std::span<const int> community2, double j, int q,
                                       std::span<const double> gammas) {
  if (community1.empty() || community2.empty())
    fail(ErrorKind::invalid_input, "gamma sweep needs two non-empty communities");
  std::set<int> seen;
  for (int v : community1) seen.insert(v);
  for (int v : community2) {
    if (seen.count(v))
      fail(ErrorKind::invalid_input, "communities must be disjoint");
    seen.insert(v);
  }
  for (int v : seen)
    if (v < 0 || v >= g.n()) fail(ErrorKind::invalid_input, "community node out of range");

  std::vector<GammaSweepRow> out;
  out.reserve(gammas.size());
  for (double gamma : gammas) {
    const Functional f = Functional::q_potts(q, j, gamma);
    const OptimizeResult result = optimize_exhaustive(f, g);
    const auto& labels = result.best_config.labels();
    bool merged = true;
    const int reference = labels[community1.front()];
    for (int v : community1) merged = merged && labels[v] == reference;
    for (int v : community2) merged = merged && labels[v] == reference;
    out.push_back(GammaSweepRow{gamma, merged});
  }
  return out;
}

std::string samples_csv(const ConcentrationReport& report) {
  std::string out = "N,replicate,seed,m,H,evaluations,exact\n";
  for (const auto& row : report.samples) {
    out += std::to_string(row.n);
    out += ',';
    out += std::to_string(row.replicate);
    out += ',';
    out += std::to_string(row.seed);
    out += ',';
    out += std::to_string(row.m);
    out += ',';
    out += format_double(row.h);
    out += ',';
    out += std::to_string(row.evaluations);
    out += ',';
    out += row.exact ? '1' : '0';
    out += '\n';
  }
  return out;
}

namespace {

const char* value_name(Normalization norm) {
  return norm == Normalization::h_over_n ? "H/N" : "H";
}

std::string bound_footnotes(const ConcentrationReport& report) {
  std::string out;
  if (!report.bound) return out;
  out += "# bound = ";
  out += to_string(report.bound->theorem);
  out += "; empirical center is the sample mean, while the bound is stated against the "
         "exact ensemble mean (finite-sample caveat)\n";
  if (report.bound->theorem == Theorem::t5 || report.bound->theorem == Theorem::t7)
    out += "# note: T5's constant 25/2 and T7's sigma=5/4 are fixed as stated; they do not "
           "match the 11/8 per-edge modularity constant (see README)\n";
  return out;
}

}  // namespace

std::string report_csv(const ConcentrationReport& report) {
  std::string out;
  out += "# value = ";
  out += value_name(report.normalization);
  out += "; std is the Bessel-corrected sample standard deviation\n";
  if (!report.optimizer_note.empty()) {
    out += "# ";
    out += report.optimizer_note;
    out += '\n';
  }
  out += bound_footnotes(report);
  out += "N,mean_H,std_H,min_H,max_H,replicates\n";
  for (const auto& s : report.per_n) {
    out += std::to_string(s.n);
    out += ',';
    out += format_double(s.mean_h);
    out += ',';
    out += format_double(s.std_h);
    out += ',';
    out += format_double(s.min_h);
    out += ',';
    out += format_double(s.max_h);
    out += ',';
    out += std::to_string(s.replicates);
    out += '\n';
  }
  return out;
}

std::string tails_csv(const ConcentrationReport& report) {
  std::string out;
  out += "# value = ";
  out += value_name(report.normalization);
  out += "; empirical = fraction of replicates with |value - sample mean| > t\n";
  out += bound_footnotes(report);
  out += "N,t,empirical,bound_raw,bound_clamped\n";
  for (const auto& row : report.tails) {
    out += std::to_string(row.n);
    out += ',';
    out += format_double(row.t);
    out += ',';
    out += format_double(row.empirical);
    out += ',';
    if (row.bound_raw) out += format_double(*row.bound_raw);
    out += ',';
    if (row.bound_clamped) out += format_double(*row.bound_clamped);
    out += '\n';
  }
  return out;
}

std::string scaling_csv(const ConcentrationReport& report) {
  std::string out;
  if (report.fit) {
    out += "# fit: log(std) = intercept + slope*log(N); slope=";
    out += format_double(report.fit->slope);
    out += " stderr=";
    out += format_double(report.fit->stderr_);
    out += '\n';
  } else if (!report.fit_note.empty()) {
    out += "# ";
    out += report.fit_note;
    out += '\n';
  }
  out += "N,std,fitted\n";
  // Recover the fitted line from the slope and the stored points.
  double intercept = 0.0;
  bool have_fit = report.fit.has_value();
  if (have_fit) {
    double sx = 0.0, sy = 0.0;
    int k = 0;
    for (const auto& s : report.per_n)
      if (s.std_h > 0.0) {
        sx += std::log(static_cast<double>(s.n));
        sy += std::log(s.std_h);
        ++k;
      }
    intercept = sy / k - report.fit->slope * sx / k;
  }
  for (const auto& s : report.per_n) {
    out += std::to_string(s.n);
    out += ',';
    out += format_double(s.std_h);
    out += ',';
    if (have_fit)
      out += format_double(std::exp(intercept + report.fit->slope * std::log(
                                                    static_cast<double>(s.n))));
    out += '\n';
  }
  return out;
}

}  // namespace netconc
