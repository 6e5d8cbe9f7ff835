#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "netconc/bounds.hpp"
#include "netconc/ensembles.hpp"
#include "netconc/functionals.hpp"
#include "netconc/graph.hpp"
#include "netconc/optimizers.hpp"

namespace netconc {

// Ensemble-scale concentration measurements: sample, optimize, aggregate,
// compare empirical tails against the closed-form bounds, fit the scaling of
// the fluctuation with N.

enum class Normalization { h, h_over_n };

struct OptimizerPolicy {
  enum class Kind { exhaustive, sa };
  Kind kind = Kind::sa;
  AnnealSchedule schedule;  // sa only
};

struct ExperimentConfig {
  /// Ensemble family: spec for a given N. The seed field of the returned
  /// spec is overridden by the per-N stream policy below.
  std::function<EnsembleSpec(int)> ensemble_for_n;
  std::vector<int> n_list;  // strictly increasing
  Functional functional;
  Constraint constraint;
  OptimizerPolicy optimizer;
  int replicates = 2;
  std::optional<BoundSpec> bound;  // "N" is injected per row
  Normalization normalization = Normalization::h;
  std::uint64_t master_seed = 0;
  int workers = 1;
  int tail_grid_size = 20;
  double tail_grid_sigmas = 3.0;

  void validate() const;

  // Stream policy: graphs of size N use ensemble seed mix64(master, 2N) with
  // replicate index r; the optimizer for (N, r) is seeded
  // mix64(mix64(master, 2N + 1), r).
  std::uint64_t ensemble_seed(int n) const;
  std::uint64_t optimizer_seed(int n, int replicate) const;
};

struct SampleRow {
  int n = 0;
  int replicate = 0;
  std::uint64_t seed = 0;  // optimizer seed for this replicate
  long long m = 0;
  double h = 0.0;  // raw best value (not normalized)
  std::uint64_t evaluations = 0;
  bool exact = false;
};

struct NStats {
  int n = 0;
  double mean_h = 0.0;
  double std_h = 0.0;  // sample standard deviation (Bessel-corrected)
  double min_h = 0.0;
  double max_h = 0.0;
  int replicates = 0;
};

struct TailRow {
  int n = 0;
  double t = 0.0;
  double empirical = 0.0;
  std::optional<double> bound_raw;
  std::optional<double> bound_clamped;
};

struct ScalingFit {
  double slope = 0.0;
  double stderr_ = 0.0;
};

struct ConcentrationReport {
  std::vector<SampleRow> samples;    // replicate-index order within each N
  std::vector<NStats> per_n;         // statistics of the normalized value
  std::vector<TailRow> tails;        // per-N grid, center = sample mean
  std::optional<ScalingFit> fit;     // log(std) vs log(N); needs >= 3 N, all std > 0
  std::string fit_note;              // set when the fit is omitted
  std::string optimizer_note;        // optimizer + seed policy used for every replicate
  Normalization normalization = Normalization::h;
  std::optional<BoundSpec> bound;
};

/// Runs the full experiment. Deterministic given cfg.master_seed, and
/// independent of cfg.workers (replicates are reduced in index order).
ConcentrationReport run_concentration(const ExperimentConfig& cfg);

/// For each threshold t, the fraction of values with |v - center| > t.
std::vector<double> empirical_tail(std::span<const double> values, double center,
                                   std::span<const double> ts);
/// Same with the default center, the sample mean of `values`.
std::vector<double> empirical_tail(std::span<const double> values,
                                   std::span<const double> ts);

/// OLS slope of log(std) against log(N) with its standard error. Errors:
/// fewer than 3 points, or any std <= 0 (degenerate input; take more
/// replicates).
ScalingFit fit_scaling(std::span<const std::pair<double, double>> points);

struct GammaSweepRow {
  double gamma = 0.0;
  bool merged = false;  // optimum assigns both communities a single label
};

/// Exhaustive q-Potts optimization at each gamma; reports whether the two
/// declared communities end up merged. Used to locate the empirical
/// threshold against gamma_star.
std::vector<GammaSweepRow> gamma_sweep(const Graph& g, std::span<const int> community1,
                                       std::span<const int> community2, double j, int q,
                                       std::span<const double> gammas);

// Plot-ready CSV renderings (LF-terminated, deterministic byte-for-byte).
std::string samples_csv(const ConcentrationReport& report);
std::string report_csv(const ConcentrationReport& report);
std::string tails_csv(const ConcentrationReport& report);
std::string scaling_csv(const ConcentrationReport& report);

}  // namespace netconc
