#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "netconc/functionals.hpp"
#include "netconc/graph.hpp"

namespace netconc {

// Optimizers for H(G) = min over the constrained spin space. Exhaustive
// enumeration is exact; simulated annealing and greedy local search return
// upper bounds (exact = false). All are deterministic given their seeds.

struct OptimizeResult {
  double best_value = 0.0;
  SpinConfig best_config;
  std::uint64_t evaluations = 0;  // Hamiltonian (delta) evaluations performed
  bool exact = false;
};

enum class MoveKind { single_flip, swap };

struct AnnealSchedule {
  double t_start = 1.0;
  double t_end = 1e-3;
  long long sweeps = 200;  // proposals per restart = sweeps * N
  int restarts = 10;
  std::optional<MoveKind> move_kind;  // unset: single-flip, or swap when constrained

  void validate() const;
};

struct ExhaustiveOptions {
  bool symmetry_reduction = true;
  std::uint64_t budget = 1ull << 25;
};

/// Global minimum by enumeration in label-lexicographic order; ties resolve
/// to the lexicographically smallest configuration. Fixing node 0's label is
/// applied when the functional/constraint pair is label-symmetric. Errors:
/// budget_exceeded when states (after reduction) exceed options.budget.
OptimizeResult optimize_exhaustive(const Functional& f, const Graph& g,
                                   const Constraint& constraint = Constraint::none(),
                                   const ExhaustiveOptions& options = {});

/// Metropolis annealing with geometric temperature decay, best state over
/// all restarts. Restart r uses the RNG stream mix64(seed, r). `initial`
/// seeds restart 0; other restarts start from random valid configurations.
/// `observer`, when set, sees every accepted state (testing hook).
OptimizeResult optimize_sa(const Functional& f, const Graph& g, const Constraint& constraint,
                           const AnnealSchedule& schedule, std::uint64_t seed,
                           const std::optional<SpinConfig>& initial = {},
                           const std::function<void(const SpinConfig&)>& observer = {});

/// Repeated best-improvement moves (single flips, or swaps under size/
/// magnetization constraints) until no improving move exists; best over
/// restarts. Never below the exhaustive optimum.
OptimizeResult optimize_local(const Functional& f, const Graph& g, const Constraint& constraint,
                              int restarts, std::uint64_t seed,
                              const std::optional<SpinConfig>& initial = {});

/// Number of states optimize_exhaustive would visit (q^n, halved once by
/// symmetry reduction when applicable); saturates at 2^63.
std::uint64_t exhaustive_state_count(int q, int n, bool symmetry_reduction);

}  // namespace netconc
