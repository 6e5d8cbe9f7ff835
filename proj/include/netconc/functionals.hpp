#pragma once

#include <functional>
#include <span>
#include <vector>

#include "netconc/graph.hpp"

namespace netconc {

/// Occupation-number penalty for the q-state functional: maps the occupation
/// vector (n_0, ..., n_{q-1}) to a penalty value.
using OccupationPenalty = std::function<double(std::span<const long long>)>;

/// Default penalty: number of ordered same-label node pairs, Σ_s n_s(n_s-1).
/// Matches the ordered-pair convention used by every adjacency sum here, and
/// makes the two-community merge/split threshold come out at J*m12/(2*n1*n2).
double ordered_pair_penalty(std::span<const long long> counts);

enum class FunctionalKind {
  bipartition,        // h = -(1/N) Σ_{i≠j} A_ij s_i s_j
  circuit_partition,  // h = -(1/N) Σ_{i≠j} (A_ij/2 - λ_pen) s_i s_j
  modularity,         // h = -(1/4m) Σ_{i≠j} (A_ij - d_i d_j / 2m) s_i s_j
  q_potts,            // h = -(J/4m) Σ_{i≠j} A_ij δ(s_i,s_j) + (γ/2m) f(n_s)
};

constexpr const char* to_string(FunctionalKind k) {
  switch (k) {
    case FunctionalKind::bipartition: return "bipartition";
    case FunctionalKind::circuit_partition: return "circuit-partition";
    case FunctionalKind::modularity: return "modularity";
    case FunctionalKind::q_potts: return "qpotts";
  }
  return "unknown";
}

/// A community-detecting Hamiltonian. Immutable value object; evaluation is
/// pure and reentrant. All pair sums run over ordered pairs i != j, so each
/// edge contributes twice.
struct Functional {
  FunctionalKind kind = FunctionalKind::bipartition;
  double lambda_pen = 0.0;   // circuit_partition balancing coefficient, >= 0
  int q = 2;                 // q_potts state count, >= 2
  double coupling_j = 1.0;   // q_potts ferromagnetic coupling, > 0
  double gamma = 0.0;        // q_potts occupation-penalty weight, >= 0
  OccupationPenalty penalty; // q_potts only; empty = ordered_pair_penalty

  static Functional bipartition() {
    Functional f;
    f.kind = FunctionalKind::bipartition;
    return f;
  }
  static Functional circuit_partition(double lambda_pen) {
    Functional f;
    f.kind = FunctionalKind::circuit_partition;
    f.lambda_pen = lambda_pen;
    return f;
  }
  static Functional modularity() {
    Functional f;
    f.kind = FunctionalKind::modularity;
    return f;
  }
  static Functional q_potts(int q, double j, double gamma, OccupationPenalty f = {}) {
    Functional fn;
    fn.kind = FunctionalKind::q_potts;
    fn.q = q;
    fn.coupling_j = j;
    fn.gamma = gamma;
    fn.penalty = std::move(f);
    return fn;
  }

  int spin_states() const { return kind == FunctionalKind::q_potts ? q : 2; }
  void validate() const;
};

/// Exact Hamiltonian value h_G(s). Errors: q mismatch between f and s
/// (invalid_input), m = 0 for modularity/q_potts (degenerate_graph).
double evaluate(const Functional& f, const Graph& g, const SpinConfig& s);

struct MoveDelta {
  int node = 0;
  int new_label = 0;
  double delta_h = 0.0;
};

/// Incremental evaluation state for single-label moves. Tracks integer
/// aggregates (edge-spin sums, degree-weighted spin sum, occupation counts),
/// so value() is an exact function of the current labels with no accumulated
/// floating-point drift, and delta()/apply() cost O(degree + q).
class DeltaEvaluator {
 public:
  DeltaEvaluator(const Functional& f, const Graph& g, const SpinConfig& start);

  double value() const;
  /// h(s with node relabeled) - h(s); does not modify the state.
  double delta(int node, int new_label) const;
  void apply(int node, int new_label);

  const std::vector<int>& labels() const { return labels_; }
  SpinConfig config() const { return SpinConfig(labels_, states_); }
  const Graph& graph() const { return *g_; }

 private:
  long long spin_neighbor_sum(int node) const;  // Σ_{u~node} s_u, q=2 kinds
  double value_from(long long pair_sum, long long mag, long long degree_sum,
                    std::span<const long long> occ) const;

  const Functional* f_;
  const Graph* g_;
  std::vector<int> labels_;
  int states_ = 2;

  // Aggregates; which are live depends on the functional kind.
  long long pair_sum_ = 0;    // Σ_{i≠j} A_ij s_i s_j (2-state) or Σ_{i≠j} A_ij δ (q_potts)
  long long mag_ = 0;         // Σ s_i (circuit_partition)
  long long degree_sum_ = 0;  // Σ d_i s_i (modularity)
  long long degree_sq_ = 0;   // Σ d_i^2, constant (modularity)
  std::vector<long long> occupation_;  // q_potts
  mutable std::vector<long long> occupation_scratch_;
};

/// One-shot move delta; post: delta_h equals the from-scratch difference
/// evaluate(f,g,s') - evaluate(f,g,s) within 1e-12 relative.
MoveDelta move_delta(const Functional& f, const Graph& g, const SpinConfig& s, int node,
                     int new_label);

/// Bounded-difference constant for a one-edge graph perturbation. For the
/// 2-state functionals the H change is at most 2c/N (ordered-pair
/// convention); for q_potts the bound is the absolute value J/2 and the
/// `absolute` flag is set.
struct BoundedDifference {
  double c = 0.0;
  bool absolute = false;

  double h_change_bound(int n) const { return absolute ? c : 2.0 * c / n; }
};

/// m_star is the minimum edge count the bound should hold down to; omit it
/// (or pass -1) for the connectivity default n - 1.
BoundedDifference bounded_diff_constant(const Functional& f, int n, long long m_star = -1);

}  // namespace netconc
