#include "netconc/optimizers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "netconc/error.hpp"
#include "netconc/rng.hpp"

namespace netconc {

namespace {

bool functional_label_symmetric(const Functional& f) {
  // The 2-state Hamiltonians are quadratic in the spins, so a global flip
  // preserves them. q_potts is invariant under label permutations as long as
  // the penalty is the (symmetric) default; a custom penalty may not be.
  if (f.kind == FunctionalKind::q_potts) return !f.penalty;
  return true;
}

std::vector<int> random_config(int n, int q, const Constraint& constraint, Rng& rng) {
  std::vector<int> labels(n, 0);
  switch (constraint.kind) {
    case Constraint::Kind::unconstrained:
      for (int i = 0; i < n; ++i) labels[i] = rng.next_int_below(q);
      return labels;
    case Constraint::Kind::zero_magnetization:
    case Constraint::Kind::fixed_magnetization: {
      const int target = constraint.kind == Constraint::Kind::zero_magnetization
                             ? 0
                             : constraint.magnetization_target;
      const int ones = (n + target) / 2;
      std::fill(labels.begin(), labels.begin() + ones, 1);
      break;
    }
    case Constraint::Kind::fixed_group_sizes: {
      int at = 0;
      for (int l = 0; l < static_cast<int>(constraint.group_sizes.size()); ++l)
        for (long long k = 0; k < constraint.group_sizes[l]; ++k) labels[at++] = l;
      break;
    }
  }
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(i) + 1));
    std::swap(labels[i], labels[j]);
  }
  return labels;
}

MoveKind resolve_move_kind(const Constraint& constraint, std::optional<MoveKind> requested) {
  const bool constrained = constraint.kind != Constraint::Kind::unconstrained;
  if (requested) {
    if (*requested == MoveKind::single_flip && constrained)
      fail(ErrorKind::invalid_move_kind,
           "single-flip moves cannot preserve a magnetization/size constraint");
    return *requested;
  }
  return constrained ? MoveKind::swap : MoveKind::single_flip;
}

void check_initial(const std::optional<SpinConfig>& initial, const Graph& g, int q,
                   const Constraint& constraint) {
  if (!initial) return;
  if (initial->q() != q || initial->size() != g.n())
    fail(ErrorKind::invalid_input, "initial configuration does not match the problem shape");
  if (!constraint.satisfied_by(*initial))
    fail(ErrorKind::invalid_input, "initial configuration violates the constraint");
}

// Node buckets by label, O(1) relabeling; used for swap proposals.
class LabelBuckets {
 public:
  LabelBuckets(const std::vector<int>& labels, int q) : buckets_(q), slot_(labels.size()) {
    for (int i = 0; i < static_cast<int>(labels.size()); ++i) place(i, labels[i]);
  }

  int size_of(int label) const { return static_cast<int>(buckets_[label].size()); }

  // k-th node (in bucket order) among all nodes whose label differs from `label`.
  int pick_other(int label, int k) const {
    for (int l = 0; l < static_cast<int>(buckets_.size()); ++l) {
      if (l == label) continue;
      const int sz = static_cast<int>(buckets_[l].size());
      if (k < sz) return buckets_[l][k];
      k -= sz;
    }
    return -1;
  }

  void relabel(int node, int from, int to) {
    auto& bucket = buckets_[from];
    const int pos = slot_[node];
    bucket[pos] = bucket.back();
    slot_[bucket.back()] = pos;
    bucket.pop_back();
    place(node, to);
  }

 private:
  void place(int node, int label) {
    slot_[node] = static_cast<int>(buckets_[label].size());
    buckets_[label].push_back(node);
  }

  std::vector<std::vector<int>> buckets_;
  std::vector<int> slot_;
};

struct ExhaustiveSearch {
  ExhaustiveSearch(DeltaEvaluator& eval, const Constraint& constraint, int n, int q,
                   bool reduced)
      : eval(eval), constraint(constraint), n(n), q(q), reduced(reduced) {}

  DeltaEvaluator& eval;
  const Constraint& constraint;
  int n;
  int q;
  bool reduced;
  long long target_ones = -1;
  std::vector<long long> counts;
  long long ones = 0;
  std::uint64_t evaluations = 0;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;

  bool admissible(int pos, int label) const {
    switch (constraint.kind) {
      case Constraint::Kind::unconstrained:
        return true;
      case Constraint::Kind::zero_magnetization:
      case Constraint::Kind::fixed_magnetization: {
        const long long ones_after = ones + label;
        const long long remaining = n - pos - 1;
        return ones_after <= target_ones && target_ones <= ones_after + remaining;
      }
      case Constraint::Kind::fixed_group_sizes:
        return counts[label] < constraint.group_sizes[label];
    }
    return false;
  }

  void descend(int pos) {
    if (pos == n) {
      ++evaluations;
      const double h = eval.value();
      if (h < best) {
        best = h;
        best_labels = eval.labels();
      }
      return;
    }
    const int label_cap = (pos == 0 && reduced) ? 1 : q;
    for (int label = 0; label < label_cap; ++label) {
      if (!admissible(pos, label)) continue;
      ones += label == 1 ? 1 : 0;
      if (!counts.empty()) ++counts[label];
      eval.apply(pos, label);
      descend(pos + 1);
      ones -= label == 1 ? 1 : 0;
      if (!counts.empty()) --counts[label];
    }
    eval.apply(pos, 0);
  }
};

}  // namespace

void AnnealSchedule::validate() const {
  if (!(t_end > 0.0) || t_start < t_end)
    fail(ErrorKind::invalid_spec, "anneal schedule needs t_start >= t_end > 0");
  if (sweeps < 1) fail(ErrorKind::invalid_spec, "anneal schedule needs sweeps >= 1");
  if (restarts < 1) fail(ErrorKind::invalid_spec, "anneal schedule needs restarts >= 1");
}

std::uint64_t exhaustive_state_count(int q, int n, bool symmetry_reduction) {
  const int exponent = symmetry_reduction ? n - 1 : n;
  std::uint64_t states = 1;
  for (int i = 0; i < exponent; ++i) {
    if (states > (std::uint64_t{1} << 63) / static_cast<std::uint64_t>(q))
      return std::uint64_t{1} << 63;
    states *= static_cast<std::uint64_t>(q);
  }
  return states;
}

OptimizeResult optimize_exhaustive(const Functional& f, const Graph& g,
                                   const Constraint& constraint,
                                   const ExhaustiveOptions& options) {
  f.validate();
  const int n = g.n();
  if (n < 1) fail(ErrorKind::invalid_input, "cannot optimize over an empty node set");
  const int q = f.spin_states();
  constraint.validate(n, q);

  const bool reduced = options.symmetry_reduction && constraint.label_symmetric() &&
                       functional_label_symmetric(f);
  const std::uint64_t states = exhaustive_state_count(q, n, reduced);
  if (states > options.budget)
    fail(ErrorKind::budget_exceeded,
         "exhaustive enumeration needs " + std::to_string(states) + " states, budget is " +
             std::to_string(options.budget));

  DeltaEvaluator eval(f, g, SpinConfig(std::vector<int>(n, 0), q));
  ExhaustiveSearch search(eval, constraint, n, q, reduced);
  if (constraint.kind == Constraint::Kind::zero_magnetization)
    search.target_ones = n / 2;
  else if (constraint.kind == Constraint::Kind::fixed_magnetization)
    search.target_ones = (n + constraint.magnetization_target) / 2;
  if (constraint.kind == Constraint::Kind::fixed_group_sizes) search.counts.assign(q, 0);
  search.descend(0);

  if (search.best_labels.empty())
    fail(ErrorKind::invalid_spec, "constraint admits no configuration");
  OptimizeResult result;
  result.best_config = SpinConfig(search.best_labels, q);
  result.best_value = evaluate(f, g, result.best_config);
  result.evaluations = search.evaluations;
  result.exact = true;
  return result;
}

OptimizeResult optimize_sa(const Functional& f, const Graph& g, const Constraint& constraint,
                           const AnnealSchedule& schedule, std::uint64_t seed,
                           const std::optional<SpinConfig>& initial,
                           const std::function<void(const SpinConfig&)>& observer) {
  f.validate();
  schedule.validate();
  const int n = g.n();
  if (n < 1) fail(ErrorKind::invalid_input, "cannot optimize over an empty node set");
  const int q = f.spin_states();
  constraint.validate(n, q);
  const MoveKind moves = resolve_move_kind(constraint, schedule.move_kind);
  check_initial(initial, g, q, constraint);

  const long long proposals = schedule.sweeps * n;
  const double decay_base = schedule.t_end / schedule.t_start;

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  std::uint64_t evaluations = 0;

  for (int restart = 0; restart < schedule.restarts; ++restart) {
    Rng rng(mix64(seed, static_cast<std::uint64_t>(restart)));
    std::vector<int> start = (restart == 0 && initial)
                                 ? initial->labels()
                                 : random_config(n, q, constraint, rng);
    DeltaEvaluator eval(f, g, SpinConfig(std::move(start), q));
    LabelBuckets buckets(eval.labels(), q);
    ++evaluations;
    double current = eval.value();
    if (current < best) {
      best = current;
      best_labels = eval.labels();
    }

    for (long long k = 0; k < proposals; ++k) {
      const double frac = proposals > 1 ? static_cast<double>(k) / (proposals - 1) : 1.0;
      const double temperature = schedule.t_start * std::pow(decay_base, frac);

      bool accepted = false;
      if (moves == MoveKind::single_flip) {
        const int u = rng.next_int_below(n);
        int next = q == 2 ? 1 - eval.labels()[u] : rng.next_int_below(q - 1);
        if (q != 2 && next >= eval.labels()[u]) ++next;
        const double dh = eval.delta(u, next);
        ++evaluations;
        if (dh <= 0.0 || rng.next_double() < std::exp(-dh / temperature)) {
          const int prev = eval.labels()[u];
          eval.apply(u, next);
          buckets.relabel(u, prev, next);
          accepted = true;
        }
      } else {
        const int u = rng.next_int_below(n);
        const int lu = eval.labels()[u];
        const int others = n - buckets.size_of(lu);
        if (others == 0) continue;  // all nodes share one label, no swap exists
        const int v = buckets.pick_other(lu, static_cast<int>(rng.next_below(
                                                 static_cast<std::uint64_t>(others))));
        const int lv = eval.labels()[v];
        const double d1 = eval.delta(u, lv);
        eval.apply(u, lv);
        const double d2 = eval.delta(v, lu);
        evaluations += 2;
        const double dh = d1 + d2;
        if (dh <= 0.0 || rng.next_double() < std::exp(-dh / temperature)) {
          eval.apply(v, lu);
          buckets.relabel(u, lu, lv);
          buckets.relabel(v, lv, lu);
          accepted = true;
        } else {
          eval.apply(u, lu);
        }
      }

      if (accepted) {
        current = eval.value();
        if (current < best) {
          best = current;
          best_labels = eval.labels();
        }
        if (observer) observer(SpinConfig(eval.labels(), q));
      }
    }
  }

  OptimizeResult result;
  result.best_config = SpinConfig(best_labels, q);
  result.best_value = evaluate(f, g, result.best_config);
  result.evaluations = evaluations;
  result.exact = false;
  return result;
}

OptimizeResult optimize_local(const Functional& f, const Graph& g, const Constraint& constraint,
                              int restarts, std::uint64_t seed,
                              const std::optional<SpinConfig>& initial) {
  f.validate();
  if (restarts < 1) fail(ErrorKind::invalid_spec, "local search needs restarts >= 1");
  const int n = g.n();
  if (n < 1) fail(ErrorKind::invalid_input, "cannot optimize over an empty node set");
  const int q = f.spin_states();
  constraint.validate(n, q);
  const MoveKind moves = resolve_move_kind(constraint, std::nullopt);
  check_initial(initial, g, q, constraint);

  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  std::uint64_t evaluations = 0;

  for (int restart = 0; restart < restarts; ++restart) {
    Rng rng(mix64(seed, static_cast<std::uint64_t>(restart)));
    std::vector<int> start = (restart == 0 && initial)
                                 ? initial->labels()
                                 : random_config(n, q, constraint, rng);
    DeltaEvaluator eval(f, g, SpinConfig(std::move(start), q));
    ++evaluations;

    while (true) {
      double best_delta = 0.0;
      int move_u = -1, move_v = -1, move_label = -1;
      if (moves == MoveKind::single_flip) {
        for (int u = 0; u < n; ++u) {
          for (int l = 0; l < q; ++l) {
            if (l == eval.labels()[u]) continue;
            const double d = eval.delta(u, l);
            ++evaluations;
            if (d < best_delta) {
              best_delta = d;
              move_u = u;
              move_label = l;
            }
          }
        }
      } else {
        for (int u = 0; u < n; ++u) {
          for (int v = u + 1; v < n; ++v) {
            const int lu = eval.labels()[u], lv = eval.labels()[v];
            if (lu == lv) continue;
            const double d1 = eval.delta(u, lv);
            eval.apply(u, lv);
            const double d2 = eval.delta(v, lu);
            eval.apply(u, lu);
            evaluations += 2;
            const double d = d1 + d2;
            if (d < best_delta) {
              best_delta = d;
              move_u = u;
              move_v = v;
            }
          }
        }
      }
      if (move_u < 0) break;
      if (moves == MoveKind::single_flip) {
        eval.apply(move_u, move_label);
      } else {
        const int lu = eval.labels()[move_u], lv = eval.labels()[move_v];
        eval.apply(move_u, lv);
        eval.apply(move_v, lu);
      }
    }

    const double h = eval.value();
    if (h < best) {
      best = h;
      best_labels = eval.labels();
    }
  }

  OptimizeResult result;
  result.best_config = SpinConfig(best_labels, q);
  result.best_value = evaluate(f, g, result.best_config);
  result.evaluations = evaluations;
  result.exact = false;
  return result;
}

}  // namespace netconc
