#include "netconc/functionals.hpp"

#include <cmath>
#include <string>

#include "netconc/error.hpp"

namespace netconc {

double ordered_pair_penalty(std::span<const long long> counts) {
  double total = 0.0;
  for (long long n : counts) total += static_cast<double>(n) * (n - 1);
  return total;
}

void Functional::validate() const {
  switch (kind) {
    case FunctionalKind::bipartition:
    case FunctionalKind::modularity:
      return;
    case FunctionalKind::circuit_partition:
      if (lambda_pen < 0)
        fail(ErrorKind::invalid_spec, "circuit-partition needs lambda_pen >= 0");
      return;
    case FunctionalKind::q_potts:
      if (q < 2) fail(ErrorKind::invalid_spec, "qpotts needs q >= 2");
      if (!(coupling_j > 0)) fail(ErrorKind::invalid_spec, "qpotts needs J > 0");
      if (gamma < 0) fail(ErrorKind::invalid_spec, "qpotts needs gamma >= 0");
      return;
  }
}

DeltaEvaluator::DeltaEvaluator(const Functional& f, const Graph& g, const SpinConfig& start)
    : f_(&f), g_(&g), labels_(start.labels()), states_(f.spin_states()) {
  f.validate();
  if (start.q() != states_)
    fail(ErrorKind::invalid_input, "configuration has q=" + std::to_string(start.q()) +
                                       " but the functional expects q=" +
                                       std::to_string(states_));
  if (start.size() != g.n())
    fail(ErrorKind::invalid_input, "configuration length does not match node count");
  const bool needs_edges =
      f.kind == FunctionalKind::modularity || f.kind == FunctionalKind::q_potts;
  if (needs_edges && g.m() == 0)
    fail(ErrorKind::degenerate_graph,
         std::string(to_string(f.kind)) + " is undefined on an edgeless graph");

  if (f.kind == FunctionalKind::q_potts) {
    occupation_.assign(states_, 0);
    for (int l : labels_) ++occupation_[l];
    occupation_scratch_.resize(states_);
    for (const auto& [u, v] : g.edges())
      if (labels_[u] == labels_[v]) pair_sum_ += 2;
    return;
  }

  for (const auto& [u, v] : g.edges())
    pair_sum_ += 2LL * (2 * labels_[u] - 1) * (2 * labels_[v] - 1);
  if (f.kind == FunctionalKind::circuit_partition) {
    for (int l : labels_) mag_ += 2 * l - 1;
  } else if (f.kind == FunctionalKind::modularity) {
    for (int i = 0; i < g.n(); ++i) {
      long long d = g.degree(i);
      degree_sum_ += d * (2 * labels_[i] - 1);
      degree_sq_ += d * d;
    }
  }
}

double DeltaEvaluator::value_from(long long pair_sum, long long mag, long long degree_sum,
                                  std::span<const long long> occ) const {
  const int n = g_->n();
  const double m = static_cast<double>(g_->m());
  switch (f_->kind) {
    case FunctionalKind::bipartition:
      return -static_cast<double>(pair_sum) / n;
    case FunctionalKind::circuit_partition: {
      double ss_sum = static_cast<double>(mag) * mag - n;  // Σ_{i≠j} s_i s_j
      return -(0.5 * static_cast<double>(pair_sum) - f_->lambda_pen * ss_sum) / n;
    }
    case FunctionalKind::modularity: {
      double null_term =
          (static_cast<double>(degree_sum) * degree_sum - static_cast<double>(degree_sq_)) /
          (2.0 * m);
      return -(static_cast<double>(pair_sum) - null_term) / (4.0 * m);
    }
    case FunctionalKind::q_potts: {
      double ferro = -f_->coupling_j * static_cast<double>(pair_sum) / (4.0 * m);
      double penalty = f_->penalty ? f_->penalty(occ) : ordered_pair_penalty(occ);
      return ferro + f_->gamma / (2.0 * m) * penalty;
    }
  }
  return 0.0;
}

double DeltaEvaluator::value() const {
  return value_from(pair_sum_, mag_, degree_sum_, occupation_);
}

long long DeltaEvaluator::spin_neighbor_sum(int node) const {
  long long sum = 0;
  for (int u : g_->neighbors(node)) sum += 2 * labels_[u] - 1;
  return sum;
}

double DeltaEvaluator::delta(int node, int new_label) const {
  if (node < 0 || node >= g_->n()) fail(ErrorKind::invalid_input, "move node out of range");
  if (new_label < 0 || new_label >= states_)
    fail(ErrorKind::invalid_input, "move label out of range");
  const int old_label = labels_[node];
  if (new_label == old_label) return 0.0;

  if (f_->kind == FunctionalKind::q_potts) {
    long long shift = 0;  // change in the unordered same-label edge count
    for (int u : g_->neighbors(node)) {
      if (labels_[u] == new_label) ++shift;
      if (labels_[u] == old_label) --shift;
    }
    occupation_scratch_.assign(occupation_.begin(), occupation_.end());
    --occupation_scratch_[old_label];
    ++occupation_scratch_[new_label];
    double after = value_from(pair_sum_ + 2 * shift, mag_, degree_sum_, occupation_scratch_);
    return after - value();
  }

  const long long spin_change = 2LL * (new_label - old_label);  // ±2
  const long long pair_sum = pair_sum_ + 2 * spin_change * spin_neighbor_sum(node);
  const long long mag = mag_ + spin_change;
  const long long degree_sum = degree_sum_ + g_->degree(node) * spin_change;
  return value_from(pair_sum, mag, degree_sum, occupation_) - value();
}

void DeltaEvaluator::apply(int node, int new_label) {
  const int old_label = labels_[node];
  if (new_label == old_label) return;
  if (f_->kind == FunctionalKind::q_potts) {
    long long shift = 0;
    for (int u : g_->neighbors(node)) {
      if (labels_[u] == new_label) ++shift;
      if (labels_[u] == old_label) --shift;
    }
    pair_sum_ += 2 * shift;
    --occupation_[old_label];
    ++occupation_[new_label];
  } else {
    const long long spin_change = 2LL * (new_label - old_label);
    pair_sum_ += 2 * spin_change * spin_neighbor_sum(node);
    mag_ += spin_change;
    degree_sum_ += g_->degree(node) * spin_change;
  }
  labels_[node] = new_label;
}

double evaluate(const Functional& f, const Graph& g, const SpinConfig& s) {
  return DeltaEvaluator(f, g, s).value();
}

MoveDelta move_delta(const Functional& f, const Graph& g, const SpinConfig& s, int node,
                     int new_label) {
  DeltaEvaluator eval(f, g, s);
  return MoveDelta{node, new_label, eval.delta(node, new_label)};
}

BoundedDifference bounded_diff_constant(const Functional& f, int n, long long m_star) {
  if (n < 2) fail(ErrorKind::invalid_input, "bounded difference needs n >= 2");
  if (m_star == -1) m_star = n - 1;
  if (m_star < 1) fail(ErrorKind::invalid_input, "bounded difference needs m_star >= 1");
  switch (f.kind) {
    case FunctionalKind::bipartition:
      return {1.0, false};
    case FunctionalKind::circuit_partition:
      // only the A_ij/2 term depends on the graph
      return {0.5, false};
    case FunctionalKind::modularity:
      return {11.0 * n / (8.0 * static_cast<double>(m_star)), false};
    case FunctionalKind::q_potts:
      return {f.coupling_j / 2.0, true};
  }
  return {};
}

}  // namespace netconc
