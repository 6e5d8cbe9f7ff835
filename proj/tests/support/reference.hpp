#pragma once

// Independent test oracles: literal transcriptions of the Hamiltonian
// definitions over a dense adjacency matrix, and a plain base-q counter
// enumeration for exact minima. Deliberately kept separate from the library's
// edge-list/incremental evaluation paths.

#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "netconc/functionals.hpp"
#include "netconc/graph.hpp"

namespace refcheck {

inline std::vector<std::vector<int>> dense_adjacency(const netconc::Graph& g) {
  std::vector<std::vector<int>> a(g.n(), std::vector<int>(g.n(), 0));
  for (const auto& [u, v] : g.edges()) {
    a[u][v] = 1;
    a[v][u] = 1;
  }
  return a;
}

inline double naive_evaluate(const netconc::Functional& f, const netconc::Graph& g,
                             const std::vector<int>& labels) {
  const int n = g.n();
  const auto a = dense_adjacency(g);
  const double m = static_cast<double>(g.m());
  auto spin = [&](int i) { return 2.0 * labels[i] - 1.0; };

  switch (f.kind) {
    case netconc::FunctionalKind::bipartition: {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) sum += a[i][j] * spin(i) * spin(j);
      return -sum / n;
    }
    case netconc::FunctionalKind::circuit_partition: {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j) sum += (a[i][j] / 2.0 - f.lambda_pen) * spin(i) * spin(j);
      return -sum / n;
    }
    case netconc::FunctionalKind::modularity: {
      double sum = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j)
            sum += (a[i][j] - g.degree(i) * g.degree(j) / (2.0 * m)) * spin(i) * spin(j);
      return -sum / (4.0 * m);
    }
    case netconc::FunctionalKind::q_potts: {
      double ferro = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          if (i != j && labels[i] == labels[j]) ferro += a[i][j];
      std::vector<long long> counts(f.q, 0);
      for (int l : labels) ++counts[l];
      double penalty = f.penalty ? f.penalty(counts) : netconc::ordered_pair_penalty(counts);
      return -f.coupling_j * ferro / (4.0 * m) + f.gamma / (2.0 * m) * penalty;
    }
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Exact minimum by counting through all q^n label vectors; labels[0] is the
/// most significant digit, so enumeration order is lexicographic. The
/// returned configuration is the first one within a 1e-12 relative band of
/// the minimum: per-term rounding in this oracle can split exact ties, while
/// genuinely distinct values at these sizes differ by far more than the band.
inline std::pair<double, std::vector<int>> naive_minimum(
    const netconc::Functional& f, const netconc::Graph& g, const netconc::Constraint& c = {}) {
  const int n = g.n();
  const int q = f.spin_states();
  std::vector<int> labels(n, 0);
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> best_labels;
  auto band = [](double value) {
    return 1e-12 * std::max(1.0, std::abs(value));
  };
  while (true) {
    if (c.satisfied_by(netconc::SpinConfig(labels, q))) {
      const double h = naive_evaluate(f, g, labels);
      if (best_labels.empty() || h < best - band(best)) {
        best = h;
        best_labels = labels;
      }
    }
    int pos = n - 1;
    while (pos >= 0 && labels[pos] == q - 1) labels[pos--] = 0;
    if (pos < 0) break;
    ++labels[pos];
  }
  return {best, best_labels};
}

inline netconc::Graph path_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i + 1 < n; ++i) edges.emplace_back(i, i + 1);
  return netconc::from_edge_list(n, edges);
}

inline netconc::Graph complete_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) edges.emplace_back(i, j);
  return netconc::from_edge_list(n, edges);
}

inline netconc::Graph cycle_graph(int n) {
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) edges.emplace_back(i, (i + 1) % n);
  return netconc::from_edge_list(n, edges);
}

/// Two triangles {0,1,2} and {3,4,5} joined by the bridge 2-3.
inline netconc::Graph two_triangles_bridge() {
  return netconc::from_edge_list(
      6, std::vector<std::pair<int, int>>{{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}, {2, 3}});
}

}  // namespace refcheck
