#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace netconc {

/// Immutable undirected simple graph. Stores the canonical sorted edge list
/// (u < v), per-node degrees and CSR adjacency. All mutation is copy-on-write
/// (see flip_edge); instances are safe to share across threads.
class Graph {
 public:
  Graph() = default;

  int n() const { return n_; }
  long long m() const { return static_cast<long long>(edges_.size()); }
  int degree(int i) const { return degrees_[i]; }
  const std::vector<int>& degrees() const { return degrees_; }
  std::span<const int> neighbors(int i) const {
    return {adjacency_.data() + offsets_[i], adjacency_.data() + offsets_[i + 1]};
  }
  bool has_edge(int i, int j) const;
  /// Canonical edge list: pairs (u, v) with u < v, sorted lexicographically.
  const std::vector<std::pair<int, int>>& edges() const { return edges_; }
  long long max_pairs() const { return static_cast<long long>(n_) * (n_ - 1) / 2; }
  int max_degree() const;

  friend bool operator==(const Graph& a, const Graph& b) {
    return a.n_ == b.n_ && a.edges_ == b.edges_;
  }

  /// Trusted constructor: pairs must already be canonical (u < v, sorted,
  /// unique, in range). Samplers use this to skip re-validation.
  static Graph from_canonical(int n, std::vector<std::pair<int, int>> edges);

 private:
  void build_adjacency();

  int n_ = 0;
  std::vector<std::pair<int, int>> edges_;
  std::vector<int> degrees_;
  std::vector<int> offsets_;
  std::vector<int> adjacency_;
};

/// Builds a graph from an arbitrary pair list: pairs are normalized to u < v
/// and deduplicated. Self-loops and out-of-range endpoints are input errors.
Graph from_edge_list(int n, std::span<const std::pair<int, int>> pairs);

/// New graph identical to g except that the presence of edge {i, j} is
/// toggled. g is unchanged.
Graph flip_edge(const Graph& g, int i, int j);

// Edge-list text format: first line "N m", then m lines "u v" with u < v in
// canonical order, LF-terminated. Round-trips bit-exactly.
std::string to_edge_list_text(const Graph& g);
Graph from_edge_list_text(const std::string& text);
void write_edge_list_file(const Graph& g, const std::string& path);
Graph read_edge_list_file(const std::string& path);

/// Per-node label assignment with q states. q = 2 encodes Ising spins via
/// s_i = 2*label_i - 1.
class SpinConfig {
 public:
  SpinConfig() = default;
  SpinConfig(std::vector<int> labels, int q);

  int q() const { return q_; }
  int size() const { return static_cast<int>(labels_.size()); }
  const std::vector<int>& labels() const { return labels_; }
  int label(int i) const { return labels_[i]; }
  int spin(int i) const { return 2 * labels_[i] - 1; }
  /// n_s = #{i : label_i = s}, length q. Sums to size().
  std::vector<long long> occupation_counts() const;

  friend bool operator==(const SpinConfig& a, const SpinConfig& b) {
    return a.q_ == b.q_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<int> labels_;
  int q_ = 2;
};

/// Sum of spins for a two-state configuration; unsupported for q != 2.
int magnetization(const SpinConfig& s);

/// Restriction of the spin configuration space.
struct Constraint {
  enum class Kind {
    unconstrained,
    zero_magnetization,
    fixed_magnetization,
    fixed_group_sizes,
  };

  Kind kind = Kind::unconstrained;
  int magnetization_target = 0;          // fixed_magnetization
  std::vector<long long> group_sizes;    // fixed_group_sizes, length q

  static Constraint none() { return {}; }
  static Constraint zero_mag() { return {Kind::zero_magnetization, 0, {}}; }
  static Constraint fixed_mag(int c) { return {Kind::fixed_magnetization, c, {}}; }
  static Constraint fixed_sizes(std::vector<long long> sizes) {
    return {Kind::fixed_group_sizes, 0, std::move(sizes)};
  }

  bool is_unconstrained() const { return kind == Kind::unconstrained; }
  /// Throws invalid_spec / unsupported if the constraint cannot be satisfied
  /// on n nodes with q states.
  void validate(int n, int q) const;
  bool satisfied_by(const SpinConfig& s) const;
  /// True when the constraint is invariant under relabeling (global flip for
  /// q = 2, label transpositions in general), which makes fixing node 0's
  /// label a sound search-space reduction.
  bool label_symmetric() const;
};

}  // namespace netconc
