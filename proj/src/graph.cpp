#include "netconc/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <numeric>
#include <sstream>

#include "netconc/error.hpp"

namespace netconc {

Graph Graph::from_canonical(int n, std::vector<std::pair<int, int>> edges) {
  Graph g;
  g.n_ = n;
  g.edges_ = std::move(edges);
  g.build_adjacency();
  return g;
}

void Graph::build_adjacency() {
  degrees_.assign(n_, 0);
  for (const auto& [u, v] : edges_) {
    ++degrees_[u];
    ++degrees_[v];
  }
  offsets_.assign(n_ + 1, 0);
  for (int i = 0; i < n_; ++i) offsets_[i + 1] = offsets_[i] + degrees_[i];
  adjacency_.resize(2 * edges_.size());
  std::vector<int> cursor(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [u, v] : edges_) {
    adjacency_[cursor[u]++] = v;
    adjacency_[cursor[v]++] = u;
  }
  for (int i = 0; i < n_; ++i)
    std::sort(adjacency_.begin() + offsets_[i], adjacency_.begin() + offsets_[i + 1]);
}

bool Graph::has_edge(int i, int j) const {
  if (degrees_[i] > degrees_[j]) std::swap(i, j);
  auto nb = neighbors(i);
  return std::binary_search(nb.begin(), nb.end(), j);
}

int Graph::max_degree() const {
  if (n_ == 0) return 0;
  return *std::max_element(degrees_.begin(), degrees_.end());
}

Graph from_edge_list(int n, std::span<const std::pair<int, int>> pairs) {
  if (n < 0) fail(ErrorKind::invalid_input, "node count must be non-negative");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(pairs.size());
  for (const auto& [a, b] : pairs) {
    if (a == b)
      fail(ErrorKind::invalid_input,
           "self-loop at node " + std::to_string(a));
    if (a < 0 || b < 0 || a >= n || b >= n)
      fail(ErrorKind::invalid_input,
           "edge endpoint out of range: (" + std::to_string(a) + ", " + std::to_string(b) + ")");
    edges.emplace_back(std::min(a, b), std::max(a, b));
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  return Graph::from_canonical(n, std::move(edges));
}

Graph flip_edge(const Graph& g, int i, int j) {
  if (i == j) fail(ErrorKind::invalid_input, "cannot flip a self-loop");
  if (i < 0 || j < 0 || i >= g.n() || j >= g.n())
    fail(ErrorKind::invalid_input, "flip endpoint out of range");
  std::pair<int, int> e{std::min(i, j), std::max(i, j)};
  std::vector<std::pair<int, int>> edges = g.edges();
  auto it = std::lower_bound(edges.begin(), edges.end(), e);
  if (it != edges.end() && *it == e)
    edges.erase(it);
  else
    edges.insert(it, e);
  return Graph::from_canonical(g.n(), std::move(edges));
}

std::string to_edge_list_text(const Graph& g) {
  std::string out;
  out += std::to_string(g.n());
  out += ' ';
  out += std::to_string(g.m());
  out += '\n';
  for (const auto& [u, v] : g.edges()) {
    out += std::to_string(u);
    out += ' ';
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

Graph from_edge_list_text(const std::string& text) {
  std::istringstream in(text);
  long long n = -1, m = -1;
  if (!(in >> n >> m)) fail(ErrorKind::io_error, "edge list: missing 'N m' header");
  if (n < 0 || m < 0) fail(ErrorKind::io_error, "edge list: negative header field");
  std::vector<std::pair<int, int>> edges;
  edges.reserve(static_cast<size_t>(m));
  for (long long k = 0; k < m; ++k) {
    long long u, v;
    if (!(in >> u >> v))
      fail(ErrorKind::io_error, "edge list: expected " + std::to_string(m) + " edges, got " +
                                    std::to_string(k));
    if (u < 0 || v < 0 || u >= n || v >= n)
      fail(ErrorKind::io_error, "edge list: endpoint out of range at line " + std::to_string(k + 2));
    if (u >= v) fail(ErrorKind::io_error, "edge list: requires u < v at line " + std::to_string(k + 2));
    edges.emplace_back(static_cast<int>(u), static_cast<int>(v));
  }
  long long trailing;
  if (in >> trailing) fail(ErrorKind::io_error, "edge list: trailing data after declared edges");
  if (!std::is_sorted(edges.begin(), edges.end()))
    fail(ErrorKind::io_error, "edge list: edges not in canonical order");
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end())
    fail(ErrorKind::io_error, "edge list: duplicate edge");
  return Graph::from_canonical(static_cast<int>(n), std::move(edges));
}

void write_edge_list_file(const Graph& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::io_error, "cannot open for writing: " + path);
  out << to_edge_list_text(g);
  if (!out) fail(ErrorKind::io_error, "write failed: " + path);
}

Graph read_edge_list_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io_error, "cannot open: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return from_edge_list_text(buf.str());
}

SpinConfig::SpinConfig(std::vector<int> labels, int q) : labels_(std::move(labels)), q_(q) {
  if (q_ < 2) fail(ErrorKind::invalid_input, "spin configuration needs q >= 2");
  for (int l : labels_)
    if (l < 0 || l >= q_)
      fail(ErrorKind::invalid_input, "label " + std::to_string(l) + " out of range for q=" +
                                         std::to_string(q_));
}

std::vector<long long> SpinConfig::occupation_counts() const {
  std::vector<long long> counts(q_, 0);
  for (int l : labels_) ++counts[l];
  return counts;
}

int magnetization(const SpinConfig& s) {
  if (s.q() != 2)
    fail(ErrorKind::unsupported, "magnetization is defined for q=2 configurations only");
  int m = 0;
  for (int l : s.labels()) m += 2 * l - 1;
  return m;
}

void Constraint::validate(int n, int q) const {
  switch (kind) {
    case Kind::unconstrained:
      return;
    case Kind::zero_magnetization:
      if (q != 2) fail(ErrorKind::unsupported, "zero-magnetization requires q=2");
      if (n % 2 != 0)
        fail(ErrorKind::invalid_spec, "zero-magnetization requires an even node count");
      return;
    case Kind::fixed_magnetization: {
      if (q != 2) fail(ErrorKind::unsupported, "fixed-magnetization requires q=2");
      int c = magnetization_target;
      if ((n + c) % 2 != 0 || c < -n || c > n)
        fail(ErrorKind::invalid_spec,
             "fixed-magnetization c=" + std::to_string(c) + " unreachable with N=" + std::to_string(n));
      return;
    }
    case Kind::fixed_group_sizes: {
      if (static_cast<int>(group_sizes.size()) != q)
        fail(ErrorKind::invalid_spec, "fixed-group-sizes needs one size per label");
      long long total = 0;
      for (long long s : group_sizes) {
        if (s < 0) fail(ErrorKind::invalid_spec, "group size must be non-negative");
        total += s;
      }
      if (total != n) fail(ErrorKind::invalid_spec, "group sizes must sum to N");
      return;
    }
  }
}

bool Constraint::satisfied_by(const SpinConfig& s) const {
  switch (kind) {
    case Kind::unconstrained:
      return true;
    case Kind::zero_magnetization:
      return magnetization(s) == 0;
    case Kind::fixed_magnetization:
      return magnetization(s) == magnetization_target;
    case Kind::fixed_group_sizes: {
      auto counts = s.occupation_counts();
      if (counts.size() != group_sizes.size()) return false;
      return std::equal(counts.begin(), counts.end(), group_sizes.begin());
    }
  }
  return false;
}

bool Constraint::label_symmetric() const {
  switch (kind) {
    case Kind::unconstrained:
      return true;
    case Kind::zero_magnetization:
      return true;
    case Kind::fixed_magnetization:
      return magnetization_target == 0;
    case Kind::fixed_group_sizes:
      return std::adjacent_find(group_sizes.begin(), group_sizes.end(),
                                std::not_equal_to<>()) == group_sizes.end();
  }
  return false;
}

}  // namespace netconc
