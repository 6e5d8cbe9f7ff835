#include "netconc/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "netconc/error.hpp"

namespace netconc {

namespace {

constexpr std::uint64_t kRejectionBudget = 1'000'000;

// Uniform-probability pair sampling with geometric skipping: instead of one
// Bernoulli draw per pair, draw the gap to the next included pair. O(m) draws.
void bernoulli_pairs(int n, double p, Rng& rng, std::vector<std::pair<int, int>>& out) {
  out.clear();
  if (n < 2 || p <= 0.0) return;
  const long long total = static_cast<long long>(n) * (n - 1) / 2;
  if (p >= 1.0) {
    out.reserve(static_cast<size_t>(total));
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) out.emplace_back(i, j);
    return;
  }
  const double log_q = std::log1p(-p);
  long long k = -1;
  while (true) {
    const double u = rng.next_double();
    const double gap = std::floor(std::log1p(-u) / log_q);
    if (gap > static_cast<double>(total)) break;  // far past the end
    k += 1 + static_cast<long long>(gap);
    if (k >= total) break;
    // linear index -> (i, j), row-major over i < j
    long long rem = k;
    int i = 0;
    long long row = n - 1;
    while (rem >= row) {
      rem -= row;
      --row;
      ++i;
    }
    out.emplace_back(i, static_cast<int>(i + 1 + rem));
  }
}

Graph sample_er(int n, double p, Rng& rng) {
  std::vector<std::pair<int, int>> edges;
  bernoulli_pairs(n, p, rng, edges);
  return Graph::from_canonical(n, std::move(edges));
}

Graph sample_chung_lu(const ChungLu& cl, Rng& rng) {
  double wsum = 0.0;
  for (double w : cl.weights) wsum += w;
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < cl.n; ++i) {
    for (int j = i + 1; j < cl.n; ++j) {
      const double pij = cl.weights[i] * cl.weights[j] / wsum;
      if (rng.next_double() < pij) edges.emplace_back(i, j);
    }
  }
  return Graph::from_canonical(cl.n, std::move(edges));
}

Graph sample_perturbed_draw(const Perturbed& spec, Rng& rng) {
  const Graph& g0 = spec.seed_graph;
  const double p1 = perturbation_p1(g0, spec.p0);
  if (p1 > 1.0)
    fail(ErrorKind::invalid_spec, "perturbation insertion probability exceeds 1");
  const int n = g0.n();
  std::vector<std::pair<int, int>> edges;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const bool present = g0.has_edge(i, j);
      const double u = rng.next_double();
      const bool keep = present ? (u >= spec.p0) : (u < p1);
      if (keep) edges.emplace_back(i, j);
    }
  }
  return Graph::from_canonical(n, std::move(edges));
}

Graph sample_base(const BaseVariant& variant, Rng& rng) {
  return std::visit(
      [&](const auto& v) -> Graph {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ErDense>) {
          return sample_er(v.n, v.p, rng);
        } else if constexpr (std::is_same_v<T, ErSparse>) {
          return sample_er(v.n, v.lambda / (v.n - 1), rng);
        } else if constexpr (std::is_same_v<T, ChungLu>) {
          return sample_chung_lu(v, rng);
        } else {
          return sample_perturbed_draw(v, rng);
        }
      },
      variant);
}

void validate_base(const BaseVariant& variant) {
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, ErDense>) {
          if (v.n < 0) fail(ErrorKind::invalid_spec, "er-dense: negative node count");
          if (v.p < 0.0 || v.p > 1.0)
            fail(ErrorKind::invalid_spec, "er-dense: p must be in [0, 1]");
        } else if constexpr (std::is_same_v<T, ErSparse>) {
          if (v.n < 2) fail(ErrorKind::invalid_spec, "er-sparse: needs n >= 2");
          if (v.lambda < 0.0)
            fail(ErrorKind::invalid_spec, "er-sparse: lambda must be non-negative");
          if (v.lambda / (v.n - 1) > 1.0)
            fail(ErrorKind::invalid_spec, "er-sparse: link probability lambda/(n-1) exceeds 1");
        } else if constexpr (std::is_same_v<T, ChungLu>) {
          if (v.n < 0 || static_cast<int>(v.weights.size()) != v.n)
            fail(ErrorKind::invalid_spec, "cl: needs one weight per node");
          double wsum = 0.0, wmax = 0.0;
          for (double w : v.weights) {
            if (!(w > 0.0)) fail(ErrorKind::invalid_spec, "cl: weights must be positive");
            wsum += w;
            wmax = std::max(wmax, w);
          }
          if (v.n >= 2 && wmax * wmax > wsum)
            fail(ErrorKind::invalid_spec, "cl: max weight squared exceeds the weight sum, "
                                          "some pair probability would exceed 1");
        } else {
          if (v.p0 < 0.0 || v.p0 > 1.0)
            fail(ErrorKind::invalid_spec, "perturbed: p0 must be in [0, 1]");
          const double p1 = perturbation_p1(v.seed_graph, v.p0);
          if (p1 > 1.0)
            fail(ErrorKind::invalid_spec, "perturbed: derived insertion probability exceeds 1");
        }
      },
      variant);
}

}  // namespace

void validate_variant(const EnsembleVariant& variant) {
  if (const auto* kb = std::get_if<KBound>(&variant)) {
    if (kb->k < 1) fail(ErrorKind::invalid_spec, "kbound: needs K >= 1");
    validate_base(kb->inner);
    return;
  }
  std::visit(
      [](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (!std::is_same_v<T, KBound>) validate_base(BaseVariant{v});
      },
      variant);
}

void validate(const EnsembleSpec& spec) { validate_variant(spec.variant); }

namespace {
int node_count_base(const BaseVariant& variant) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, Perturbed>)
          return v.seed_graph.n();
        else
          return v.n;
      },
      variant);
}
}  // namespace

int node_count(const EnsembleVariant& variant) {
  if (const auto* kb = std::get_if<KBound>(&variant)) return node_count_base(kb->inner);
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, KBound>)
          return 0;  // unreachable
        else
          return node_count_base(BaseVariant{v});
      },
      variant);
}

Graph sample(const EnsembleSpec& spec, std::uint64_t index) {
  validate(spec);
  Rng rng(mix64(spec.seed, index));
  if (const auto* kb = std::get_if<KBound>(&spec.variant)) {
    for (std::uint64_t attempt = 0; attempt < kRejectionBudget; ++attempt) {
      Graph g = sample_base(kb->inner, rng);
      if (g.max_degree() <= kb->k) return g;
    }
    fail(ErrorKind::infeasible_spec,
         "kbound: rejection budget exhausted, no sample with max degree <= " +
             std::to_string(kb->k));
  }
  return std::visit(
      [&](const auto& v) -> Graph {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, KBound>)
          return Graph{};  // unreachable
        else
          return sample_base(BaseVariant{v}, rng);
      },
      spec.variant);
}

Graph sample_kbound(const KBound& spec, std::uint64_t seed, std::uint64_t index) {
  return sample(EnsembleSpec{spec, seed}, index);
}

double perturbation_p1(const Graph& g0, double p0) {
  const long long m = g0.m();
  const long long non_edges = g0.max_pairs() - m;
  if (non_edges == 0)
    fail(ErrorKind::invalid_input, "perturbation is undefined on a complete graph");
  return p0 * static_cast<double>(m) / static_cast<double>(non_edges);
}

Graph sample_perturbed(const Graph& g0, double p0, std::uint64_t seed, std::uint64_t index) {
  EnsembleSpec spec{Perturbed{g0, p0}, seed};
  return sample(spec, index);
}

CLSummary cl_summary(std::span<const double> weights) {
  if (weights.empty()) fail(ErrorKind::invalid_input, "cl summary needs at least one weight");
  double wsum = 0.0, wsq = 0.0;
  for (double w : weights) {
    wsum += w;
    wsq += w * w;
  }
  CLSummary s;
  s.d = wsum / static_cast<double>(weights.size());
  s.dbar = wsq / wsum;
  // Σ_{i<j} w_i w_j / Σ w  =  (Σw^2 - Σ w^2) / (2 Σ w)
  s.expected_m = (wsum * wsum - wsq) / (2.0 * wsum);
  return s;
}

}  // namespace netconc
