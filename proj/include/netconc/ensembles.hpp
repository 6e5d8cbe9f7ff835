#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "netconc/graph.hpp"
#include "netconc/rng.hpp"

namespace netconc {

// Random-network ensembles. Every unordered pair {i, j} is included
// independently with the ensemble's pair probability; sampling is a
// deterministic function of (spec.seed, replicate).

struct ErDense {
  int n = 0;
  double p = 0.0;  // pair probability, in [0, 1]
};

struct ErSparse {
  int n = 0;
  double lambda = 0.0;  // expected degree; pair probability lambda/(n-1)
};

struct ChungLu {
  int n = 0;
  std::vector<double> weights;  // expected degrees; pair probability w_i w_j / Σ w
};

struct Perturbed {
  Graph seed_graph;
  double p0 = 0.0;  // deletion probability; insertion probability is derived
};

using BaseVariant = std::variant<ErDense, ErSparse, ChungLu, Perturbed>;

struct KBound {
  BaseVariant inner;
  int k = 1;  // maximum admissible degree
};

using EnsembleVariant = std::variant<ErDense, ErSparse, ChungLu, Perturbed, KBound>;

struct EnsembleSpec {
  EnsembleVariant variant;
  std::uint64_t seed = 0;
};

/// Throws invalid_spec when the variant parameters violate their invariants
/// (probabilities outside [0,1], CL pair probability above 1, K < 1, ...).
void validate(const EnsembleSpec& spec);
void validate_variant(const EnsembleVariant& variant);

int node_count(const EnsembleVariant& variant);

/// Draws replicate `index` of the ensemble. Deterministic: the stream seed is
/// mix64(spec.seed, index).
Graph sample(const EnsembleSpec& spec, std::uint64_t index);

/// Rejection sampling from the inner ensemble until max degree <= k.
/// Exhausting the attempt budget (1e6 draws) is an infeasible-spec error.
Graph sample_kbound(const KBound& spec, std::uint64_t seed, std::uint64_t index);

/// Insertion probability that conserves the expected edge count of g0 under
/// deletion probability p0: p1 = p0 * m / (N(N-1)/2 - m). Input error on a
/// complete graph.
double perturbation_p1(const Graph& g0, double p0);

/// One perturbation draw around g0: existing edges deleted with probability
/// p0, non-edges inserted with probability perturbation_p1(g0, p0).
Graph sample_perturbed(const Graph& g0, double p0, std::uint64_t seed, std::uint64_t index);

struct CLSummary {
  double d = 0.0;           // average degree (1/N) Σ w_l
  double dbar = 0.0;        // second-order degree Σ w_j^2 / Σ w_l, >= d
  double expected_m = 0.0;  // Σ_{i<j} w_i w_j / Σ w_l
};

CLSummary cl_summary(std::span<const double> weights);

/// A Chung-Lu family with average degree growing as B * N^beta, used when
/// sweeping N in experiments and when evaluating the growth-dependent bounds.
struct CLFamily {
  std::function<std::vector<double>(int)> weights_for;
  double growth_b = 0.0;
  double growth_beta = 0.0;
};

}  // namespace netconc
