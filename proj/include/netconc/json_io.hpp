#pragma once

#include <string>

#include <json.hpp>

#include "netconc/bounds.hpp"
#include "netconc/ensembles.hpp"
#include "netconc/experiments.hpp"
#include "netconc/functionals.hpp"
#include "netconc/graph.hpp"
#include "netconc/optimizers.hpp"

namespace netconc {

// JSON forms of every spec object, used by configs, manifests and the CLI.
// Keys preserve insertion order so emitted documents are byte-stable.
using Json = nlohmann::ordered_json;

/// Parses a JSON document from disk; io_error / config_error on failure.
Json parse_json_file(const std::string& path);

// Graphs serialize as {"n": N, "edges": [[u, v], ...]}.
Json graph_to_json(const Graph& g);
Graph graph_from_json(const Json& j);
/// Accepts either an inline graph object or a string path to an edge-list
/// file (relative to base_dir); returns the inline form.
Json resolve_graph_ref(const Json& j, const std::string& base_dir);

// {"kind": ..., "params": {...}}; the q-Potts penalty is always the default
// (custom penalties are programmatic only).
Json functional_to_json(const Functional& f);
Functional functional_from_json(const Json& j);

Json constraint_to_json(const Constraint& c);
Constraint constraint_from_json(const Json& j);

// {"variant": ..., "params": {...}, "seed": ...}; weights and seed graphs
// must already be inline (see resolve_ensemble_json).
Json ensemble_to_json(const EnsembleSpec& spec);
EnsembleSpec ensemble_from_json(const Json& j);
/// Resolves "weights_file" and "graph_file" references into inline data so
/// the document becomes self-contained (manifests embed this form).
Json resolve_ensemble_json(Json j, const std::string& base_dir);
/// Instantiates a family document at node count n (fills params.n, selects
/// weights_by_n entries, checks perturbed-seed-graph compatibility).
EnsembleSpec ensemble_for_n_from_json(const Json& family, int n);

Json bound_to_json(const BoundSpec& spec);
BoundSpec bound_from_json(const Json& j);

Json schedule_to_json(const AnnealSchedule& s);
AnnealSchedule schedule_from_json(const Json& j);

Json optimizer_to_json(const OptimizerPolicy& p);
OptimizerPolicy optimizer_from_json(const Json& j);

const char* to_string(Normalization n);
Normalization normalization_from_string(const std::string& name);

}  // namespace netconc
