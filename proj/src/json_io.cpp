#include "netconc/json_io.hpp"

#include <filesystem>
#include <fstream>

#include "netconc/error.hpp"

namespace netconc {

namespace {

const Json& require(const Json& j, const char* key, const char* context) {
  if (!j.is_object())
    fail(ErrorKind::config_error, std::string(context) + ": expected an object");
  if (!j.contains(key))
    fail(ErrorKind::config_error, std::string(context) + ": missing field '" + key + "'");
  return j.at(key);
}

double as_number(const Json& j, const char* what) {
  if (!j.is_number())
    fail(ErrorKind::config_error, std::string(what) + ": expected a number");
  return j.get<double>();
}

long long as_integer(const Json& j, const char* what) {
  if (!j.is_number_integer())
    fail(ErrorKind::config_error, std::string(what) + ": expected an integer");
  return j.get<long long>();
}

std::string as_string(const Json& j, const char* what) {
  if (!j.is_string())
    fail(ErrorKind::config_error, std::string(what) + ": expected a string");
  return j.get<std::string>();
}

std::string join_path(const std::string& base_dir, const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_absolute() || base_dir.empty()) return path;
  return (std::filesystem::path(base_dir) / p).string();
}

}  // namespace

Json parse_json_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::io_error, "cannot open: " + path);
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    fail(ErrorKind::config_error, path + ": " + e.what());
  }
}

Json graph_to_json(const Graph& g) {
  Json edges = Json::array();
  for (const auto& [u, v] : g.edges()) edges.push_back(Json::array({u, v}));
  return Json{{"n", g.n()}, {"edges", std::move(edges)}};
}

Graph graph_from_json(const Json& j) {
  const int n = static_cast<int>(as_integer(require(j, "n", "graph"), "graph.n"));
  const Json& edges = require(j, "edges", "graph");
  if (!edges.is_array()) fail(ErrorKind::config_error, "graph.edges: expected an array");
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(edges.size());
  for (const Json& e : edges) {
    if (!e.is_array() || e.size() != 2)
      fail(ErrorKind::config_error, "graph.edges: each edge must be a pair");
    pairs.emplace_back(static_cast<int>(as_integer(e[0], "graph edge endpoint")),
                       static_cast<int>(as_integer(e[1], "graph edge endpoint")));
  }
  try {
    return from_edge_list(n, pairs);
  } catch (const Error& err) {
    fail(ErrorKind::config_error, std::string("graph: ") + err.what());
  }
}

Json resolve_graph_ref(const Json& j, const std::string& base_dir) {
  if (j.is_string())
    return graph_to_json(read_edge_list_file(join_path(base_dir, j.get<std::string>())));
  graph_from_json(j);  // validate
  return j;
}

Json functional_to_json(const Functional& f) {
  Json out{{"kind", to_string(f.kind)}};
  switch (f.kind) {
    case FunctionalKind::bipartition:
    case FunctionalKind::modularity:
      break;
    case FunctionalKind::circuit_partition:
      out["params"] = Json{{"lambda_pen", f.lambda_pen}};
      break;
    case FunctionalKind::q_potts:
      out["params"] = Json{{"q", f.q}, {"j", f.coupling_j}, {"gamma", f.gamma}};
      break;
  }
  return out;
}

Functional functional_from_json(const Json& j) {
  const std::string kind = as_string(require(j, "kind", "functional"), "functional.kind");
  Functional f;
  if (kind == "bipartition") {
    f = Functional::bipartition();
  } else if (kind == "circuit-partition") {
    const Json& params = require(j, "params", "functional");
    f = Functional::circuit_partition(
        as_number(require(params, "lambda_pen", "functional.params"), "lambda_pen"));
  } else if (kind == "modularity") {
    f = Functional::modularity();
  } else if (kind == "qpotts") {
    const Json& params = require(j, "params", "functional");
    f = Functional::q_potts(
        static_cast<int>(as_integer(require(params, "q", "functional.params"), "q")),
        as_number(require(params, "j", "functional.params"), "j"),
        as_number(require(params, "gamma", "functional.params"), "gamma"));
  } else {
    fail(ErrorKind::config_error, "functional.kind: unknown kind '" + kind + "'");
  }
  try {
    f.validate();
  } catch (const Error& err) {
    fail(ErrorKind::config_error, std::string("functional: ") + err.what());
  }
  return f;
}

Json constraint_to_json(const Constraint& c) {
  switch (c.kind) {
    case Constraint::Kind::unconstrained:
      return Json{{"kind", "unconstrained"}};
    case Constraint::Kind::zero_magnetization:
      return Json{{"kind", "zero-magnetization"}};
    case Constraint::Kind::fixed_magnetization:
      return Json{{"kind", "fixed-magnetization"}, {"c", c.magnetization_target}};
    case Constraint::Kind::fixed_group_sizes:
      return Json{{"kind", "fixed-group-sizes"}, {"sizes", c.group_sizes}};
  }
  return {};
}

Constraint constraint_from_json(const Json& j) {
  const std::string kind = as_string(require(j, "kind", "constraint"), "constraint.kind");
  if (kind == "unconstrained") return Constraint::none();
  if (kind == "zero-magnetization") return Constraint::zero_mag();
  if (kind == "fixed-magnetization")
    return Constraint::fixed_mag(
        static_cast<int>(as_integer(require(j, "c", "constraint"), "constraint.c")));
  if (kind == "fixed-group-sizes") {
    const Json& sizes = require(j, "sizes", "constraint");
    if (!sizes.is_array())
      fail(ErrorKind::config_error, "constraint.sizes: expected an array");
    std::vector<long long> out;
    for (const Json& s : sizes) out.push_back(as_integer(s, "constraint.sizes entry"));
    return Constraint::fixed_sizes(std::move(out));
  }
  fail(ErrorKind::config_error, "constraint.kind: unknown kind '" + kind + "'");
}

namespace {

Json base_variant_to_json(const BaseVariant& v) {
  return std::visit(
      [](const auto& value) -> Json {
        using T = std::decay_t<decltype(value)>;
        if constexpr (std::is_same_v<T, ErDense>) {
          return Json{{"variant", "er-dense"},
                      {"params", Json{{"n", value.n}, {"p", value.p}}}};
        } else if constexpr (std::is_same_v<T, ErSparse>) {
          return Json{{"variant", "er-sparse"},
                      {"params", Json{{"n", value.n}, {"lambda", value.lambda}}}};
        } else if constexpr (std::is_same_v<T, ChungLu>) {
          return Json{{"variant", "cl"},
                      {"params", Json{{"n", value.n}, {"weights", value.weights}}}};
        } else {
          return Json{{"variant", "perturbed"},
                      {"params", Json{{"p0", value.p0},
                                      {"graph", graph_to_json(value.seed_graph)}}}};
        }
      },
      v);
}

BaseVariant base_variant_from_json(const std::string& variant, const Json& params) {
  if (variant == "er-dense") {
    return ErDense{static_cast<int>(as_integer(require(params, "n", "ensemble.params"), "n")),
                   as_number(require(params, "p", "ensemble.params"), "p")};
  }
  if (variant == "er-sparse") {
    return ErSparse{
        static_cast<int>(as_integer(require(params, "n", "ensemble.params"), "n")),
        as_number(require(params, "lambda", "ensemble.params"), "lambda")};
  }
  if (variant == "cl") {
    const Json& weights = require(params, "weights", "ensemble.params");
    if (!weights.is_array())
      fail(ErrorKind::config_error, "ensemble.params.weights: expected an array");
    ChungLu cl;
    for (const Json& w : weights) cl.weights.push_back(as_number(w, "weight"));
    cl.n = params.contains("n")
               ? static_cast<int>(as_integer(params.at("n"), "ensemble.params.n"))
               : static_cast<int>(cl.weights.size());
    return cl;
  }
  if (variant == "perturbed") {
    Perturbed p;
    p.p0 = as_number(require(params, "p0", "ensemble.params"), "p0");
    p.seed_graph = graph_from_json(require(params, "graph", "ensemble.params"));
    return p;
  }
  fail(ErrorKind::config_error, "ensemble.variant: unknown variant '" + variant + "'");
}

}  // namespace

Json ensemble_to_json(const EnsembleSpec& spec) {
  Json out;
  if (const auto* kb = std::get_if<KBound>(&spec.variant)) {
    Json inner = base_variant_to_json(kb->inner);
    out = Json{{"variant", "kbound"},
               {"params", Json{{"k", kb->k}, {"inner", std::move(inner)}}}};
  } else {
    out = std::visit(
        [](const auto& v) -> Json {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, KBound>)
            return {};
          else
            return base_variant_to_json(BaseVariant{v});
        },
        spec.variant);
  }
  out["seed"] = spec.seed;
  return out;
}

EnsembleSpec ensemble_from_json(const Json& j) {
  const std::string variant = as_string(require(j, "variant", "ensemble"), "ensemble.variant");
  const Json& params = require(j, "params", "ensemble");
  EnsembleSpec spec;
  if (variant == "kbound") {
    KBound kb;
    kb.k = static_cast<int>(as_integer(require(params, "k", "ensemble.params"), "k"));
    const Json& inner = require(params, "inner", "ensemble.params");
    const std::string inner_variant =
        as_string(require(inner, "variant", "ensemble.inner"), "variant");
    if (inner_variant == "kbound")
      fail(ErrorKind::config_error, "ensemble: kbound cannot nest another kbound");
    kb.inner = base_variant_from_json(inner_variant,
                                      require(inner, "params", "ensemble.inner"));
    spec.variant = std::move(kb);
  } else {
    BaseVariant base = base_variant_from_json(variant, params);
    std::visit([&spec](auto&& v) { spec.variant = std::move(v); }, std::move(base));
  }
  if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
  try {
    validate(spec);
  } catch (const Error& err) {
    fail(ErrorKind::config_error, std::string("ensemble: ") + err.what());
  }
  return spec;
}

Json resolve_ensemble_json(Json j, const std::string& base_dir) {
  if (!j.is_object()) fail(ErrorKind::config_error, "ensemble: expected an object");
  if (!j.contains("params")) return j;
  Json& params = j.at("params");
  if (params.contains("weights_file")) {
    const std::string path =
        join_path(base_dir, as_string(params.at("weights_file"), "weights_file"));
    std::ifstream in(path);
    if (!in) fail(ErrorKind::io_error, "cannot open: " + path);
    Json weights = Json::array();
    double w;
    while (in >> w) weights.push_back(w);
    params.erase("weights_file");
    params["weights"] = std::move(weights);
  }
  if (params.contains("graph_file")) {
    params["graph"] = resolve_graph_ref(params.at("graph_file"), base_dir);
    params.erase("graph_file");
  } else if (params.contains("graph")) {
    params["graph"] = resolve_graph_ref(params.at("graph"), base_dir);
  }
  if (params.contains("inner"))
    params["inner"] = resolve_ensemble_json(params.at("inner"), base_dir);
  return j;
}

EnsembleSpec ensemble_for_n_from_json(const Json& family, int n) {
  Json j = family;
  const std::string variant = as_string(require(j, "variant", "ensemble"), "ensemble.variant");
  if (!j.contains("params")) j["params"] = Json::object();
  Json& params = j.at("params");
  auto fill = [n](Json& p, const std::string& var) {
    if (var == "cl") {
      if (p.contains("weights_by_n")) {
        const Json& table = p.at("weights_by_n");
        const std::string key = std::to_string(n);
        if (!table.contains(key))
          fail(ErrorKind::config_error, "ensemble: weights_by_n has no entry for N=" + key);
        p["weights"] = table.at(key);
        p.erase("weights_by_n");
      }
      if (!p.contains("weights"))
        fail(ErrorKind::config_error, "ensemble: cl family needs weights or weights_by_n");
      if (p.at("weights").size() != static_cast<size_t>(n))
        fail(ErrorKind::config_error,
             "ensemble: cl weights length does not match N=" + std::to_string(n));
      p["n"] = n;
    } else if (var == "perturbed") {
      // the seed graph pins N; just check compatibility below via validation
    } else {
      p["n"] = n;
    }
  };
  if (variant == "kbound") {
    require(params, "inner", "ensemble.params");
    Json& inner = params.at("inner");
    const std::string inner_variant =
        as_string(require(inner, "variant", "ensemble.inner"), "variant");
    require(inner, "params", "ensemble.inner");
    fill(inner.at("params"), inner_variant);
  } else {
    fill(params, variant);
  }
  EnsembleSpec spec = ensemble_from_json(j);
  if (node_count(spec.variant) != n)
    fail(ErrorKind::config_error,
         "ensemble: family instantiates to N=" + std::to_string(node_count(spec.variant)) +
             ", expected N=" + std::to_string(n));
  return spec;
}

Json bound_to_json(const BoundSpec& spec) {
  Json params = Json::object();
  for (const auto& [key, value] : spec.params) params[key] = value;
  return Json{{"theorem", to_string(spec.theorem)}, {"params", std::move(params)}};
}

BoundSpec bound_from_json(const Json& j) {
  BoundSpec spec;
  try {
    spec.theorem =
        theorem_from_string(as_string(require(j, "theorem", "bound"), "bound.theorem"));
  } catch (const Error& err) {
    fail(ErrorKind::config_error, std::string("bound: ") + err.what());
  }
  if (j.contains("params")) {
    const Json& params = j.at("params");
    if (!params.is_object())
      fail(ErrorKind::config_error, "bound.params: expected an object");
    for (const auto& [key, value] : params.items())
      spec.params[key] = as_number(value, "bound parameter");
  }
  return spec;
}

Json schedule_to_json(const AnnealSchedule& s) {
  Json out{{"t_start", s.t_start},
           {"t_end", s.t_end},
           {"sweeps", s.sweeps},
           {"restarts", s.restarts}};
  if (s.move_kind)
    out["move_kind"] = *s.move_kind == MoveKind::single_flip ? "single-flip" : "swap";
  return out;
}

AnnealSchedule schedule_from_json(const Json& j) {
  AnnealSchedule s;
  if (!j.is_object()) fail(ErrorKind::config_error, "schedule: expected an object");
  if (j.contains("t_start")) s.t_start = as_number(j.at("t_start"), "schedule.t_start");
  if (j.contains("t_end")) s.t_end = as_number(j.at("t_end"), "schedule.t_end");
  if (j.contains("sweeps")) s.sweeps = as_integer(j.at("sweeps"), "schedule.sweeps");
  if (j.contains("restarts"))
    s.restarts = static_cast<int>(as_integer(j.at("restarts"), "schedule.restarts"));
  if (j.contains("move_kind")) {
    const std::string mk = as_string(j.at("move_kind"), "schedule.move_kind");
    if (mk == "single-flip")
      s.move_kind = MoveKind::single_flip;
    else if (mk == "swap")
      s.move_kind = MoveKind::swap;
    else
      fail(ErrorKind::config_error, "schedule.move_kind: unknown kind '" + mk + "'");
  }
  try {
    s.validate();
  } catch (const Error& err) {
    fail(ErrorKind::config_error, std::string("schedule: ") + err.what());
  }
  return s;
}

Json optimizer_to_json(const OptimizerPolicy& p) {
  if (p.kind == OptimizerPolicy::Kind::exhaustive) return Json{{"kind", "exhaustive"}};
  return Json{{"kind", "sa"}, {"schedule", schedule_to_json(p.schedule)}};
}

OptimizerPolicy optimizer_from_json(const Json& j) {
  OptimizerPolicy p;
  const std::string kind = as_string(require(j, "kind", "optimizer"), "optimizer.kind");
  if (kind == "exhaustive") {
    p.kind = OptimizerPolicy::Kind::exhaustive;
  } else if (kind == "sa") {
    p.kind = OptimizerPolicy::Kind::sa;
    if (j.contains("schedule")) p.schedule = schedule_from_json(j.at("schedule"));
  } else {
    fail(ErrorKind::config_error, "optimizer.kind: unknown kind '" + kind + "'");
  }
  return p;
}

const char* to_string(Normalization n) {
  return n == Normalization::h_over_n ? "H/N" : "H";
}

Normalization normalization_from_string(const std::string& name) {
  if (name == "H") return Normalization::h;
  if (name == "H/N") return Normalization::h_over_n;
  fail(ErrorKind::config_error, "normalization: expected 'H' or 'H/N', got '" + name + "'");
}

}  // namespace netconc
