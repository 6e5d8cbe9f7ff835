#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "netconc/csv.hpp"
#include "netconc/error.hpp"
#include "netconc/experiments.hpp"
#include "netconc/json_io.hpp"
#include "netconc/parallel.hpp"
#include "netconc/version.hpp"

namespace fs = std::filesystem;
using netconc::ErrorKind;
using netconc::Json;

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  int workers = 1;
};

std::string default_out_dir() {
  const char* env = std::getenv("NETCONC_OUT");
  return env != nullptr && *env != '\0' ? env : ".";
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) netconc::fail(ErrorKind::io_error, "cannot open for writing: " + path.string());
  out << content;
  if (!out) netconc::fail(ErrorKind::io_error, "write failed: " + path.string());
}

const Json& field(const Json& j, const char* key, const char* context) {
  if (!j.is_object() || !j.contains(key))
    netconc::fail(ErrorKind::config_error,
                  std::string(context) + ": missing field '" + key + "'");
  return j.at(key);
}

Json resolve_labels_ref(const Json& j, const std::string& base_dir) {
  if (j.is_array()) return j;
  if (!j.is_string())
    netconc::fail(ErrorKind::config_error, "labels: expected a path or an array");
  fs::path path(j.get<std::string>());
  if (path.is_relative() && !base_dir.empty()) path = fs::path(base_dir) / path;
  std::ifstream in(path);
  if (!in) netconc::fail(ErrorKind::io_error, "cannot open: " + path.string());
  Json labels = Json::array();
  long long value;
  while (in >> value) labels.push_back(value);
  return labels;
}

std::vector<int> labels_from_json(const Json& j) {
  std::vector<int> out;
  for (const Json& v : j) {
    if (!v.is_number_integer())
      netconc::fail(ErrorKind::config_error, "labels: entries must be integers");
    out.push_back(v.get<int>());
  }
  return out;
}

Json resolve_value_grid(const Json& cfg, const char* list_key, const char* grid_key,
                        const char* context) {
  if (cfg.contains(list_key)) {
    const Json& list = cfg.at(list_key);
    if (!list.is_array() || list.empty())
      netconc::fail(ErrorKind::config_error,
                    std::string(context) + ": '" + list_key + "' must be a non-empty array");
    return list;
  }
  if (!cfg.contains(grid_key))
    netconc::fail(ErrorKind::config_error, std::string(context) + ": needs '" + list_key +
                                               "' or '" + grid_key + "'");
  const Json& grid = cfg.at(grid_key);
  const double start = field(grid, "start", context).get<double>();
  const double stop = field(grid, "stop", context).get<double>();
  const double step = field(grid, "step", context).get<double>();
  if (!(step > 0.0) || stop < start)
    netconc::fail(ErrorKind::config_error,
                  std::string(context) + ": grid needs step > 0 and stop >= start");
  Json out = Json::array();
  for (int k = 0;; ++k) {
    const double v = start + step * k;
    if (v > stop + step * 1e-9) break;
    out.push_back(v);
  }
  return out;
}

std::vector<double> doubles_from_json(const Json& j) {
  std::vector<double> out;
  for (const Json& v : j) out.push_back(v.get<double>());
  return out;
}

// Pulls external references (graphs, weight files, CSVs) into the config so
// the manifest embeds a self-contained document.
Json resolve_config(const std::string& subcommand, Json cfg, const std::string& base_dir) {
  if (!cfg.is_object())
    netconc::fail(ErrorKind::config_error, "config: expected a JSON object");
  if (subcommand == "gen" || subcommand == "concentrate") {
    cfg["ensemble"] =
        netconc::resolve_ensemble_json(field(cfg, "ensemble", subcommand.c_str()), base_dir);
  } else if (subcommand == "eval") {
    cfg["graph"] = netconc::resolve_graph_ref(field(cfg, "graph", "eval"), base_dir);
    cfg["labels"] = resolve_labels_ref(field(cfg, "labels", "eval"), base_dir);
  } else if (subcommand == "opt") {
    if (cfg.contains("graph"))
      cfg["graph"] = netconc::resolve_graph_ref(cfg.at("graph"), base_dir);
    else
      cfg["ensemble"] =
          netconc::resolve_ensemble_json(field(cfg, "ensemble", "opt"), base_dir);
  } else if (subcommand == "bounds") {
    cfg["ts"] = resolve_value_grid(cfg, "ts", "t_grid", "bounds");
    cfg.erase("t_grid");
  } else if (subcommand == "gamma-sweep") {
    cfg["graph"] = netconc::resolve_graph_ref(field(cfg, "graph", "gamma-sweep"), base_dir);
    cfg["gammas"] = resolve_value_grid(cfg, "gammas", "gamma_grid", "gamma-sweep");
    cfg.erase("gamma_grid");
  } else if (subcommand == "fit") {
    if (!cfg.contains("points")) {
      fs::path path(field(cfg, "report_csv", "fit").get<std::string>());
      if (path.is_relative() && !base_dir.empty()) path = fs::path(base_dir) / path;
      std::ifstream in(path);
      if (!in) netconc::fail(ErrorKind::io_error, "cannot open: " + path.string());
      Json points = Json::array();
      std::string line;
      bool header_seen = false;
      while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) {  // column header
          header_seen = true;
          continue;
        }
        std::istringstream row(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(row, cell, ',')) cells.push_back(cell);
        if (cells.size() < 3)
          netconc::fail(ErrorKind::config_error, "fit: report csv needs N,mean,std columns");
        points.push_back(Json::array({std::stod(cells[0]), std::stod(cells[2])}));
      }
      cfg["points"] = std::move(points);
      cfg.erase("report_csv");
    }
  }
  return cfg;
}

struct LoadedConfig {
  Json config;
  std::string base_dir;
};

LoadedConfig load_config(const std::string& path, const std::string& subcommand) {
  Json doc = netconc::parse_json_file(path);
  LoadedConfig out;
  out.base_dir = fs::path(path).parent_path().string();
  if (doc.is_object() && doc.contains("tool") && doc.at("tool") == "netconc") {
    const Json& sub = field(doc, "subcommand", "manifest");
    if (sub.get<std::string>() != subcommand)
      netconc::fail(ErrorKind::config_error,
                    "manifest belongs to subcommand '" + sub.get<std::string>() + "'");
    out.config = field(doc, "config", "manifest");
  } else {
    out.config = std::move(doc);
  }
  out.config = resolve_config(subcommand, std::move(out.config), out.base_dir);
  return out;
}

void write_manifest(const fs::path& out_dir, const std::string& subcommand,
                    const Json& resolved_config, std::uint64_t master_seed, int workers) {
  Json manifest{{"tool", "netconc"},
                {"version", netconc::kVersion},
                {"subcommand", subcommand},
                {"master_seed", master_seed},
                {"workers", workers},
                {"config", resolved_config}};
  write_file(out_dir / "manifest.json", manifest.dump(2) + "\n");
}

std::uint64_t resolve_seed(Json& cfg, const std::optional<std::uint64_t>& override_seed) {
  std::uint64_t seed = 0;
  if (override_seed)
    seed = *override_seed;
  else if (cfg.contains("seed"))
    seed = cfg.at("seed").get<std::uint64_t>();
  cfg["seed"] = seed;
  return seed;
}

// ---- subcommands ----------------------------------------------------------

int run_gen(const CommonArgs& args) {
  LoadedConfig loaded = load_config(args.config_path, "gen");
  Json& cfg = loaded.config;
  netconc::EnsembleSpec spec = netconc::ensemble_from_json(cfg.at("ensemble"));
  if (args.seed) spec.seed = *args.seed;
  cfg["ensemble"]["seed"] = spec.seed;
  long long count = 1;
  if (cfg.contains("count")) count = cfg.at("count").get<long long>();
  if (count < 1) netconc::fail(ErrorKind::config_error, "gen: count must be >= 1");
  cfg["count"] = count;

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  for (long long i = 0; i < count; ++i) {
    const netconc::Graph g = netconc::sample(spec, static_cast<std::uint64_t>(i));
    char name[48];
    std::snprintf(name, sizeof(name), "graph_%04lld.edgelist", i);
    write_file(out_dir / name, netconc::to_edge_list_text(g));
  }
  write_manifest(out_dir, "gen", cfg, spec.seed, args.workers);
  return 0;
}

int run_eval(const CommonArgs& args) {
  LoadedConfig loaded = load_config(args.config_path, "eval");
  Json& cfg = loaded.config;
  const netconc::Functional f = netconc::functional_from_json(cfg.at("functional"));
  const netconc::Graph g = netconc::graph_from_json(cfg.at("graph"));
  const netconc::SpinConfig s(labels_from_json(cfg.at("labels")), f.spin_states());
  const double value = netconc::evaluate(f, g, s);
  std::cout << netconc::format_double(value) << "\n";

  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_manifest(out_dir, "eval", cfg, 0, args.workers);
  return 0;
}

int run_opt(const CommonArgs& args) {
  LoadedConfig loaded = load_config(args.config_path, "opt");
  Json& cfg = loaded.config;
  const netconc::Functional f = netconc::functional_from_json(field(cfg, "functional", "opt"));
  netconc::Constraint constraint;
  if (cfg.contains("constraint"))
    constraint = netconc::constraint_from_json(cfg.at("constraint"));
  const std::uint64_t master_seed = resolve_seed(cfg, args.seed);

  const Json& optimizer = field(cfg, "optimizer", "opt");
  const std::string opt_kind = field(optimizer, "kind", "optimizer").get<std::string>();
  netconc::AnnealSchedule schedule;
  int local_restarts = 1;
  if (opt_kind == "sa") {
    if (optimizer.contains("schedule"))
      schedule = netconc::schedule_from_json(optimizer.at("schedule"));
  } else if (opt_kind == "local") {
    if (optimizer.contains("restarts"))
      local_restarts = optimizer.at("restarts").get<int>();
  } else if (opt_kind != "exhaustive") {
    netconc::fail(ErrorKind::config_error, "opt: optimizer kind must be exhaustive, sa or local");
  }

  auto optimize_one = [&](const netconc::Graph& g, std::uint64_t seed) {
    if (opt_kind == "exhaustive") return netconc::optimize_exhaustive(f, g, constraint);
    if (opt_kind == "local")
      return netconc::optimize_local(f, g, constraint, local_restarts, seed);
    return netconc::optimize_sa(f, g, constraint, schedule, seed);
  };

  std::vector<std::pair<netconc::Graph, netconc::OptimizeResult>> results;
  if (cfg.contains("graph")) {
    const netconc::Graph g = netconc::graph_from_json(cfg.at("graph"));
    results.emplace_back(g, optimize_one(g, netconc::mix64(master_seed, 0)));
  } else {
    netconc::EnsembleSpec spec = netconc::ensemble_from_json(cfg.at("ensemble"));
    cfg["ensemble"]["seed"] = spec.seed;
    int replicates = 1;
    if (cfg.contains("replicates")) replicates = cfg.at("replicates").get<int>();
    if (replicates < 1) netconc::fail(ErrorKind::config_error, "opt: replicates must be >= 1");
    cfg["replicates"] = replicates;
    results.resize(replicates);
    netconc::parallel_for(replicates, args.workers, [&](int rep) {
      const netconc::Graph g = netconc::sample(spec, static_cast<std::uint64_t>(rep));
      results[rep] = {g, optimize_one(g, netconc::mix64(master_seed, rep))};
    });
  }

  std::string csv = "replicate,H,m,evaluations,exact\n";
  for (size_t rep = 0; rep < results.size(); ++rep) {
    const auto& [g, r] = results[rep];
    csv += std::to_string(rep);
    csv += ',';
    csv += netconc::format_double(r.best_value);
    csv += ',';
    csv += std::to_string(g.m());
    csv += ',';
    csv += std::to_string(r.evaluations);
    csv += ',';
    csv += r.exact ? '1' : '0';
    csv += '\n';
  }
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "results.csv", csv);
  write_manifest(out_dir, "opt", cfg, master_seed, args.workers);
  return 0;
}

int run_bounds(const CommonArgs& args) {
  LoadedConfig loaded = load_config(args.config_path, "bounds");
  Json& cfg = loaded.config;
  const netconc::BoundSpec spec = netconc::bound_from_json(field(cfg, "bound", "bounds"));
  const std::vector<double> ts = doubles_from_json(cfg.at("ts"));

  std::string csv;
  if (spec.theorem == netconc::Theorem::t5 || spec.theorem == netconc::Theorem::t7)
    csv += "# note: T5's constant 25/2 and T7's sigma=5/4 are fixed as stated; they do not "
           "match the 11/8 per-edge modularity constant (see README)\n";
  csv += "t,raw,clamped\n";
  for (double t : ts) {
    const netconc::BoundValue v = netconc::bound_eval(spec, t);
    csv += netconc::format_double(t);
    csv += ',';
    csv += netconc::format_double(v.raw);
    csv += ',';
    csv += netconc::format_double(v.clamped);
    csv += '\n';
  }
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "bounds.csv", csv);
  write_manifest(out_dir, "bounds", cfg, 0, args.workers);
  return 0;
}

int run_concentrate(const CommonArgs& args) {
  LoadedConfig loaded = load_config(args.config_path, "concentrate");
  Json& cfg = loaded.config;

  netconc::ExperimentConfig experiment;
  const Json family = field(cfg, "ensemble", "concentrate");
  experiment.ensemble_for_n = [family](int n) {
    return netconc::ensemble_for_n_from_json(family, n);
  };
  for (const Json& n : field(cfg, "n_list", "concentrate"))
    experiment.n_list.push_back(n.get<int>());
  experiment.functional =
      netconc::functional_from_json(field(cfg, "functional", "concentrate"));
  if (cfg.contains("constraint"))
    experiment.constraint = netconc::constraint_from_json(cfg.at("constraint"));
  if (cfg.contains("optimizer"))
    experiment.optimizer = netconc::optimizer_from_json(cfg.at("optimizer"));
  experiment.replicates = field(cfg, "replicates", "concentrate").get<int>();
  if (cfg.contains("bound"))
    experiment.bound = netconc::bound_from_json(cfg.at("bound"));
  if (cfg.contains("normalization"))
    experiment.normalization =
        netconc::normalization_from_string(cfg.at("normalization").get<std::string>());
  if (cfg.contains("tail_grid_size"))
    experiment.tail_grid_size = cfg.at("tail_grid_size").get<int>();
  if (cfg.contains("tail_grid_sigmas"))
    experiment.tail_grid_sigmas = cfg.at("tail_grid_sigmas").get<double>();
  experiment.master_seed = resolve_seed(cfg, args.seed);
  experiment.workers = args.workers;
  try {
    experiment.validate();
  } catch (const netconc::Error& e) {
    netconc::fail(ErrorKind::config_error, std::string("concentrate: ") + e.what());
  }

  const netconc::ConcentrationReport report = netconc::run_concentration(experiment);
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "samples.csv", netconc::samples_csv(report));
  write_file(out_dir / "report.csv", netconc::report_csv(report));
  write_file(out_dir / "tails.csv", netconc::tails_csv(report));
  write_file(out_dir / "scaling.csv", netconc::scaling_csv(report));
  write_manifest(out_dir, "concentrate", cfg, experiment.master_seed, args.workers);
  if (report.fit)
    std::cout << "fit slope=" << netconc::format_double(report.fit->slope)
              << " stderr=" << netconc::format_double(report.fit->stderr_) << "\n";
  else if (!report.fit_note.empty())
    std::cout << report.fit_note << "\n";
  return 0;
}

int run_gamma_sweep(const CommonArgs& args) {
  LoadedConfig loaded = load_config(args.config_path, "gamma-sweep");
  Json& cfg = loaded.config;
  const netconc::Graph g = netconc::graph_from_json(cfg.at("graph"));
  std::vector<int> comm1, comm2;
  for (const Json& v : field(cfg, "comm1", "gamma-sweep")) comm1.push_back(v.get<int>());
  for (const Json& v : field(cfg, "comm2", "gamma-sweep")) comm2.push_back(v.get<int>());
  const double j = field(cfg, "j", "gamma-sweep").get<double>();
  const int q = field(cfg, "q", "gamma-sweep").get<int>();
  const std::vector<double> gammas = doubles_from_json(cfg.at("gammas"));

  const auto rows = netconc::gamma_sweep(g, comm1, comm2, j, q, gammas);
  std::string csv = "gamma,merged\n";
  for (const auto& row : rows) {
    csv += netconc::format_double(row.gamma);
    csv += ',';
    csv += row.merged ? '1' : '0';
    csv += '\n';
  }
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "gamma.csv", csv);
  write_manifest(out_dir, "gamma-sweep", cfg, 0, args.workers);
  return 0;
}

int run_fit(const CommonArgs& args) {
  LoadedConfig loaded = load_config(args.config_path, "fit");
  Json& cfg = loaded.config;
  std::vector<std::pair<double, double>> points;
  for (const Json& p : field(cfg, "points", "fit")) {
    if (!p.is_array() || p.size() != 2)
      netconc::fail(ErrorKind::config_error, "fit: points must be [N, std] pairs");
    points.emplace_back(p[0].get<double>(), p[1].get<double>());
  }
  const netconc::ScalingFit fit = netconc::fit_scaling(points);
  std::cout << "slope=" << netconc::format_double(fit.slope)
            << " stderr=" << netconc::format_double(fit.stderr_) << "\n";

  double sx = 0.0, sy = 0.0;
  for (const auto& [n, s] : points) {
    sx += std::log(n);
    sy += std::log(s);
  }
  const double intercept =
      sy / static_cast<double>(points.size()) - fit.slope * sx / static_cast<double>(points.size());
  std::string csv = "N,std,fitted\n";
  for (const auto& [n, s] : points) {
    csv += netconc::format_double(n);
    csv += ',';
    csv += netconc::format_double(s);
    csv += ',';
    csv += netconc::format_double(std::exp(intercept + fit.slope * std::log(n)));
    csv += '\n';
  }
  const fs::path out_dir(args.out_dir);
  fs::create_directories(out_dir);
  write_file(out_dir / "fit.csv", csv);
  write_manifest(out_dir, "fit", cfg, 0, args.workers);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"netconc: random-network ensembles, community Hamiltonians, "
               "and concentration measurements"};
  app.require_subcommand(1);

  std::map<std::string, CommonArgs> args;
  std::map<std::string, std::function<int(const CommonArgs&)>> runners = {
      {"gen", run_gen},           {"eval", run_eval},
      {"opt", run_opt},           {"bounds", run_bounds},
      {"concentrate", run_concentrate}, {"gamma-sweep", run_gamma_sweep},
      {"fit", run_fit},
  };
  const std::map<std::string, std::string> blurbs = {
      {"gen", "sample graphs from an ensemble into edge-list files"},
      {"eval", "evaluate a Hamiltonian on a graph and label file"},
      {"opt", "optimize a Hamiltonian on a graph or ensemble"},
      {"bounds", "tabulate a closed-form tail bound over a t grid"},
      {"concentrate", "run a full concentration experiment"},
      {"gamma-sweep", "locate the q-Potts community split threshold"},
      {"fit", "fit the log-log scaling of fluctuation vs N"},
  };

  for (auto& [name, runner] : runners) {
    CLI::App* sub = app.add_subcommand(name, blurbs.at(name));
    CommonArgs& a = args[name];
    sub->add_option("--config", a.config_path, "JSON config (or a manifest.json to re-run)")
        ->required();
    sub->add_option("--out", a.out_dir,
                    "output directory (default: $NETCONC_OUT or current directory)");
    sub->add_option("--seed", a.seed, "master seed override");
    sub->add_option("--workers", a.workers, "worker threads (results are independent of this)")
        ->check(CLI::PositiveNumber);
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& [name, runner] : runners) {
    if (!app.got_subcommand(name)) continue;
    CommonArgs& a = args[name];
    if (a.out_dir.empty()) a.out_dir = default_out_dir();
    try {
      return runner(a);
    } catch (const netconc::Error& e) {
      Json err{{"error", Json{{"kind", to_string(e.kind())}, {"message", e.what()}}}};
      std::cerr << err.dump() << "\n";
      return e.kind() == ErrorKind::config_error ? 2 : 1;
    } catch (const Json::exception& e) {
      Json err{{"error", Json{{"kind", "config-error"}, {"message", e.what()}}}};
      std::cerr << err.dump() << "\n";
      return 2;
    } catch (const std::exception& e) {
      Json err{{"error", Json{{"kind", "runtime"}, {"message", e.what()}}}};
      std::cerr << err.dump() << "\n";
      return 1;
    }
  }
  return 1;
}
