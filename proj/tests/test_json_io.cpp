#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "netconc/error.hpp"
#include "netconc/json_io.hpp"
#include "support/reference.hpp"

using namespace netconc;

TEST_CASE("graphs round-trip through json") {
  const Graph g = refcheck::two_triangles_bridge();
  CHECK(graph_from_json(graph_to_json(g)) == g);
  CHECK_THROWS_AS(graph_from_json(Json{{"n", 2}, {"edges", Json::array({Json::array({0, 0})})}}),
                  Error);
}

TEST_CASE("functionals round-trip through json") {
  for (const Functional& f :
       {Functional::bipartition(), Functional::circuit_partition(0.25),
        Functional::modularity(), Functional::q_potts(3, 1.5, 0.7)}) {
    const Functional back = functional_from_json(functional_to_json(f));
    CHECK(back.kind == f.kind);
    CHECK(back.lambda_pen == f.lambda_pen);
    CHECK(back.q == f.q);
    CHECK(back.coupling_j == f.coupling_j);
    CHECK(back.gamma == f.gamma);
  }
  CHECK_THROWS_AS(functional_from_json(Json{{"kind", "nope"}}), Error);
  CHECK_THROWS_AS(functional_from_json(Json{{"kind", "qpotts"}}), Error);  // missing params
}

TEST_CASE("constraints round-trip through json") {
  for (const Constraint& c : {Constraint::none(), Constraint::zero_mag(),
                              Constraint::fixed_mag(-2), Constraint::fixed_sizes({2, 3})}) {
    const Constraint back = constraint_from_json(constraint_to_json(c));
    CHECK(back.kind == c.kind);
    CHECK(back.magnetization_target == c.magnetization_target);
    CHECK(back.group_sizes == c.group_sizes);
  }
}

TEST_CASE("ensembles round-trip through json") {
  std::vector<EnsembleSpec> specs;
  specs.push_back({ErDense{6, 0.4}, 9});
  specs.push_back({ErSparse{10, 3.0}, 10});
  specs.push_back({ChungLu{3, {1.0, 1.5, 0.5}}, 11});
  specs.push_back({Perturbed{refcheck::path_graph(4), 0.2}, 12});
  specs.push_back({KBound{ErSparse{10, 3.0}, 5}, 13});
  for (const EnsembleSpec& spec : specs) {
    const Json j = ensemble_to_json(spec);
    const EnsembleSpec back = ensemble_from_json(j);
    CHECK(ensemble_to_json(back) == j);
    CHECK(back.seed == spec.seed);
    // sampling agrees, which pins the variant payload too
    CHECK(sample(back, 0) == sample(spec, 0));
  }
  CHECK_THROWS_AS(
      ensemble_from_json(Json{{"variant", "mystery"}, {"params", Json::object()}}), Error);
}

TEST_CASE("bound specs round-trip through json") {
  BoundSpec spec;
  spec.theorem = Theorem::t4;
  spec.params = {{"c", 1.0}, {"K", 5.0}, {"N", 80.0}, {"p0", 0.1}};
  const BoundSpec back = bound_from_json(bound_to_json(spec));
  CHECK(back.theorem == spec.theorem);
  CHECK(back.params == spec.params);
}

TEST_CASE("schedules and optimizer policies round-trip through json") {
  AnnealSchedule s;
  s.t_start = 2.0;
  s.t_end = 0.01;
  s.sweeps = 55;
  s.restarts = 3;
  s.move_kind = MoveKind::swap;
  const AnnealSchedule back = schedule_from_json(schedule_to_json(s));
  CHECK(back.t_start == s.t_start);
  CHECK(back.t_end == s.t_end);
  CHECK(back.sweeps == s.sweeps);
  CHECK(back.restarts == s.restarts);
  CHECK(back.move_kind == s.move_kind);
  CHECK_THROWS_AS(schedule_from_json(Json{{"t_end", 2.0}}), Error);  // t_start < t_end

  OptimizerPolicy policy;
  policy.kind = OptimizerPolicy::Kind::sa;
  policy.schedule = s;
  const OptimizerPolicy back_policy = optimizer_from_json(optimizer_to_json(policy));
  CHECK(back_policy.kind == policy.kind);
  CHECK(back_policy.schedule.sweeps == s.sweeps);
}

TEST_CASE("ensemble families instantiate at each N") {
  const Json er = Json{{"variant", "er-sparse"}, {"params", Json{{"lambda", 4.0}}}};
  CHECK(node_count(ensemble_for_n_from_json(er, 30).variant) == 30);

  const Json kb = Json{
      {"variant", "kbound"},
      {"params", Json{{"k", 8}, {"inner", Json{{"variant", "er-sparse"},
                                               {"params", Json{{"lambda", 4.0}}}}}}}};
  const EnsembleSpec kspec = ensemble_for_n_from_json(kb, 25);
  CHECK(node_count(kspec.variant) == 25);
  CHECK(std::holds_alternative<KBound>(kspec.variant));

  Json cl = Json{{"variant", "cl"},
                 {"params", Json{{"weights_by_n",
                                  Json{{"2", Json::array({1.0, 1.0})},
                                       {"3", Json::array({1.0, 1.0, 1.0})}}}}}};
  CHECK(node_count(ensemble_for_n_from_json(cl, 3).variant) == 3);
  CHECK_THROWS_AS(ensemble_for_n_from_json(cl, 4), Error);

  const Json pert = Json{
      {"variant", "perturbed"},
      {"params", Json{{"p0", 0.1}, {"graph", graph_to_json(refcheck::path_graph(4))}}}};
  CHECK(node_count(ensemble_for_n_from_json(pert, 4).variant) == 4);
  CHECK_THROWS_AS(ensemble_for_n_from_json(pert, 5), Error);
}

TEST_CASE("weights files resolve inline") {
  const std::string dir = "json_io_tmp";
  std::filesystem::create_directories(dir);
  {
    std::ofstream w(dir + "/w.txt");
    w << "2.0\n2.0\n2.0\n2.0\n";
  }
  Json spec = Json{{"variant", "cl"}, {"params", Json{{"weights_file", "w.txt"}}}, {"seed", 3}};
  const Json resolved = resolve_ensemble_json(spec, dir);
  CHECK(resolved.at("params").contains("weights"));
  CHECK(resolved.at("params").at("weights").size() == 4);
  CHECK_FALSE(resolved.at("params").contains("weights_file"));
}
