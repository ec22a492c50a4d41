#include <string>
#include <vector>

#include "compocheck/rules.hpp"
#include "compocheck/simulator.hpp"
#include "doctest.h"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracle.hpp"

using namespace compocheck;

namespace {

// Delivered requests checked against the oracle, independently of check_type_safety.
int oracle_violations(const Model& model, const InstanceGraph& graph, const Trace& trace) {
  const oracle::Closures reference(model);
  int violations = 0;
  for (const auto& request : trace.requests) {
    if (request.status != RequestStatus::Delivered) {
      ++violations;
      continue;
    }
    if (request.at == "<env>") continue;
    const auto holder = graph.find_holder(request.at);
    if (!holder || graph.holders()[*holder].kind != HolderKind::Component) {
      ++violations;
      continue;
    }
    const auto& cls = graph.components()[graph.holders()[*holder].index].cls->name;
    violations += reference.class_interfaces(cls).count(request.interface) == 0;
  }
  return violations;
}

Simulation run_full(const Model& model, const std::string& root) {
  const auto graph = instantiate(model, root);
  return simulate(model, root, full_injections(graph));
}

}  // namespace

TEST_SUITE("simulator") {
  TEST_CASE("instances are laid out depth first") {
    const auto model = fixtures::load("delegation.csm");
    const auto graph = instantiate(model, "A");
    std::vector<std::string> ids;
    for (std::size_t h = 0; h < graph.holders().size(); ++h) ids.push_back(graph.holder_id(h));
    CHECK(ids == std::vector<std::string>{"a", "a.pIJL", "a.rA_K", "a.bak_rA_K", "a.d", "a.e", "a.e.pJL", "a.e.rK"});
    CHECK(graph.holder_id(kEnvironment) == "<env>");
  }

  TEST_CASE("default trace of the delegation example") {
    const auto model = fixtures::load("delegation.csm");
    auto graph = instantiate(model, "A");
    for (const auto& injection : default_injections(graph)) inject(graph, injection.location, injection.interface);
    const auto trace = run_to_quiescence(graph);
    const std::vector<TraceEvent> expected{
        {1, 1, "a.pIJL", "a.d", "deleg_I"},     {2, 2, "a.pIJL", "a.e.pJL", "deleg_J"},
        {3, 3, "a.pIJL", "a.e.pJL", "deleg_L"}, {4, 2, "a.e.pJL", "a.e", "owner"},
        {5, 3, "a.e.pJL", "a.e", "owner"},
    };
    CHECK(trace.events == expected);
    CHECK(check_type_safety(trace, graph).safe);
    CHECK(trace.requests[1].path == std::vector<std::string>{"a.pIJL", "a.e.pJL", "a.e"});
  }

  TEST_CASE("typed bindings route required interfaces") {
    const auto model = fixtures::load("delegation.csm");
    const auto sim = simulate(model, "A", {{"a.e.rK", "K", ""}, {"a.d", "K", ""}});
    REQUIRE(sim.trace.requests.size() == 2);
    CHECK(sim.trace.requests[0].path.back() == "<env>");
    CHECK(sim.trace.requests[1].path == std::vector<std::string>{"a.d", "a.rA_K", "<env>"});
    CHECK(sim.safety.safe);
  }

  TEST_CASE("a missing delegation leaves requests stuck") {
    const auto model = fixtures::load("delegation_missing_jl.csm");
    auto graph = instantiate(model, "A");
    for (const auto& injection : default_injections(graph)) inject(graph, injection.location, injection.interface);
    const auto trace = run_to_quiescence(graph);
    const auto safety = check_type_safety(trace, graph);
    CHECK_FALSE(safety.safe);
    CHECK(safety.stuck == 2);
    REQUIRE(trace.diagnostics.size() == 2);
    CHECK(trace.diagnostics.front().code == "R001");
  }

  TEST_CASE("multi-instance parts receive a copy each") {
    const auto model = fixtures::from_dsl(R"(
      interface I { op a; }
      class W { realizes I; }
      class C { port p: I; part w: W x2; connector self.p, w; }
    )");
    const auto sim = simulate(model, "C", {{"c.p", "I", ""}});
    REQUIRE(sim.trace.requests.size() == 2);
    CHECK(sim.trace.requests[0].at == "c.w[0]");
    CHECK(sim.trace.requests[1].at == "c.w[1]");
    CHECK(sim.trace.events[0].step == sim.trace.events[1].step);
    CHECK(sim.safety.delivered == 2);
  }

  TEST_CASE("injection and instantiation errors") {
    const auto model = fixtures::load("delegation.csm");
    CHECK_THROWS_AS(instantiate(model, "Nope"), SimError);
    CHECK_THROWS_AS(instantiate(model, "I"), SimError);
    auto graph = instantiate(model, "A");
    CHECK_THROWS_AS(inject(graph, "a.nope", "I"), SimError);
    CHECK_THROWS_AS(inject(graph, "a.pIJL", "K"), SimError);
    CHECK_THROWS_AS(inject(graph, "a.pIJL", "I", "noSuchOp"), SimError);
    CHECK(inject(graph, "a.pIJL", "I") == 1);
    CHECK(graph.requests().front().operation == "sI");
  }

  TEST_CASE("forbidden links cannot be instantiated") {
    const auto model = fixtures::load("classification.csm");
    CHECK_THROWS_AS(instantiate(model, "C"), SimError);
  }

  TEST_CASE("a request at a component that lacks its interface is rejected") {
    const auto model = fixtures::from_dsl(R"(
      interface I { op a; }
      interface J { op b; }
      interface IJ group : I, J {}
      class X { realizes I; }
      class Y { realizes J; }
      class C { port p: IJ; part x: X; part y: Y; connector self.p, x via deleg_J; connector self.p, y via deleg_I; }
    )");
    CHECK_FALSE(check_model(model).passed);
    const auto sim = simulate(model, "C", {{"c.p", "I", ""}, {"c.p", "J", ""}});
    CHECK_FALSE(sim.safety.safe);
    CHECK(sim.safety.stuck == 2);
    REQUIRE(sim.trace.diagnostics.size() == 2);
    CHECK(sim.trace.diagnostics[0].code == "R002");
  }

  TEST_CASE("the full suite is type safe on the fixtures") {
    for (const char* name : {"delegation.csm", "atm.csm.json", "mixed_kinds_protected.csm", "leaf.csm", "split_ports.csm"}) {
      CAPTURE(name);
      const auto model = fixtures::load(name);
      const auto root = model.root.value_or(model.classes.back().name);
      const auto graph = instantiate(model, root);
      const auto sim = simulate(model, root, full_injections(graph));
      CHECK(sim.safety.safe);
      CHECK(sim.safety.stuck == 0);
      CHECK(oracle_violations(model, instantiate(model, root), sim.trace) == 0);
    }
  }

  TEST_CASE("generated well-formed models route every request") {
    gen::Rng rng(2024);
    int environment = 0;
    int fanned = 0;
    int nested = 0;
    for (int i = 0; i < 100; ++i) {
      const auto model = synthesize_deleg_associations(gen::well_formed(rng));
      REQUIRE(check_model(model).passed);
      const auto graph = instantiate(model, *model.root);
      const auto sim = run_full(model, *model.root);
      if (!sim.safety.safe) FAIL_CHECK(render_trace_text(sim.trace, sim.safety));
      CHECK(oracle_violations(model, graph, sim.trace) == 0);
      for (const auto& request : sim.trace.requests) environment += request.at == "<env>";
      for (const auto& instance : graph.components()) {
        fanned += instance.id.back() == ']';
        nested += std::count(instance.id.begin(), instance.id.end(), '.') >= 2;
      }
    }
    // The generator must exercise every routing feature.
    CHECK(environment > 0);
    CHECK(fanned > 0);
    CHECK(nested > 0);
  }

  TEST_CASE("dropping a root connector strands requests") {
    gen::Rng rng(99);
    for (int i = 0; i < 100; ++i) {
      const auto model = synthesize_deleg_associations(gen::well_formed(rng));
      const auto broken = gen::drop_connector(model, *model.root, 0);
      const auto sim = run_full(broken, *model.root);
      CHECK(sim.safety.stuck >= 1);
    }
  }

  TEST_CASE("transit through a relay chain is linear") {
    for (int k = 1; k <= 20; ++k) {
      CAPTURE(k);
      const auto model = synthesize_deleg_associations(gen::relay_chain(k));
      const auto sim = simulate(model, "C0", {{"c0.p", "I", ""}});
      CHECK(sim.trace.events.size() == static_cast<std::size_t>(k));
      CHECK(sim.safety.delivered == 1);
    }
  }

  TEST_CASE("stepping one action at a time") {
    const auto model = fixtures::load("delegation.csm");
    auto graph = instantiate(model, "A");
    inject(graph, "a.pIJL", "J");
    auto first = step(graph);
    CHECK_FALSE(first.quiescent);
    REQUIRE(first.events.size() == 1);
    CHECK(first.events[0].to == "a.e.pJL");
    CHECK_FALSE(step(graph).quiescent);
    CHECK(step(graph).quiescent);
    CHECK(graph.requests().front().hops == 2);
  }

  TEST_CASE("traces are deterministic") {
    const auto model = fixtures::load("atm.csm.json");
    const auto graph = instantiate(model, "ATM");
    const auto injections = full_injections(graph);
    const auto first = simulate(model, "ATM", injections);
    const auto text = render_trace_json_lines(first.trace, first.safety);
    for (int i = 0; i < 4; ++i) {
      const auto again = simulate(model, "ATM", injections);
      CHECK(render_trace_json_lines(again.trace, again.safety) == text);
    }
  }
}
