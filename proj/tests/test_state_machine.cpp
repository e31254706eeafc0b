#include <doctest.h>

#include "pltgen/errors.hpp"
#include "pltgen/io.hpp"
#include "pltgen/state_machine.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/oracles.hpp"

using namespace pltgen;
using namespace pltgen::testing;

namespace {

StateMachine two_state_machine() {
  return StateMachine::Builder("two")
      .state("A")
      .state("B")
      .initial("A")
      .transition("t1", "A", "B", "go")
      .build();
}

}  // namespace

TEST_CASE("150% fixture parses with 22 triggered transitions") {
  auto shop = load_online_shop();
  CHECK(shop.sm150.coverage_targets().size() == 22);
  CHECK(shop.sm150.states().size() == 13);
  CHECK(shop.sm150.initial_id() == "StartPage");
  CHECK_FALSE(shop.sm150.is_flat());
}

TEST_CASE("two-state document") {
  auto sm = parse_state_machine(R"({
    "name": "two", "initial": "A",
    "states": [{"id": "A"}, {"id": "B"}],
    "transitions": [{"id": "t1", "source": "A", "target": "B", "trigger": "go"}]
  })");
  CHECK(sm.transitions().size() == 1);
  CHECK(sm.is_flat());
}

TEST_CASE("parse errors") {
  CHECK_THROWS_AS(parse_state_machine(R"({
    "name": "dangling", "initial": "A",
    "states": [{"id": "A"}],
    "transitions": [{"id": "t1", "source": "A", "target": "X", "trigger": "go"}]
  })"),
                  ParseError);
  CHECK_THROWS_AS(parse_state_machine(R"({
    "name": "dup", "initial": "A",
    "states": [{"id": "A"}],
    "transitions": [
      {"id": "t1", "source": "A", "target": "A", "trigger": "go"},
      {"id": "t1", "source": "A", "target": "A", "trigger": "stop"}
    ]
  })"),
                  ParseError);
  CHECK_THROWS_AS(parse_state_machine(R"({
    "name": "no-init", "initial": "C",
    "states": [{"id": "C", "kind": "composite", "substates": [{"id": "c1"}]}],
    "transitions": []
  })"),
                  ParseError);
  CHECK_THROWS_AS(parse_state_machine(R"({
    "name": "bad-guard", "initial": "A",
    "states": [{"id": "A"}],
    "transitions": [{"id": "t1", "source": "A", "target": "A", "trigger": "go",
                     "guard": {"op": "var", "name": "undeclared"}}]
  })"),
                  ParseError);
}

TEST_CASE("flatten replicates boundary exits from every substate") {
  auto sm = StateMachine::Builder("hier")
                .state("C")
                .state("c1", "C")
                .state("c2", "C")
                .state("D")
                .initial_substate("C", "c1")
                .initial("C")
                .transition("hop", "c1", "c2", "hop")
                .transition("quit", "C", "D", "quit")
                .build();
  auto flat = flatten(sm);

  int quit_instances = 0;
  for (const auto& t : flat.transitions())
    if (t.origin == "quit") {
      ++quit_instances;
      CHECK(flat.states()[t.target].id == "D");
    }
  CHECK(quit_instances == 2);

  CHECK(check_flatten_preserves(sm, 4).empty());
}

TEST_CASE("flatten keeps an already-flat machine identical") {
  auto sm = two_state_machine();
  auto flat = flatten(sm);
  REQUIRE(flat.transitions().size() == 1);
  CHECK(flat.transitions()[0].id == "t1");
  CHECK(flat.transitions()[0].origin == "t1");
  CHECK(flat.states().size() == 2);
}

TEST_CASE("flatten preserves the fixture's 22 coverage identities") {
  auto shop = load_online_shop();
  auto flat = flatten(shop.sm150);
  CHECK(flat.is_flat());
  auto targets = flat.coverage_targets();
  CHECK(targets.size() == 22);
  CHECK(targets == shop.sm150.coverage_targets());
}

TEST_CASE("inner transitions shadow boundary transitions on the same trigger") {
  auto guarded = StateMachine::Builder("shadow")
                     .state("C")
                     .state("c1", "C")
                     .state("D")
                     .state("E")
                     .initial_substate("C", "c1")
                     .initial("C")
                     .variable("v")
                     .transition("inner", "c1", "D", "go", BoolExpr::var("v"))
                     .transition("outer", "C", "E", "go")
                     .build();
  auto flat = flatten(guarded);

  auto inner_trace = replay(flat, {"go"}, {{"v", true}});
  CHECK(inner_trace.steps[0].transition == "inner");
  auto outer_trace = replay(flat, {"go"}, {{"v", false}});
  CHECK(outer_trace.steps[0].transition == "outer");

  CHECK(check_flatten_preserves(guarded, 4).empty());

  // an unguarded inner transition suppresses the boundary instance entirely
  auto suppressed = StateMachine::Builder("suppress")
                        .state("C")
                        .state("c1", "C")
                        .state("D")
                        .initial_substate("C", "c1")
                        .initial("C")
                        .transition("inner", "c1", "c1", "go")
                        .transition("outer", "C", "D", "go")
                        .build();
  auto trace = replay(flatten(suppressed), {"go", "go"}, {});
  CHECK(trace.steps[0].transition == "inner");
  CHECK(trace.steps[1].transition == "inner");
  CHECK(check_flatten_preserves(suppressed, 4).empty());
}

TEST_CASE("replay reports a missing transition with its step") {
  auto sm = two_state_machine();
  try {
    replay(sm, {"nope"}, {});
    FAIL("expected ReplayError");
  } catch (const ReplayError& e) {
    CHECK(e.kind == ReplayError::Kind::NoEnabledTransition);
    CHECK(e.step == 0);
  }
  try {
    replay(sm, {"go", "go"}, {});
    FAIL("expected ReplayError");
  } catch (const ReplayError& e) {
    CHECK(e.step == 1);
  }
}

TEST_CASE("replay detects nondeterminism and lists candidates") {
  auto sm = StateMachine::Builder("nondet")
                .state("A")
                .state("B")
                .initial("A")
                .transition("x1", "A", "B", "go")
                .transition("x2", "A", "A", "go")
                .build();
  try {
    replay(sm, {"go"}, {});
    FAIL("expected ReplayError");
  } catch (const ReplayError& e) {
    CHECK(e.kind == ReplayError::Kind::NondeterministicChoice);
    CHECK(e.candidates == std::vector<std::string>{"x1", "x2"});
  }
}

TEST_CASE("replay requires a flat machine and chains its trace") {
  auto shop = load_online_shop();
  CHECK_THROWS_AS(replay(shop.sm150, {"OpenProductCatalog"}, {}), ValidationError);

  auto flat = flatten(shop.sm150);
  auto events = std::vector<std::string>{"OpenProductCatalog", "ProductDetailsFor",
                                         "AddProductToCart", "ReturnToCatalog"};
  auto trace = replay(flat, events, {});
  REQUIRE(trace.steps.size() == events.size());
  CHECK(trace.steps.back().state == "ProductCatalog");
  auto again = replay(flat, events, {});
  CHECK(trace == again);
}

TEST_CASE("unbound guard variable surfaces during replay") {
  auto sm = StateMachine::Builder("guarded")
                .state("A")
                .state("B")
                .initial("A")
                .variable("v")
                .transition("t1", "A", "B", "go", BoolExpr::var("v"))
                .build();
  CHECK_THROWS_AS(replay(sm, {"go"}, {}), ReplayError);
  CHECK(replay(sm, {"go"}, {{"v", true}}).steps.size() == 1);
}

TEST_CASE("random hierarchical machines flatten faithfully") {
  Rng rng(99);
  for (int round = 0; round < 60; ++round) {
    auto sm = random_hierarchical_machine(rng);
    auto mismatch = check_flatten_preserves(sm, 4);
    CHECK_MESSAGE(mismatch.empty(), mismatch);
  }
}

TEST_CASE("dot export lists one line per transition") {
  auto shop = load_online_shop();
  auto dot = to_dot(shop.sm150);
  CHECK(dot.find("digraph") != std::string::npos);
  CHECK(dot.find("\"StartPage\" -> \"Shopping\" [label=\"OpenProductCatalog\"];") !=
        std::string::npos);
  std::size_t arrows = 0;
  for (std::size_t pos = 0; (pos = dot.find(" -> ", pos)) != std::string::npos; ++pos)
    ++arrows;
  CHECK(arrows == shop.sm150.transitions().size() + 1);  // plus the initial marker
}
