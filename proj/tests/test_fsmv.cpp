#include <catch2/catch_amalgamated.hpp>

#include "splv/model_io.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace splv;

namespace {

// reference projection without pruning, built straight from the transition list
Fsm unpruned(const FsmvMachine& m, const Configuration& pi) {
  std::vector<Fsm::Edge> edges;
  for (std::size_t i = 0; i < m.transitions().size(); ++i)
    if (eval(m.transitions()[i].guard, pi))
      edges.push_back({m.src_indices()[i], m.event_indices()[i], m.dst_indices()[i]});
  return Fsm(m.states(), m.initial_index(), m.events(), edges);
}

}  // namespace

TEST_CASE("machine without variables has one configuration", "[fsmv]") {
  FsmvMachine m("M", {"s0"}, "s0", {"a"}, Scope::empty(), {{"s0", Predicate::truth(), "a", "s0"}}, Predicate::truth());
  auto v = valid_configs(m);
  REQUIRE(v.size() == 1);
  CHECK(oracle::words_upto(project(m, v[0]), 3).size() == 4);
}

TEST_CASE("door lock design variants", "[fsmv][corpus]") {
  CHECK(valid_configs(load_model(corpus("ecpl/dl_des.fsmv"))).size() == 4);
  CHECK(valid_configs(load_model(corpus("ecpl/du_des.fsmv"))).size() == 7);
  CHECK(valid_configs(load_model(corpus("ecpl/dl_req.fsmv"))).size() == 6);
}

TEST_CASE("auto/park requirement variant drops speed and disable transitions", "[fsmv][corpus]") {
  FsmvMachine req = load_model(corpus("ecpl/dl_req.fsmv"));
  auto pi = Configuration::from_names(req.scope(), {{"DL_Enable", "Enable"}, {"Transmission", "Auto"}, {"UserPref", "Park"}});
  Fsm v = project(req, pi);
  for (const auto& e : v.edges()) {
    CHECK(v.events()[e.event] != "SpeedAbove");
    CHECK(v.states()[e.dst] != "Stall");
  }
  CHECK(oracle::words_upto(v, 4).count({"DoorsClosed", "ShiftOutOfPark", "Lock", "Unlock"}));
  // full alphabet kept
  CHECK(v.events() == req.events());
}

TEST_CASE("all guards false leaves only the initial state", "[fsmv]") {
  auto s = Scope::make({{"x", {"a", "b"}}});
  FsmvMachine m("M", {"s0", "s1"}, "s0", {"e"}, s, {{"s0", resolve(parse_predicate("x = a"), *s), "e", "s1"}},
                Predicate::truth());
  Fsm v = project(m, Configuration(s, {1}));
  CHECK(v.size() == 1);
  CHECK(oracle::words_upto(v, 5) == std::set<Word>{{}});
}

TEST_CASE("bounded language basics", "[fsmv]") {
  Fsm one({"s0", "s1"}, 0, {"a"}, {{0, 0, 1}});
  CHECK(bounded_language(one, 0) == std::set<Word>{{}});
  CHECK(bounded_language(one, 2) == std::set<Word>{{}, {"a"}});
  Fsm loop({"s0"}, 0, {"a"}, {{0, 0, 0}});
  CHECK(bounded_language(loop, 3) == std::set<Word>{{}, {"a"}, {"a", "a"}, {"a", "a", "a"}});
}

TEST_CASE("loading rejects malformed machines", "[fsmv]") {
  auto s = Scope::make({{"x", {"a", "b"}}});
  Predicate bad = resolve(parse_predicate("x = a && x = b"), *s);
  CHECK_THROWS_AS(FsmvMachine("M", {"s0"}, "s0", {"e"}, s, {{"s0", bad, "e", "s0"}}, Predicate::truth()), ModelError);
  CHECK_THROWS_AS(FsmvMachine("M", {"s0"}, "s0", {"e"}, s, {}, bad), ModelError);
  CHECK_THROWS_AS(FsmvMachine("M", {"s0"}, "s9", {"e"}, s, {}, Predicate::truth()), ModelError);
  CHECK_THROWS_AS(FsmvMachine("M", {"s0"}, "s0", {"e"}, s, {{"s0", Predicate::truth(), "f", "s0"}}, Predicate::truth()),
                  ModelError);
  CHECK_THROWS(parse_model("fsmv M { var x in {a,b}; events {e}; states {s}; initial s;\n"
                           "trans s -> s on e when x = a && x = b; }"));
}

TEST_CASE("projection properties on random machines", "[fsmv][property]") {
  oracle::Rng rng(3);
  for (int round = 0; round < 200; ++round) {
    auto s = oracle::random_scope(rng, "x", 2, 3);
    FsmvMachine m = oracle::random_machine(rng, "M", s, oracle::event_names("e", 2), 5);
    for (const auto& pi : valid_configs(m)) {
      Fsm v = project(m, pi);
      // every kept edge comes from a transition enabled under pi
      for (const auto& e : v.edges()) {
        bool found = false;
        for (std::size_t i = 0; i < m.transitions().size() && !found; ++i)
          found = m.enabled(i, pi) && m.transitions()[i].src == v.states()[e.src] &&
                  m.transitions()[i].dst == v.states()[e.dst] && m.transitions()[i].event == v.events()[e.event];
        CHECK(found);
      }
      CHECK(oracle::words_upto(v, 5) == oracle::words_upto(unpruned(m, pi), 5));
      CHECK(bounded_language(v, 5) == oracle::words_upto(v, 5));
    }
  }
}

TEST_CASE("guard-free machines have one language", "[fsmv][property]") {
  oracle::Rng rng(5);
  for (int round = 0; round < 50; ++round) {
    auto s = oracle::random_scope(rng, "x", 2, 3, 1);
    auto events = oracle::event_names("e", 2);
    FsmvMachine m = oracle::random_machine(rng, "M", s, events, 4);
    std::vector<Transition> ts = m.transitions();
    for (auto& t : ts) t.guard = Predicate::truth();
    FsmvMachine free("F", m.states(), m.initial(), events, s, ts, m.global());
    auto configs = valid_configs(free);
    auto first = oracle::words_upto(project(free, configs[0]), 4);
    for (const auto& pi : configs) CHECK(oracle::words_upto(project(free, pi), 4) == first);
  }
}
