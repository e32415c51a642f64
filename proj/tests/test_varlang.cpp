#include <catch2/catch_amalgamated.hpp>

#include "splv/varlang.hpp"
#include "support/oracles.hpp"

using namespace splv;

namespace {

ScopePtr door_lock_scope() {
  return Scope::make({{"Enable", {"Enable", "Disable"}},
                      {"Transmission", {"Auto", "Manual"}},
                      {"Pref", {"Speed", "Park"}}});
}

Configuration cfg(const ScopePtr& s, std::vector<std::pair<std::string, std::string>> kv) {
  return Configuration::from_names(s, kv);
}

// truth table by hand, independent of satisfying_assignments
std::vector<Configuration> all_assignments(const ScopePtr& s) {
  std::vector<Configuration> out;
  std::vector<std::uint32_t> v(s->size(), 0);
  for (;;) {
    out.emplace_back(s, v);
    std::size_t i = s->size();
    while (i > 0) {
      --i;
      if (++v[i] < s->at(i).domain.size()) break;
      v[i] = 0;
      if (i == 0) return out;
    }
    if (s->size() == 0) return out;
  }
}

}  // namespace

TEST_CASE("implication evaluates like its disjunctive form", "[varlang]") {
  auto s = Scope::make({{"Transmission", {"Auto", "Manual"}}, {"Pref", {"Speed", "Park"}}});
  Predicate p = resolve(parse_predicate("Transmission = Manual => Pref = Speed"), *s);
  CHECK(eval(p, cfg(s, {{"Transmission", "Auto"}, {"Pref", "Park"}})));
  CHECK_FALSE(eval(p, cfg(s, {{"Transmission", "Manual"}, {"Pref", "Park"}})));
}

TEST_CASE("door lock global predicate has six models", "[varlang]") {
  auto s = door_lock_scope();
  Predicate rho = resolve(parse_predicate("Transmission = Manual => Pref = Speed"), *s);
  CHECK(eval(rho, cfg(s, {{"Enable", "Enable"}, {"Transmission", "Manual"}, {"Pref", "Speed"}})));
  std::size_t brute = 0;
  for (const auto& pi : all_assignments(s)) brute += eval(rho, pi);
  CHECK(brute == 6);
  CHECK(satisfying_assignments(rho, s).size() == 6);
  CHECK(is_consistent(rho, s));
}

TEST_CASE("consistency of trivial predicates", "[varlang]") {
  auto s = Scope::make({{"x", {"a", "b"}}});
  CHECK_FALSE(is_consistent(resolve(parse_predicate("x = a && x != a"), *s), s));
  CHECK(is_consistent(Predicate::truth(), s));
  CHECK_FALSE(is_consistent_by_sat(resolve(parse_predicate("x = a && x != a"), *s), s));
}

TEST_CASE("satisfying assignments in declaration order", "[varlang]") {
  auto s = Scope::make({{"x", {"a", "b"}}});
  auto sat = satisfying_assignments(resolve(parse_predicate("x = a"), *s), s);
  REQUIRE(sat.size() == 1);
  CHECK(sat[0].to_string() == "<a>");

  auto none = satisfying_assignments(Predicate::truth(), Scope::empty());
  REQUIRE(none.size() == 1);
  CHECK(none[0].to_string() == "<>");

  auto des = Scope::make({{"Cp1", {"Auto", "Moff"}}, {"Cp2", {"Speed", "Poff"}}});
  auto four = satisfying_assignments(Predicate::truth(), des);
  REQUIRE(four.size() == 4);
  CHECK(four[0].to_string() == "<Auto,Speed>");
  CHECK(four[1].to_string() == "<Auto,Poff>");
  CHECK(four[3].to_string() == "<Moff,Poff>");
}

TEST_CASE("unbound variables and bad values are scope errors", "[varlang]") {
  auto s = Scope::make({{"x", {"a", "b"}}, {"y", {"c"}}});
  CHECK_THROWS_AS(resolve(parse_predicate("z = a"), *s), ScopeError);
  CHECK_THROWS_AS(resolve(parse_predicate("x = q"), *s), ScopeError);
  // different domains cannot be compared
  CHECK_THROWS_AS(resolve(parse_predicate("x = y"), *s), ScopeError);
  CHECK_THROWS_AS(eval(parse_predicate("z = a"), Configuration(s, {0, 0})), ScopeError);
}

TEST_CASE("predicate syntax", "[varlang]") {
  CHECK_THROWS_AS(parse_predicate("x = y - 1"), ParseError);
  CHECK_THROWS_AS(parse_predicate("x = "), ParseError);
  CHECK_THROWS_AS(parse_predicate("(x = a"), ParseError);
  auto s = Scope::make({{"x", {"a", "b"}}, {"y", {"a", "b"}}, {"z", {"a", "b"}}});
  // => is right-associative and binds weakest
  Predicate p = resolve(parse_predicate("x = a => y = a => z = a"), *s);
  Predicate q = resolve(parse_predicate("x = a => (y = a => z = a)"), *s);
  Predicate r = resolve(parse_predicate("(x = a => y = a) => z = a"), *s);
  // ! > && > ||
  Predicate u = resolve(parse_predicate("!x = a && y = a || z = a"), *s);
  Predicate v = resolve(parse_predicate("((!(x = a)) && y = a) || z = a"), *s);
  bool differs = false;
  for (const auto& pi : all_assignments(s)) {
    CHECK(eval(p, pi) == eval(q, pi));
    differs |= eval(p, pi) != eval(r, pi);
    CHECK(eval(u, pi) == eval(v, pi));
  }
  CHECK(differs);
}

TEST_CASE("printing parses back to an equal predicate", "[varlang][property]") {
  oracle::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    auto s = oracle::random_scope(rng, "v", 3, 3, 1);
    Predicate p = oracle::random_guard(rng, s, 0.1);
    if (rng.chance(0.3)) p = Predicate::negate(p);
    if (rng.chance(0.3)) p = Predicate::implies(p, oracle::random_guard(rng, s));
    Predicate back = resolve(parse_predicate(to_string(p)), *s);
    CHECK(back == p);
  }
}

TEST_CASE("algebraic properties over random predicates", "[varlang][property]") {
  oracle::Rng rng(7);
  for (int round = 0; round < 300; ++round) {
    auto s = oracle::random_scope(rng, "v", 4, 4, 1);
    Predicate a = oracle::random_guard(rng, s, 0.1);
    Predicate b = oracle::random_guard(rng, s, 0.1);
    if (rng.chance(0.3)) b = resolve(Predicate::negate(a), *s);  // unsatisfiable conjunction
    Predicate imp = Predicate::implies(a, b);
    Predicate alt = Predicate::disj({Predicate::negate(a), b});
    auto all = all_assignments(s);
    for (const auto& pi : all) CHECK(eval(imp, pi) == eval(alt, pi));

    Predicate both = Predicate::conj({a, b});
    auto sa = satisfying_assignments(a, s), sb = satisfying_assignments(b, s), sab = satisfying_assignments(both, s);
    std::vector<Configuration> inter;
    for (const auto& x : sa)
      if (std::find(sb.begin(), sb.end(), x) != sb.end()) inter.push_back(x);
    CHECK(sab == inter);

    CHECK(is_consistent(both, s) == !sab.empty());
    CHECK(is_consistent_by_sat(both, s) == is_consistent_by_enumeration(both, s));
    CHECK(is_consistent_by_sat(a, s) == !sa.empty());
  }
}

TEST_CASE("enumeration budget", "[varlang]") {
  std::vector<VarDecl> vars;
  for (int i = 0; i < 12; ++i) vars.push_back({"x" + std::to_string(i), {"a", "b"}});
  auto s = Scope::make(vars);
  CHECK_THROWS_AS(satisfying_assignments(Predicate::truth(), s, 1000), CapacityError);
  CHECK(satisfying_assignments(Predicate::truth(), s, 4096).size() == 4096);
  // the symbolic path has no budget
  CHECK(is_consistent_by_sat(resolve(parse_predicate("x0 = a && x11 = b"), *s), s));
}

TEST_CASE("configurations", "[varlang]") {
  auto s = door_lock_scope();
  auto pi = cfg(s, {{"Enable", "Enable"}, {"Transmission", "Auto"}, {"Pref", "Park"}});
  CHECK(pi.to_string() == "<Enable,Auto,Park>");
  CHECK(pi.value("Pref") == "Park");
  auto sub = Scope::make({{"Pref", {"Speed", "Park"}}});
  CHECK(pi.restrict_to(sub).to_string() == "<Park>");
  auto lo = cfg(s, {{"Enable", "Enable"}, {"Transmission", "Auto"}, {"Pref", "Speed"}});
  CHECK(lo < pi);
  CHECK_THROWS(Configuration::from_names(s, {{"Enable", "Enable"}}));
  CHECK_THROWS(Scope::make({{"x", {"a"}}, {"x", {"b"}}}));
  CHECK_THROWS(Scope::make({{"x", {}}}));
}
