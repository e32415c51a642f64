#include <catch2/catch_amalgamated.hpp>

#include "splv/circuit.hpp"
#include "splv/encoding.hpp"
#include "splv/sat.hpp"
#include "support/oracles.hpp"

using namespace splv;
using logic::Circuit;
using logic::Lit;

namespace {

std::vector<std::vector<int>> random_cnf(oracle::Rng& rng, int nvars, int nclauses, int width = 3) {
  std::vector<std::vector<int>> out;
  for (int c = 0; c < nclauses; ++c) {
    std::vector<int> cl;
    for (int k = 0; k < width; ++k) {
      int v = static_cast<int>(rng.between(1, nvars));
      cl.push_back(rng.chance(0.5) ? v : -v);
    }
    out.push_back(cl);
  }
  return out;
}

bool check_model(const sat::Solver& s, const std::vector<std::vector<int>>& cnf) {
  for (const auto& c : cnf) {
    bool any = false;
    for (int l : c) any |= s.model_value(std::abs(l)) == (l > 0);
    if (!any) return false;
  }
  return true;
}

Lit random_circuit(oracle::Rng& rng, Circuit& c, std::uint32_t inputs, int gates) {
  std::vector<Lit> pool;
  for (std::uint32_t i = 0; i < inputs; ++i) pool.push_back(c.input(i));
  for (int g = 0; g < gates; ++g) {
    std::vector<Lit> kids;
    std::size_t k = rng.between(1, 3);
    for (std::size_t j = 0; j < k; ++j) {
      Lit l = rng.pick(pool);
      kids.push_back(rng.chance(0.5) ? ~l : l);
    }
    pool.push_back(rng.chance(0.5) ? c.land(kids) : c.lor(kids));
  }
  return rng.chance(0.5) ? pool.back() : ~pool.back();
}

}  // namespace

TEST_CASE("sat basics", "[sat]") {
  sat::Solver s;
  int x = s.new_var();
  s.add_clause({x});
  REQUIRE(s.solve() == sat::Result::Sat);
  CHECK(s.model_value(x));
  CHECK(s.solve({-x}) == sat::Result::Unsat);
  CHECK(s.solve() == sat::Result::Sat);  // assumptions are temporary
  s.add_clause({-x});
  CHECK(s.solve() == sat::Result::Unsat);

  sat::Solver empty;
  empty.add_clause(std::span<const int>{});
  CHECK(empty.solve() == sat::Result::Unsat);
}

TEST_CASE("sat agrees with enumeration", "[sat][property]") {
  oracle::Rng rng(2024);
  int sat_count = 0, unsat_count = 0;
  for (int i = 0; i < 400; ++i) {
    int n = static_cast<int>(rng.between(1, 20));
    // around the 4.26 ratio so both outcomes show up
    int m = static_cast<int>(n * (3.5 + rng.below(20) / 10.0));
    auto cnf = random_cnf(rng, n, m, static_cast<int>(rng.between(1, 3)));
    sat::Solver s;
    for (const auto& c : cnf) s.add_clause(c);
    bool expected = oracle::cnf_sat_by_enumeration(n, cnf);
    bool got = s.solve() == sat::Result::Sat;
    REQUIRE(got == expected);
    if (got) CHECK(check_model(s, cnf));
    (got ? sat_count : unsat_count)++;
  }
  CHECK(sat_count > 20);
  CHECK(unsat_count > 20);
}

TEST_CASE("incremental solving under assumptions", "[sat][property]") {
  oracle::Rng rng(5);
  for (int i = 0; i < 100; ++i) {
    int n = 10;
    auto cnf = random_cnf(rng, n, 30);
    sat::Solver s;
    for (const auto& c : cnf) s.add_clause(c);
    for (int q = 0; q < 5; ++q) {
      int a = static_cast<int>(rng.between(1, n)) * (rng.chance(0.5) ? 1 : -1);
      auto with = cnf;
      with.push_back({a});
      CHECK((s.solve({a}) == sat::Result::Sat) == oracle::cnf_sat_by_enumeration(n, with));
    }
  }
}

TEST_CASE("circuit constants and hashing", "[circuit]") {
  Circuit c;
  Lit x = c.input(0), y = c.input(1);
  CHECK(c.land({x, ~x}) == Circuit::constant(false));
  CHECK(c.lor({x, ~x}) == Circuit::constant(true));
  CHECK(c.land({x, y}) == c.land({y, x}));
  CHECK(c.land({x, Circuit::constant(true)}) == x);
  CHECK(c.support(c.land({x, y})) == std::vector<std::uint32_t>{0, 1});
  Lit f = c.cofactor(c.land({x, y}), [](std::uint32_t i) -> std::optional<bool> {
    if (i == 0) return true;
    return std::nullopt;
  });
  CHECK(f == y);
}

TEST_CASE("tseitin conversion preserves satisfiability", "[circuit][property]") {
  oracle::Rng rng(17);
  for (int i = 0; i < 300; ++i) {
    Circuit c;
    std::uint32_t n = static_cast<std::uint32_t>(rng.between(1, 6));
    Lit root = random_circuit(rng, c, n, static_cast<int>(rng.between(1, 30)));
    bool truth = false;
    for (std::uint32_t m = 0; m < (1u << n) && !truth; ++m) {
      std::vector<bool> in(n);
      for (std::uint32_t b = 0; b < n; ++b) in[b] = (m >> b) & 1;
      truth = c.eval(root, in);
    }
    sat::Solver s;
    logic::TseitinEncoder enc(c, s);
    std::vector<int> vars;
    for (std::uint32_t b = 0; b < n; ++b) vars.push_back(enc.input_var(b));
    enc.assert_true(root);
    REQUIRE((s.solve() == sat::Result::Sat) == truth);
    if (truth) {
      std::vector<bool> in(n);
      for (std::uint32_t b = 0; b < n; ++b) in[b] = s.model_value(vars[b]);
      CHECK(c.eval(root, in));
    }
    sat::Cnf cnf;
    logic::TseitinEncoder enc2(c, cnf);
    enc2.assert_true(root);
    if (cnf.num_vars <= 20) CHECK(oracle::cnf_sat_by_enumeration(cnf.num_vars, cnf.clauses) == truth);
  }
}

TEST_CASE("binary domain encoding", "[encoding]") {
  CHECK(BoolEncoding::bits_for(1) == 0);
  CHECK(BoolEncoding::bits_for(2) == 1);
  CHECK(BoolEncoding::bits_for(3) == 2);
  CHECK(BoolEncoding::bits_for(5) == 3);

  auto s = Scope::make({{"a", {"x", "y"}}, {"b", {"p", "q", "r"}}, {"c", {"only"}}});
  auto enc = BoolEncoding::build(s, 4);
  CHECK(enc.width() == 3);
  CHECK(enc.block(1).first_input == 5);
  Circuit c;
  CHECK(enc.block_validity(c, 0) == Circuit::constant(true));
  Lit valid = enc.validity(c);
  std::size_t ok = 0;
  for (std::uint32_t m = 0; m < 8; ++m) {
    std::vector<bool> in(7, false);
    in[4] = m & 4;
    in[5] = m & 2;
    in[6] = m & 1;
    ok += c.eval(valid, in);
  }
  CHECK(ok == 6);  // the pattern 11 of b is excluded
  for (const auto& pi : satisfying_assignments(Predicate::truth(), s)) {
    auto bits = enc.encode(pi);
    CHECK(enc.decode(bits) == pi);
    CHECK(c.eval(valid, bits));
    CHECK(c.eval(enc.equals_config(c, pi), bits));
  }
  std::vector<bool> bad(7, false);
  bad[5] = bad[6] = true;
  CHECK_THROWS_AS(enc.decode(bad), ModelError);
  // b's value index 2 is "r" = binary 10, most significant bit first
  auto r = Configuration::from_names(s, {{"a", "x"}, {"b", "r"}, {"c", "only"}});
  auto bits = enc.encode(r);
  CHECK(bits[5]);
  CHECK_FALSE(bits[6]);
}

TEST_CASE("predicate circuits match evaluation", "[encoding][property]") {
  oracle::Rng rng(19);
  for (int i = 0; i < 300; ++i) {
    bool shared = rng.chance(0.4);
    auto s = shared ? Scope::make({{"x", {"a", "b", "c"}}, {"y", {"a", "b", "c"}}, {"z", {"a", "b"}}})
                    : oracle::random_scope(rng, "v", 3, 4, 1);
    Predicate p = oracle::random_guard(rng, s, 0.1);
    if (rng.chance(0.3)) p = Predicate::negate(p);
    if (rng.chance(0.3)) p = Predicate::implies(p, oracle::random_guard(rng, s, 0));
    // variable equality between same-domain variables
    if (shared) {
      Predicate e = resolve(rng.chance(0.5) ? Predicate::eq_var("x", "y") : parse_predicate("x != y"), *s);
      p = rng.chance(0.5) ? Predicate::disj({p, e}) : Predicate::conj({p, e});
    }
    auto enc = BoolEncoding::build(s, 0);
    Circuit c;
    Lit l = encode_predicate(p, enc, c);
    for (const auto& pi : satisfying_assignments(Predicate::truth(), s)) CHECK(c.eval(l, enc.encode(pi)) == eval(p, pi));
  }
  auto two = Scope::make({{"x", {"a", "b"}}});
  auto enc = BoolEncoding::build(two, 0);
  Circuit c;
  CHECK(encode_predicate(Predicate::truth(), enc, c) == Circuit::constant(true));
  Lit xa = encode_predicate(resolve(parse_predicate("x = a"), *two), enc, c);
  CHECK((xa == c.input(0) || xa == ~c.input(0)));
}
