// Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any fails.
// Thresholds are fixed below; seeds are fixed so every run checks the same cases.

#include <chrono>
#include <cstdio>
#include <functional>
#include <string>

#include "splv/composition.hpp"
#include "splv/generator.hpp"
#include "splv/model_io.hpp"
#include "splv/qbf_io.hpp"
#include "splv/sat.hpp"
#include "splv/spl.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace splv;

namespace {

constexpr int kRandomSpls = 200;
constexpr double kRandomSplSeconds = 300;
constexpr int kContainmentPairs = 500;
constexpr int kDecompositionPairs = 200;
constexpr int kSyncPairs = 120;
constexpr std::size_t kSyncBound = 6;
constexpr std::size_t kScaleFeatures = 1000;
constexpr std::size_t kScaleMinVariables = 2000;
constexpr double kScaleCheckSeconds = 60;
constexpr double kScaleExportSeconds = 10;
constexpr int kRoundTrips = 50;
constexpr int kSatInstances = 300;
constexpr int kSatMaxVars = 20;

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

struct Outcome {
  bool ok;
  std::string detail;
};

int failures = 0;

void report(int id, const std::string& what, const std::function<Outcome()>& body) {
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  if (!o.ok) ++failures;
  std::printf("%s criterion %d: %s (%s)\n", o.ok ? "PASS" : "FAIL", id, what.c_str(), o.detail.c_str());
  std::fflush(stdout);
}

Word w(const std::string& s) {
  Word out;
  for (char c : s) out.push_back(std::string(1, c));
  return out;
}

std::set<std::string> sig(const std::string& s) {
  std::set<std::string> out;
  for (char c : s) out.insert(std::string(1, c));
  return out;
}

struct Pair {
  FsmvMachine a1, a2;
  Predicate rho;
};

Pair random_pair(oracle::Rng& rng, std::size_t max_vars) {
  std::vector<std::string> e1{"s", "a0", "a1"}, e2{"s", "b0"};
  if (rng.chance(0.3)) e2.push_back("a0");
  auto m1 = oracle::random_machine(rng, "A", oracle::random_scope(rng, "x", max_vars, 3), e1, 4).qualify("A");
  auto m2 = oracle::random_machine(rng, "B", oracle::random_scope(rng, "y", max_vars, 3), e2, 4).qualify("B");
  Predicate rho = Predicate::truth();
  if (!m1.scope()->empty_scope() && !m2.scope()->empty_scope() && rng.chance(0.6))
    rho = Predicate::implies(oracle::random_atom(rng, *m1.scope()), oracle::random_atom(rng, *m2.scope()));
  try {
    compose(m1, m2, rho);
  } catch (const ModelError&) {
    return random_pair(rng, max_vars);  // rho ruled out every configuration pair, draw again
  }
  return {std::move(m1), std::move(m2), rho};
}

// forall x exists y over at most 12 bits, for the file round trips
QbfFormula random_formula(oracle::Rng& rng) {
  QbfFormula f;
  std::size_t nx = rng.between(1, 6), ny = rng.between(1, 6);
  for (std::uint32_t i = 0; i < nx + ny; ++i) {
    (i < nx ? f.universal : f.existential).push_back(i);
    f.circuit.input(i);
  }
  std::vector<logic::Lit> pool;
  for (std::uint32_t i = 0; i < nx + ny; ++i) pool.push_back(f.circuit.input(i));
  for (int g = 0; g < 12; ++g) {
    std::vector<logic::Lit> kids;
    for (std::size_t k = 0; k < 2 + rng.below(2); ++k) {
      auto l = rng.pick(pool);
      kids.push_back(rng.chance(0.5) ? ~l : l);
    }
    pool.push_back(rng.chance(0.5) ? f.circuit.land(kids) : f.circuit.lor(kids));
  }
  f.consequent = {pool.back(), pool[pool.size() - 2]};
  if (rng.chance(0.5)) f.antecedent = {f.circuit.lor({pool[0], pool[nx - 1]})};
  f.seal();
  return f;
}

}  // namespace

int main() {
  report(1, "random SPLs, qbf = monolithic = enumerate", [] {
    auto t0 = std::chrono::steady_clock::now();
    oracle::Rng rng(20240601);
    int agree = 0, conforming = 0;
    for (int i = 0; i < kRandomSpls; ++i) {
      Spl spl = oracle::random_spl(rng, "R" + std::to_string(i));
      SplOptions o;
      o.mode = SplMode::All;
      o.keep_going = true;
      o.cluster = false;  // one composite of every feature for the monolithic oracle
      SplResult r = check_spl(spl, o);
      bool same = r.modes.size() == 3 && r.modes[0].conforms == r.modes[1].conforms &&
                  r.modes[1].conforms == r.modes[2].conforms && !r.disagreement;
      agree += same;
      conforming += r.conforms;
    }
    double s = seconds_since(t0);
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d/%d agree, %d conforming, %.1f s, limit %.0f s", agree, kRandomSpls, conforming,
                  s, kRandomSplSeconds);
    return Outcome{agree == kRandomSpls && s < kRandomSplSeconds, buf};
  });

  report(2, "containment vs bounded inclusion at the exact bound", [] {
    oracle::Rng rng(777);
    auto events = oracle::event_names("e", 2);
    int bad = 0, failing = 0;
    for (int i = 0; i < kContainmentPairs; ++i) {
      Fsm d = oracle::random_fsm(rng, events, 5);
      Fsm r = oracle::random_fsm(rng, events, 5, 0.4);
      std::size_t k = d.size() * ((std::size_t{1} << r.size()) + 1);
      auto v = contains(d, r);
      auto o = oracle::bounded_inclusion(d, r, k);
      bad += v.holds != o.included;
      if (!v.holds) {
        ++failing;
        bad += v.counterexample->size() != o.first_bad_length;
      }
    }
    return Outcome{bad == 0, std::to_string(kContainmentPairs) + " pairs, " + std::to_string(failing) +
                                 " non-inclusions, " + std::to_string(bad) + " disagreements"};
  });

  report(3, "composite configurations decompose and round trip", [] {
    oracle::Rng rng(31337);
    std::size_t configs = 0, bad = 0;
    for (int i = 0; i < kDecompositionPairs; ++i) {
      Pair p = random_pair(rng, 3);
      FsmvMachine c = compose(p.a1, p.a2, p.rho);
      for (const auto& pi : valid_configs(c)) {
        ++configs;
        auto [x, y] = decompose_config(pi, p.a1.scope(), p.a2.scope());
        auto back = compose_configs(x, y, p.rho);
        if (!p.a1.valid(x) || !p.a2.valid(y) || !back || !(*back == pi)) ++bad;
      }
    }
    return Outcome{bad == 0 && configs > 0, std::to_string(kDecompositionPairs) + " pairs, " +
                                                std::to_string(configs) + " configurations, " + std::to_string(bad) +
                                                " failures"};
  });

  report(4, "projected composite = synchronised product of projections, k <= 6", [] {
    oracle::Rng rng(4711);
    std::size_t configs = 0, bad = 0;
    for (int i = 0; i < kSyncPairs; ++i) {
      Pair p = random_pair(rng, 2);
      FsmvMachine c = compose(p.a1, p.a2, p.rho);
      for (const auto& pi : valid_configs(c)) {
        ++configs;
        auto [x, y] = decompose_config(pi, p.a1.scope(), p.a2.scope());
        Fsm f1 = project(p.a1, x), f2 = project(p.a2, y);
        auto lc = bounded_language(project(c, pi), kSyncBound);
        if (lc != oracle::sync_words(f1, f2, kSyncBound)) ++bad;
        if (lc != bounded_language(handshake_product(f1, f2), kSyncBound)) ++bad;
      }
    }
    return Outcome{bad == 0, std::to_string(kSyncPairs) + " pairs, " + std::to_string(configs) + " configurations, " +
                                 std::to_string(bad) + " failures"};
  });

  report(5, "door lock/unlock: non-conforming without the design pairing, conforming with it", [] {
    SplOptions o;
    o.mode = SplMode::All;
    Spl plain = load_spl(load_manifest(corpus("ecpl/dl_du.splv")));
    SplResult a = check_spl(plain, o);
    std::string wit = a.witness ? format_witness(*a.witness, plain) : "-";
    SplResult b = check_spl(load_spl(load_manifest(corpus("ecpl/dl_du_fixed.splv"))), o);
    int cli_a = run_cli("check-spl '" + corpus("ecpl/dl_du.splv").string() + "'");
    int cli_b = run_cli("check-spl '" + corpus("ecpl/dl_du_fixed.splv").string() + "'");
    bool ok = !a.conforms && !a.disagreement && wit == "<Auto,Speed>+<Moff,Poff>" && b.conforms && !b.disagreement &&
              cli_a == 1 && cli_b == 0;
    return Outcome{ok, "witness " + wit + ", exits " + std::to_string(cli_a) + "/" + std::to_string(cli_b)};
  });

  report(6, "door lock bug: <Auto,Poff> unmapped and exit 1; fixed design exit 0", [] {
    FsmvMachine req = load_model(corpus("ecpl/dl_req.fsmv"));
    auto phi = compute_conformance(load_model(corpus("ecpl/dl_des_bug.fsmv")), req);
    std::string failing;
    for (const auto& f : phi.failing) failing += f.to_string();
    std::string dir = corpus("ecpl").string();
    int bug = run_cli("check-feature '" + dir + "/dl_req.fsmv' '" + dir + "/dl_des_bug.fsmv'");
    int fixed = run_cli("check-feature '" + dir + "/dl_req.fsmv' '" + dir + "/dl_des.fsmv'");
    return Outcome{failing == "<Auto,Poff>" && bug == 1 && fixed == 0,
                   "failing " + failing + ", exits " + std::to_string(bug) + "/" + std::to_string(fixed)};
  });

  report(7, "shuffle examples", [] {
    std::vector<Word> us{w("abcf"), w("adfe"), w("dcf")};
    std::vector<std::set<std::string>> ss{sig("abcf"), sig("adfe"), sig("dcf")};
    bool member = in_shuffle(w("abdcfe"), us, ss);
    bool non_member = !in_shuffle(w("aebcfd"), us, ss);
    std::set<Word> expected{w("abcdfe"), w("adbcfe"), w("abdcfe"), w("abbdfe"), w("abdbfe"), w("adbbfe")};
    auto got = shuffle_languages({{w("abcf"), w("abbf")}, {w("adfe")}}, {sig("abcf"), sig("adfe")});
    return Outcome{member && non_member && got == expected,
                   std::string("abdcfe ") + (member ? "in" : "out") + ", aebcfd " + (non_member ? "out" : "in") +
                       ", language of " + std::to_string(got.size()) + " words"};
  });

  report(8, "1000 generated features: qbf conforms < 60 s, QDIMACS export < 10 s", [] {
    GenOptions g;
    g.count = kScaleFeatures;
    g.seed = 1000;
    Spl spl = generated_to_spl(generate_spl(g));
    auto t0 = std::chrono::steady_clock::now();
    SplResult r = check_spl(spl);
    double check = seconds_since(t0);
    t0 = std::chrono::steady_clock::now();
    QbfFormula psi = build_spl_psi(spl, r.features);
    std::string text = export_qdimacs(psi);
    double exp = seconds_since(t0);
    std::size_t vars = psi.universal.size() + psi.existential.size();
    char buf[200];
    std::snprintf(buf, sizeof buf, "%zu quantified variables, check %.2f s, export %.2f s (%zu bytes)", vars, check,
                  exp, text.size());
    bool ok = r.conforms && r.spl_checked && vars >= kScaleMinVariables && check < kScaleCheckSeconds &&
              exp < kScaleExportSeconds;
    return Outcome{ok, buf};
  });

  report(9, "QDIMACS round trips and SAT vs enumeration", [] {
    oracle::Rng rng(99991);
    int trips = 0, sat_ok = 0;
    for (int i = 0; i < kRoundTrips; ++i) {
      QbfFormula f = random_formula(rng);
      QbfFormula back = to_formula(parse_qdimacs(export_qdimacs(f)));
      trips += solve_forall_exists(back).conforms == solve_forall_exists(f).conforms;
    }
    for (int i = 0; i < kSatInstances; ++i) {
      int n = static_cast<int>(rng.between(1, kSatMaxVars));
      int m = static_cast<int>(n * (3.5 + rng.below(20) / 10.0));
      std::vector<std::vector<int>> cnf;
      for (int c = 0; c < m; ++c) {
        std::vector<int> cl;
        for (int k = 0; k < 3; ++k) {
          int v = static_cast<int>(rng.between(1, n));
          cl.push_back(rng.chance(0.5) ? v : -v);
        }
        cnf.push_back(cl);
      }
      sat::Solver s;
      for (const auto& c : cnf) s.add_clause(c);
      sat_ok += (s.solve() == sat::Result::Sat) == oracle::cnf_sat_by_enumeration(n, cnf);
    }
    return Outcome{trips == kRoundTrips && sat_ok == kSatInstances,
                   std::to_string(trips) + "/" + std::to_string(kRoundTrips) + " round trips, " +
                       std::to_string(sat_ok) + "/" + std::to_string(kSatInstances) + " SAT instances"};
  });

  return failures == 0 ? 0 : 1;
}
