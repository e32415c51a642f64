#pragma once

// Test-only reference implementations. Everything here is deliberately naive
// (explicit word sets, truth tables, double enumeration) so it can be trusted
// as an oracle for the real engines.

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "splv/fsmv.hpp"
#include "splv/qbf.hpp"
#include "splv/spl.hpp"

namespace splv::oracle {

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::size_t below(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_); }
  std::size_t between(std::size_t lo, std::size_t hi) { return lo + below(hi - lo + 1); }
  bool chance(double p) { return std::uniform_real_distribution<double>(0, 1)(engine_) < p; }
  template <class T>
  const T& pick(const std::vector<T>& v) { return v[below(v.size())]; }

 private:
  std::mt19937_64 engine_;
};

// ---- languages ------------------------------------------------------------

/// Words of length <= k, by depth-first expansion of paths.
inline std::set<Word> words_upto(const Fsm& a, std::size_t k) {
  std::set<Word> out;
  Word w;
  auto rec = [&](auto&& self, std::uint32_t s) -> void {
    out.insert(w);
    if (w.size() == k) return;
    for (const auto& e : a.edges()) {
      if (e.src != s) continue;
      w.push_back(a.events()[e.event]);
      self(self, e.dst);
      w.pop_back();
    }
  };
  rec(rec, a.initial());
  return out;
}

struct BoundedInclusion {
  bool included = true;
  std::size_t first_bad_length = 0;  // length of the shortest word of L(d) outside L(r)
};

/// L(d) restricted to length <= k is a subset of L(r). The word sets are kept
/// implicitly as, per length, the set of (d state, set of r states) pairs that
/// some word of that length reaches; no determinisation and no sink.
inline BoundedInclusion bounded_inclusion(const Fsm& d, const Fsm& r, std::size_t k) {
  using Node = std::pair<std::uint32_t, std::set<std::uint32_t>>;
  std::set<Node> level{{d.initial(), {r.initial()}}};
  for (std::size_t len = 1; len <= k && !level.empty(); ++len) {
    std::set<Node> next;
    for (const auto& [ds, rs] : level) {
      for (const auto& e : d.edges()) {
        if (e.src != ds) continue;
        const std::string& ev = d.events()[e.event];
        std::set<std::uint32_t> rn;
        for (const auto& f : r.edges())
          if (rs.count(f.src) && r.events()[f.event] == ev) rn.insert(f.dst);
        if (rn.empty()) return {false, len};
        next.insert({e.dst, std::move(rn)});
      }
    }
    level = std::move(next);
  }
  return {};
}

/// Synchronised product words: common events move both machines, others one.
inline std::set<Word> sync_words(const Fsm& a, const Fsm& b, std::size_t k) {
  std::set<std::string> ea(a.events().begin(), a.events().end());
  std::set<std::string> eb(b.events().begin(), b.events().end());
  std::set<Word> out;
  Word w;
  auto rec = [&](auto&& self, std::uint32_t sa, std::uint32_t sb) -> void {
    out.insert(w);
    if (w.size() == k) return;
    std::set<std::string> evs;
    for (const auto& e : a.edges())
      if (e.src == sa) evs.insert(a.events()[e.event]);
    for (const auto& e : b.edges())
      if (e.src == sb) evs.insert(b.events()[e.event]);
    for (const auto& ev : evs) {
      std::vector<std::uint32_t> na, nb;
      if (ea.count(ev)) {
        for (const auto& e : a.edges())
          if (e.src == sa && a.events()[e.event] == ev) na.push_back(e.dst);
      } else {
        na.push_back(sa);
      }
      if (eb.count(ev)) {
        for (const auto& e : b.edges())
          if (e.src == sb && b.events()[e.event] == ev) nb.push_back(e.dst);
      } else {
        nb.push_back(sb);
      }
      w.push_back(ev);
      for (auto x : na)
        for (auto y : nb) self(self, x, y);
      w.pop_back();
    }
  };
  rec(rec, a.initial(), b.initial());
  return out;
}

// ---- propositional --------------------------------------------------------

inline bool cnf_sat_by_enumeration(int nvars, const std::vector<std::vector<int>>& clauses) {
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << nvars); ++m) {
    bool all = true;
    for (const auto& c : clauses) {
      bool any = false;
      for (int l : c) {
        bool v = (m >> (std::abs(l) - 1)) & 1;
        if ((l > 0) == v) {
          any = true;
          break;
        }
      }
      if (!any) {
        all = false;
        break;
      }
    }
    if (all) return true;
  }
  return false;
}

struct BruteQbf {
  bool valid = true;
  std::vector<bool> least_failing;  // universal bits of the lexicographically least failing x
};

/// Evaluates forall x exists y matrix by enumerating both blocks. Bits are
/// ordered most significant first in the order of f.universal.
inline BruteQbf brute_force_forall_exists(const QbfFormula& f) {
  std::uint32_t n = f.circuit.input_count();
  for (auto i : f.universal) n = std::max(n, i + 1);
  for (auto i : f.existential) n = std::max(n, i + 1);
  std::vector<bool> in(n, false);
  std::size_t nx = f.universal.size(), ny = f.existential.size();
  for (std::uint64_t x = 0; x < (std::uint64_t{1} << nx); ++x) {
    for (std::size_t i = 0; i < nx; ++i) in[f.universal[i]] = (x >> (nx - 1 - i)) & 1;
    bool ok = false;
    for (std::uint64_t y = 0; y < (std::uint64_t{1} << ny) && !ok; ++y) {
      for (std::size_t j = 0; j < ny; ++j) in[f.existential[j]] = (y >> j) & 1;
      ok = f.circuit.eval(f.matrix, in);
    }
    if (!ok) {
      BruteQbf r{false, {}};
      for (auto i : f.universal) r.least_failing.push_back(in[i]);
      return r;
    }
  }
  return {};
}

// ---- random models --------------------------------------------------------

inline ScopePtr random_scope(Rng& rng, const std::string& prefix, std::size_t max_vars, std::size_t max_vals,
                             std::size_t min_vars = 0) {
  std::vector<VarDecl> vars;
  std::size_t n = rng.between(min_vars, max_vars);
  for (std::size_t i = 0; i < n; ++i) {
    VarDecl v{prefix + std::to_string(i), {}};
    std::size_t k = rng.between(2, std::max<std::size_t>(2, max_vals));
    for (std::size_t j = 0; j < k; ++j) v.domain.push_back(prefix + std::to_string(i) + "v" + std::to_string(j));
    vars.push_back(std::move(v));
  }
  return Scope::make(std::move(vars));
}

inline Predicate random_atom(Rng& rng, const Scope& s) {
  const VarDecl& v = s.at(rng.below(s.size()));
  const std::string& val = rng.pick(v.domain);
  return rng.chance(0.3) ? Predicate::neq_const(v.name, val) : Predicate::eq_const(v.name, val);
}

/// true, an atom, or a small and/or of atoms; redrawn until consistent.
inline Predicate random_guard(Rng& rng, const ScopePtr& s, double p_true = 0.3) {
  if (s->empty_scope() || rng.chance(p_true)) return Predicate::truth();
  for (;;) {
    Predicate p;
    switch (rng.below(3)) {
      case 0: p = random_atom(rng, *s); break;
      case 1: p = Predicate::conj({random_atom(rng, *s), random_atom(rng, *s)}); break;
      default: p = Predicate::disj({random_atom(rng, *s), random_atom(rng, *s)}); break;
    }
    p = resolve(p, *s);
    if (is_consistent_by_enumeration(p, s)) return p;
  }
}

inline std::vector<std::string> state_names(std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back("q" + std::to_string(i));
  return out;
}

/// Random FSMv over `scope` and `events`: 1..max_states states, random edges.
inline FsmvMachine random_machine(Rng& rng, const std::string& name, const ScopePtr& scope,
                                  const std::vector<std::string>& events, std::size_t max_states,
                                  double density = 0.35) {
  auto states = state_names(rng.between(1, max_states));
  std::vector<Transition> ts;
  for (const auto& s : states)
    for (const auto& e : events)
      for (const auto& d : states)
        if (rng.chance(density / states.size() * 1.5)) ts.push_back({s, random_guard(rng, scope), e, d});
  Predicate global = rng.chance(0.5) ? Predicate::truth() : random_guard(rng, scope, 0);
  return FsmvMachine(name, states, states[0], events, scope, ts, global);
}

/// Random plain FSM with up to `max_states` states over `events`.
inline Fsm random_fsm(Rng& rng, const std::vector<std::string>& events, std::size_t max_states, double density = 0.3) {
  std::size_t n = rng.between(1, max_states);
  std::vector<Fsm::Edge> edges;
  for (std::uint32_t s = 0; s < n; ++s)
    for (std::uint32_t e = 0; e < events.size(); ++e)
      for (std::uint32_t d = 0; d < n; ++d)
        if (rng.chance(density)) edges.push_back({s, e, d});
  return Fsm(state_names(n), 0, events, edges);
}

inline std::vector<std::string> event_names(const std::string& prefix, std::size_t n) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

/// Random SPL for the cross-mode suite: 2-4 features, up to 5 states, up to 2
/// variables of up to 3 values per side. Each design is built from its
/// requirement's transitions (some dropped, guards redrawn over the design
/// variables, now and then an extra one), so features conform often enough to
/// make the SPL step interesting. Alphabets are private per feature.
inline Spl random_spl(Rng& rng, const std::string& name) {
  std::size_t n = rng.between(2, 4);
  std::vector<SplFeature> features;
  for (std::size_t i = 0; i < n; ++i) {
    std::string f = "F" + std::to_string(i);
    auto events = event_names(f + "e", rng.between(1, 3));
    ScopePtr rs = random_scope(rng, "r", 2, 3, 1);
    ScopePtr ds = random_scope(rng, "d", 2, 3, 1);
    FsmvMachine req = random_machine(rng, "Req" + f, rs, events, 5, 0.45);
    std::vector<Transition> dts;
    for (const auto& t : req.transitions())
      if (!rng.chance(0.2)) dts.push_back({t.src, random_guard(rng, ds, 0.4), t.event, t.dst});
    if (rng.chance(0.25)) {
      const auto& st = req.states();
      dts.push_back({rng.pick(st), random_guard(rng, ds), rng.pick(events), rng.pick(st)});
    }
    Predicate dg = rng.chance(0.6) ? Predicate::truth() : random_guard(rng, ds, 0);
    FsmvMachine des("Des" + f, req.states(), req.initial(), events, ds, dts, dg);
    features.push_back({f, std::move(req), std::move(des)});
  }
  auto link = [&](bool req_side) {
    std::vector<Predicate> cs;
    std::size_t k = rng.below(3);
    for (std::size_t c = 0; c < k; ++c) {
      std::size_t a = rng.below(n), b = rng.below(n);
      if (a == b) continue;
      const auto& ma = req_side ? features[a].requirement : features[a].design;
      const auto& mb = req_side ? features[b].requirement : features[b].design;
      auto qa = features[a].name + ".", qb = features[b].name + ".";
      Predicate pa = rename_vars(random_atom(rng, *ma.scope()), [&](const std::string& v) { return qa + v; });
      Predicate pb = rename_vars(random_atom(rng, *mb.scope()), [&](const std::string& v) { return qb + v; });
      cs.push_back(rng.chance(0.5) ? Predicate::implies(pa, pb) : Predicate::disj({pa, pb}));
    }
    return cs;
  };
  auto rc = link(true);
  auto dc = link(false);
  return make_spl(name, std::move(features), std::move(rc), std::move(dc));
}

}  // namespace splv::oracle
