#include "splv/qbf.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "splv/composition.hpp"
#include "splv/sat.hpp"

namespace splv {

using logic::Circuit;
using logic::Lit;

void QbfFormula::seal() {
  matrix = circuit.implies(circuit.land(antecedent), circuit.land(consequent));
}

Lit encode_mapping(const ConformanceMapping& phi, const BoolEncoding& enc_d, const BoolEncoding& enc_r, Circuit& c) {
  std::vector<Lit> parts;
  for (const auto& [d, image] : phi.entries) {
    std::vector<Lit> options;
    for (const auto& r : image) options.push_back(enc_r.equals_config(c, r));
    parts.push_back(c.implies(enc_d.equals_config(c, d), c.lor(std::move(options))));
  }
  return c.land(std::move(parts));
}

QbfFormula build_psi(const std::vector<PsiFeature>& features, const Predicate& rho_d_comp, const Predicate& rho_r_comp) {
  QbfFormula f;
  Circuit& c = f.circuit;
  std::vector<BoolEncoding> enc_d, enc_r;
  ScopePtr all_d = Scope::empty(), all_r = Scope::empty();
  std::uint32_t nx = 0;
  for (const auto& feat : features) {
    enc_d.push_back(BoolEncoding::build(feat.mapping.design_scope, nx));
    nx += enc_d.back().width();
    ScopePtr qd = qualify_scope(*feat.mapping.design_scope, feat.name);
    f.features.emplace_back(feat.name, qd);
    all_d = Scope::join(*all_d, *qd);
    all_r = Scope::join(*all_r, *qualify_scope(*feat.mapping.requirement_scope, feat.name));
  }
  std::uint32_t ny = nx;
  for (const auto& feat : features) {
    enc_r.push_back(BoolEncoding::build(feat.mapping.requirement_scope, ny));
    ny += enc_r.back().width();
  }
  f.design = BoolEncoding::build(all_d, 0);
  f.requirement = BoolEncoding::build(all_r, nx);

  auto add = [](std::vector<Lit>& into, Lit l) {
    if (!(Circuit::is_const(l) && Circuit::const_value(l))) into.push_back(l);
  };
  auto add_predicate = [&](std::vector<Lit>& into, const Predicate& p, const BoolEncoding& enc) {
    for (const auto& q : conjuncts(resolve(p, *enc.scope()))) add(into, encode_predicate(q, enc, c));
  };

  for (std::size_t i = 0; i < features.size(); ++i) {
    for (std::size_t v = 0; v < enc_d[i].scope()->size(); ++v) add(f.antecedent, enc_d[i].block_validity(c, v));
    add_predicate(f.antecedent, features[i].design_global, enc_d[i]);
  }
  add_predicate(f.antecedent, rho_d_comp, f.design);

  for (std::size_t i = 0; i < features.size(); ++i) {
    add(f.consequent, encode_mapping(features[i].mapping, enc_d[i], enc_r[i], c));
    for (std::size_t v = 0; v < enc_r[i].scope()->size(); ++v) add(f.consequent, enc_r[i].block_validity(c, v));
    add_predicate(f.consequent, features[i].requirement_global, enc_r[i]);
  }
  add_predicate(f.consequent, rho_r_comp, f.requirement);

  for (std::uint32_t i = 0; i < nx; ++i) f.universal.push_back(i);
  for (std::uint32_t i = nx; i < ny; ++i) f.existential.push_back(i);
  f.seal();
  return f;
}

// ---------------------------------------------------------------------------

namespace {

struct Component {
  std::vector<Lit> antecedent;
  std::vector<Lit> consequent;
  std::vector<std::uint32_t> xs;  // universal inputs, ascending
  std::vector<std::uint32_t> ys;
};

class UnionFind {
 public:
  std::uint32_t find(std::uint32_t a) {
    auto it = parent_.find(a);
    if (it == parent_.end()) {
      parent_.emplace(a, a);
      return a;
    }
    if (it->second == a) return a;
    std::uint32_t r = find(it->second);
    parent_[a] = r;
    return r;
  }
  void unite(std::uint32_t a, std::uint32_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::unordered_map<std::uint32_t, std::uint32_t> parent_;
};

// One SAT instance holding a set of conjuncts over the universal inputs, with
// inputs mapped to fixed solver variables.
struct XSolver {
  XSolver(Circuit& c, const std::vector<std::uint32_t>& xs) : tseitin(c, solver) {
    for (std::uint32_t x : xs) tseitin.bind_input(x, solver.new_var());
  }
  sat::Solver solver;
  logic::TseitinEncoder tseitin;
};

// CEGAR state for one component.
class Refuter {
 public:
  Refuter(Circuit& c, const Component& comp, QbfStats& stats, std::uint64_t cap)
      : c_(c), comp_(comp), stats_(stats), cap_(cap), abstraction_(c, comp.xs), body_(c, comp.xs) {
    for (Lit l : comp.antecedent) abstraction_.tseitin.assert_true(l);
    body_root_ = c.land(comp.consequent);
    for (std::uint32_t y : comp.ys) body_.tseitin.bind_input(y, body_.solver.new_var());
    body_.tseitin.assert_true(body_root_);
  }

  /// Searches for x satisfying the antecedent (and `prefix`) with no y making the
  /// body true. Learned witnesses persist across calls.
  std::optional<std::vector<bool>> find_failing(const std::vector<int>& prefix) {
    for (;;) {
      ++stats_.sat_calls;
      if (abstraction_.solver.solve(prefix) == sat::Result::Unsat) return std::nullopt;
      std::vector<bool> x;
      std::vector<int> assume;
      for (std::uint32_t in : comp_.xs) {
        int v = abstraction_.tseitin.input_var(in);
        bool val = abstraction_.solver.model_value(v);
        x.push_back(val);
        assume.push_back(body_.tseitin.input_var(in) * (val ? 1 : -1));
      }
      ++stats_.sat_calls;
      if (body_.solver.solve(assume) == sat::Result::Unsat) return x;
      refine();
    }
  }

  /// Lexicographically least failing x, given that one exists.
  std::vector<bool> least_failing() {
    std::vector<int> prefix;
    std::vector<bool> out;
    for (std::uint32_t in : comp_.xs) {
      int v = abstraction_.tseitin.input_var(in);
      prefix.push_back(-v);
      if (find_failing(prefix)) {
        out.push_back(false);
      } else {
        prefix.back() = v;
        out.push_back(true);
      }
    }
    return out;
  }

  void account() {
    stats_.clauses += abstraction_.solver.num_clauses() + body_.solver.num_clauses();
    stats_.variables += static_cast<std::uint64_t>(abstraction_.solver.num_vars() + body_.solver.num_vars());
  }

 private:
  void refine() {
    if (++stats_.refinements > cap_)
      throw CapacityError("2QBF refinement limit of " + std::to_string(cap_) + " exceeded");
    std::unordered_map<std::uint32_t, bool> w;
    for (std::uint32_t in : comp_.ys) w.emplace(in, body_.solver.model_value(body_.tseitin.input_var(in)));
    Lit covered = c_.cofactor(body_root_, [&](std::uint32_t in) -> std::optional<bool> {
      auto it = w.find(in);
      if (it == w.end()) return std::nullopt;
      return it->second;
    });
    abstraction_.tseitin.assert_true(~covered);
  }

  Circuit& c_;
  const Component& comp_;
  QbfStats& stats_;
  std::uint64_t cap_;
  XSolver abstraction_;
  XSolver body_;
  Lit body_root_;
};

// Lexicographically least model of a set of conjuncts over `xs`.
std::optional<std::vector<bool>> least_model(XSolver& s, const std::vector<std::uint32_t>& xs, QbfStats& stats) {
  ++stats.sat_calls;
  if (s.solver.solve() == sat::Result::Unsat) return std::nullopt;
  std::vector<int> prefix;
  std::vector<bool> out;
  for (std::uint32_t in : xs) {
    int v = s.tseitin.input_var(in);
    prefix.push_back(-v);
    ++stats.sat_calls;
    if (s.solver.solve(prefix) == sat::Result::Sat) {
      out.push_back(false);
    } else {
      prefix.back() = v;
      out.push_back(true);
    }
  }
  return out;
}

std::vector<Component> split(Circuit& c, const QbfFormula& f) {
  UnionFind uf;
  std::vector<std::vector<std::uint32_t>> ante_support, cons_support;
  for (Lit l : f.antecedent) ante_support.push_back(c.support(l));
  for (Lit l : f.consequent) cons_support.push_back(c.support(l));
  auto link = [&](const std::vector<std::uint32_t>& sup) {
    for (std::size_t i = 1; i < sup.size(); ++i) uf.unite(sup[0], sup[i]);
  };
  for (const auto& s : ante_support) link(s);
  for (const auto& s : cons_support) link(s);

  std::map<std::uint32_t, Component> by_root;
  for (std::size_t i = 0; i < f.antecedent.size(); ++i)
    by_root[uf.find(ante_support[i][0])].antecedent.push_back(f.antecedent[i]);
  for (std::size_t i = 0; i < f.consequent.size(); ++i)
    by_root[uf.find(cons_support[i][0])].consequent.push_back(f.consequent[i]);
  for (std::uint32_t x : f.universal)
    if (auto it = by_root.find(uf.find(x)); it != by_root.end()) it->second.xs.push_back(x);
  for (std::uint32_t y : f.existential)
    if (auto it = by_root.find(uf.find(y)); it != by_root.end()) it->second.ys.push_back(y);
  std::vector<Component> out;
  for (auto& [root, comp] : by_root) out.push_back(std::move(comp));
  return out;
}

}  // namespace

SplVerdict solve_forall_exists(const QbfFormula& f, const QbfOptions& options) {
  SplVerdict verdict;
  QbfStats& stats = verdict.stats;
  Circuit c = f.circuit;

  // constant conjuncts first
  QbfFormula rest;
  bool body_false = false;
  for (Lit l : f.antecedent) {
    if (Circuit::is_const(l)) {
      if (!Circuit::const_value(l)) return verdict;  // vacuous
    } else {
      rest.antecedent.push_back(l);
    }
  }
  for (Lit l : f.consequent) {
    if (Circuit::is_const(l)) {
      body_false |= !Circuit::const_value(l);
    } else {
      rest.consequent.push_back(l);
    }
  }
  rest.universal = f.universal;
  rest.existential = f.existential;

  std::vector<Component> comps = split(c, rest);
  stats.components = comps.size();

  // the antecedent splits too: one unsatisfiable group makes Psi vacuously true
  std::vector<std::optional<std::vector<bool>>> least_ante(comps.size());
  for (std::size_t i = 0; i < comps.size(); ++i) {
    if (comps[i].antecedent.empty()) {
      least_ante[i] = std::vector<bool>(comps[i].xs.size(), false);
      continue;
    }
    XSolver s(c, comps[i].xs);
    for (Lit l : comps[i].antecedent) s.tseitin.assert_true(l);
    least_ante[i] = least_model(s, comps[i].xs, stats);
    stats.clauses += s.solver.num_clauses();
    stats.variables += static_cast<std::uint64_t>(s.solver.num_vars());
    if (!least_ante[i]) return verdict;
  }

  auto assemble = [&](std::size_t failing, const std::vector<bool>& bits) {
    std::uint32_t width = 0;
    for (std::uint32_t x : f.universal) width = std::max(width, x + 1);
    std::vector<bool> x(width, false);
    for (std::size_t i = 0; i < comps.size(); ++i) {
      const auto& src = i == failing ? bits : *least_ante[i];
      for (std::size_t k = 0; k < comps[i].xs.size(); ++k) x[comps[i].xs[k]] = src[k];
    }
    return x;
  };
  auto lex_less = [&](const std::vector<bool>& a, const std::vector<bool>& b) {
    for (std::uint32_t x : f.universal)
      if (a[x] != b[x]) return !a[x];
    return false;
  };

  std::optional<std::vector<bool>> best;
  if (body_false) {
    best = assemble(comps.size(), {});
  } else {
    for (std::size_t i = 0; i < comps.size(); ++i) {
      if (comps[i].consequent.empty()) continue;
      Refuter r(c, comps[i], stats, options.max_refinements);
      auto found = r.find_failing({});
      if (found) {
        std::vector<bool> bits = options.canonical_witness ? r.least_failing() : *found;
        auto x = assemble(i, bits);
        if (!best || lex_less(x, *best)) best = std::move(x);
      }
      r.account();
      if (best && !options.canonical_witness) break;
    }
  }
  if (!best) return verdict;
  verdict.conforms = false;
  verdict.witness_bits = *best;
  verdict.witness = f.design.decode(verdict.witness_bits);
  return verdict;
}

}  // namespace splv
