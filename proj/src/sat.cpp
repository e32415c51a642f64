#include "splv/sat.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdlib>
#include <optional>

namespace splv::sat {

// Internal literal: 2 * var + sign, var 0-based.
namespace {

using ILit = std::uint32_t;
using CRef = std::uint32_t;
constexpr CRef kNoReason = ~CRef{0};

inline ILit to_ilit(int dimacs) {
  int v = std::abs(dimacs) - 1;
  return static_cast<ILit>(2 * v + (dimacs < 0 ? 1 : 0));
}
inline std::uint32_t var_of(ILit l) { return l >> 1; }
inline bool sign_of(ILit l) { return l & 1u; }
inline ILit neg(ILit l) { return l ^ 1u; }

// 1 true, -1 false, 0 unassigned.
using LBool = std::int8_t;

struct Clause {
  std::vector<ILit> lits;
  double activity = 0;
  std::uint32_t lbd = 0;
  bool learnt = false;
  bool deleted = false;
};

struct Watcher {
  CRef cref;
  ILit blocker;
};

double luby(double y, int x) {
  int size = 1;
  int seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  return std::pow(y, seq);
}

}  // namespace

struct Solver::Impl {
  std::vector<Clause> clauses;
  std::vector<CRef> learnts;
  std::vector<std::vector<Watcher>> watches;  // indexed by literal that became false

  std::vector<LBool> assigns;
  std::vector<int> level;
  std::vector<CRef> reason;
  std::vector<bool> polarity;  // saved phase: true means last assigned false
  std::vector<double> activity;
  std::vector<char> seen;
  std::vector<LBool> model;

  std::vector<ILit> trail;
  std::vector<std::size_t> trail_lim;
  std::size_t qhead = 0;

  // binary max-heap on activity
  std::vector<std::uint32_t> heap;
  std::vector<int> heap_pos;  // -1 when absent

  double var_inc = 1.0;
  double cla_inc = 1.0;
  double max_learnts = 0;
  bool ok = true;
  std::size_t problem_clauses = 0;
  SolverStats stats;

  std::vector<ILit> assumptions;

  int num_vars() const { return static_cast<int>(assigns.size()); }

  LBool value(ILit l) const {
    LBool v = assigns[var_of(l)];
    return sign_of(l) ? static_cast<LBool>(-v) : v;
  }
  int decision_level() const { return static_cast<int>(trail_lim.size()); }

  void new_var() {
    auto v = static_cast<std::uint32_t>(assigns.size());
    assigns.push_back(0);
    level.push_back(0);
    reason.push_back(kNoReason);
    polarity.push_back(true);
    activity.push_back(0);
    seen.push_back(0);
    watches.emplace_back();
    watches.emplace_back();
    heap_pos.push_back(-1);
    heap_insert(v);
  }

  // heap
  bool heap_less(std::uint32_t a, std::uint32_t b) const { return activity[a] > activity[b]; }
  void heap_up(std::size_t i) {
    std::uint32_t v = heap[i];
    while (i > 0) {
      std::size_t p = (i - 1) / 2;
      if (!heap_less(v, heap[p])) break;
      heap[i] = heap[p];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = p;
    }
    heap[i] = v;
    heap_pos[v] = static_cast<int>(i);
  }
  void heap_down(std::size_t i) {
    std::uint32_t v = heap[i];
    for (;;) {
      std::size_t c = 2 * i + 1;
      if (c >= heap.size()) break;
      if (c + 1 < heap.size() && heap_less(heap[c + 1], heap[c])) ++c;
      if (!heap_less(heap[c], v)) break;
      heap[i] = heap[c];
      heap_pos[heap[i]] = static_cast<int>(i);
      i = c;
    }
    heap[i] = v;
    heap_pos[v] = static_cast<int>(i);
  }
  void heap_insert(std::uint32_t v) {
    if (heap_pos[v] >= 0) return;
    heap_pos[v] = static_cast<int>(heap.size());
    heap.push_back(v);
    heap_up(heap.size() - 1);
  }
  std::uint32_t heap_pop() {
    std::uint32_t top = heap[0];
    heap_pos[top] = -1;
    std::uint32_t last = heap.back();
    heap.pop_back();
    if (!heap.empty()) {
      heap[0] = last;
      heap_pos[last] = 0;
      heap_down(0);
    }
    return top;
  }

  void bump_var(std::uint32_t v) {
    if ((activity[v] += var_inc) > 1e100) {
      for (auto& a : activity) a *= 1e-100;
      var_inc *= 1e-100;
    }
    if (heap_pos[v] >= 0) heap_up(static_cast<std::size_t>(heap_pos[v]));
  }
  void bump_clause(Clause& c) {
    if ((c.activity += cla_inc) > 1e20) {
      for (CRef r : learnts) clauses[r].activity *= 1e-20;
      cla_inc *= 1e-20;
    }
  }

  void enqueue(ILit p, CRef from) {
    std::uint32_t v = var_of(p);
    assigns[v] = sign_of(p) ? -1 : 1;
    level[v] = decision_level();
    reason[v] = from;
    trail.push_back(p);
  }

  void attach(CRef cr) {
    const Clause& c = clauses[cr];
    watches[neg(c.lits[0])].push_back({cr, c.lits[1]});
    watches[neg(c.lits[1])].push_back({cr, c.lits[0]});
  }

  // Watch lists are keyed by the literal whose assignment to true falsifies a watch.
  CRef propagate() {
    CRef conflict = kNoReason;
    while (qhead < trail.size()) {
      ILit p = trail[qhead++];
      ILit false_lit = neg(p);
      auto& ws = watches[p];
      ++stats.propagations;
      std::size_t i = 0, j = 0;
      while (i < ws.size()) {
        Watcher w = ws[i];
        if (clauses[w.cref].deleted) {
          ++i;
          continue;
        }
        if (value(w.blocker) == 1) {
          ws[j++] = ws[i++];
          continue;
        }
        Clause& c = clauses[w.cref];
        if (c.lits[0] == false_lit) std::swap(c.lits[0], c.lits[1]);
        ++i;
        ILit first = c.lits[0];
        if (first != w.blocker && value(first) == 1) {
          ws[j++] = {w.cref, first};
          continue;
        }
        bool moved = false;
        for (std::size_t k = 2; k < c.lits.size(); ++k) {
          if (value(c.lits[k]) != -1) {
            std::swap(c.lits[1], c.lits[k]);
            watches[neg(c.lits[1])].push_back({w.cref, first});
            moved = true;
            break;
          }
        }
        if (moved) continue;
        ws[j++] = {w.cref, first};
        if (value(first) == -1) {
          conflict = w.cref;
          qhead = trail.size();
          while (i < ws.size()) ws[j++] = ws[i++];
        } else {
          enqueue(first, w.cref);
        }
      }
      ws.resize(j);
      if (conflict != kNoReason) break;
    }
    return conflict;
  }

  void cancel_until(int lvl) {
    if (decision_level() <= lvl) return;
    for (std::size_t c = trail.size(); c-- > trail_lim[static_cast<std::size_t>(lvl)];) {
      std::uint32_t v = var_of(trail[c]);
      assigns[v] = 0;
      reason[v] = kNoReason;
      polarity[v] = sign_of(trail[c]);
      heap_insert(v);
    }
    trail.resize(trail_lim[static_cast<std::size_t>(lvl)]);
    qhead = trail.size();
    trail_lim.resize(static_cast<std::size_t>(lvl));
  }

  std::uint32_t abstract_level(std::uint32_t v) const { return 1u << (level[v] & 31); }

  bool lit_redundant(ILit p, std::uint32_t abstract_levels, std::vector<ILit>& to_clear) {
    std::vector<ILit> stack{p};
    std::size_t top = to_clear.size();
    while (!stack.empty()) {
      ILit q = stack.back();
      stack.pop_back();
      const Clause& c = clauses[reason[var_of(q)]];
      for (std::size_t i = 1; i < c.lits.size(); ++i) {
        ILit l = c.lits[i];
        std::uint32_t v = var_of(l);
        if (seen[v] || level[v] == 0) continue;
        if (reason[v] != kNoReason && (abstract_level(v) & abstract_levels)) {
          seen[v] = 1;
          stack.push_back(l);
          to_clear.push_back(l);
        } else {
          for (std::size_t k = top; k < to_clear.size(); ++k) seen[var_of(to_clear[k])] = 0;
          to_clear.resize(top);
          return false;
        }
      }
    }
    return true;
  }

  void analyze(CRef confl, std::vector<ILit>& out, int& out_level, std::uint32_t& lbd) {
    out.clear();
    out.push_back(0);  // asserting literal goes here
    int path = 0;
    ILit p = 0;
    bool have_p = false;
    std::size_t index = trail.size();
    do {
      Clause& c = clauses[confl];
      if (c.learnt) bump_clause(c);
      // reason clauses keep the implied literal at position 0
      for (std::size_t k = have_p ? 1 : 0; k < c.lits.size(); ++k) {
        ILit q = c.lits[k];
        std::uint32_t v = var_of(q);
        if (seen[v] || level[v] == 0) continue;
        bump_var(v);
        seen[v] = 1;
        if (level[v] >= decision_level())
          ++path;
        else
          out.push_back(q);
      }
      while (!seen[var_of(trail[--index])]) {
      }
      p = trail[index];
      have_p = true;
      confl = reason[var_of(p)];
      seen[var_of(p)] = 0;
      --path;
    } while (path > 0);
    out[0] = neg(p);

    std::vector<ILit> to_clear(out.begin(), out.end());
    std::uint32_t abstract_levels = 0;
    for (std::size_t i = 1; i < out.size(); ++i) abstract_levels |= abstract_level(var_of(out[i]));
    std::size_t j = 1;
    for (std::size_t i = 1; i < out.size(); ++i) {
      std::uint32_t v = var_of(out[i]);
      if (reason[v] == kNoReason || !lit_redundant(out[i], abstract_levels, to_clear)) out[j++] = out[i];
    }
    out.resize(j);

    out_level = 0;
    if (out.size() > 1) {
      std::size_t max_i = 1;
      for (std::size_t i = 2; i < out.size(); ++i)
        if (level[var_of(out[i])] > level[var_of(out[max_i])]) max_i = i;
      std::swap(out[1], out[max_i]);
      out_level = level[var_of(out[1])];
    }
    for (ILit l : to_clear) seen[var_of(l)] = 0;

    std::vector<int> levels;
    for (ILit l : out) levels.push_back(level[var_of(l)]);
    std::sort(levels.begin(), levels.end());
    lbd = static_cast<std::uint32_t>(std::unique(levels.begin(), levels.end()) - levels.begin());
  }

  bool locked(CRef cr) const {
    const Clause& c = clauses[cr];
    std::uint32_t v = var_of(c.lits[0]);
    return value(c.lits[0]) == 1 && reason[v] == cr;
  }

  void reduce_db() {
    std::sort(learnts.begin(), learnts.end(), [&](CRef a, CRef b) {
      const Clause& x = clauses[a];
      const Clause& y = clauses[b];
      if (x.lbd != y.lbd) return x.lbd > y.lbd;
      return x.activity < y.activity;
    });
    std::size_t half = learnts.size() / 2;
    std::vector<CRef> kept;
    for (std::size_t i = 0; i < learnts.size(); ++i) {
      CRef cr = learnts[i];
      Clause& c = clauses[cr];
      if (i < half && c.lbd > 2 && c.lits.size() > 2 && !locked(cr)) {
        c.deleted = true;
        c.lits.clear();
        c.lits.shrink_to_fit();
      } else {
        kept.push_back(cr);
      }
    }
    learnts = std::move(kept);
  }

  std::optional<ILit> pick_branch() {
    while (!heap.empty()) {
      std::uint32_t v = heap_pop();
      if (assigns[v] == 0) return static_cast<ILit>(2 * v + (polarity[v] ? 1 : 0));
    }
    return std::nullopt;
  }

  // Returns 1 sat, -1 unsat, 0 budget exhausted (restart).
  int search(std::uint64_t conflict_budget) {
    std::uint64_t conflicts_here = 0;
    std::vector<ILit> learnt;
    for (;;) {
      CRef confl = propagate();
      if (confl != kNoReason) {
        ++stats.conflicts;
        ++conflicts_here;
        if (decision_level() == 0) {
          ok = false;
          return -1;
        }
        int back = 0;
        std::uint32_t lbd = 0;
        analyze(confl, learnt, back, lbd);
        cancel_until(back);
        if (learnt.size() == 1) {
          enqueue(learnt[0], kNoReason);
        } else {
          CRef cr = static_cast<CRef>(clauses.size());
          clauses.push_back(Clause{learnt, 0, lbd, true, false});
          learnts.push_back(cr);
          attach(cr);
          bump_clause(clauses[cr]);
          enqueue(learnt[0], cr);
        }
        ++stats.learnt;
        var_inc /= 0.95;
        cla_inc /= 0.999;
        continue;
      }
      if (conflicts_here >= conflict_budget) {
        cancel_until(0);
        return 0;
      }
      if (static_cast<double>(learnts.size()) - static_cast<double>(trail.size()) >= max_learnts) {
        reduce_db();
        max_learnts *= 1.1;
      }
      std::optional<ILit> next;
      while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
        ILit a = assumptions[static_cast<std::size_t>(decision_level())];
        if (value(a) == 1) {
          trail_lim.push_back(trail.size());
        } else if (value(a) == -1) {
          return -1;
        } else {
          next = a;
          break;
        }
      }
      if (!next) {
        ++stats.decisions;
        next = pick_branch();
        if (!next) return 1;
      }
      trail_lim.push_back(trail.size());
      enqueue(*next, kNoReason);
    }
  }
};

Solver::Solver() : impl_(std::make_unique<Impl>()) {}
Solver::~Solver() = default;

int Solver::new_var() {
  impl_->new_var();
  return impl_->num_vars();
}

int Solver::num_vars() const { return impl_->num_vars(); }

void Solver::add_clause(std::span<const int> lits) {
  Impl& s = *impl_;
  if (!s.ok) return;
  s.cancel_until(0);
  std::vector<ILit> c;
  c.reserve(lits.size());
  for (int d : lits) {
    assert(d != 0);
    while (std::abs(d) > s.num_vars()) s.new_var();
    c.push_back(to_ilit(d));
  }
  std::sort(c.begin(), c.end());
  std::vector<ILit> kept;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i > 0 && c[i] == c[i - 1]) continue;
    if (i > 0 && c[i] == neg(c[i - 1])) return;  // tautology
    LBool v = s.value(c[i]);
    if (v == 1) return;
    if (v == -1) continue;
    kept.push_back(c[i]);
  }
  ++s.problem_clauses;
  if (kept.empty()) {
    s.ok = false;
    return;
  }
  if (kept.size() == 1) {
    s.enqueue(kept[0], kNoReason);
    if (s.propagate() != kNoReason) s.ok = false;
    return;
  }
  CRef cr = static_cast<CRef>(s.clauses.size());
  s.clauses.push_back(Clause{std::move(kept), 0, 0, false, false});
  s.attach(cr);
}

Result Solver::solve(std::span<const int> assumptions) {
  Impl& s = *impl_;
  if (!s.ok) return Result::Unsat;
  s.assumptions.clear();
  for (int d : assumptions) {
    while (std::abs(d) > s.num_vars()) s.new_var();
    s.assumptions.push_back(to_ilit(d));
  }
  s.max_learnts = std::max(s.max_learnts, static_cast<double>(s.problem_clauses) / 3.0 + 1000.0);
  int status = 0;
  for (int restart = 0; status == 0; ++restart) {
    auto budget = static_cast<std::uint64_t>(luby(2.0, restart) * 100.0);
    status = s.search(budget);
    if (status == 0) ++s.stats.restarts;
  }
  if (status == 1) s.model.assign(s.assigns.begin(), s.assigns.end());
  s.cancel_until(0);
  return status == 1 ? Result::Sat : Result::Unsat;
}

bool Solver::model_value(int var) const {
  auto i = static_cast<std::size_t>(var - 1);
  return i < impl_->model.size() && impl_->model[i] == 1;
}

std::size_t Solver::num_clauses() const { return impl_->problem_clauses; }

const SolverStats& Solver::stats() const { return impl_->stats; }

}  // namespace splv::sat
