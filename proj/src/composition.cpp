#include "splv/composition.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "splv/encoding.hpp"
#include "splv/sat.hpp"

namespace splv {

namespace {

// Answers "is g ∧ rho satisfiable" for many guards g over one scope. Small scopes
// keep the list of rho's models; larger ones use one incremental SAT instance.
class ConsistencyOracle {
 public:
  ConsistencyOracle(const Predicate& rho, ScopePtr scope) : scope_(std::move(scope)) {
    if (scope_->assignment_count() <= kEnumerateBelow) {
      for (const auto& pi : satisfying_assignments(rho, scope_)) models_.emplace_back(pi.values().begin(), pi.values().end());
      enumerated_ = true;
      return;
    }
    enc_ = BoolEncoding::build(scope_, 0);
    tseitin_ = std::make_unique<logic::TseitinEncoder>(circuit_, solver_);
    tseitin_->assert_true(circuit_.land({enc_.validity(circuit_), encode_predicate(rho, enc_, circuit_)}));
  }

  bool consistent(const Predicate& g) {
    if (enumerated_) {
      BoundPredicate bound(g, *scope_);
      return std::any_of(models_.begin(), models_.end(), [&](const auto& m) { return bound.eval(m); });
    }
    logic::Lit l = encode_predicate(g, enc_, circuit_);
    if (logic::Circuit::is_const(l)) return logic::Circuit::const_value(l) && solver_.solve() == sat::Result::Sat;
    return solver_.solve({tseitin_->literal(l)}) == sat::Result::Sat;
  }

 private:
  static constexpr std::size_t kEnumerateBelow = 1u << 12;
  ScopePtr scope_;
  bool enumerated_ = false;
  std::vector<std::vector<std::uint32_t>> models_;
  logic::Circuit circuit_;
  BoolEncoding enc_;
  sat::Solver solver_;
  std::unique_ptr<logic::TseitinEncoder> tseitin_;
};

std::vector<std::vector<std::size_t>> out_lists(const FsmvMachine& m) {
  std::vector<std::vector<std::size_t>> out(m.states().size());
  for (std::size_t i = 0; i < m.transitions().size(); ++i) out[m.src_indices()[i]].push_back(i);
  return out;
}

}  // namespace

FsmvMachine compose(const FsmvMachine& a1, const FsmvMachine& a2, const Predicate& rho12) {
  ScopePtr scope = Scope::join(*a1.scope(), *a2.scope());
  Predicate rho;
  try {
    rho = resolve(Predicate::conj({rho12, a1.global(), a2.global()}), *scope);
  } catch (const ScopeError& e) {
    throw ModelError("composition predicate: " + std::string(e.what()));
  }
  if (!is_consistent(rho, scope))
    throw ModelError("composition of " + a1.name() + " and " + a2.name() + ": combined predicate is inconsistent");
  ConsistencyOracle oracle(rho, scope);

  std::set<std::string> shared;
  {
    std::set<std::string> e1(a1.events().begin(), a1.events().end());
    for (const auto& e : a2.events())
      if (e1.count(e)) shared.insert(e);
  }
  std::vector<std::string> events(a1.events());
  for (const auto& e : a2.events())
    if (!shared.count(e)) events.push_back(e);

  auto out1 = out_lists(a1);
  auto out2 = out_lists(a2);
  // guard consistency per transition (private moves) and per transition pair (handshakes)
  std::unordered_map<std::size_t, bool> ok1, ok2;
  std::map<std::pair<std::size_t, std::size_t>, bool> ok12;
  auto check = [&](auto& cache, auto key, const Predicate& g) {
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    bool v = oracle.consistent(g);
    cache.emplace(key, v);
    return v;
  };

  using Pair = std::pair<std::uint32_t, std::uint32_t>;
  std::map<Pair, std::uint32_t> ids;
  std::vector<Pair> order;
  std::vector<std::string> names;
  std::unordered_set<std::string> used;
  std::deque<std::uint32_t> queue;
  auto intern = [&](Pair p) {
    auto it = ids.find(p);
    if (it != ids.end()) return it->second;
    auto id = static_cast<std::uint32_t>(order.size());
    ids.emplace(p, id);
    order.push_back(p);
    std::string name = a1.states()[p.first] + "." + a2.states()[p.second];
    while (!used.insert(name).second) name += "'";
    names.push_back(name);
    queue.push_back(id);
    return id;
  };
  intern({a1.initial_index(), a2.initial_index()});

  std::vector<Transition> transitions;
  while (!queue.empty()) {
    std::uint32_t id = queue.front();
    queue.pop_front();
    auto [s1, s2] = order[id];
    for (std::size_t i : out1[s1]) {
      const Transition& t1 = a1.transitions()[i];
      if (shared.count(t1.event)) {
        for (std::size_t j : out2[s2]) {
          const Transition& t2 = a2.transitions()[j];
          if (t2.event != t1.event) continue;
          Predicate g = Predicate::conj({t1.guard, t2.guard});
          if (!check(ok12, std::make_pair(i, j), g)) continue;
          std::uint32_t dst = intern({a1.dst_indices()[i], a2.dst_indices()[j]});
          transitions.push_back(Transition{names[id], g, t1.event, names[dst]});
        }
      } else if (check(ok1, i, t1.guard)) {
        std::uint32_t dst = intern({a1.dst_indices()[i], s2});
        transitions.push_back(Transition{names[id], t1.guard, t1.event, names[dst]});
      }
    }
    for (std::size_t j : out2[s2]) {
      const Transition& t2 = a2.transitions()[j];
      if (shared.count(t2.event) || !check(ok2, j, t2.guard)) continue;
      std::uint32_t dst = intern({s1, a2.dst_indices()[j]});
      transitions.push_back(Transition{names[id], t2.guard, t2.event, names[dst]});
    }
  }
  return FsmvMachine(a1.name() + "_" + a2.name(), names, names[0], events, scope, std::move(transitions), rho,
                     FsmvMachine::Check::Structure);
}

FsmvMachine compose_all(const std::vector<std::pair<std::string, FsmvMachine>>& features, const Predicate& constraint) {
  if (features.empty()) {
    return FsmvMachine("empty", {"s0"}, "s0", {}, Scope::empty(), {}, constraint, FsmvMachine::Check::Structure);
  }
  FsmvMachine acc = features[0].second.qualify(features[0].first);
  if (features.size() == 1) {
    Predicate rho = resolve(Predicate::conj({constraint, acc.global()}), *acc.scope());
    return FsmvMachine(acc.name(), acc.states(), acc.initial(), acc.events(), acc.scope(), acc.transitions(), rho,
                       FsmvMachine::Check::Structure);
  }
  for (std::size_t i = 1; i < features.size(); ++i) {
    FsmvMachine next = features[i].second.qualify(features[i].first);
    acc = compose(acc, next, i + 1 == features.size() ? constraint : Predicate::truth());
  }
  return acc;
}

Configuration concat_configs(const Configuration& pi1, const Configuration& pi2, const ScopePtr& joined) {
  std::vector<std::uint32_t> values(pi1.values().begin(), pi1.values().end());
  values.insert(values.end(), pi2.values().begin(), pi2.values().end());
  return Configuration(joined, std::move(values));
}

std::optional<Configuration> compose_configs(const Configuration& pi1, const Configuration& pi2, const Predicate& rho) {
  ScopePtr joined = Scope::join(*pi1.scope(), *pi2.scope());
  Configuration pi = concat_configs(pi1, pi2, joined);
  if (!eval(resolve(rho, *joined), pi)) return std::nullopt;
  return pi;
}

std::pair<Configuration, Configuration> decompose_config(const Configuration& pi, const ScopePtr& s1, const ScopePtr& s2) {
  return {pi.restrict_to(s1), pi.restrict_to(s2)};
}

ScopePtr qualify_scope(const Scope& s, const std::string& prefix) {
  std::vector<VarDecl> vars;
  for (const auto& v : s.vars()) vars.push_back(VarDecl{prefix + "." + v.name, v.domain});
  return Scope::make(std::move(vars));
}

ConformanceMapping qualify_mapping(const ConformanceMapping& phi, const std::string& prefix) {
  ConformanceMapping out;
  out.feature = prefix;
  out.design_scope = qualify_scope(*phi.design_scope, prefix);
  out.requirement_scope = qualify_scope(*phi.requirement_scope, prefix);
  auto move_to = [](const Configuration& c, const ScopePtr& s) {
    return Configuration(s, std::vector<std::uint32_t>(c.values().begin(), c.values().end()));
  };
  for (const auto& [d, image] : phi.entries) {
    std::vector<Configuration> img;
    for (const auto& r : image) img.push_back(move_to(r, out.requirement_scope));
    out.entries.emplace_back(move_to(d, out.design_scope), std::move(img));
  }
  for (const auto& f : phi.failing) out.failing.push_back(move_to(f, out.design_scope));
  return out;
}

ConformanceMapping add_mappings(const ConformanceMapping& phi1, const ConformanceMapping& phi2, const Predicate& rho_d,
                                const Predicate& rho_r, std::size_t budget) {
  ConformanceMapping out;
  out.feature = phi1.feature + "+" + phi2.feature;
  out.design_scope = Scope::join(*phi1.design_scope, *phi2.design_scope);
  out.requirement_scope = Scope::join(*phi1.requirement_scope, *phi2.requirement_scope);
  BoundPredicate bd(resolve(rho_d, *out.design_scope), *out.design_scope);
  BoundPredicate br(resolve(rho_r, *out.requirement_scope), *out.requirement_scope);
  if (phi2.entries.size() != 0 && phi1.entries.size() > budget / phi2.entries.size())
    throw CapacityError("composite design space of " + out.feature + " exceeds the enumeration budget");
  std::size_t work = 0;
  for (const auto& [d1, img1] : phi1.entries) {
    for (const auto& [d2, img2] : phi2.entries) {
      Configuration d = concat_configs(d1, d2, out.design_scope);
      if (!bd.eval(d)) continue;
      std::vector<Configuration> image;
      work += img1.size() * img2.size();
      if (work > budget) throw CapacityError("composite images of " + out.feature + " exceed the enumeration budget");
      for (const auto& r1 : img1) {
        for (const auto& r2 : img2) {
          Configuration r = concat_configs(r1, r2, out.requirement_scope);
          if (br.eval(r)) image.push_back(std::move(r));
        }
      }
      if (image.empty()) out.failing.push_back(d);
      out.entries.emplace_back(std::move(d), std::move(image));
    }
  }
  return out;
}

Word project_word(const Word& w, const std::set<std::string>& alphabet) {
  Word out;
  for (const auto& a : w)
    if (alphabet.count(a)) out.push_back(a);
  return out;
}

namespace {

void shuffle_rec(const std::vector<Word>& words, const std::vector<std::set<std::string>>& alphabets,
                 std::vector<std::size_t>& pos, Word& prefix, std::set<Word>& out) {
  bool done = true;
  std::set<std::string> candidates;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (pos[i] < words[i].size()) {
      done = false;
      candidates.insert(words[i][pos[i]]);
    }
  }
  if (done) {
    out.insert(prefix);
    return;
  }
  for (const auto& a : candidates) {
    // every component that knows `a` must be ready to read it
    bool ok = true;
    for (std::size_t i = 0; i < words.size() && ok; ++i)
      if (alphabets[i].count(a) && (pos[i] >= words[i].size() || words[i][pos[i]] != a)) ok = false;
    if (!ok) continue;
    for (std::size_t i = 0; i < words.size(); ++i)
      if (alphabets[i].count(a)) ++pos[i];
    prefix.push_back(a);
    shuffle_rec(words, alphabets, pos, prefix, out);
    prefix.pop_back();
    for (std::size_t i = 0; i < words.size(); ++i)
      if (alphabets[i].count(a)) --pos[i];
  }
}

}  // namespace

std::set<Word> shuffle_words(const std::vector<Word>& words, const std::vector<std::set<std::string>>& alphabets) {
  if (words.size() != alphabets.size()) throw std::invalid_argument("shuffle_words: one alphabet per word");
  for (std::size_t i = 0; i < words.size(); ++i)
    for (const auto& a : words[i])
      if (!alphabets[i].count(a)) throw std::invalid_argument("shuffle_words: letter '" + a + "' outside its alphabet");
  std::set<Word> out;
  std::vector<std::size_t> pos(words.size(), 0);
  Word prefix;
  shuffle_rec(words, alphabets, pos, prefix, out);
  return out;
}

bool in_shuffle(const Word& w, const std::vector<Word>& words, const std::vector<std::set<std::string>>& alphabets) {
  std::set<std::string> all;
  for (const auto& a : alphabets) all.insert(a.begin(), a.end());
  for (const auto& x : w)
    if (!all.count(x)) return false;
  for (std::size_t i = 0; i < words.size(); ++i)
    if (project_word(w, alphabets[i]) != words[i]) return false;
  return true;
}

std::set<Word> shuffle_languages(const std::vector<std::set<Word>>& languages,
                                 const std::vector<std::set<std::string>>& alphabets) {
  std::set<Word> out;
  std::vector<Word> pick(languages.size());
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == languages.size()) {
      auto s = shuffle_words(pick, alphabets);
      out.insert(s.begin(), s.end());
      return;
    }
    for (const auto& w : languages[i]) {
      pick[i] = w;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

Fsm handshake_product(const Fsm& a, const Fsm& b) {
  std::vector<std::string> events(a.events());
  for (const auto& e : b.events())
    if (std::find(events.begin(), events.end(), e) == events.end()) events.push_back(e);
  auto index_in = [&](const std::vector<std::string>& evs) {
    std::vector<std::uint32_t> m;
    for (const auto& e : evs)
      m.push_back(static_cast<std::uint32_t>(std::find(events.begin(), events.end(), e) - events.begin()));
    return m;
  };
  std::vector<std::uint32_t> ea = index_in(a.events()), eb = index_in(b.events());
  std::vector<char> in_a(events.size(), 0), in_b(events.size(), 0);
  for (auto e : ea) in_a[e] = 1;
  for (auto e : eb) in_b[e] = 1;

  using Pair = std::pair<std::uint32_t, std::uint32_t>;
  std::map<Pair, std::uint32_t> ids;
  std::vector<Pair> order;
  auto intern = [&](Pair p) {
    auto [it, fresh] = ids.emplace(p, static_cast<std::uint32_t>(order.size()));
    if (fresh) order.push_back(p);
    return it->second;
  };
  intern({a.initial(), b.initial()});
  std::vector<Fsm::Edge> edges;
  for (std::uint32_t id = 0; id < order.size(); ++id) {
    auto [s, t] = order[id];
    for (const auto& e : a.out(s)) {
      std::uint32_t ev = ea[e.event];
      if (in_b[ev]) {
        for (const auto& f : b.out(t))
          if (eb[f.event] == ev) edges.push_back({id, ev, intern({e.dst, f.dst})});
      } else {
        edges.push_back({id, ev, intern({e.dst, t})});
      }
    }
    for (const auto& f : b.out(t)) {
      std::uint32_t ev = eb[f.event];
      if (!in_a[ev]) edges.push_back({id, ev, intern({s, f.dst})});
    }
  }
  std::vector<std::string> names;
  for (auto [s, t] : order) names.push_back(a.states()[s] + "." + b.states()[t]);
  return Fsm(std::move(names), 0, std::move(events), std::move(edges));
}

}  // namespace splv
