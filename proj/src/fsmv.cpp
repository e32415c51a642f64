#include "splv/fsmv.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

namespace splv {

namespace {

std::unordered_map<std::string, std::uint32_t> index_names(const std::vector<std::string>& names, const std::string& what,
                                                           const std::string& machine) {
  std::unordered_map<std::string, std::uint32_t> idx;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (!idx.emplace(names[i], static_cast<std::uint32_t>(i)).second)
      throw ModelError(machine + ": duplicate " + what + " '" + names[i] + "'");
  }
  return idx;
}

}  // namespace

FsmvMachine::FsmvMachine(std::string name, std::vector<std::string> states, std::string initial,
                         std::vector<std::string> events, ScopePtr scope, std::vector<Transition> transitions,
                         Predicate global, Check check)
    : name_(std::move(name)),
      states_(std::move(states)),
      initial_(std::move(initial)),
      events_(std::move(events)),
      scope_(std::move(scope)),
      transitions_(std::move(transitions)),
      global_(std::move(global)) {
  auto state_idx = index_names(states_, "state", name_);
  auto event_idx = index_names(events_, "event", name_);
  if (!state_idx.count(initial_)) throw ModelError(name_ + ": initial state '" + initial_ + "' is not declared");
  initial_index_ = state_idx.at(initial_);
  auto scoped = [&](const Predicate& p, const std::string& where) {
    try {
      return resolve(p, *scope_);
    } catch (const ScopeError& e) {
      throw ModelError(name_ + ": " + where + ": " + e.what());
    }
  };
  global_ = scoped(global_, "global predicate");
  if (check == Check::Full && !is_consistent(global_, scope_))
    throw ModelError(name_ + ": global predicate is inconsistent");
  auto bound = std::make_shared<std::vector<BoundPredicate>>();
  bound->reserve(transitions_.size());
  for (auto& t : transitions_) {
    std::string where = "transition " + t.src + " -> " + t.dst + " on " + t.event;
    auto s = state_idx.find(t.src);
    auto d = state_idx.find(t.dst);
    auto e = event_idx.find(t.event);
    if (s == state_idx.end()) throw ModelError(name_ + ": " + where + ": unknown state '" + t.src + "'");
    if (d == state_idx.end()) throw ModelError(name_ + ": " + where + ": unknown state '" + t.dst + "'");
    if (e == event_idx.end()) throw ModelError(name_ + ": " + where + ": undeclared event '" + t.event + "'");
    t.guard = scoped(t.guard, where);
    if (check == Check::Full && !is_consistent(t.guard, scope_))
      throw ModelError(name_ + ": " + where + ": guard is inconsistent");
    src_index_.push_back(s->second);
    dst_index_.push_back(d->second);
    event_index_.push_back(e->second);
    bound->emplace_back(t.guard, *scope_);
  }
  bound_guards_ = std::move(bound);
  bound_global_ = std::make_shared<const BoundPredicate>(global_, *scope_);
}

std::size_t FsmvMachine::state_index(const std::string& s) const {
  auto it = std::find(states_.begin(), states_.end(), s);
  if (it == states_.end()) throw ModelError(name_ + ": unknown state '" + s + "'");
  return static_cast<std::size_t>(it - states_.begin());
}

std::size_t FsmvMachine::event_index(const std::string& e) const {
  auto it = std::find(events_.begin(), events_.end(), e);
  if (it == events_.end()) throw ModelError(name_ + ": unknown event '" + e + "'");
  return static_cast<std::size_t>(it - events_.begin());
}

bool FsmvMachine::enabled(std::size_t transition, const Configuration& pi) const {
  return (*bound_guards_)[transition].eval(pi.values());
}

bool FsmvMachine::valid(const Configuration& pi) const { return bound_global_->eval(pi.values()); }

FsmvMachine FsmvMachine::qualify(const std::string& prefix) const {
  auto rename = [&](const std::string& v) { return prefix + "." + v; };
  std::vector<VarDecl> vars;
  for (const auto& v : scope_->vars()) vars.push_back(VarDecl{rename(v.name), v.domain});
  std::vector<Transition> ts;
  ts.reserve(transitions_.size());
  for (const auto& t : transitions_) ts.push_back(Transition{t.src, rename_vars(t.guard, rename), t.event, t.dst});
  return FsmvMachine(prefix, states_, initial_, events_, Scope::make(std::move(vars)), std::move(ts),
                     rename_vars(global_, rename), Check::Structure);
}

bool FsmvMachine::operator==(const FsmvMachine& o) const {
  return name_ == o.name_ && states_ == o.states_ && initial_ == o.initial_ && events_ == o.events_ &&
         *scope_ == *o.scope_ && transitions_ == o.transitions_ && global_ == o.global_;
}

// ---------------------------------------------------------------------------

Fsm::Fsm(std::vector<std::string> states, std::uint32_t initial, std::vector<std::string> events,
         std::vector<Edge> edges)
    : states_(std::move(states)), initial_(initial), events_(std::move(events)), edges_(std::move(edges)) {
  if (states_.empty() || initial_ >= states_.size()) throw ModelError("fsm: initial state out of range");
  for (const Edge& e : edges_) {
    if (e.src >= states_.size() || e.dst >= states_.size() || e.event >= events_.size())
      throw ModelError("fsm: edge out of range");
  }
  std::sort(edges_.begin(), edges_.end());
  edges_.erase(std::unique(edges_.begin(), edges_.end()), edges_.end());
  first_out_.assign(states_.size() + 1, 0);
  for (const Edge& e : edges_) ++first_out_[e.src + 1];
  for (std::size_t s = 0; s < states_.size(); ++s) first_out_[s + 1] += first_out_[s];
}

std::span<const Fsm::Edge> Fsm::out(std::uint32_t s) const {
  return std::span<const Edge>(edges_.data() + first_out_[s], first_out_[s + 1] - first_out_[s]);
}

// ---------------------------------------------------------------------------

std::vector<Configuration> valid_configs(const FsmvMachine& m, std::size_t budget) {
  return satisfying_assignments(m.global(), m.scope(), budget);
}

std::vector<bool> enabled_set(const FsmvMachine& m, const Configuration& pi) {
  std::vector<bool> on(m.transitions().size());
  for (std::size_t i = 0; i < on.size(); ++i) on[i] = m.enabled(i, pi);
  return on;
}

Fsm project(const FsmvMachine& m, const Configuration& pi, bool prune) {
  if (!(*pi.scope() == *m.scope())) throw ModelError(m.name() + ": configuration is over a different scope");
  if (!m.valid(pi)) throw ModelError(m.name() + ": configuration " + pi.to_string() + " is not valid");
  std::uint32_t init = m.initial_index();
  std::vector<Fsm::Edge> edges;
  for (std::size_t i = 0; i < m.transitions().size(); ++i) {
    if (m.enabled(i, pi)) edges.push_back({m.src_indices()[i], m.event_indices()[i], m.dst_indices()[i]});
  }
  if (!prune) return Fsm(m.states(), init, m.events(), std::move(edges));

  std::vector<std::vector<std::uint32_t>> succ(m.states().size());
  for (const auto& e : edges) succ[e.src].push_back(e.dst);
  std::vector<char> reach(m.states().size(), 0);
  std::deque<std::uint32_t> queue{init};
  reach[init] = 1;
  while (!queue.empty()) {
    std::uint32_t s = queue.front();
    queue.pop_front();
    for (std::uint32_t d : succ[s]) {
      if (!reach[d]) {
        reach[d] = 1;
        queue.push_back(d);
      }
    }
  }
  std::vector<std::uint32_t> renumber(m.states().size(), 0);
  std::vector<std::string> states;
  for (std::size_t s = 0; s < reach.size(); ++s) {
    if (!reach[s]) continue;
    renumber[s] = static_cast<std::uint32_t>(states.size());
    states.push_back(m.states()[s]);
  }
  std::vector<Fsm::Edge> kept;
  for (const auto& e : edges)
    if (reach[e.src]) kept.push_back({renumber[e.src], e.event, renumber[e.dst]});
  return Fsm(std::move(states), renumber[init], m.events(), std::move(kept));
}

std::set<Word> bounded_language(const Fsm& a, std::size_t k) {
  std::set<Word> out;
  Word word;
  // depth-first over the subset construction, so each word is produced once
  std::function<void(const std::vector<std::uint32_t>&)> walk = [&](const std::vector<std::uint32_t>& current) {
    out.insert(word);
    if (word.size() == k) return;
    std::map<std::uint32_t, std::set<std::uint32_t>> next;
    for (std::uint32_t s : current)
      for (const auto& e : a.out(s)) next[e.event].insert(e.dst);
    for (const auto& [event, dsts] : next) {
      word.push_back(a.events()[event]);
      walk(std::vector<std::uint32_t>(dsts.begin(), dsts.end()));
      word.pop_back();
    }
  };
  walk({a.initial()});
  return out;
}

}  // namespace splv
