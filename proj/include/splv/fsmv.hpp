#pragma once

// FSMv machines, plain FSMs, and variant projection.

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "splv/varlang.hpp"

namespace splv {

struct Transition {
  std::string src;
  Predicate guard;
  std::string event;
  std::string dst;

  bool operator==(const Transition&) const = default;
};

/// Guarded machine over finite-domain variables with a global predicate.
class FsmvMachine {
 public:
  enum class Check {
    Full,       // structure, scoping, consistency of the global predicate and of every guard
    Structure,  // structure and scoping only; used for internally built composites
  };

  FsmvMachine(std::string name, std::vector<std::string> states, std::string initial, std::vector<std::string> events,
              ScopePtr scope, std::vector<Transition> transitions, Predicate global, Check check = Check::Full);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& states() const { return states_; }
  const std::string& initial() const { return initial_; }
  const std::vector<std::string>& events() const { return events_; }
  const ScopePtr& scope() const { return scope_; }
  const std::vector<Transition>& transitions() const { return transitions_; }
  const Predicate& global() const { return global_; }

  std::size_t state_index(const std::string& s) const;
  std::size_t event_index(const std::string& e) const;
  /// Guard of transition i compiled against the machine scope.
  bool enabled(std::size_t transition, const Configuration& pi) const;
  /// Endpoint and event indices of each transition, parallel to transitions().
  const std::vector<std::uint32_t>& src_indices() const { return src_index_; }
  const std::vector<std::uint32_t>& dst_indices() const { return dst_index_; }
  const std::vector<std::uint32_t>& event_indices() const { return event_index_; }
  std::uint32_t initial_index() const { return initial_index_; }
  /// π satisfies the global predicate.
  bool valid(const Configuration& pi) const;

  /// Copy with every variable renamed to `prefix.var` and the machine renamed to `prefix`.
  FsmvMachine qualify(const std::string& prefix) const;

  bool operator==(const FsmvMachine& other) const;

 private:
  std::string name_;
  std::vector<std::string> states_;
  std::string initial_;
  std::vector<std::string> events_;
  ScopePtr scope_;
  std::vector<Transition> transitions_;
  Predicate global_;
  std::shared_ptr<const std::vector<BoundPredicate>> bound_guards_;
  std::shared_ptr<const BoundPredicate> bound_global_;
  std::vector<std::uint32_t> src_index_, dst_index_, event_index_;
  std::uint32_t initial_index_ = 0;
};

/// Plain machine: no variables; every state accepting, so the language is prefix-closed.
class Fsm {
 public:
  struct Edge {
    std::uint32_t src;
    std::uint32_t event;
    std::uint32_t dst;
    auto operator<=>(const Edge&) const = default;
  };

  Fsm() = default;
  Fsm(std::vector<std::string> states, std::uint32_t initial, std::vector<std::string> events, std::vector<Edge> edges);

  const std::vector<std::string>& states() const { return states_; }
  std::uint32_t initial() const { return initial_; }
  const std::vector<std::string>& events() const { return events_; }
  const std::vector<Edge>& edges() const { return edges_; }
  /// Outgoing edges of `s`, sorted by (event, dst).
  std::span<const Edge> out(std::uint32_t s) const;
  std::size_t size() const { return states_.size(); }

 private:
  std::vector<std::string> states_;
  std::uint32_t initial_ = 0;
  std::vector<std::string> events_;
  std::vector<Edge> edges_;  // sorted by (src, event, dst)
  std::vector<std::uint32_t> first_out_;
};

using Word = std::vector<std::string>;

std::vector<Configuration> valid_configs(const FsmvMachine& m, std::size_t budget = default_enum_budget());

/// A ↓ π: transitions whose guard holds under π, guards stripped. With `prune`,
/// states unreachable from the initial state are dropped. The event set is the
/// machine's full alphabet in either case.
Fsm project(const FsmvMachine& m, const Configuration& pi, bool prune = true);

/// Indices of the transitions enabled under π; variants with equal sets are equal.
std::vector<bool> enabled_set(const FsmvMachine& m, const Configuration& pi);

/// All words of length <= k that label a path from the initial state.
std::set<Word> bounded_language(const Fsm& a, std::size_t k);

}  // namespace splv
