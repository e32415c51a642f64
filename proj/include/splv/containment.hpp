#pragma once

// Prefix-closed language containment between plain FSMs, and the per-feature
// conformance mapping between a design and a requirement machine.

#include <optional>
#include <string>
#include <vector>

#include "splv/fsmv.hpp"

namespace splv {

/// Deterministic, complete automaton produced by the subset construction.
struct Dfa {
  std::vector<std::string> alphabet;
  std::uint32_t initial = 0;
  std::uint32_t sink = 0;
  std::vector<std::vector<std::uint32_t>> delta;    // [state][event]
  std::vector<std::vector<std::uint32_t>> subsets;  // source states per DFA state

  /// The non-sink part as a plain FSM; same language as the input machine.
  Fsm to_fsm() const;
};

/// Subset construction completed over `alphabet` (must contain r's events).
/// The empty subset is the sink.
Dfa complete_and_determinize(const Fsm& r, const std::vector<std::string>& alphabet);

struct ContainmentVerdict {
  bool holds = true;
  std::optional<Word> counterexample;  // shortest word in L(d) \ L(r)
};

/// L(d) ⊆ L(r), over the union of both alphabets.
ContainmentVerdict contains(const Fsm& d, const Fsm& r);

struct ConformanceMapping {
  std::string feature;
  ScopePtr design_scope = Scope::empty();
  ScopePtr requirement_scope = Scope::empty();
  /// Every valid design configuration in enumeration order, with the requirement
  /// configurations whose variant contains it (enumeration order, possibly empty).
  std::vector<std::pair<Configuration, std::vector<Configuration>>> entries;
  std::vector<Configuration> failing;

  bool conforms() const { return failing.empty(); }
  std::size_t pair_count() const;
  /// nullptr when `pi_d` is not a key.
  const std::vector<Configuration>* image(const Configuration& pi_d) const;
};

struct ConformanceOptions {
  std::size_t budget = default_enum_budget();
  unsigned jobs = 1;  // 0 = hardware concurrency
};

/// Checks every pair of valid configurations; the mapping is maximal.
ConformanceMapping compute_conformance(const FsmvMachine& des, const FsmvMachine& req,
                                       const ConformanceOptions& options = {});

/// One line per design configuration: `<a,b> -> {<c,d,e>, ...}`, preceded by
/// `#` header lines naming the feature and both variable lists.
std::string format_mapping(const ConformanceMapping& phi);

}  // namespace splv
