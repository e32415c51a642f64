#pragma once

// Parallel composition of FSMv machines, the configuration algebra, addition of
// conformance mappings, and the shuffle / handshake-product constructions used
// as oracles for composed variants.

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "splv/containment.hpp"
#include "splv/fsmv.hpp"

namespace splv {

/// A1 ∥ A2 under composition predicate rho12 (over the union of both scopes, which
/// must be disjoint). Shared event names synchronise. A composite transition is
/// kept iff its guard is consistent with rho12 ∧ rho1 ∧ rho2; only states reachable
/// over kept transitions appear. Throws ModelError on a variable clash or an
/// inconsistent combined predicate.
FsmvMachine compose(const FsmvMachine& a1, const FsmvMachine& a2, const Predicate& rho12);

/// Qualifies each machine with its feature name and left-folds compose; the
/// constraint (over qualified names) joins the last step.
FsmvMachine compose_all(const std::vector<std::pair<std::string, FsmvMachine>>& features, const Predicate& constraint);

/// π1 + π2 if the union satisfies rho (resolved against the joined scope).
std::optional<Configuration> compose_configs(const Configuration& pi1, const Configuration& pi2, const Predicate& rho);
Configuration concat_configs(const Configuration& pi1, const Configuration& pi2, const ScopePtr& joined);
std::pair<Configuration, Configuration> decompose_config(const Configuration& pi, const ScopePtr& s1, const ScopePtr& s2);

/// Scope with every variable renamed to `prefix.var`.
ScopePtr qualify_scope(const Scope& s, const std::string& prefix);
/// Same mapping over qualified scopes (configurations keep their values).
ConformanceMapping qualify_mapping(const ConformanceMapping& phi, const std::string& prefix);

/// Φ1 + Φ2. Keys are the composite design configurations satisfying rho_d; each
/// image holds the composite requirement configurations π_r1 + π_r2 satisfying
/// rho_r with π_ri ∈ Φi(π_di). An empty component image gives an empty composite
/// image. Scopes of the two mappings must be disjoint (see qualify_mapping).
ConformanceMapping add_mappings(const ConformanceMapping& phi1, const ConformanceMapping& phi2, const Predicate& rho_d,
                                const Predicate& rho_r, std::size_t budget = default_enum_budget());

/// w ↓ Σ: the subword of w over `alphabet`.
Word project_word(const Word& w, const std::set<std::string>& alphabet);
/// {w | w ↓ Σi = ui for all i}.
std::set<Word> shuffle_words(const std::vector<Word>& words, const std::vector<std::set<std::string>>& alphabets);
bool in_shuffle(const Word& w, const std::vector<Word>& words, const std::vector<std::set<std::string>>& alphabets);
/// Union of word shuffles over all choices of one word per language.
std::set<Word> shuffle_languages(const std::vector<std::set<Word>>& languages,
                                 const std::vector<std::set<std::string>>& alphabets);

/// Product of plain FSMs: both move together on common events, alone otherwise.
Fsm handshake_product(const Fsm& a, const Fsm& b);

}  // namespace splv
