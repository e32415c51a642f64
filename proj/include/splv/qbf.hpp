#pragma once

// The SPL conformance formula
//
//   Psi = forall x . phi_d(x) -> exists y . Phi_1(x,y) & ... & Phi_n(x,y) & phi_r(y)
//
// and a 2QBF decision procedure based on counterexample-guided refinement.

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "splv/circuit.hpp"
#include "splv/containment.hpp"
#include "splv/encoding.hpp"

namespace splv {

struct QbfFormula {
  logic::Circuit circuit;
  std::vector<std::uint32_t> universal;    // circuit inputs, ascending
  std::vector<std::uint32_t> existential;  // circuit inputs, ascending
  std::vector<logic::Lit> antecedent;      // conjuncts over universal inputs
  std::vector<logic::Lit> consequent;      // conjuncts over both blocks
  logic::Lit matrix = logic::Circuit::constant(true);

  // Layout of the blocks; empty scopes for formulas read from files.
  BoolEncoding design;
  BoolEncoding requirement;
  /// Qualified design scope per feature, in manifest order.
  std::vector<std::pair<std::string, ScopePtr>> features;

  /// Recomputes `matrix` from the two conjunct lists.
  void seal();
};

struct PsiFeature {
  std::string name;
  ConformanceMapping mapping;  // over the machines' own (unqualified) scopes
  Predicate design_global;
  Predicate requirement_global;
};

/// ⋀ over design configurations π_d of (x = π_d) -> ⋁_{π_r ∈ Φ(π_d)} (y = π_r).
logic::Lit encode_mapping(const ConformanceMapping& phi, const BoolEncoding& enc_d, const BoolEncoding& enc_r,
                          logic::Circuit& c);

/// Composition predicates use qualified names (`Feature.var`).
QbfFormula build_psi(const std::vector<PsiFeature>& features, const Predicate& rho_d_comp, const Predicate& rho_r_comp);

struct QbfStats {
  std::uint64_t refinements = 0;
  std::uint64_t sat_calls = 0;
  std::uint64_t clauses = 0;
  std::uint64_t variables = 0;
  std::uint64_t components = 0;
};

struct QbfOptions {
  std::uint64_t max_refinements = 1000000;
  /// Report the lexicographically least failing x rather than the first one found.
  bool canonical_witness = true;
};

struct SplVerdict {
  bool conforms = true;
  std::optional<Configuration> witness;  // decoded over `design` of the formula
  std::vector<bool> witness_bits;        // indexed by circuit input
  QbfStats stats;
};

/// Decides Psi. The conjuncts are first split into groups that share no input;
/// Psi holds iff some group's antecedent is unsatisfiable or every group holds on
/// its own. Throws CapacityError past `max_refinements`.
SplVerdict solve_forall_exists(const QbfFormula& f, const QbfOptions& options = {});

}  // namespace splv
