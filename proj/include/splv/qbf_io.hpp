#pragma once

// QDIMACS and QCIR-G14 writers, and a QDIMACS reader for round trips.

#include <string>
#include <string_view>
#include <vector>

#include "splv/qbf.hpp"

namespace splv {

/// Tseitin clauses of the matrix. Universal inputs are variables 1..|x| and
/// existential inputs follow; gate variables join the innermost existential block.
std::string export_qdimacs(const QbfFormula& f);

/// Direct circuit emission; inputs numbered as in export_qdimacs, gates after them.
std::string export_qcir(const QbfFormula& f);

struct QdimacsInstance {
  int num_vars = 0;
  std::vector<std::pair<char, std::vector<int>>> prefix;  // 'a' / 'e' blocks in order
  std::vector<std::vector<int>> clauses;
};

/// Throws ParseError on malformed input.
QdimacsInstance parse_qdimacs(std::string_view text, const std::string& source = "<qdimacs>");

/// Variable v becomes circuit input v-1; clauses become consequent conjuncts.
/// Only prefixes of the form (forall)? (exists)* are accepted; free variables are
/// allowed only without a universal block.
QbfFormula to_formula(const QdimacsInstance& inst, const std::string& source = "<qdimacs>");

}  // namespace splv
