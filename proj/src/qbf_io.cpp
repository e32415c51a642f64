#include "splv/qbf_io.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>
#include <unordered_map>

#include "splv/sat.hpp"

namespace splv {

using logic::Circuit;
using logic::Lit;

namespace {

// Variable numbering shared by both writers: universal inputs, then existential.
std::unordered_map<std::uint32_t, int> number_inputs(const QbfFormula& f) {
  std::unordered_map<std::uint32_t, int> var;
  int next = 1;
  for (std::uint32_t x : f.universal) var.emplace(x, next++);
  for (std::uint32_t y : f.existential) var.emplace(y, next++);
  return var;
}

void write_block(std::ostringstream& out, char q, int from, int to) {
  if (from > to) return;
  out << q;
  for (int v = from; v <= to; ++v) out << ' ' << v;
  out << " 0\n";
}

}  // namespace

std::string export_qdimacs(const QbfFormula& f) {
  auto var = number_inputs(f);
  sat::Cnf cnf;
  cnf.num_vars = static_cast<int>(var.size());
  logic::TseitinEncoder tseitin(f.circuit, cnf);
  for (const auto& [in, v] : var) tseitin.bind_input(in, v);
  // inputs that occur in the matrix but in neither block are treated as existential
  for (std::uint32_t in : f.circuit.support(f.matrix))
    if (!var.count(in)) tseitin.bind_input(in, cnf.new_var());
  tseitin.assert_true(f.matrix);

  int nx = static_cast<int>(f.universal.size());
  std::ostringstream out;
  out << "p cnf " << cnf.num_vars << ' ' << cnf.clauses.size() << "\n";
  write_block(out, 'a', 1, nx);
  write_block(out, 'e', nx + 1, cnf.num_vars);
  for (const auto& c : cnf.clauses) {
    for (int l : c) out << l << ' ';
    out << "0\n";
  }
  return out.str();
}

std::string export_qcir(const QbfFormula& f) {
  auto var = number_inputs(f);
  int next = static_cast<int>(var.size()) + 1;
  auto extra = f.circuit.support(f.matrix);
  for (std::uint32_t in : extra)
    if (!var.count(in)) var.emplace(in, next++);
  int nx = static_cast<int>(f.universal.size());

  std::ostringstream out;
  out << "#QCIR-G14\n";
  auto block = [&](const char* q, int from, int to) {
    if (from > to) return;
    out << q << '(';
    for (int v = from; v <= to; ++v) out << (v > from ? ", " : "") << v;
    out << ")\n";
  };
  block("forall", 1, nx);
  block("exists", nx + 1, next - 1);

  std::unordered_map<std::uint32_t, int> gate_id;
  std::vector<std::string> gates;
  auto lit = [&](Lit l) {
    const auto& n = f.circuit.node(l.node());
    int id = n.kind == Circuit::Kind::Input ? var.at(n.input) : gate_id.at(l.node());
    return l.complemented() ? -id : id;
  };
  std::vector<Lit> roots{f.matrix};
  for (std::uint32_t g : f.circuit.gates_in_cone(roots)) {
    int id = next++;
    gate_id.emplace(g, id);
    std::string line = std::to_string(id) + " = and(";
    const auto& kids = f.circuit.node(g).kids;
    for (std::size_t i = 0; i < kids.size(); ++i) line += (i ? ", " : "") + std::to_string(lit(kids[i]));
    gates.push_back(line + ")");
  }
  int output;
  if (Circuit::is_const(f.matrix)) {
    // empty conjunction is true
    int id = next++;
    gates.push_back(std::to_string(id) + " = and()");
    output = Circuit::const_value(f.matrix) ? id : -id;
  } else {
    output = lit(f.matrix);
  }
  out << "output(" << output << ")\n";
  for (const auto& g : gates) out << g << "\n";
  return out.str();
}

QdimacsInstance parse_qdimacs(std::string_view input, const std::string& source) {
  QdimacsInstance inst;
  bool header = false;
  std::size_t declared_clauses = 0;
  std::vector<int> pending;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  auto fail = [&](const std::string& msg) { throw ParseError(source, line_no, 1, msg); };
  auto parse_int = [&](std::string_view tok) {
    int v = 0;
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc() || p != tok.data() + tok.size()) fail("expected an integer, found '" + std::string(tok) + "'");
    return v;
  };
  while (pos <= input.size()) {
    std::size_t end = input.find('\n', pos);
    if (end == std::string_view::npos) end = input.size();
    std::string_view line = input.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    std::vector<std::string_view> toks;
    for (std::size_t i = 0; i < line.size();) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) toks.push_back(line.substr(i, j - i));
      i = j;
    }
    if (toks.empty() || toks[0] == "c") continue;
    if (toks[0] == "p") {
      if (header) fail("duplicate problem line");
      if (toks.size() != 4 || toks[1] != "cnf") fail("expected 'p cnf <vars> <clauses>'");
      inst.num_vars = parse_int(toks[2]);
      int n = parse_int(toks[3]);
      if (inst.num_vars < 0 || n < 0) fail("negative count in problem line");
      declared_clauses = static_cast<std::size_t>(n);
      header = true;
      continue;
    }
    if (!header) fail("clause or quantifier before the problem line");
    if (toks[0] == "a" || toks[0] == "e") {
      if (!inst.clauses.empty() || !pending.empty()) fail("quantifier line after clauses");
      std::vector<int> vars;
      for (std::size_t i = 1; i < toks.size(); ++i) {
        int v = parse_int(toks[i]);
        if (v == 0) {
          if (i + 1 != toks.size()) fail("tokens after terminating 0");
          break;
        }
        if (v < 0 || v > inst.num_vars) fail("quantified variable out of range");
        vars.push_back(v);
      }
      if (toks.back() != "0") fail("quantifier line must end with 0");
      char q = toks[0][0];
      if (!inst.prefix.empty() && inst.prefix.back().first == q)
        inst.prefix.back().second.insert(inst.prefix.back().second.end(), vars.begin(), vars.end());
      else
        inst.prefix.emplace_back(q, std::move(vars));
      continue;
    }
    for (auto tok : toks) {
      int l = parse_int(tok);
      if (l == 0) {
        inst.clauses.push_back(std::move(pending));
        pending.clear();
      } else {
        if (std::abs(l) > inst.num_vars) fail("literal out of range");
        pending.push_back(l);
      }
    }
  }
  if (!header) throw ParseError(source, 1, 1, "missing problem line");
  if (!pending.empty()) throw ParseError(source, line_no, 1, "unterminated clause");
  if (inst.clauses.size() != declared_clauses)
    throw ParseError(source, line_no, 1,
                     "problem line declares " + std::to_string(declared_clauses) + " clauses, found " +
                         std::to_string(inst.clauses.size()));
  std::set<int> bound;
  for (const auto& [q, vars] : inst.prefix)
    for (int v : vars)
      if (!bound.insert(v).second) throw ParseError(source, 1, 1, "variable " + std::to_string(v) + " quantified twice");
  return inst;
}

QbfFormula to_formula(const QdimacsInstance& inst, const std::string& source) {
  std::vector<int> universal, existential;
  for (std::size_t i = 0; i < inst.prefix.size(); ++i) {
    const auto& [q, vars] = inst.prefix[i];
    if (q == 'a') {
      if (i != 0) throw ParseError(source, 1, 1, "only forall-exists prefixes are supported");
      universal = vars;
    } else {
      existential.insert(existential.end(), vars.begin(), vars.end());
    }
  }
  std::set<int> quantified(universal.begin(), universal.end());
  quantified.insert(existential.begin(), existential.end());
  std::set<int> free;
  for (const auto& c : inst.clauses)
    for (int l : c)
      if (!quantified.count(std::abs(l))) free.insert(std::abs(l));
  if (!free.empty() && !universal.empty())
    throw ParseError(source, 1, 1, "free variables outside an existential-only prefix are not supported");
  existential.insert(existential.end(), free.begin(), free.end());

  QbfFormula f;
  for (int v : universal) f.universal.push_back(static_cast<std::uint32_t>(v - 1));
  for (int v : existential) f.existential.push_back(static_cast<std::uint32_t>(v - 1));
  std::sort(f.universal.begin(), f.universal.end());
  std::sort(f.existential.begin(), f.existential.end());
  for (const auto& c : inst.clauses) {
    std::vector<Lit> lits;
    for (int l : c) {
      Lit in = f.circuit.input(static_cast<std::uint32_t>(std::abs(l) - 1));
      lits.push_back(l < 0 ? ~in : in);
    }
    f.consequent.push_back(f.circuit.lor(std::move(lits)));
  }
  f.seal();
  return f;
}

}  // namespace splv
