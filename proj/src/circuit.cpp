#include "splv/circuit.hpp"

#include <algorithm>
#include <unordered_set>

#include "splv/sat.hpp"

namespace splv::logic {

std::size_t Circuit::KidsHash::operator()(const std::vector<Lit>& kids) const {
  std::size_t h = kids.size();
  for (Lit l : kids) h = h * 0x9e3779b97f4a7c15ull + l.raw;
  return h;
}

Circuit::Circuit() { nodes_.push_back(Node{Kind::Const, 0, {}}); }

Lit Circuit::input(std::uint32_t index) {
  if (index >= input_nodes_.size()) input_nodes_.resize(index + 1, 0);
  if (input_nodes_[index] == 0) {
    input_nodes_[index] = static_cast<std::uint32_t>(nodes_.size());
    nodes_.push_back(Node{Kind::Input, index, {}});
  }
  return Lit{input_nodes_[index] * 2};
}

Lit Circuit::land(std::vector<Lit> kids) {
  std::vector<Lit> flat;
  flat.reserve(kids.size());
  for (Lit k : kids) {
    if (is_const(k)) {
      if (!const_value(k)) return constant(false);
      continue;
    }
    flat.push_back(k);
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  // x and ~x sit next to each other after sorting
  for (std::size_t i = 1; i < flat.size(); ++i)
    if (flat[i].node() == flat[i - 1].node()) return constant(false);
  if (flat.empty()) return constant(true);
  if (flat.size() == 1) return flat.front();
  auto it = and_table_.find(flat);
  if (it != and_table_.end()) return Lit{it->second * 2};
  auto id = static_cast<std::uint32_t>(nodes_.size());
  nodes_.push_back(Node{Kind::And, 0, flat});
  and_table_.emplace(std::move(flat), id);
  return Lit{id * 2};
}

Lit Circuit::lor(std::vector<Lit> kids) {
  for (Lit& k : kids) k = ~k;
  return ~land(std::move(kids));
}

bool Circuit::eval(Lit root, const std::vector<bool>& inputs) const {
  std::vector<char> value(root.node() + 1, 0);
  for (std::uint32_t n = 0; n <= root.node(); ++n) {
    const Node& node = nodes_[n];
    switch (node.kind) {
      case Kind::Const: value[n] = 1; break;
      case Kind::Input: value[n] = node.input < inputs.size() && inputs[node.input]; break;
      case Kind::And: {
        bool v = true;
        for (Lit k : node.kids) {
          if (!(value[k.node()] ^ k.complemented())) {
            v = false;
            break;
          }
        }
        value[n] = v;
        break;
      }
    }
  }
  return value[root.node()] ^ root.complemented();
}

Lit Circuit::cofactor(Lit root, const std::function<std::optional<bool>(std::uint32_t)>& value) {
  std::vector<Lit> roots{root};
  std::vector<std::uint32_t> order = gates_in_cone(roots);
  std::unordered_map<std::uint32_t, Lit> image;
  auto map_lit = [&](Lit l) -> Lit {
    std::uint32_t n = l.node();
    Lit base;
    if (n == 0) return l;
    if (nodes_[n].kind == Kind::Input) {
      auto v = value(nodes_[n].input);
      base = v ? constant(*v) : Lit{n * 2};
    } else {
      base = image.at(n);
    }
    return l.complemented() ? ~base : base;
  };
  for (std::uint32_t g : order) {
    std::vector<Lit> kids;
    // copy first: land() may grow nodes_
    std::vector<Lit> src = nodes_[g].kids;
    kids.reserve(src.size());
    for (Lit k : src) kids.push_back(map_lit(k));
    image.emplace(g, land(std::move(kids)));
  }
  return map_lit(root);
}

std::vector<std::uint32_t> Circuit::support(Lit root) const {
  std::vector<std::uint32_t> out;
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack{root.node()};
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    const Node& node = nodes_[n];
    if (node.kind == Kind::Input) out.push_back(node.input);
    for (Lit k : node.kids) stack.push_back(k.node());
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::uint32_t> Circuit::gates_in_cone(std::span<const Lit> roots) const {
  std::vector<std::uint32_t> out;
  std::unordered_set<std::uint32_t> seen;
  std::vector<std::uint32_t> stack;
  for (Lit r : roots) stack.push_back(r.node());
  while (!stack.empty()) {
    std::uint32_t n = stack.back();
    stack.pop_back();
    if (!seen.insert(n).second) continue;
    const Node& node = nodes_[n];
    if (node.kind != Kind::And) continue;
    out.push_back(n);
    for (Lit k : node.kids) stack.push_back(k.node());
  }
  // children are always created before their parents
  std::sort(out.begin(), out.end());
  return out;
}

TseitinEncoder::TseitinEncoder(const Circuit& circuit, sat::ClauseSink& sink) : circuit_(circuit), sink_(sink) {}

void TseitinEncoder::bind_input(std::uint32_t input, int var) { input_vars_[input] = var; }

int TseitinEncoder::input_var(std::uint32_t input) {
  auto it = input_vars_.find(input);
  if (it != input_vars_.end()) return it->second;
  int v = sink_.new_var();
  input_vars_.emplace(input, v);
  return v;
}

int TseitinEncoder::node_var(std::uint32_t node) {
  auto it = node_vars_.find(node);
  if (it != node_vars_.end()) return it->second;
  const auto& n = circuit_.node(node);
  if (n.kind == Circuit::Kind::Const) {
    int v = sink_.new_var();
    int unit[] = {v};
    sink_.add_clause(unit);
    ++clauses_;
    node_vars_[node] = v;
    return v;
  }
  if (n.kind == Circuit::Kind::Input) return input_var(n.input);
  // collect the gates below `node` that have no variable yet; stop at encoded ones
  std::vector<std::uint32_t> todo;
  std::vector<std::uint32_t> stack{node};
  std::unordered_set<std::uint32_t> visited;
  while (!stack.empty()) {
    std::uint32_t g = stack.back();
    stack.pop_back();
    if (node_vars_.count(g) || !visited.insert(g).second) continue;
    if (circuit_.node(g).kind != Circuit::Kind::And) continue;
    todo.push_back(g);
    for (Lit k : circuit_.node(g).kids) stack.push_back(k.node());
  }
  std::sort(todo.begin(), todo.end());
  for (std::uint32_t g : todo) {
    const auto& gate = circuit_.node(g);
    std::vector<int> kid_lits;
    kid_lits.reserve(gate.kids.size());
    for (Lit k : gate.kids) kid_lits.push_back(literal(k));
    int v = sink_.new_var();
    node_vars_[g] = v;
    std::vector<int> big{v};
    for (int k : kid_lits) {
      int c[] = {-v, k};
      sink_.add_clause(c);
      big.push_back(-k);
    }
    sink_.add_clause(big);
    clauses_ += kid_lits.size() + 1;
  }
  return node_vars_.at(node);
}

int TseitinEncoder::literal(Lit l) {
  int v = node_var(l.node());
  return l.complemented() ? -v : v;
}

void TseitinEncoder::assert_true(Lit l) {
  if (Circuit::is_const(l) && Circuit::const_value(l)) return;
  int c[] = {literal(l)};
  sink_.add_clause(c);
  ++clauses_;
}

}  // namespace splv::logic
