#pragma once

// Hash-consed Boolean circuits: inputs, the constant, and n-ary AND gates with
// complemented edges. OR is expressed through De Morgan.

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

namespace splv::sat {
class ClauseSink;
}

namespace splv::logic {

/// Edge into a circuit node: node index * 2 + complement bit.
struct Lit {
  std::uint32_t raw = 0;

  std::uint32_t node() const { return raw >> 1; }
  bool complemented() const { return raw & 1u; }
  Lit operator~() const { return Lit{raw ^ 1u}; }
  bool operator==(const Lit&) const = default;
  auto operator<=>(const Lit&) const = default;
};

class Circuit {
 public:
  enum class Kind : std::uint8_t { Const, Input, And };

  struct Node {
    Kind kind;
    std::uint32_t input = 0;  // for Input nodes
    std::vector<Lit> kids;    // for And nodes, sorted
  };

  Circuit();

  static Lit constant(bool value) { return value ? Lit{0} : Lit{1}; }
  static bool is_const(Lit l) { return l.node() == 0; }
  static bool const_value(Lit l) { return !l.complemented(); }

  /// Literal of primary input `index`; created on first use.
  Lit input(std::uint32_t index);
  std::uint32_t input_count() const { return static_cast<std::uint32_t>(input_nodes_.size()); }

  Lit land(std::vector<Lit> kids);
  Lit land(std::initializer_list<Lit> kids) { return land(std::vector<Lit>(kids)); }
  Lit lor(std::vector<Lit> kids);
  Lit lor(std::initializer_list<Lit> kids) { return lor(std::vector<Lit>(kids)); }
  Lit implies(Lit a, Lit b) { return lor({~a, b}); }
  Lit iff(Lit a, Lit b) { return land({implies(a, b), implies(b, a)}); }

  const Node& node(std::uint32_t index) const { return nodes_[index]; }
  std::size_t size() const { return nodes_.size(); }

  /// Evaluates `root` under a full input assignment (index = input number).
  bool eval(Lit root, const std::vector<bool>& inputs) const;

  /// Replaces inputs for which `value(input)` yields a constant; simplifies on the way.
  Lit cofactor(Lit root, const std::function<std::optional<bool>(std::uint32_t)>& value);

  /// Primary inputs reachable from `root`, ascending.
  std::vector<std::uint32_t> support(Lit root) const;

  /// AND nodes reachable from `roots` in topological order (children first).
  std::vector<std::uint32_t> gates_in_cone(std::span<const Lit> roots) const;

 private:
  struct KidsHash {
    std::size_t operator()(const std::vector<Lit>& kids) const;
  };

  std::vector<Node> nodes_;
  std::vector<std::uint32_t> input_nodes_;  // input index -> node index (0 = absent)
  std::unordered_map<std::vector<Lit>, std::uint32_t, KidsHash> and_table_;
};

/// Tseitin conversion into a clause sink. Circuit inputs map to sink variables on
/// first use unless bound beforehand; each AND gate gets an auxiliary variable
/// with full equivalence clauses. Gates are encoded once per encoder.
class TseitinEncoder {
 public:
  TseitinEncoder(const Circuit& circuit, sat::ClauseSink& sink);

  void bind_input(std::uint32_t input, int var);
  /// Sink variable of an input (allocated if needed).
  int input_var(std::uint32_t input);
  /// Signed sink literal equivalent to `l` (constants get a dedicated variable).
  int literal(Lit l);
  void assert_true(Lit l);

  std::size_t clauses_emitted() const { return clauses_; }

 private:
  int node_var(std::uint32_t node);

  const Circuit& circuit_;
  sat::ClauseSink& sink_;
  std::unordered_map<std::uint32_t, int> node_vars_;   // gates and the constant
  std::unordered_map<std::uint32_t, int> input_vars_;  // by input index
  std::size_t clauses_ = 0;
};

}  // namespace splv::logic
