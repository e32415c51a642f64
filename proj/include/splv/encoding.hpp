#pragma once

// Binary encoding of finite-domain configurations as circuit inputs.
//
// Each variable gets ceil(log2 |domain|) consecutive inputs, most significant bit
// first; value index k is encoded as the binary number k. Patterns >= |domain|
// are excluded by the validity constraint.

#include <cstdint>
#include <span>
#include <vector>

#include "splv/circuit.hpp"
#include "splv/varlang.hpp"

namespace splv {

class BoolEncoding {
 public:
  struct Block {
    std::uint32_t first_input;
    std::uint32_t width;
    std::uint32_t domain_size;
  };

  BoolEncoding() : scope_(Scope::empty()) {}

  /// Lays out `scope` starting at circuit input `first_input`.
  static BoolEncoding build(ScopePtr scope, std::uint32_t first_input);
  static std::uint32_t bits_for(std::size_t domain_size);

  const ScopePtr& scope() const { return scope_; }
  const Block& block(std::size_t var) const { return blocks_[var]; }
  std::uint32_t first_input() const { return first_input_; }
  std::uint32_t width() const { return width_; }
  /// Input indices in layout order.
  std::vector<std::uint32_t> inputs() const;

  /// Every block holds the code of a domain value.
  logic::Lit validity(logic::Circuit& c) const;
  logic::Lit block_validity(logic::Circuit& c, std::size_t var) const;
  logic::Lit equals_const(logic::Circuit& c, std::size_t var, std::uint32_t value) const;
  /// Bitwise equality of two blocks of equal width.
  logic::Lit equals_var(logic::Circuit& c, std::size_t a, std::size_t b) const;
  /// Conjunction of equals_const over all variables (by index; names are not consulted).
  logic::Lit equals_config(logic::Circuit& c, const Configuration& pi) const;

  /// Writes the code of `pi` into `inputs` (indexed by absolute input number).
  void encode(const Configuration& pi, std::vector<bool>& inputs) const;
  std::vector<bool> encode(const Configuration& pi) const;
  /// Reads a configuration back. Out-of-range patterns throw ModelError.
  Configuration decode(const std::vector<bool>& inputs) const;

 private:
  ScopePtr scope_;
  std::vector<Block> blocks_;
  std::uint32_t first_input_ = 0;
  std::uint32_t width_ = 0;
};

/// Circuit that is true on a valid code iff the decoded configuration satisfies `p`.
/// `p` must be resolved against the encoding's scope.
logic::Lit encode_predicate(const Predicate& p, const BoolEncoding& enc, logic::Circuit& c);

}  // namespace splv
