#include "splv/encoding.hpp"

#include <bit>

namespace splv {

using logic::Circuit;
using logic::Lit;

std::uint32_t BoolEncoding::bits_for(std::size_t domain_size) {
  if (domain_size <= 1) return 0;
  return static_cast<std::uint32_t>(std::bit_width(domain_size - 1));
}

BoolEncoding BoolEncoding::build(ScopePtr scope, std::uint32_t first_input) {
  BoolEncoding enc;
  enc.scope_ = std::move(scope);
  enc.first_input_ = first_input;
  std::uint32_t next = first_input;
  for (const auto& v : enc.scope_->vars()) {
    std::uint32_t w = bits_for(v.domain.size());
    enc.blocks_.push_back(Block{next, w, static_cast<std::uint32_t>(v.domain.size())});
    next += w;
  }
  enc.width_ = next - first_input;
  return enc;
}

std::vector<std::uint32_t> BoolEncoding::inputs() const {
  std::vector<std::uint32_t> out;
  for (std::uint32_t i = 0; i < width_; ++i) out.push_back(first_input_ + i);
  return out;
}

namespace {

// bits (MSB first) < bound, for 0 <= bound <= 2^bits.size()
Lit less_than(Circuit& c, const std::vector<Lit>& bits, std::uint64_t bound, std::size_t from = 0) {
  std::size_t rest = bits.size() - from;
  if (bound >= (std::uint64_t{1} << rest)) return Circuit::constant(true);
  if (bound == 0) return Circuit::constant(false);
  bool high = (bound >> (rest - 1)) & 1u;
  std::uint64_t low = bound & ((std::uint64_t{1} << (rest - 1)) - 1);
  Lit tail = less_than(c, bits, low, from + 1);
  if (high) return c.lor({~bits[from], tail});
  return c.land({~bits[from], tail});
}

}  // namespace

Lit BoolEncoding::block_validity(Circuit& c, std::size_t var) const {
  const Block& b = blocks_[var];
  std::vector<Lit> bits;
  for (std::uint32_t i = 0; i < b.width; ++i) bits.push_back(c.input(b.first_input + i));
  return less_than(c, bits, b.domain_size);
}

Lit BoolEncoding::validity(Circuit& c) const {
  std::vector<Lit> parts;
  for (std::size_t v = 0; v < blocks_.size(); ++v) parts.push_back(block_validity(c, v));
  return c.land(std::move(parts));
}

Lit BoolEncoding::equals_const(Circuit& c, std::size_t var, std::uint32_t value) const {
  const Block& b = blocks_[var];
  std::vector<Lit> bits;
  for (std::uint32_t i = 0; i < b.width; ++i) {
    bool one = (value >> (b.width - 1 - i)) & 1u;
    Lit in = c.input(b.first_input + i);
    bits.push_back(one ? in : ~in);
  }
  return c.land(std::move(bits));
}

Lit BoolEncoding::equals_var(Circuit& c, std::size_t a, std::size_t b) const {
  const Block& x = blocks_[a];
  const Block& y = blocks_[b];
  if (x.width != y.width) throw ScopeError("cannot compare variables of different domains");
  std::vector<Lit> bits;
  for (std::uint32_t i = 0; i < x.width; ++i)
    bits.push_back(c.iff(c.input(x.first_input + i), c.input(y.first_input + i)));
  return c.land(std::move(bits));
}

Lit BoolEncoding::equals_config(Circuit& c, const Configuration& pi) const {
  std::vector<Lit> parts;
  for (std::size_t v = 0; v < blocks_.size(); ++v) parts.push_back(equals_const(c, v, pi.index(v)));
  return c.land(std::move(parts));
}

void BoolEncoding::encode(const Configuration& pi, std::vector<bool>& inputs) const {
  if (inputs.size() < first_input_ + width_) inputs.resize(first_input_ + width_, false);
  for (std::size_t v = 0; v < blocks_.size(); ++v) {
    const Block& b = blocks_[v];
    for (std::uint32_t i = 0; i < b.width; ++i) inputs[b.first_input + i] = (pi.index(v) >> (b.width - 1 - i)) & 1u;
  }
}

std::vector<bool> BoolEncoding::encode(const Configuration& pi) const {
  std::vector<bool> out;
  encode(pi, out);
  return out;
}

Configuration BoolEncoding::decode(const std::vector<bool>& inputs) const {
  std::vector<std::uint32_t> values;
  for (std::size_t v = 0; v < blocks_.size(); ++v) {
    const Block& b = blocks_[v];
    std::uint32_t k = 0;
    for (std::uint32_t i = 0; i < b.width; ++i) {
      std::size_t at = b.first_input + i;
      k = (k << 1) | ((at < inputs.size() && inputs[at]) ? 1u : 0u);
    }
    if (k >= b.domain_size) throw ModelError("bit pattern outside the domain of " + scope_->at(v).name);
    values.push_back(k);
  }
  return Configuration(scope_, std::move(values));
}

Lit encode_predicate(const Predicate& p, const BoolEncoding& enc, Circuit& c) {
  using K = Predicate::Kind;
  const Scope& scope = *enc.scope();
  switch (p.kind()) {
    case K::True: return Circuit::constant(true);
    case K::False: return Circuit::constant(false);
    case K::Atom: {
      const Atom& a = p.atom();
      std::size_t lhs = scope.index_of(a.lhs);
      Lit eq;
      if (a.rhs_kind == RhsKind::Variable) {
        eq = enc.equals_var(c, lhs, scope.index_of(a.rhs));
      } else {
        auto value = scope.value_index(lhs, a.rhs);
        if (!value) throw ScopeError("'" + a.rhs + "' is not a value of " + a.lhs);
        eq = enc.equals_const(c, lhs, *value);
      }
      return a.negated ? ~eq : eq;
    }
    case K::Not: return ~encode_predicate(p.operands()[0], enc, c);
    case K::And:
    case K::Or: {
      std::vector<Lit> kids;
      for (const Predicate& q : p.operands()) kids.push_back(encode_predicate(q, enc, c));
      return p.kind() == K::And ? c.land(std::move(kids)) : c.lor(std::move(kids));
    }
    case K::Implies:
      return c.implies(encode_predicate(p.operands()[0], enc, c), encode_predicate(p.operands()[1], enc, c));
  }
  return Circuit::constant(false);
}

}  // namespace splv
