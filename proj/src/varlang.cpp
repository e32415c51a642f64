#include "splv/varlang.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "splv/encoding.hpp"
#include "splv/sat.hpp"

namespace splv {

// ---------------------------------------------------------------------------
// Scope

Scope::Scope(std::vector<VarDecl> vars) : vars_(std::move(vars)) {
  for (std::size_t i = 0; i < vars_.size(); ++i) index_.emplace(vars_[i].name, i);
}

ScopePtr Scope::make(std::vector<VarDecl> vars) {
  std::unordered_set<std::string> names;
  for (const auto& v : vars) {
    if (v.name.empty()) throw ModelError("variable with empty name");
    if (!names.insert(v.name).second) throw ModelError("duplicate variable '" + v.name + "'");
    if (v.domain.empty()) throw ModelError("variable '" + v.name + "' has an empty domain");
    std::unordered_set<std::string> values;
    for (const auto& value : v.domain) {
      if (!values.insert(value).second)
        throw ModelError("variable '" + v.name + "' lists value '" + value + "' twice");
    }
  }
  return ScopePtr(new Scope(std::move(vars)));
}

ScopePtr Scope::empty() {
  static const ScopePtr kEmpty = make({});
  return kEmpty;
}

ScopePtr Scope::join(const Scope& a, const Scope& b) {
  std::vector<VarDecl> vars = a.vars_;
  for (const auto& v : b.vars_) {
    if (a.find(v.name)) throw ModelError("variable-name clash on '" + v.name + "'");
    vars.push_back(v);
  }
  return make(std::move(vars));
}

std::optional<std::size_t> Scope::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t Scope::index_of(std::string_view name) const {
  auto i = find(name);
  if (!i) throw ScopeError("unbound variable '" + std::string(name) + "'");
  return *i;
}

std::optional<std::uint32_t> Scope::value_index(std::size_t var, std::string_view value) const {
  const auto& dom = vars_[var].domain;
  for (std::size_t i = 0; i < dom.size(); ++i)
    if (dom[i] == value) return static_cast<std::uint32_t>(i);
  return std::nullopt;
}

std::size_t Scope::assignment_count() const {
  std::size_t n = 1;
  for (const auto& v : vars_) {
    if (n > std::numeric_limits<std::size_t>::max() / v.domain.size())
      return std::numeric_limits<std::size_t>::max();
    n *= v.domain.size();
  }
  return n;
}

// ---------------------------------------------------------------------------
// Configuration

Configuration::Configuration(ScopePtr scope, std::vector<std::uint32_t> values)
    : scope_(std::move(scope)), values_(std::move(values)) {
  if (values_.size() != scope_->size()) throw ModelError("configuration is not total over its scope");
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (values_[i] >= scope_->at(i).domain.size())
      throw ModelError("value out of domain for '" + scope_->at(i).name + "'");
  }
}

Configuration Configuration::from_names(
    ScopePtr scope, const std::vector<std::pair<std::string, std::string>>& assignment) {
  std::vector<std::uint32_t> values(scope->size(), 0);
  std::vector<bool> seen(scope->size(), false);
  for (const auto& [name, value] : assignment) {
    std::size_t var = scope->index_of(name);
    auto idx = scope->value_index(var, value);
    if (!idx) throw ScopeError("value '" + value + "' not in the domain of '" + name + "'");
    values[var] = *idx;
    seen[var] = true;
  }
  for (std::size_t i = 0; i < seen.size(); ++i)
    if (!seen[i]) throw ModelError("configuration does not assign '" + scope->at(i).name + "'");
  return Configuration(std::move(scope), std::move(values));
}

const std::string& Configuration::value(std::size_t var) const {
  return scope_->at(var).domain[values_[var]];
}

const std::string& Configuration::value(std::string_view name) const {
  return value(scope_->index_of(name));
}

Configuration Configuration::restrict_to(const ScopePtr& sub) const {
  std::vector<std::uint32_t> values;
  values.reserve(sub->size());
  for (const auto& decl : sub->vars()) {
    std::size_t here = scope_->index_of(decl.name);
    auto idx = sub->value_index(values.size(), value(here));
    if (!idx) throw ScopeError("value of '" + decl.name + "' outside the restricted domain");
    values.push_back(*idx);
  }
  return Configuration(sub, std::move(values));
}

std::string Configuration::to_string() const {
  std::string out = "<";
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ',';
    out += value(i);
  }
  return out + ">";
}

std::string Configuration::describe() const {
  std::string out;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (i) out += ", ";
    out += scope_->at(i).name + "=" + value(i);
  }
  return out;
}

bool Configuration::operator==(const Configuration& other) const {
  if (values_ != other.values_) return false;
  if (scope_ == other.scope_) return true;
  if (scope_->size() != other.scope_->size()) return false;
  for (std::size_t i = 0; i < values_.size(); ++i) {
    if (scope_->at(i).name != other.scope_->at(i).name) return false;
    if (value(i) != other.value(i)) return false;
  }
  return true;
}

std::strong_ordering Configuration::operator<=>(const Configuration& other) const {
  return std::lexicographical_compare_three_way(values_.begin(), values_.end(), other.values_.begin(),
                                                other.values_.end());
}

std::size_t ConfigurationHash::operator()(const Configuration& c) const {
  std::size_t h = 0xcbf29ce484222325ull;
  for (auto v : c.values()) h = (h ^ v) * 0x100000001b3ull;
  return h;
}

// ---------------------------------------------------------------------------
// Predicate

struct Predicate::Node {
  Kind kind;
  Atom atom;
  std::vector<Predicate> operands;
};

Predicate::Predicate() : Predicate(truth()) {}

Predicate Predicate::truth() {
  static const auto node = std::make_shared<const Node>(Node{Kind::True, {}, {}});
  return Predicate(node);
}

Predicate Predicate::falsity() {
  static const auto node = std::make_shared<const Node>(Node{Kind::False, {}, {}});
  return Predicate(node);
}

Predicate Predicate::atom(Atom a) { return Predicate(std::make_shared<const Node>(Node{Kind::Atom, std::move(a), {}})); }

Predicate Predicate::eq_const(std::string var, std::string value) {
  return atom(Atom{std::move(var), std::move(value), false, RhsKind::Constant});
}

Predicate Predicate::neq_const(std::string var, std::string value) {
  return atom(Atom{std::move(var), std::move(value), true, RhsKind::Constant});
}

Predicate Predicate::eq_var(std::string lhs, std::string rhs) {
  return atom(Atom{std::move(lhs), std::move(rhs), false, RhsKind::Variable});
}

Predicate Predicate::negate(Predicate p) {
  return Predicate(std::make_shared<const Node>(Node{Kind::Not, {}, {std::move(p)}}));
}

Predicate Predicate::conj(std::vector<Predicate> ps) {
  std::vector<Predicate> flat;
  for (auto& p : ps) {
    if (p.kind() == Kind::True) continue;
    if (p.kind() == Kind::And) {
      for (const auto& q : p.operands()) flat.push_back(q);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  return Predicate(std::make_shared<const Node>(Node{Kind::And, {}, std::move(flat)}));
}

Predicate Predicate::disj(std::vector<Predicate> ps) {
  std::vector<Predicate> flat;
  for (auto& p : ps) {
    if (p.kind() == Kind::False) continue;
    if (p.kind() == Kind::Or) {
      for (const auto& q : p.operands()) flat.push_back(q);
    } else {
      flat.push_back(std::move(p));
    }
  }
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat.front();
  return Predicate(std::make_shared<const Node>(Node{Kind::Or, {}, std::move(flat)}));
}

Predicate Predicate::implies(Predicate a, Predicate b) {
  return Predicate(std::make_shared<const Node>(Node{Kind::Implies, {}, {std::move(a), std::move(b)}}));
}

Predicate Predicate::iff(Predicate a, Predicate b) {
  return conj({implies(a, b), implies(b, a)});
}

Predicate::Kind Predicate::kind() const { return node_->kind; }
const Atom& Predicate::atom() const { return node_->atom; }
std::span<const Predicate> Predicate::operands() const { return node_->operands; }

bool Predicate::operator==(const Predicate& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  if (kind() == Kind::Atom) return atom() == other.atom();
  auto a = operands();
  auto b = other.operands();
  return std::equal(a.begin(), a.end(), b.begin(), b.end());
}

namespace {

// Binding strength used by the printer: => 1, || 2, && 3, ! and atoms 4.
int strength(const Predicate& p) {
  switch (p.kind()) {
    case Predicate::Kind::Implies: return 1;
    case Predicate::Kind::Or: return 2;
    case Predicate::Kind::And: return 3;
    default: return 4;
  }
}

void print(const Predicate& p, std::string& out);

void print_operand(const Predicate& p, int min_strength, std::string& out) {
  if (strength(p) < min_strength) {
    out += '(';
    print(p, out);
    out += ')';
  } else {
    print(p, out);
  }
}

void print(const Predicate& p, std::string& out) {
  switch (p.kind()) {
    case Predicate::Kind::True: out += "true"; return;
    case Predicate::Kind::False: out += "false"; return;
    case Predicate::Kind::Atom: {
      const auto& a = p.atom();
      out += a.lhs;
      out += a.negated ? " != " : " = ";
      out += a.rhs;
      return;
    }
    case Predicate::Kind::Not:
      out += '!';
      print_operand(p.operands()[0], 4, out);
      return;
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      const char* sep = p.kind() == Predicate::Kind::And ? " && " : " || ";
      // Nested operators of the same kind are parenthesised so the tree shape
      // survives a round trip.
      int s = strength(p) + 1;
      bool first = true;
      for (const auto& q : p.operands()) {
        if (!first) out += sep;
        first = false;
        print_operand(q, s, out);
      }
      return;
    }
    case Predicate::Kind::Implies:
      // Right associative.
      print_operand(p.operands()[0], 2, out);
      out += " => ";
      print_operand(p.operands()[1], 1, out);
      return;
  }
}

}  // namespace

std::string to_string(const Predicate& p) {
  std::string out;
  print(p, out);
  return out;
}

Predicate resolve(const Predicate& p, const Scope& scope) {
  switch (p.kind()) {
    case Predicate::Kind::True:
    case Predicate::Kind::False: return p;
    case Predicate::Kind::Atom: {
      Atom a = p.atom();
      auto lhs = scope.find(a.lhs);
      if (!lhs) throw ScopeError("unbound variable '" + a.lhs + "'");
      auto rhs_var = scope.find(a.rhs);
      bool is_value = scope.value_index(*lhs, a.rhs).has_value();
      if (a.rhs_kind == RhsKind::Unresolved) {
        if (rhs_var && is_value)
          throw ScopeError("'" + a.rhs + "' is both a variable and a value of '" + a.lhs + "'");
        a.rhs_kind = rhs_var ? RhsKind::Variable : RhsKind::Constant;
      }
      if (a.rhs_kind == RhsKind::Constant) {
        if (!is_value)
          throw ScopeError("value '" + a.rhs + "' is not in the domain of '" + a.lhs + "'");
      } else {
        if (!rhs_var) throw ScopeError("unbound variable '" + a.rhs + "'");
        if (scope.at(*lhs).domain != scope.at(*rhs_var).domain)
          throw ScopeError("'" + a.lhs + "' and '" + a.rhs + "' have different domains");
      }
      return Predicate::atom(std::move(a));
    }
    case Predicate::Kind::Not: return Predicate::negate(resolve(p.operands()[0], scope));
    case Predicate::Kind::Implies:
      return Predicate::implies(resolve(p.operands()[0], scope), resolve(p.operands()[1], scope));
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      std::vector<Predicate> ops;
      for (const auto& q : p.operands()) ops.push_back(resolve(q, scope));
      return p.kind() == Predicate::Kind::And ? Predicate::conj(std::move(ops))
                                              : Predicate::disj(std::move(ops));
    }
  }
  return p;
}

Predicate rename_vars(const Predicate& p, const std::function<std::string(const std::string&)>& rename) {
  switch (p.kind()) {
    case Predicate::Kind::True:
    case Predicate::Kind::False: return p;
    case Predicate::Kind::Atom: {
      Atom a = p.atom();
      a.lhs = rename(a.lhs);
      if (a.rhs_kind == RhsKind::Variable) a.rhs = rename(a.rhs);
      return Predicate::atom(std::move(a));
    }
    case Predicate::Kind::Not: return Predicate::negate(rename_vars(p.operands()[0], rename));
    case Predicate::Kind::Implies:
      return Predicate::implies(rename_vars(p.operands()[0], rename), rename_vars(p.operands()[1], rename));
    case Predicate::Kind::And:
    case Predicate::Kind::Or: {
      std::vector<Predicate> ops;
      for (const auto& q : p.operands()) ops.push_back(rename_vars(q, rename));
      return p.kind() == Predicate::Kind::And ? Predicate::conj(std::move(ops))
                                              : Predicate::disj(std::move(ops));
    }
  }
  return p;
}

namespace {

void collect_vars(const Predicate& p, std::vector<std::string>& out) {
  auto add = [&](const std::string& name) {
    if (std::find(out.begin(), out.end(), name) == out.end()) out.push_back(name);
  };
  if (p.kind() == Predicate::Kind::Atom) {
    add(p.atom().lhs);
    if (p.atom().rhs_kind == RhsKind::Variable) add(p.atom().rhs);
    return;
  }
  for (const auto& q : p.operands()) collect_vars(q, out);
}

}  // namespace

std::vector<std::string> mentioned_vars(const Predicate& p) {
  std::vector<std::string> out;
  collect_vars(p, out);
  return out;
}

std::vector<Predicate> conjuncts(const Predicate& p) {
  if (p.kind() == Predicate::Kind::True) return {};
  if (p.kind() == Predicate::Kind::And) return {p.operands().begin(), p.operands().end()};
  return {p};
}

// ---------------------------------------------------------------------------
// BoundPredicate

BoundPredicate::BoundPredicate(const Predicate& p, const Scope& scope) { root_ = compile(p, scope); }

std::uint32_t BoundPredicate::compile(const Predicate& p, const Scope& scope) {
  Op op{p.kind()};
  if (p.kind() == Predicate::Kind::Atom) {
    const Atom& a = p.atom();
    auto lhs = scope.find(a.lhs);
    if (!lhs) throw ScopeError("unbound variable '" + a.lhs + "'");
    op.lhs = static_cast<std::uint32_t>(*lhs);
    op.negated = a.negated;
    auto rhs_var = scope.find(a.rhs);
    auto value = scope.value_index(*lhs, a.rhs);
    bool as_var = a.rhs_kind == RhsKind::Variable || (a.rhs_kind == RhsKind::Unresolved && !value && rhs_var);
    if (as_var) {
      if (!rhs_var) throw ScopeError("unbound variable '" + a.rhs + "'");
      op.rhs_is_var = true;
      op.rhs = static_cast<std::uint32_t>(*rhs_var);
    } else {
      if (!value) throw ScopeError("value '" + a.rhs + "' is not in the domain of '" + a.lhs + "'");
      op.rhs = *value;
    }
  } else if (!p.operands().empty()) {
    std::vector<std::uint32_t> kids;
    for (const auto& q : p.operands()) kids.push_back(compile(q, scope));
    op.first = static_cast<std::uint32_t>(children_.size());
    op.count = static_cast<std::uint32_t>(kids.size());
    children_.insert(children_.end(), kids.begin(), kids.end());
  }
  ops_.push_back(op);
  return static_cast<std::uint32_t>(ops_.size() - 1);
}

bool BoundPredicate::eval(std::span<const std::uint32_t> values) const { return eval_op(root_, values); }

bool BoundPredicate::eval_op(std::uint32_t index, std::span<const std::uint32_t> values) const {
  const Op& op = ops_[index];
  switch (op.kind) {
    case Predicate::Kind::True: return true;
    case Predicate::Kind::False: return false;
    case Predicate::Kind::Atom: {
      std::uint32_t rhs = op.rhs_is_var ? values[op.rhs] : op.rhs;
      return (values[op.lhs] == rhs) != op.negated;
    }
    case Predicate::Kind::Not: return !eval_op(children_[op.first], values);
    case Predicate::Kind::And:
      for (std::uint32_t i = 0; i < op.count; ++i)
        if (!eval_op(children_[op.first + i], values)) return false;
      return true;
    case Predicate::Kind::Or:
      for (std::uint32_t i = 0; i < op.count; ++i)
        if (eval_op(children_[op.first + i], values)) return true;
      return false;
    case Predicate::Kind::Implies:
      return !eval_op(children_[op.first], values) || eval_op(children_[op.first + 1], values);
  }
  return false;
}

// ---------------------------------------------------------------------------
// Enumeration and consistency

namespace {

std::atomic<std::size_t>& budget_slot() {
  static std::atomic<std::size_t> slot = [] {
    std::size_t budget = std::size_t{1} << 20;
    if (const char* env = std::getenv("SPLV_ENUM_BUDGET")) {
      char* end = nullptr;
      unsigned long long v = std::strtoull(env, &end, 10);
      if (end != env && *end == '\0' && v > 0) budget = static_cast<std::size_t>(v);
    }
    return budget;
  }();
  return slot;
}

// Calls `visit` for every assignment in lexicographic order until it returns false.
template <typename Visit>
void for_each_assignment(const Scope& scope, Visit&& visit) {
  std::vector<std::uint32_t> values(scope.size(), 0);
  while (true) {
    if (!visit(values)) return;
    std::size_t i = values.size();
    while (i > 0) {
      --i;
      if (++values[i] < scope.at(i).domain.size()) break;
      values[i] = 0;
      if (i == 0) return;
    }
    if (values.empty()) return;
  }
}

constexpr std::size_t kEnumerationConsistencyLimit = 1u << 12;

}  // namespace

std::size_t default_enum_budget() { return budget_slot().load(); }
void set_default_enum_budget(std::size_t budget) { budget_slot().store(budget); }

bool eval(const Predicate& p, const Configuration& pi) { return BoundPredicate(p, *pi.scope()).eval(pi); }

std::vector<Configuration> satisfying_assignments(const Predicate& p, const ScopePtr& scope,
                                                  std::size_t budget) {
  std::size_t total = scope->assignment_count();
  if (total > budget) {
    throw CapacityError("enumerating " + (total == std::numeric_limits<std::size_t>::max()
                                              ? std::string("too many")
                                              : std::to_string(total)) +
                        " assignments exceeds the budget of " + std::to_string(budget));
  }
  BoundPredicate bound(p, *scope);
  std::vector<Configuration> out;
  for_each_assignment(*scope, [&](const std::vector<std::uint32_t>& values) {
    if (bound.eval(values)) out.emplace_back(scope, values);
    return true;
  });
  return out;
}

bool is_consistent_by_enumeration(const Predicate& p, const ScopePtr& scope) {
  BoundPredicate bound(p, *scope);
  bool found = false;
  for_each_assignment(*scope, [&](const std::vector<std::uint32_t>& values) {
    found = bound.eval(values);
    return !found;
  });
  return found;
}

bool is_consistent_by_sat(const Predicate& p, const ScopePtr& scope) {
  BoundPredicate check(p, *scope);  // throws on unbound names
  (void)check;
  logic::Circuit circuit;
  BoolEncoding enc = BoolEncoding::build(scope, 0);
  logic::Lit root = circuit.land({enc.validity(circuit), encode_predicate(p, enc, circuit)});
  sat::Solver solver;
  logic::TseitinEncoder tseitin(circuit, solver);
  tseitin.assert_true(root);
  return solver.solve() == sat::Result::Sat;
}

bool is_consistent(const Predicate& p, const ScopePtr& scope) {
  if (scope->assignment_count() <= kEnumerationConsistencyLimit) return is_consistent_by_enumeration(p, scope);
  return is_consistent_by_sat(p, scope);
}

}  // namespace splv
