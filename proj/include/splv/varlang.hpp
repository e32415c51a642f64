#pragma once

// Finite-domain variables, guard predicates over them, and configurations.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "splv/errors.hpp"

namespace splv {

struct VarDecl {
  std::string name;
  std::vector<std::string> domain;

  bool operator==(const VarDecl&) const = default;
};

class Scope;
using ScopePtr = std::shared_ptr<const Scope>;

/// An ordered, immutable list of variable declarations with name lookup.
class Scope {
 public:
  /// Validates names are unique and every domain is non-empty with distinct values.
  static ScopePtr make(std::vector<VarDecl> vars);
  static ScopePtr empty();
  /// Concatenation of two scopes; throws ModelError if a name occurs in both.
  static ScopePtr join(const Scope& a, const Scope& b);

  std::size_t size() const { return vars_.size(); }
  bool empty_scope() const { return vars_.empty(); }
  const VarDecl& at(std::size_t i) const { return vars_[i]; }
  const std::vector<VarDecl>& vars() const { return vars_; }

  std::optional<std::size_t> find(std::string_view name) const;
  std::size_t index_of(std::string_view name) const;  // throws ScopeError
  std::optional<std::uint32_t> value_index(std::size_t var, std::string_view value) const;

  /// Number of total assignments; saturates at SIZE_MAX.
  std::size_t assignment_count() const;

  bool operator==(const Scope& other) const { return vars_ == other.vars_; }

 private:
  explicit Scope(std::vector<VarDecl> vars);

  std::vector<VarDecl> vars_;
  std::unordered_map<std::string, std::size_t> index_;
};

/// Total assignment of domain values to the variables of a scope.
class Configuration {
 public:
  Configuration() : scope_(Scope::empty()) {}
  Configuration(ScopePtr scope, std::vector<std::uint32_t> values);

  /// Builds a configuration from (name, value) pairs; must be total over `scope`.
  static Configuration from_names(ScopePtr scope,
                                  const std::vector<std::pair<std::string, std::string>>& assignment);

  const ScopePtr& scope() const { return scope_; }
  std::span<const std::uint32_t> values() const { return values_; }
  std::size_t size() const { return values_.size(); }
  std::uint32_t index(std::size_t var) const { return values_[var]; }
  const std::string& value(std::size_t var) const;
  const std::string& value(std::string_view name) const;

  /// Restriction to the variables of `sub` (all must exist here).
  Configuration restrict_to(const ScopePtr& sub) const;

  /// `<v1,v2,...>` in scope order.
  std::string to_string() const;
  /// `x=v1, y=v2`.
  std::string describe() const;

  bool operator==(const Configuration& other) const;
  /// Lexicographic by value index; only meaningful within a single scope.
  std::strong_ordering operator<=>(const Configuration& other) const;

 private:
  ScopePtr scope_;
  std::vector<std::uint32_t> values_;
};

struct ConfigurationHash {
  std::size_t operator()(const Configuration& c) const;
};

/// Right-hand side of a comparison atom. Unresolved atoms come out of the parser;
/// `resolve` decides whether the name is a constant or a variable.
enum class RhsKind : std::uint8_t { Unresolved, Constant, Variable };

struct Atom {
  std::string lhs;
  std::string rhs;
  bool negated = false;  // `!=` instead of `=`
  RhsKind rhs_kind = RhsKind::Unresolved;

  bool operator==(const Atom&) const = default;
};

/// Immutable predicate tree: atoms under !, &&, ||, =>. Cheap to copy.
class Predicate {
 public:
  enum class Kind : std::uint8_t { True, False, Atom, Not, And, Or, Implies };

  Predicate();  // true

  static Predicate truth();
  static Predicate falsity();
  static Predicate atom(Atom a);
  static Predicate eq_const(std::string var, std::string value);
  static Predicate neq_const(std::string var, std::string value);
  static Predicate eq_var(std::string lhs, std::string rhs);
  static Predicate negate(Predicate p);
  /// N-ary conjunction; flattens nested conjunctions and drops `true` operands.
  static Predicate conj(std::vector<Predicate> ps);
  static Predicate disj(std::vector<Predicate> ps);
  static Predicate implies(Predicate a, Predicate b);
  static Predicate iff(Predicate a, Predicate b);

  Kind kind() const;
  const Atom& atom() const;
  std::span<const Predicate> operands() const;
  bool is_true() const { return kind() == Kind::True; }

  /// Identity of the shared node; stable for the lifetime of any copy.
  const void* id() const { return node_.get(); }

  bool operator==(const Predicate& other) const;

 private:
  struct Node;
  explicit Predicate(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

/// Concrete syntax; parses back to an equal predicate.
std::string to_string(const Predicate& p);

/// Parses the concrete guard syntax. Atoms are left unresolved.
Predicate parse_predicate(std::string_view text, const std::string& source = "<predicate>");

/// Binds every atom against `scope`: checks declarations, domain membership and
/// the identical-domain rule for variable comparisons. Throws ScopeError.
Predicate resolve(const Predicate& p, const Scope& scope);

/// Renames variables through `rename` (constants untouched).
Predicate rename_vars(const Predicate& p, const std::function<std::string(const std::string&)>& rename);

/// Variable names mentioned, in first-occurrence order.
std::vector<std::string> mentioned_vars(const Predicate& p);

/// Top-level conjuncts (a non-conjunction yields itself; `true` yields nothing).
std::vector<Predicate> conjuncts(const Predicate& p);

/// A predicate compiled against one scope for repeated evaluation.
class BoundPredicate {
 public:
  BoundPredicate(const Predicate& p, const Scope& scope);
  bool eval(std::span<const std::uint32_t> values) const;
  bool eval(const Configuration& pi) const { return eval(pi.values()); }

 private:
  struct Op {
    Predicate::Kind kind;
    bool negated = false;
    bool rhs_is_var = false;
    std::uint32_t lhs = 0;
    std::uint32_t rhs = 0;
    std::uint32_t first = 0;  // operand range into children_
    std::uint32_t count = 0;
  };
  std::uint32_t compile(const Predicate& p, const Scope& scope);
  bool eval_op(std::uint32_t op, std::span<const std::uint32_t> values) const;

  std::vector<Op> ops_;
  std::vector<std::uint32_t> children_;
  std::uint32_t root_ = 0;
};

/// Default cap on enumerated assignments (2^20); overridable via SPLV_ENUM_BUDGET
/// or `set_default_enum_budget`.
std::size_t default_enum_budget();
void set_default_enum_budget(std::size_t budget);

/// Standard Boolean semantics. Throws ScopeError on unbound variables.
bool eval(const Predicate& p, const Configuration& pi);

/// All total assignments over `scope` satisfying `p`, lexicographic by declaration
/// order then domain order. Throws CapacityError above `budget` assignments.
std::vector<Configuration> satisfying_assignments(const Predicate& p, const ScopePtr& scope,
                                                  std::size_t budget = default_enum_budget());

/// Satisfiability over `scope`. Small scopes are enumerated, larger ones go through
/// the propositional encoding and the SAT core.
bool is_consistent(const Predicate& p, const ScopePtr& scope);
bool is_consistent_by_enumeration(const Predicate& p, const ScopePtr& scope);
bool is_consistent_by_sat(const Predicate& p, const ScopePtr& scope);

}  // namespace splv
