#pragma once

// Conflict-driven clause-learning SAT solver.
//
// Literals use the DIMACS convention: variables are numbered from 1 and a
// negative integer denotes the complemented literal.

#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <memory>
#include <span>
#include <vector>

namespace splv::sat {

class ClauseSink {
 public:
  virtual ~ClauseSink() = default;
  virtual int new_var() = 0;
  virtual void add_clause(std::span<const int> lits) = 0;
};

/// Plain clause list; the QDIMACS writer and tests use it.
class Cnf : public ClauseSink {
 public:
  int new_var() override { return ++num_vars; }
  void add_clause(std::span<const int> lits) override { clauses.emplace_back(lits.begin(), lits.end()); }

  int num_vars = 0;
  std::vector<std::vector<int>> clauses;
};

enum class Result { Sat, Unsat };

struct SolverStats {
  std::uint64_t decisions = 0;
  std::uint64_t propagations = 0;
  std::uint64_t conflicts = 0;
  std::uint64_t restarts = 0;
  std::uint64_t learnt = 0;
};

class Solver : public ClauseSink {
 public:
  Solver();
  ~Solver() override;
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  int new_var() override;
  int num_vars() const;
  /// May be called between solves. Variables are created on demand.
  void add_clause(std::span<const int> lits) override;
  void add_clause(std::initializer_list<int> lits) { add_clause(std::span<const int>(lits.begin(), lits.size())); }

  /// Solves under temporary unit assumptions.
  Result solve(std::span<const int> assumptions = {});
  Result solve(std::initializer_list<int> assumptions) {
    return solve(std::span<const int>(assumptions.begin(), assumptions.size()));
  }

  /// Value of `var` in the last satisfying assignment.
  bool model_value(int var) const;
  std::size_t num_clauses() const;
  const SolverStats& stats() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace splv::sat
