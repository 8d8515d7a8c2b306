#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "pclor/cnf.hpp"

namespace pclor {

// exists W [A & B]: find A* over the free variables with
// A* & exists W[B] == exists W[A & B].
struct PqeTask {
  std::set<Var> W;
  Cnf A;
  Cnf B;

  // Every variable of A and B that is not in W.
  std::set<Var> free_vars() const;
};

// Clause `clause` is redundant in exists W[pool] within `subspace`.
struct DSequent {
  Assignment subspace;
  Clause clause;
};

// D-sequents for the same clause in the two branches of y.
DSequent join(const DSequent& d1, const DSequent& d2, Var y);

// Resolvent of the clauses falsified in the y = 0 and y = 1 branches.
Clause conflict_clause_dsequent(Var y, const Clause& falsified0, const Clause& falsified1);

enum class Redundancy { None, Satisfied, Subsumed, Blocked };

struct RedundancyCheck {
  Redundancy reason = Redundancy::None;
  std::vector<Var> depends_on;  // branch variables the verdict relies on
  explicit operator bool() const { return reason != Redundancy::None; }
};

// (a) satisfied by the branch, (b) subsumed by a live clause of the cofactored
// pool, (c) blocked on an unassigned W-variable. `pool` holds the other live clauses.
RedundancyCheck trivially_redundant(const Clause& c, const Cnf& pool, const Assignment& branch,
                                    const std::set<Var>& W);

struct PqeOptions {
  std::uint64_t node_budget = 1'000'000;
  bool allow_fallback = true;
  // Drop A* clauses that exists W[B] already implies.
  bool prune_implied = true;
  bool record_dsequents = false;
};

struct PqeStats {
  std::uint64_t nodes = 0;
  std::uint64_t escape_leaves = 0;
  std::uint64_t sat_calls = 0;
  std::uint64_t derived = 0;
  bool fallback = false;
};

struct PqeResult {
  Cnf a_star;
  // Unconditional D-sequents for the W-clauses of A.
  std::vector<DSequent> dsequents;
  // Per-node D-sequents (record_dsequents only).
  std::vector<DSequent> trace;
  // The clause pool the trace refers to: A, B and every derived clause.
  Cnf pool;
  PqeStats stats;
};

// Throws BudgetExceeded ("pqe-budget") when the node budget runs out and the
// enumeration fallback is disabled or over budget.
PqeResult take_out(const PqeTask& task, const PqeOptions& opts = {});

}  // namespace pclor
