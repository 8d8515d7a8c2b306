#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "pclor/cnf.hpp"

namespace pclor {

// Incremental CDCL solver: two watched literals, first-UIP learning, VSIDS
// with lowest-id tie-breaking, phase saving (initially positive), Luby
// restarts. Variables are created on demand up to the largest id seen.
class SatSolver {
 public:
  SatSolver();

  Var new_var();
  void ensure_var(Var v);
  std::size_t num_vars() const { return assigns_.size() - 1; }

  // Returns false once the clause set is known to be unsatisfiable.
  bool add_clause(std::span<const Lit> lits);
  bool add_clause(const Clause& c) { return add_clause(std::span<const Lit>(c.lits())); }
  bool add(const Cnf& f);

  bool solve(std::span<const Lit> assumptions = {});
  bool solve(std::initializer_list<Lit> assumptions) {
    return solve(std::span<const Lit>(assumptions.begin(), assumptions.size()));
  }

  // After a satisfiable call.
  bool value(Var v) const;
  bool value(Lit l) const { return value(l.var()) != l.negative(); }
  Assignment model(std::span<const Var> vars) const;
  // After an unsatisfiable call: the assumptions used in the refutation.
  const std::vector<Lit>& core() const { return core_; }
  bool okay() const { return ok_; }

  std::uint64_t conflicts() const { return conflicts_; }
  std::uint64_t decisions() const { return decisions_; }

 private:
  static constexpr std::uint32_t kNoRef = 0xffffffffu;
  static constexpr std::uint8_t kFalse = 0, kTrue = 1, kUndef = 2;

  struct StoredClause {
    std::vector<Lit> lits;
    bool learnt = false;
    bool deleted = false;
    double activity = 0;
  };
  struct Watcher {
    std::uint32_t cref;
    Lit blocker;
  };

  std::uint8_t lit_value(Lit l) const {
    std::uint8_t a = assigns_[l.var().id];
    return a == kUndef ? kUndef : static_cast<std::uint8_t>(a ^ (l.negative() ? 1 : 0));
  }
  int level(Var v) const { return level_[v.id]; }
  int decision_level() const { return static_cast<int>(trail_lim_.size()); }

  void enqueue(Lit l, std::uint32_t reason);
  std::uint32_t propagate();
  void analyze(std::uint32_t confl, std::vector<Lit>& out, int& bt_level);
  void analyze_final(Lit failed);
  void cancel_until(int lvl);
  void attach(std::uint32_t cref);
  bool locked(std::uint32_t cref) const;
  void reduce_db();
  Lit pick_branch();
  int search(std::int64_t conflict_limit, std::span<const Lit> assumptions);

  void bump_var(Var v);
  void bump_clause(StoredClause& c);

  // Activity-ordered heap of variables.
  bool heap_less(std::uint32_t a, std::uint32_t b) const {
    return activity_[a] > activity_[b] || (activity_[a] == activity_[b] && a < b);
  }
  void heap_insert(std::uint32_t v);
  std::uint32_t heap_pop();
  void heap_up(std::size_t i);
  void heap_down(std::size_t i);

  bool ok_ = true;
  std::vector<StoredClause> clauses_;
  std::vector<std::uint32_t> learnts_;
  std::vector<std::vector<Watcher>> watches_;
  std::vector<std::uint8_t> assigns_;
  std::vector<int> level_;
  std::vector<std::uint32_t> reason_;
  std::vector<bool> phase_;
  std::vector<char> seen_;
  std::vector<double> activity_;
  std::vector<Lit> trail_;
  std::vector<std::size_t> trail_lim_;
  std::size_t qhead_ = 0;
  std::vector<std::uint32_t> heap_;
  std::vector<int> heap_pos_;
  double var_inc_ = 1.0;
  double clause_inc_ = 1.0;
  double max_learnts_ = 0;
  std::vector<std::uint8_t> model_;
  std::vector<Lit> core_;
  std::uint64_t conflicts_ = 0;
  std::uint64_t decisions_ = 0;
};

struct SatResult {
  bool sat = false;
  Assignment model;       // over the formula's scope and the assumption variables
  std::vector<Lit> core;  // subset of the assumptions
};

SatResult solve(const Cnf& f, std::span<const Lit> assumptions = {});
SatResult solve(const Cnf& f, const Assignment& assumptions);

// a -> b, clause by clause.
bool implies(const Cnf& a, const Cnf& b);
bool implies(const Cnf& a, const Clause& c);

struct RelaxResult {
  Assignment model;
  std::vector<std::size_t> falsified_soft;  // indices into the soft Cnf
};

// Model of hard and target that falsifies a locally minimal set of soft
// clauses. Throws std::invalid_argument when hard and target conflict.
RelaxResult max_relax_solve(const Cnf& hard, const Cnf& soft, const Assignment& target);

}  // namespace pclor
