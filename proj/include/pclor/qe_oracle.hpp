#pragma once

// Exhaustive reference implementations. Budgets are hard errors.

#include <cstdint>
#include <set>
#include <vector>

#include "pclor/circuit.hpp"
#include "pclor/cnf.hpp"

namespace pclor {

constexpr std::size_t kEnumerationBudget = 24;
constexpr std::size_t kStateBudget = 16;

// Complete assignments over a fixed variable list, stored as bit masks
// (bit i is the value of vars()[i]).
class StateSet {
 public:
  explicit StateSet(std::vector<Var> vars);

  void insert(std::uint64_t bits) { members_.insert(bits); }
  void insert(const Assignment& a);
  bool contains(std::uint64_t bits) const { return members_.count(bits) != 0; }
  bool contains(const Assignment& a) const;
  Assignment state(std::uint64_t bits) const;

  const std::vector<Var>& vars() const { return vars_; }
  const std::set<std::uint64_t>& members() const { return members_; }
  std::size_t size() const { return members_.size(); }
  bool subset_of(const StateSet& o) const;
  bool operator==(const StateSet& o) const { return vars_ == o.vars_ && members_ == o.members_; }

 private:
  std::uint64_t encode(const Assignment& a) const;
  std::vector<Var> vars_;
  std::set<std::uint64_t> members_;
};

// CNF over vars(f) \ W equivalent to exists W. f: one longest falsified clause
// per excluded point.
Cnf qe_bruteforce(const std::set<Var>& W, const Cnf& f);

// A* & exists W[B] == exists W[A & B] on every assignment to the free variables.
bool check_pqe(const std::set<Var>& W, const Cnf& A, const Cnf& B, const Cnf& a_star);

// States (over ts.state) satisfying f.
StateSet states_of(const TransitionSystem& ts, const Cnf& f);
// One step of `trans` (a template relation over S, X, Y, S') from `from`.
StateSet image(const TransitionSystem& ts, const Cnf& trans, const StateSet& from);
// States reachable in exactly j transitions of ts.trans.
StateSet reach_bruteforce(const TransitionSystem& ts, std::uint32_t j);

// H (over the template state variables) is a boundary formula for ts and the
// relaxation that uses trans_rlx in the j-th step only: H holds on Reach(j)
// and fails on Image_rlx(Reach(j-1)) \ Reach(j).
bool verify_boundary(const Cnf& H, const TransitionSystem& ts, const Cnf& trans_rlx,
                     std::uint32_t j);

}  // namespace pclor
