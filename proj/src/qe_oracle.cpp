#include "pclor/qe_oracle.hpp"

#include <algorithm>
#include <stdexcept>

#include "pclor/error.hpp"
#include "pclor/sat.hpp"

namespace pclor {

StateSet::StateSet(std::vector<Var> vars) : vars_(std::move(vars)) {
  if (vars_.size() > 63) throw BudgetExceeded("state set over more than 63 variables");
}

std::uint64_t StateSet::encode(const Assignment& a) const {
  std::uint64_t bits = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i)
    if (a.at(vars_[i])) bits |= 1ull << i;
  return bits;
}

void StateSet::insert(const Assignment& a) { members_.insert(encode(a)); }
bool StateSet::contains(const Assignment& a) const { return contains(encode(a)); }

Assignment StateSet::state(std::uint64_t bits) const {
  Assignment a;
  for (std::size_t i = 0; i < vars_.size(); ++i) a.set(vars_[i], (bits >> i) & 1u);
  return a;
}

bool StateSet::subset_of(const StateSet& o) const {
  if (vars_ != o.vars_) throw std::invalid_argument("state sets over different variables");
  return std::includes(o.members_.begin(), o.members_.end(), members_.begin(), members_.end());
}

namespace {

// Clause as two masks over a local variable numbering; satisfied by point x
// iff (pos & x) | (neg & ~x) is nonzero.
struct MaskClause {
  std::uint64_t pos = 0, neg = 0;
};

std::vector<MaskClause> compile(const Cnf& f, const std::vector<Var>& order) {
  std::vector<MaskClause> out;
  for (const Clause& c : f) {
    MaskClause m;
    for (Lit l : c) {
      auto it = std::lower_bound(order.begin(), order.end(), l.var());
      if (it == order.end() || *it != l.var()) throw InternalError("variable outside enumeration order");
      std::uint64_t bit = 1ull << (it - order.begin());
      (l.positive() ? m.pos : m.neg) |= bit;
    }
    out.push_back(m);
  }
  return out;
}

bool holds(const std::vector<MaskClause>& f, std::uint64_t x) {
  for (const MaskClause& c : f)
    if (((c.pos & x) | (c.neg & ~x)) == 0) return false;
  return true;
}

// Enumeration order: free variables in the low bits, quantified above them.
struct Split {
  std::vector<Var> free, quantified, order;
};

Split split(const std::set<Var>& scope, const std::set<Var>& W) {
  Split s;
  for (Var v : scope) (W.count(v) ? s.quantified : s.free).push_back(v);
  if (scope.size() > kEnumerationBudget)
    throw BudgetExceeded("enumeration over " + std::to_string(scope.size()) + " variables");
  s.order.assign(scope.begin(), scope.end());
  return s;
}

// Point over the sorted `order` built from a free part and a quantified part.
std::uint64_t compose(const Split& s, std::uint64_t vbits, std::uint64_t wbits) {
  std::uint64_t x = 0;
  auto place = [&](const std::vector<Var>& vars, std::uint64_t bits) {
    for (std::size_t i = 0; i < vars.size(); ++i)
      if ((bits >> i) & 1u) {
        auto pos = std::lower_bound(s.order.begin(), s.order.end(), vars[i]) - s.order.begin();
        x |= 1ull << pos;
      }
  };
  place(s.free, vbits);
  place(s.quantified, wbits);
  return x;
}

bool exists(const Split& s, const std::vector<MaskClause>& f, std::uint64_t vbits) {
  for (std::uint64_t w = 0; w < (1ull << s.quantified.size()); ++w)
    if (holds(f, compose(s, vbits, w))) return true;
  return false;
}

}  // namespace

Cnf qe_bruteforce(const std::set<Var>& W, const Cnf& f) {
  Split s = split(f.scope(), W);
  auto cf = compile(f, s.order);
  Cnf out;
  for (Var v : s.free) out.declare(v);
  for (std::uint64_t vb = 0; vb < (1ull << s.free.size()); ++vb) {
    if (exists(s, cf, vb)) continue;
    std::vector<Lit> lits;
    for (std::size_t i = 0; i < s.free.size(); ++i) lits.push_back(Lit(s.free[i], (vb >> i) & 1u));
    out.add(Clause(lits));
  }
  return out;
}

bool check_pqe(const std::set<Var>& W, const Cnf& A, const Cnf& B, const Cnf& a_star) {
  for (Var v : a_star.scope())
    if (W.count(v)) throw std::invalid_argument("A* mentions quantified variable " + std::to_string(v.id));
  std::set<Var> scope = A.scope();
  scope.insert(B.scope().begin(), B.scope().end());
  scope.insert(a_star.scope().begin(), a_star.scope().end());
  Split s = split(scope, W);
  Cnf ab = A;
  ab.add_all(B);
  auto cab = compile(ab, s.order), cb = compile(B, s.order), cstar = compile(a_star, s.order);
  for (std::uint64_t vb = 0; vb < (1ull << s.free.size()); ++vb) {
    bool lhs = holds(cstar, compose(s, vb, 0)) && exists(s, cb, vb);
    if (lhs != exists(s, cab, vb)) return false;
  }
  return true;
}

StateSet states_of(const TransitionSystem& ts, const Cnf& f) {
  if (ts.state.size() > kStateBudget) throw BudgetExceeded("too many state bits");
  StateSet out(ts.state);
  for (std::uint64_t b = 0; b < (1ull << ts.state.size()); ++b)
    if (evaluate(f, out.state(b)) == Truth::True) out.insert(b);
  return out;
}

StateSet image(const TransitionSystem& ts, const Cnf& trans, const StateSet& from) {
  if (ts.state.size() > kStateBudget) throw BudgetExceeded("too many state bits");
  SatSolver s;
  s.add(trans);
  StateSet out(ts.state);
  std::vector<Lit> assume;
  for (std::uint64_t src : from.members()) {
    // Successors already found are blocked under an activation literal.
    Lit act = pos(s.new_var());
    assume.clear();
    for (std::size_t i = 0; i < ts.state.size(); ++i)
      assume.push_back(Lit(ts.state[i], !((src >> i) & 1u)));
    assume.push_back(act);
    for (std::uint64_t dst : out.members()) {
      std::vector<Lit> block{~act};
      for (std::size_t i = 0; i < ts.next.size(); ++i) block.push_back(Lit(ts.next[i], (dst >> i) & 1u));
      s.add_clause(block);
    }
    while (s.solve(assume)) {
      std::uint64_t dst = 0;
      std::vector<Lit> block{~act};
      for (std::size_t i = 0; i < ts.next.size(); ++i) {
        bool b = s.value(ts.next[i]);
        if (b) dst |= 1ull << i;
        block.push_back(Lit(ts.next[i], b));
      }
      out.insert(dst);
      if (ts.next.empty()) break;
      s.add_clause(block);
    }
  }
  return out;
}

StateSet reach_bruteforce(const TransitionSystem& ts, std::uint32_t j) {
  StateSet r = states_of(ts, ts.init);
  for (std::uint32_t i = 0; i < j; ++i) {
    StateSet next = image(ts, ts.trans, r);
    if (next == r) break;  // a fixpoint repeats forever
    r = std::move(next);
  }
  return r;
}

bool verify_boundary(const Cnf& H, const TransitionSystem& ts, const Cnf& trans_rlx,
                     std::uint32_t j) {
  StateSet reach = reach_bruteforce(ts, j);
  StateSet relaxed = j == 0 ? reach : image(ts, trans_rlx, reach_bruteforce(ts, j - 1));
  StateSet h = states_of(ts, H);
  for (std::uint64_t s : reach.members())
    if (!h.contains(s)) return false;
  for (std::uint64_t s : relaxed.members())
    if (!reach.contains(s) && h.contains(s)) return false;
  return true;
}

}  // namespace pclor
