#pragma once

// Reachability facts computed by enumeration, for comparing checker verdicts.

#include <cstdint>

#include "pclor/circuit.hpp"
#include "pclor/qe_oracle.hpp"
#include "pclor/sat.hpp"
#include "support.hpp"

namespace pclor::testing {

// Shortest number of transitions to a bad state, or -1. ts must be stuttered
// so that the exact-j reach sets grow monotonically.
inline int shortest_cex(const TransitionSystem& ts) {
  StateSet r = states_of(ts, ts.init);
  for (int j = 0;; ++j) {
    for (std::uint64_t s : r.members())
      if (!holds(ts.prop, r.state(s))) return j;
    StateSet next = image(ts, ts.trans, r);
    if (next == r) return -1;
    r = std::move(next);
  }
}

// Projection of f onto the state variables of `frame`, by one SAT call per state.
inline StateSet project_states(const TransitionSystem& ts, const Cnf& f, std::uint32_t frame) {
  StateSet out(ts.state);
  std::vector<Var> at = ts.state_at(frame);
  for (std::uint64_t b = 0; b < (1ull << ts.state.size()); ++b) {
    Assignment a;
    for (std::size_t i = 0; i < at.size(); ++i) a.set(at[i], (b >> i) & 1u);
    if (solve(f, a).sat) out.insert(b);
  }
  return out;
}

inline Cnf equality(Var a, Var b) {
  return Cnf{Clause{neg(a), pos(b)}, Clause{pos(a), neg(b)}};
}

inline bool equivalent(const Cnf& a, const Cnf& b) { return implies(a, b) && implies(b, a); }

}  // namespace pclor::testing
