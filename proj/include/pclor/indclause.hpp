#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "pclor/boundary.hpp"
#include "pclor/circuit.hpp"
#include "pclor/pclor.hpp"

namespace pclor {

// `state` is an F-state with a T-successor `target` that had to be excluded.
struct Cti {
  Assignment state;
  Assignment target;
  std::uint32_t frame = 0;
};

// Clause C with C(s) = 0, I -> C and F & C & T -> C'. When s is an initial
// state, the Cti has state == target == s.
std::variant<Clause, Cti> make_inductive_clause(const TransitionSystem& ts, const Cnf& F,
                                                const Assignment& s);

// Drops literals in ascending variable order while the clause stays implied
// by I and inductive relative to F.
Clause generalize(const TransitionSystem& ts, const Clause& c, const Cnf& F);

// Removes the `guess` clauses from T^rlx_{j-1,j} and returns the clauses that
// make up for them over the template state. The frame must be open.
Cnf educat_guess_rlx(FrameChain& chain, std::uint32_t j, const std::vector<std::size_t>& guess);

// Excludes s from H_level with inductive clauses. When the obligations reach
// an initial state, returns the T-path from it to s.
std::optional<std::vector<Assignment>> block_state(FrameChain& chain, const Assignment& s,
                                                   std::uint32_t level);

std::optional<Witness> rem_bad_st_ic(FrameChain& chain, std::uint32_t j);
void third_co_cond_ic(FrameChain& chain);
std::optional<Cnf> fin_touch_ic(FrameChain& chain);

Witness pc_lor_ic(const TransitionSystem& ts, const CheckOptions& opts = {});

}  // namespace pclor
