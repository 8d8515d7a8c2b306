#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pclor/boundary.hpp"
#include "pclor/circuit.hpp"
#include "pclor/error.hpp"
#include "pclor/pqe.hpp"

namespace pclor {

struct TraceStep {
  Assignment state;   // over ts.state
  Assignment inputs;  // over ts.inputs; empty in the last step
};

struct Witness {
  enum class Kind { Counterexample, Invariant };
  Kind kind = Kind::Invariant;
  std::vector<TraceStep> trace;
  Cnf invariant;  // over ts.state
  std::uint32_t frames = 0;
  std::vector<std::size_t> frame_sizes;  // clauses of H_0 .. H_j at the end of the run
};

struct CheckOptions {
  std::uint32_t max_frames = 0;  // 0: 2^|S| + 1
  PqeOptions pqe;
  // Tag of the clauses of T dropped up front in every new frame ("" for none).
  std::string guess;
  // IC engine with a guess: H_j = seed & P instead of running FinRlx.
  bool seed_with_prop = true;
  // Re-check every H_k with the brute-force boundary oracle after each iteration.
  bool oracle_check = false;
  std::function<void(const FrameChain&)> on_iteration;
};

// Carries the chain at the point where a budget ran out.
class CheckAborted : public BudgetExceeded {
 public:
  CheckAborted(const std::string& what, std::shared_ptr<const FrameChain> chain)
      : BudgetExceeded(what), chain_(std::move(chain)) {}
  const FrameChain* chain() const { return chain_.get(); }

 private:
  std::shared_ptr<const FrameChain> chain_;
};

std::uint32_t default_max_frames(const TransitionSystem& ts);

// Indices of the clauses of T carrying `tag`.
std::vector<std::size_t> tagged_clauses(const TransitionSystem& ts, const std::string& tag);

// The steps of one iteration of the main loop; the two engines differ only here.
struct EngineSteps {
  std::function<std::optional<Witness>(FrameChain&, std::uint32_t)> remove_bad_states;
  // Builds H_j in the freshly opened frame j.
  std::function<void(FrameChain&, std::uint32_t)> build_frame;
  std::function<void(FrameChain&)> repair_step_condition;
  std::function<std::optional<Cnf>(FrameChain&)> finish;
};

Witness run_engine(const TransitionSystem& ts, const CheckOptions& opts, const EngineSteps& steps);

// ts must be stuttered.
Witness pc_lor(const TransitionSystem& ts, const CheckOptions& opts = {});

// Strengthens H_{j-1} until H_{j-1} & T -> P'. Returns a counterexample when a
// relaxed-chain trace from I reaches a bad state.
std::optional<Witness> rem_bad_st(FrameChain& chain, std::uint32_t j);

// Builds H_j (the frame must be open): drops `guess` first, then relaxes
// T^rlx_{j-1,j} one bad H_j-state at a time until H_j -> P.
void fin_rlx(FrameChain& chain, std::uint32_t j, const std::vector<std::size_t>& guess = {});

// Clauses of T^rlx_{k-1,k} (indices into T) whose removal lets `target` be
// reached in step k of the relaxed chain.
std::vector<std::size_t> select_relaxation(const FrameChain& chain, std::uint32_t k,
                                           const Assignment& target);

// Relaxes and makes up so that `target` leaves H_k.
void relax_and_makeup(FrameChain& chain, std::uint32_t k, const Assignment& target);

// Removes `s` from H_level, relaxing further down the chain as needed. When
// the backward search reaches H_0 = I, returns the relaxed-chain path s_0 .. s.
std::optional<std::vector<Assignment>> exclude_state(FrameChain& chain, const Assignment& s,
                                                     std::uint32_t level);

// H_{k-1}-state one T^rlx_{k-1,k} step before `s`.
std::optional<Assignment> predecessor(const FrameChain& chain, const Assignment& s, std::uint32_t k);

// H_{m-1}-state with a T^rlx_{m-1,m}-successor outside H_m.
std::optional<Assignment> co3_violation(const FrameChain& chain, std::uint32_t m);

// Puts back removed clauses of step k so that no successor of the reachable
// state `s` leaves H_{k+1}.
void restore_for(FrameChain& chain, std::uint32_t k, const Assignment& s);

void third_co_cond(FrameChain& chain);

// Copies clauses of H_m into earlier frames until a frame implies them.
// Returns the number of clauses added.
std::size_t push_clauses(FrameChain& chain);

std::optional<Cnf> fin_touch(FrameChain& chain);

// Replaces a relaxed-chain trace s_0 .. s_n (s_n bad) by a trace of T with the
// same length that ends in s_n.
Witness convert_cex(const TransitionSystem& ts, const std::vector<Assignment>& states);

// Trace of exactly `depth` transitions from I to a bad state.
std::optional<std::vector<TraceStep>> bmc(const TransitionSystem& ts, std::uint32_t depth);

// Re-checks a witness against the system it was produced for.
bool witness_ok(const TransitionSystem& ts, const Witness& w);

}  // namespace pclor
