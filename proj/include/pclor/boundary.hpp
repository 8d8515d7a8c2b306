#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pclor/circuit.hpp"
#include "pclor/cnf.hpp"
#include "pclor/pqe.hpp"
#include "pclor/sat.hpp"

namespace pclor {

// H_0 .. H_j over the template state variables, and for every step k -> k+1
// the relaxed relation T^rlx_k as a subset of the clauses of T. The removed
// clauses form R_k.
class FrameChain {
 public:
  explicit FrameChain(TransitionSystem ts, PqeOptions pqe = {});

  const TransitionSystem& ts() const { return ts_; }
  const PqeOptions& pqe_options() const { return pqe_; }
  std::uint32_t depth() const { return static_cast<std::uint32_t>(h_.size() - 1); }

  const Cnf& h(std::uint32_t k) const { return h_.at(k); }
  // H_0 = I is never strengthened. Returns false if c is already present.
  bool strengthen(std::uint32_t k, const Clause& c);
  std::size_t strengthen(std::uint32_t k, const Cnf& g);

  // H_{j+1} = 1 and T^rlx_{j,j+1} = T.
  void open_frame();

  bool kept(std::uint32_t k, std::size_t i) const { return kept_.at(k)[i] != 0; }
  std::vector<std::size_t> kept_indices(std::uint32_t k) const;
  std::vector<std::size_t> removed_indices(std::uint32_t k) const;
  // T^rlx_{k,k+1} and R_{k,k+1} as template relations (S, X, Y -> S').
  Cnf trlx(std::uint32_t k) const;
  Cnf removed(std::uint32_t k) const;
  void relax(std::uint32_t k, const std::vector<std::size_t>& indices);
  void restore(std::uint32_t k, const std::vector<std::size_t>& indices);

  // I_0 & H_1 .. H_h & T^rlx_{0,1} .. T^rlx_{t-1,t}, each in its own frame.
  Cnf unrolled(std::uint32_t h, std::uint32_t t) const;

  // "C of H_{m-1} is implied by H_m". Marks are never withdrawn: H_m only grows.
  bool implied(std::uint32_t m, const Clause& c) const;
  void mark_implied(std::uint32_t m, const Clause& c);

  std::uint64_t pqe_calls = 0;

 private:
  TransitionSystem ts_;
  PqeOptions pqe_;
  std::vector<Cnf> h_;
  std::vector<std::set<Clause>> members_;
  std::vector<std::vector<char>> kept_;
  std::map<std::uint32_t, std::set<Clause>> implied_;
};

// exists W_{k-1}[I_0 & H_1..H_k & T^rlx_{0,1}..T^rlx_{k-1,k} & R] with R the
// clauses `extra` of T in step k-1 -> k (taken out of T^rlx there). W is every
// variable except S_k.
PqeTask unrolled_lhs(const FrameChain& chain, std::uint32_t k, const std::vector<std::size_t>& extra);

// Clauses over the template state that make up for dropping `r_new` from
// T^rlx_{k-1,k}. Does not modify the chain.
Cnf makeup_clauses(FrameChain& chain, std::uint32_t k, const std::vector<std::size_t>& r_new);

struct CoReport {
  struct Frame {
    bool init = true;     // I -> H_k
    bool prop = true;     // H_k -> P
    bool step = true;     // H_{k-1} & T^rlx_{k-1,k} -> H_k'
    bool monotone = true; // H_{k-1} -> H_k
  };
  std::vector<Frame> frames;
  bool ok() const;
  std::string describe() const;
};

// Condition 2 is checked for frames >= 1 only when `with_prop` is set; the
// frontier frame does not satisfy it until FinRlx finishes.
CoReport check_co(const FrameChain& chain, bool with_prop = true);

// First m with H_m -> H_{m-1}; returns H_{m-1}.
std::optional<Cnf> detect_invariant(FrameChain& chain);

// Asserts NOT f, with one fresh selector variable per clause of f. Selectors
// are numbered above every variable of `table`; create frame instances first.
void add_negation(SatSolver& solver, const Cnf& f, const VarTable& table);

// Complete state over `vars` read from a satisfied solver.
Assignment read_state(const SatSolver& solver, const std::vector<Var>& vars);

// Cube literals of a state, moved to `frame`.
std::vector<Lit> state_lits(const TransitionSystem& ts, const Assignment& s, std::uint32_t frame);

}  // namespace pclor
