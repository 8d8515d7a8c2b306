#include "pclor/pclor.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

#include "pclor/qe_oracle.hpp"
#include "pclor/sat.hpp"

namespace pclor {

namespace {

Assignment read_frame(const SatSolver& s, const TransitionSystem& ts, const std::vector<Var>& vars,
                      std::uint32_t frame) {
  Assignment a;
  for (Var v : vars) a.set(v, s.value(ts.vars->instance(v, frame)));
  return a;
}

// bad(S): asserted through selectors, so it must be added last.
bool bad_in(SatSolver& s, const TransitionSystem& ts, std::uint32_t frame) {
  add_negation(s, ts.at_frame(ts.prop, frame), *ts.vars);
  return s.solve();
}

}  // namespace

std::uint32_t default_max_frames(const TransitionSystem& ts) {
  if (ts.state.size() >= 20) return (1u << 20) + 1;
  return (1u << ts.state.size()) + 1;
}

std::vector<std::size_t> tagged_clauses(const TransitionSystem& ts, const std::string& tag) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < ts.tags.size(); ++i)
    if (ts.tags[i] == tag) out.push_back(i);
  return out;
}

std::vector<std::size_t> select_relaxation(const FrameChain& chain, std::uint32_t k,
                                           const Assignment& target) {
  const TransitionSystem& ts = chain.ts();
  std::vector<std::size_t> kept = chain.kept_indices(k - 1);
  Cnf hard = chain.unrolled(k - 1, k - 1);
  Cnf soft = ts.frame_clauses(kept, k - 1);
  Assignment goal;
  for (auto [v, b] : target) goal.set(ts.vars->instance(v, k), b);
  RelaxResult r;
  try {
    r = max_relax_solve(hard, soft, goal);
  } catch (const std::invalid_argument&) {
    throw Error("target unreachable under any relaxation");
  }
  if (r.falsified_soft.empty()) throw std::logic_error("select_relaxation: target already reachable");
  std::vector<std::size_t> out;
  for (std::size_t i : r.falsified_soft) out.push_back(kept[i]);
  return out;
}

void relax_and_makeup(FrameChain& chain, std::uint32_t k, const Assignment& target) {
  std::vector<std::size_t> r = select_relaxation(chain, k, target);
  Cnf g = makeup_clauses(chain, k, r);
  chain.relax(k - 1, r);
  chain.strengthen(k, g);
  if (evaluate(chain.h(k), target) != Truth::False)
    throw InternalError("makeup clauses do not exclude the target state");
}

std::optional<Assignment> predecessor(const FrameChain& chain, const Assignment& s, std::uint32_t k) {
  const TransitionSystem& ts = chain.ts();
  SatSolver solver;
  solver.add(chain.h(k - 1));
  solver.add(chain.trlx(k - 1));
  std::vector<Lit> assume = state_lits(ts, s, 1);
  if (!solver.solve(assume)) return std::nullopt;
  return read_state(solver, ts.state);
}

std::optional<std::vector<Assignment>> exclude_state(FrameChain& chain, const Assignment& s,
                                                     std::uint32_t level) {
  struct Entry {
    Assignment state;
    std::uint32_t level;
  };
  std::vector<Entry> stack{{s, level}};
  while (!stack.empty()) {
    const Entry top = stack.back();
    if (top.level == 0) {
      std::vector<Assignment> path;
      for (auto it = stack.rbegin(); it != stack.rend(); ++it) path.push_back(it->state);
      return path;
    }
    if (auto p = predecessor(chain, top.state, top.level)) {
      stack.push_back({*p, top.level - 1});
      continue;
    }
    relax_and_makeup(chain, top.level, top.state);
    stack.pop_back();
  }
  return std::nullopt;
}

std::optional<Witness> rem_bad_st(FrameChain& chain, std::uint32_t j) {
  const TransitionSystem& ts = chain.ts();
  for (;;) {
    SatSolver solver;
    solver.add(chain.h(j - 1));
    solver.add(ts.trans);
    if (!bad_in(solver, ts, 1)) return std::nullopt;
    Assignment s = read_state(solver, ts.state);
    Assignment bad = read_frame(solver, ts, ts.state, 1);
    if (auto path = exclude_state(chain, s, j - 1)) {
      path->push_back(bad);
      return convert_cex(ts, *path);
    }
  }
}

void fin_rlx(FrameChain& chain, std::uint32_t j, const std::vector<std::size_t>& guess) {
  const TransitionSystem& ts = chain.ts();
  if (!guess.empty()) {
    std::vector<std::size_t> r;
    for (std::size_t i : guess)
      if (chain.kept(j - 1, i)) r.push_back(i);
    Cnf g = makeup_clauses(chain, j, r);
    chain.relax(j - 1, r);
    chain.strengthen(j, g);
  }
  for (;;) {
    SatSolver solver;
    solver.add(chain.h(j));
    if (!bad_in(solver, ts, 0)) return;
    relax_and_makeup(chain, j, read_state(solver, ts.state));
  }
}

std::optional<Assignment> co3_violation(const FrameChain& chain, std::uint32_t m) {
  const TransitionSystem& ts = chain.ts();
  SatSolver solver;
  solver.add(chain.h(m - 1));
  solver.add(chain.trlx(m - 1));
  add_negation(solver, ts.at_frame(chain.h(m), 1), *ts.vars);
  if (!solver.solve()) return std::nullopt;
  return read_state(solver, ts.state);
}

void restore_for(FrameChain& chain, std::uint32_t k, const Assignment& s) {
  const TransitionSystem& ts = chain.ts();
  std::vector<std::size_t> removed = chain.removed_indices(k);
  SatSolver solver;
  solver.add(chain.trlx(k));
  Cnf h_next = ts.at_frame(chain.h(k + 1), 1);
  solver.ensure_var(ts.vars->max_var());
  std::vector<Lit> assume = state_lits(ts, s, 0);
  std::vector<Var> sel;
  for (std::size_t i : removed) {
    Var x = solver.new_var();
    sel.push_back(x);
    std::vector<Lit> lits{neg(x)};
    lits.insert(lits.end(), ts.trans[i].begin(), ts.trans[i].end());
    solver.add_clause(std::span<const Lit>(lits));
    assume.push_back(pos(x));
  }
  add_negation(solver, h_next, *ts.vars);
  if (solver.solve(assume))
    throw InternalError("a reachable state leaves the next frame under T");
  std::set<Lit> core(solver.core().begin(), solver.core().end());
  std::vector<std::size_t> back;
  for (std::size_t i = 0; i < removed.size(); ++i)
    if (core.count(pos(sel[i]))) back.push_back(removed[i]);
  chain.restore(k, back);
}

void third_co_cond(FrameChain& chain) {
  for (std::uint32_t m = chain.depth(); m >= 1; --m) {
    while (auto s = co3_violation(chain, m)) {
      if (exclude_state(chain, *s, m - 1)) restore_for(chain, m - 1, *s);
    }
  }
}

std::size_t push_clauses(FrameChain& chain) {
  std::size_t added = 0;
  for (std::uint32_t m = chain.depth(); m >= 2; --m) {
    std::vector<Clause> clauses(chain.h(m).begin(), chain.h(m).end());
    for (const Clause& c : clauses) {
      for (std::uint32_t i = m - 1; i >= 1; --i) {
        if (implies(chain.h(i), c)) break;
        chain.strengthen(i, c);
        ++added;
      }
    }
  }
  return added;
}

std::optional<Cnf> fin_touch(FrameChain& chain) {
  while (push_clauses(chain) > 0) third_co_cond(chain);
  return detect_invariant(chain);
}

Witness convert_cex(const TransitionSystem& ts, const std::vector<Assignment>& states) {
  if (states.empty()) throw std::invalid_argument("convert_cex: empty trace");
  const std::uint32_t n = static_cast<std::uint32_t>(states.size() - 1);
  Cnf f = ts.init;
  for (std::uint32_t i = 0; i < n; ++i) f.add_all(frame(ts, i));
  std::vector<Lit> assume = state_lits(ts, states.back(), n);
  SatSolver solver;
  solver.add(f);
  if (!solver.solve(assume)) throw InternalError("relaxed counterexample has no counterpart under T");
  Witness w;
  w.kind = Witness::Kind::Counterexample;
  w.frames = n;
  for (std::uint32_t i = 0; i <= n; ++i) {
    TraceStep st;
    st.state = read_frame(solver, ts, ts.state, i);
    if (i < n) st.inputs = read_frame(solver, ts, ts.inputs, i);
    w.trace.push_back(std::move(st));
  }
  return w;
}

std::optional<std::vector<TraceStep>> bmc(const TransitionSystem& ts, std::uint32_t depth) {
  Cnf f = ts.init;
  for (std::uint32_t i = 0; i < depth; ++i) f.add_all(frame(ts, i));
  SatSolver solver;
  solver.add(f);
  if (!bad_in(solver, ts, depth)) return std::nullopt;
  std::vector<TraceStep> trace;
  for (std::uint32_t i = 0; i <= depth; ++i) {
    TraceStep st;
    st.state = read_frame(solver, ts, ts.state, i);
    if (i < depth) st.inputs = read_frame(solver, ts, ts.inputs, i);
    trace.push_back(std::move(st));
  }
  return trace;
}

bool witness_ok(const TransitionSystem& ts, const Witness& w) {
  if (w.kind == Witness::Kind::Invariant) {
    Cnf lhs = w.invariant;
    lhs.add_all(ts.trans);
    return implies(ts.init, w.invariant) && implies(w.invariant, ts.prop) &&
           implies(lhs, ts.at_frame(w.invariant, 1));
  }
  if (w.trace.empty()) return false;
  if (evaluate(ts.init, w.trace.front().state) != Truth::True) return false;
  for (std::size_t i = 0; i + 1 < w.trace.size(); ++i) {
    std::vector<Lit> assume = state_lits(ts, w.trace[i].state, 0);
    for (Lit l : state_lits(ts, w.trace[i].inputs, 0)) assume.push_back(l);
    for (Lit l : state_lits(ts, w.trace[i + 1].state, 1)) assume.push_back(l);
    if (!solve(ts.trans, assume).sat) return false;
  }
  return evaluate(ts.prop, w.trace.back().state) == Truth::False;
}

Witness run_engine(const TransitionSystem& ts, const CheckOptions& opts, const EngineSteps& steps) {
  if (!ts.stutter && !ts.native_stuttering)
    throw std::invalid_argument("the checker needs a stuttering transition system");
  {
    SatSolver solver;
    solver.add(ts.init);
    if (!solver.solve()) {
      Witness w;
      w.invariant = ts.init;
      return w;
    }
    if (bad_in(solver, ts, 0)) return convert_cex(ts, {read_state(solver, ts.state)});
  }
  const std::uint32_t max_frames = opts.max_frames ? opts.max_frames : default_max_frames(ts);
  auto chain = std::make_shared<FrameChain>(ts, opts.pqe);
  auto done = [&](Witness w) {
    for (std::uint32_t k = 0; k <= chain->depth(); ++k) w.frame_sizes.push_back(chain->h(k).size());
    return w;
  };
  try {
    for (std::uint32_t j = 1;; ++j) {
      if (j > max_frames) throw CheckAborted("frame bound reached", chain);
      if (auto cex = steps.remove_bad_states(*chain, j)) return done(*cex);
      chain->open_frame();
      steps.build_frame(*chain, j);
      steps.repair_step_condition(*chain);
      std::optional<Cnf> inv = steps.finish(*chain);
      if (opts.oracle_check) {
        for (std::uint32_t k = 1; k <= j; ++k)
          if (!verify_boundary(chain->h(k), ts, chain->trlx(k - 1), k))
            throw InternalError("H_" + std::to_string(k) + " is not a boundary formula");
      }
      if (opts.on_iteration) opts.on_iteration(*chain);
      if (inv) {
        Witness w;
        w.invariant = *inv;
        w.frames = j;
        return done(w);
      }
    }
  } catch (const CheckAborted&) {
    throw;
  } catch (const BudgetExceeded& e) {
    throw CheckAborted(e.what(), chain);
  }
}

Witness pc_lor(const TransitionSystem& ts, const CheckOptions& opts) {
  const std::vector<std::size_t> guess =
      opts.guess.empty() ? std::vector<std::size_t>{} : tagged_clauses(ts, opts.guess);
  EngineSteps steps;
  steps.remove_bad_states = rem_bad_st;
  steps.build_frame = [&](FrameChain& c, std::uint32_t j) { fin_rlx(c, j, guess); };
  steps.repair_step_condition = third_co_cond;
  steps.finish = fin_touch;
  return run_engine(ts, opts, steps);
}

}  // namespace pclor
