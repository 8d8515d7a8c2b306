#include "pclor/indclause.hpp"

#include "pclor/sat.hpp"

namespace pclor {

namespace {

// F & C & T & s' for some s' falsifying C; the assumptions carry the cube.
std::optional<Assignment> inductive_failure(const TransitionSystem& ts, const Cnf& F, const Clause& c,
                                            const std::vector<Lit>& cube_next) {
  SatSolver solver;
  solver.add(F);
  solver.add_clause(c);
  solver.add(ts.trans);
  if (!solver.solve(cube_next)) return std::nullopt;
  return read_state(solver, ts.state);
}

std::vector<Lit> negated_next(const TransitionSystem& ts, const Clause& c) {
  std::vector<Lit> out;
  for (Lit l : c) out.push_back(~ts.at_frame(Clause{l}, 1)[0]);
  return out;
}

}  // namespace

std::variant<Clause, Cti> make_inductive_clause(const TransitionSystem& ts, const Cnf& F,
                                                const Assignment& s) {
  if (evaluate(ts.init, s) == Truth::True) return Cti{s, s, 0};
  Clause c = longest_falsified_clause(s, ts.state);
  if (auto p = inductive_failure(ts, F, c, state_lits(ts, s, 1))) return Cti{*p, s, 0};
  return c;
}

Clause generalize(const TransitionSystem& ts, const Clause& c, const Cnf& F) {
  std::vector<Lit> lits = c.lits();
  for (std::size_t i = 0; i < lits.size() && lits.size() > 1;) {
    std::vector<Lit> fewer = lits;
    fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
    Clause d(fewer);
    if (implies(ts.init, d) && !inductive_failure(ts, F, d, negated_next(ts, d))) {
      lits = std::move(fewer);
    } else {
      ++i;
    }
  }
  return Clause(lits);
}

Cnf educat_guess_rlx(FrameChain& chain, std::uint32_t j, const std::vector<std::size_t>& guess) {
  std::vector<std::size_t> r;
  for (std::size_t i : guess)
    if (chain.kept(j - 1, i)) r.push_back(i);
  Cnf seed = makeup_clauses(chain, j, r);
  chain.relax(j - 1, r);
  return seed;
}

std::optional<std::vector<Assignment>> block_state(FrameChain& chain, const Assignment& s,
                                                   std::uint32_t level) {
  const TransitionSystem& ts = chain.ts();
  struct Entry {
    Assignment state;
    std::uint32_t level;
  };
  std::vector<Entry> stack{{s, level}};
  while (!stack.empty()) {
    const Entry top = stack.back();
    if (top.level == 0 || evaluate(ts.init, top.state) == Truth::True) {
      std::vector<Assignment> path;
      for (auto it = stack.rbegin(); it != stack.rend(); ++it) path.push_back(it->state);
      return path;
    }
    const Cnf& F = chain.h(top.level - 1);
    auto r = make_inductive_clause(ts, F, top.state);
    if (auto* cti = std::get_if<Cti>(&r)) {
      stack.push_back({cti->state, top.level - 1});
      continue;
    }
    Clause c = generalize(ts, std::get<Clause>(r), F);
    for (std::uint32_t i = 1; i <= top.level; ++i) chain.strengthen(i, c);
    stack.pop_back();
  }
  return std::nullopt;
}

std::optional<Witness> rem_bad_st_ic(FrameChain& chain, std::uint32_t j) {
  const TransitionSystem& ts = chain.ts();
  for (;;) {
    SatSolver solver;
    solver.add(chain.h(j - 1));
    solver.add(ts.trans);
    add_negation(solver, ts.at_frame(ts.prop, 1), *ts.vars);
    if (!solver.solve()) return std::nullopt;
    Assignment s = read_state(solver, ts.state);
    Assignment bad;
    for (Var v : ts.state) bad.set(v, solver.value(ts.vars->instance(v, 1)));
    if (auto path = block_state(chain, s, j - 1)) {
      path->push_back(bad);
      return convert_cex(ts, *path);
    }
  }
}

void third_co_cond_ic(FrameChain& chain) {
  for (std::uint32_t m = chain.depth(); m >= 1; --m) {
    while (auto s = co3_violation(chain, m)) {
      if (block_state(chain, *s, m - 1)) restore_for(chain, m - 1, *s);
    }
  }
}

std::optional<Cnf> fin_touch_ic(FrameChain& chain) {
  while (push_clauses(chain) > 0) third_co_cond_ic(chain);
  return detect_invariant(chain);
}

Witness pc_lor_ic(const TransitionSystem& ts, const CheckOptions& opts) {
  const std::vector<std::size_t> guess =
      opts.guess.empty() ? std::vector<std::size_t>{} : tagged_clauses(ts, opts.guess);
  EngineSteps steps;
  steps.remove_bad_states = rem_bad_st_ic;
  steps.build_frame = [&](FrameChain& c, std::uint32_t j) {
    if (guess.empty()) return fin_rlx(c, j);
    c.strengthen(j, educat_guess_rlx(c, j, guess));
    if (opts.seed_with_prop)
      c.strengthen(j, ts.prop);
    else
      fin_rlx(c, j);
  };
  steps.repair_step_condition = third_co_cond_ic;
  steps.finish = fin_touch_ic;
  return run_engine(ts, opts, steps);
}

}  // namespace pclor
