#include "pclor/boundary.hpp"

#include <sstream>
#include <stdexcept>

namespace pclor {

FrameChain::FrameChain(TransitionSystem ts, PqeOptions pqe) : ts_(std::move(ts)), pqe_(pqe) {
  Cnf h0 = ts_.init;
  for (Var v : ts_.state) h0.declare(v);
  h_.push_back(std::move(h0));
  members_.emplace_back(ts_.init.begin(), ts_.init.end());
}

bool FrameChain::strengthen(std::uint32_t k, const Clause& c) {
  if (k == 0) throw std::logic_error("H_0 is the initial-state formula");
  if (!members_.at(k).insert(c).second) return false;
  h_[k].add(c);
  return true;
}

std::size_t FrameChain::strengthen(std::uint32_t k, const Cnf& g) {
  std::size_t n = 0;
  for (const Clause& c : g) n += strengthen(k, c) ? 1 : 0;
  return n;
}

void FrameChain::open_frame() {
  Cnf h;
  for (Var v : ts_.state) h.declare(v);
  h_.push_back(std::move(h));
  members_.emplace_back();
  kept_.emplace_back(ts_.trans.size(), 1);
}

std::vector<std::size_t> FrameChain::kept_indices(std::uint32_t k) const {
  std::vector<std::size_t> out;
  const auto& m = kept_.at(k);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (m[i]) out.push_back(i);
  return out;
}

std::vector<std::size_t> FrameChain::removed_indices(std::uint32_t k) const {
  std::vector<std::size_t> out;
  const auto& m = kept_.at(k);
  for (std::size_t i = 0; i < m.size(); ++i)
    if (!m[i]) out.push_back(i);
  return out;
}

namespace {

Cnf select(const TransitionSystem& ts, const std::vector<std::size_t>& idx) {
  Cnf out;
  for (std::size_t i : idx) out.add(ts.trans[i]);
  for (Var v : ts.trans.scope()) out.declare(v);
  return out;
}

}  // namespace

Cnf FrameChain::trlx(std::uint32_t k) const { return select(ts_, kept_indices(k)); }
Cnf FrameChain::removed(std::uint32_t k) const { return select(ts_, removed_indices(k)); }

void FrameChain::relax(std::uint32_t k, const std::vector<std::size_t>& indices) {
  for (std::size_t i : indices) kept_.at(k).at(i) = 0;
}

void FrameChain::restore(std::uint32_t k, const std::vector<std::size_t>& indices) {
  for (std::size_t i : indices) kept_.at(k).at(i) = 1;
}

Cnf FrameChain::unrolled(std::uint32_t h, std::uint32_t t) const {
  Cnf f = h_[0];
  for (std::uint32_t k = 1; k <= h; ++k) f.add_all(ts_.at_frame(h_.at(k), k));
  for (std::uint32_t k = 0; k < t; ++k) f.add_all(ts_.frame_clauses(kept_indices(k), k));
  return f;
}

bool FrameChain::implied(std::uint32_t m, const Clause& c) const {
  auto it = implied_.find(m);
  return it != implied_.end() && it->second.count(c) != 0;
}

void FrameChain::mark_implied(std::uint32_t m, const Clause& c) { implied_[m].insert(c); }

PqeTask unrolled_lhs(const FrameChain& chain, std::uint32_t k, const std::vector<std::size_t>& extra) {
  if (k < 1 || k > chain.depth()) throw std::out_of_range("unrolled_lhs: frame out of range");
  const TransitionSystem& ts = chain.ts();
  std::set<std::size_t> r(extra.begin(), extra.end());
  std::vector<std::size_t> rest;
  for (std::size_t i : chain.kept_indices(k - 1))
    if (!r.count(i)) rest.push_back(i);

  PqeTask task;
  task.A = ts.frame_clauses(extra, k - 1);
  task.B = chain.unrolled(k, k - 1);
  task.B.add_all(ts.frame_clauses(rest, k - 1));
  for (Var v : ts.step_vars()) task.B.declare(ts.vars->instance(v, k - 1));

  std::vector<Var> sk = ts.state_at(k);
  std::set<Var> v(sk.begin(), sk.end());
  for (const Cnf* f : {&task.A, &task.B})
    for (Var x : f->scope())
      if (!v.count(x)) task.W.insert(x);
  return task;
}

Cnf makeup_clauses(FrameChain& chain, std::uint32_t k, const std::vector<std::size_t>& r_new) {
  Cnf g;
  for (Var v : chain.ts().state) g.declare(v);
  if (r_new.empty()) return g;
  PqeTask task = unrolled_lhs(chain, k, r_new);
  ++chain.pqe_calls;
  PqeResult res = take_out(task, chain.pqe_options());
  auto back = frame_offset(-static_cast<int>(k));
  for (const Clause& c : res.a_star) g.add(rename_frame(c, *chain.ts().vars, back));
  return g;
}

bool CoReport::ok() const {
  for (const Frame& f : frames)
    if (!f.init || !f.prop || !f.step || !f.monotone) return false;
  return true;
}

std::string CoReport::describe() const {
  std::ostringstream os;
  for (std::size_t k = 0; k < frames.size(); ++k) {
    const Frame& f = frames[k];
    if (!f.init) os << "frame " << k << ": condition 1 (I -> H) fails\n";
    if (!f.prop) os << "frame " << k << ": condition 2 (H -> P) fails\n";
    if (!f.step) os << "frame " << k << ": condition 3 (H_{k-1} & Trlx -> H_k') fails\n";
    if (!f.monotone) os << "frame " << k << ": condition 4 (H_{k-1} -> H_k) fails\n";
  }
  return os.str();
}

CoReport check_co(const FrameChain& chain, bool with_prop) {
  const TransitionSystem& ts = chain.ts();
  CoReport rep;
  for (std::uint32_t k = 0; k <= chain.depth(); ++k) {
    CoReport::Frame f;
    f.init = implies(ts.init, chain.h(k));
    if (k == 0 || with_prop) f.prop = implies(chain.h(k), ts.prop);
    if (k > 0) {
      Cnf lhs = chain.h(k - 1);
      lhs.add_all(chain.trlx(k - 1));
      f.step = implies(lhs, ts.at_frame(chain.h(k), 1));
      f.monotone = implies(chain.h(k - 1), chain.h(k));
    }
    rep.frames.push_back(f);
  }
  return rep;
}

std::optional<Cnf> detect_invariant(FrameChain& chain) {
  for (std::uint32_t m = 1; m <= chain.depth(); ++m) {
    SatSolver s;
    s.add(chain.h(m));
    bool all = true;
    for (const Clause& c : chain.h(m - 1)) {
      if (chain.implied(m, c)) continue;
      std::vector<Lit> assume;
      for (Lit l : c) assume.push_back(~l);
      if (s.solve(assume)) {
        all = false;
        break;
      }
      chain.mark_implied(m, c);
    }
    if (all) return chain.h(m - 1);
  }
  return std::nullopt;
}

void add_negation(SatSolver& solver, const Cnf& f, const VarTable& table) {
  solver.ensure_var(table.max_var());
  std::vector<Lit> any;
  for (const Clause& c : f) {
    Var sel = solver.new_var();
    for (Lit l : c) {
      Lit bin[2] = {neg(sel), ~l};
      solver.add_clause(std::span<const Lit>(bin, 2));
    }
    any.push_back(pos(sel));
  }
  solver.add_clause(std::span<const Lit>(any));
}

Assignment read_state(const SatSolver& solver, const std::vector<Var>& vars) {
  Assignment a;
  for (Var v : vars) a.set(v, solver.value(v));
  return a;
}

std::vector<Lit> state_lits(const TransitionSystem& ts, const Assignment& s, std::uint32_t frame) {
  std::vector<Lit> out;
  for (auto [v, b] : s) out.push_back(Lit(ts.vars->instance(v, frame), !b));
  return out;
}

}  // namespace pclor
