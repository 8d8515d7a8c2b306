#include "pclor/sat.hpp"

#include <algorithm>
#include <stdexcept>

namespace pclor {

namespace {

double luby(double y, int x) {
  int size = 1, seq = 0;
  while (size < x + 1) {
    ++seq;
    size = 2 * size + 1;
  }
  while (size - 1 != x) {
    size = (size - 1) >> 1;
    --seq;
    x = x % size;
  }
  double r = 1;
  for (int i = 0; i < seq; ++i) r *= y;
  return r;
}

}  // namespace

SatSolver::SatSolver() {
  // Slot 0 is the unused variable id.
  assigns_.push_back(kUndef);
  level_.push_back(0);
  reason_.push_back(kNoRef);
  phase_.push_back(true);
  seen_.push_back(0);
  activity_.push_back(0);
  heap_pos_.push_back(-1);
  watches_.resize(2);
}

Var SatSolver::new_var() {
  Var v{static_cast<std::uint32_t>(assigns_.size())};
  ensure_var(v);
  return v;
}

void SatSolver::ensure_var(Var v) {
  while (assigns_.size() <= v.id) {
    auto id = static_cast<std::uint32_t>(assigns_.size());
    assigns_.push_back(kUndef);
    level_.push_back(0);
    reason_.push_back(kNoRef);
    phase_.push_back(true);
    seen_.push_back(0);
    activity_.push_back(0);
    heap_pos_.push_back(-1);
    watches_.resize(2 * (id + 1));
    heap_insert(id);
  }
}

bool SatSolver::add_clause(std::span<const Lit> in) {
  if (!ok_) return false;
  cancel_until(0);
  std::vector<Lit> lits(in.begin(), in.end());
  for (Lit l : lits) ensure_var(l.var());
  std::sort(lits.begin(), lits.end());
  std::size_t j = 0;
  Lit prev;
  bool have_prev = false;
  for (Lit l : lits) {
    if (lit_value(l) == kTrue || (have_prev && l == ~prev)) return true;
    if (lit_value(l) != kFalse && !(have_prev && l == prev)) {
      lits[j++] = l;
      prev = l;
      have_prev = true;
    }
  }
  lits.resize(j);
  if (lits.empty()) {
    ok_ = false;
    return false;
  }
  if (lits.size() == 1) {
    enqueue(lits[0], kNoRef);
    if (propagate() != kNoRef) ok_ = false;
    return ok_;
  }
  clauses_.push_back(StoredClause{std::move(lits), false, false, 0});
  attach(static_cast<std::uint32_t>(clauses_.size() - 1));
  return true;
}

bool SatSolver::add(const Cnf& f) {
  for (Var v : f.scope()) ensure_var(v);
  for (const Clause& c : f) add_clause(c);
  return ok_;
}

void SatSolver::attach(std::uint32_t cref) {
  const auto& c = clauses_[cref].lits;
  watches_[(~c[0]).code()].push_back({cref, c[1]});
  watches_[(~c[1]).code()].push_back({cref, c[0]});
}

void SatSolver::enqueue(Lit l, std::uint32_t reason) {
  assigns_[l.var().id] = l.negative() ? kFalse : kTrue;
  level_[l.var().id] = decision_level();
  reason_[l.var().id] = reason;
  trail_.push_back(l);
}

std::uint32_t SatSolver::propagate() {
  std::uint32_t confl = kNoRef;
  while (qhead_ < trail_.size()) {
    Lit p = trail_[qhead_++];
    auto& ws = watches_[p.code()];
    std::size_t i = 0, j = 0;
    Lit false_lit = ~p;
    while (i < ws.size()) {
      Watcher w = ws[i];
      if (lit_value(w.blocker) == kTrue) {
        ws[j++] = ws[i++];
        continue;
      }
      auto& c = clauses_[w.cref].lits;
      if (c[0] == false_lit) std::swap(c[0], c[1]);
      ++i;
      Lit first = c[0];
      Watcher nw{w.cref, first};
      if (first != w.blocker && lit_value(first) == kTrue) {
        ws[j++] = nw;
        continue;
      }
      bool moved = false;
      for (std::size_t k = 2; k < c.size(); ++k) {
        if (lit_value(c[k]) != kFalse) {
          std::swap(c[1], c[k]);
          watches_[(~c[1]).code()].push_back(nw);
          moved = true;
          break;
        }
      }
      if (moved) continue;
      ws[j++] = nw;
      if (lit_value(first) == kFalse) {
        confl = w.cref;
        qhead_ = trail_.size();
        while (i < ws.size()) ws[j++] = ws[i++];
      } else {
        enqueue(first, w.cref);
      }
    }
    ws.resize(j);
    if (confl != kNoRef) break;
  }
  return confl;
}

void SatSolver::bump_var(Var v) {
  if ((activity_[v.id] += var_inc_) > 1e100) {
    for (double& a : activity_) a *= 1e-100;
    var_inc_ *= 1e-100;
  }
  if (heap_pos_[v.id] >= 0) heap_up(static_cast<std::size_t>(heap_pos_[v.id]));
}

void SatSolver::bump_clause(StoredClause& c) {
  if ((c.activity += clause_inc_) > 1e20) {
    for (std::uint32_t r : learnts_) clauses_[r].activity *= 1e-20;
    clause_inc_ *= 1e-20;
  }
}

void SatSolver::analyze(std::uint32_t confl, std::vector<Lit>& out, int& bt_level) {
  int path = 0;
  Lit p;
  bool have_p = false;
  out.clear();
  out.push_back(Lit());
  std::size_t index = trail_.size();
  do {
    StoredClause& c = clauses_[confl];
    if (c.learnt) bump_clause(c);
    for (std::size_t j = have_p ? 1 : 0; j < c.lits.size(); ++j) {
      Lit q = c.lits[j];
      Var v = q.var();
      if (!seen_[v.id] && level(v) > 0) {
        bump_var(v);
        seen_[v.id] = 1;
        if (level(v) >= decision_level())
          ++path;
        else
          out.push_back(q);
      }
    }
    while (!seen_[trail_[--index].var().id]) {
    }
    p = trail_[index];
    have_p = true;
    confl = reason_[p.var().id];
    seen_[p.var().id] = 0;
    --path;
  } while (path > 0);
  out[0] = ~p;

  // Drop literals whose reason is already covered by the clause.
  std::vector<Lit> kept{out[0]};
  for (std::size_t i = 1; i < out.size(); ++i) {
    std::uint32_t r = reason_[out[i].var().id];
    bool redundant = r != kNoRef;
    if (redundant) {
      const auto& rc = clauses_[r].lits;
      for (std::size_t k = 1; k < rc.size(); ++k) {
        Var v = rc[k].var();
        if (!seen_[v.id] && level(v) > 0) {
          redundant = false;
          break;
        }
      }
    }
    if (!redundant) kept.push_back(out[i]);
  }
  for (std::size_t i = 1; i < out.size(); ++i) seen_[out[i].var().id] = 0;
  out.swap(kept);

  bt_level = 0;
  if (out.size() > 1) {
    std::size_t max_i = 1;
    for (std::size_t i = 2; i < out.size(); ++i)
      if (level(out[i].var()) > level(out[max_i].var())) max_i = i;
    std::swap(out[1], out[max_i]);
    bt_level = level(out[1].var());
  }
}

void SatSolver::analyze_final(Lit failed) {
  core_.clear();
  core_.push_back(failed);
  if (decision_level() == 0) return;
  seen_[failed.var().id] = 1;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[0];) {
    Var x = trail_[i].var();
    if (!seen_[x.id]) continue;
    if (reason_[x.id] == kNoRef) {
      if (x != failed.var()) core_.push_back(trail_[i]);
    } else {
      const auto& c = clauses_[reason_[x.id]].lits;
      for (std::size_t k = 1; k < c.size(); ++k)
        if (level(c[k].var()) > 0) seen_[c[k].var().id] = 1;
    }
    seen_[x.id] = 0;
  }
  seen_[failed.var().id] = 0;
}

void SatSolver::cancel_until(int lvl) {
  if (decision_level() <= lvl) return;
  for (std::size_t i = trail_.size(); i-- > trail_lim_[static_cast<std::size_t>(lvl)];) {
    Var v = trail_[i].var();
    assigns_[v.id] = kUndef;
    reason_[v.id] = kNoRef;
    phase_[v.id] = trail_[i].positive();
    if (heap_pos_[v.id] < 0) heap_insert(v.id);
  }
  trail_.resize(trail_lim_[static_cast<std::size_t>(lvl)]);
  trail_lim_.resize(static_cast<std::size_t>(lvl));
  qhead_ = trail_.size();
}

bool SatSolver::locked(std::uint32_t cref) const {
  const auto& c = clauses_[cref].lits;
  Var v = c[0].var();
  return reason_[v.id] == cref && lit_value(c[0]) == kTrue;
}

void SatSolver::reduce_db() {
  std::sort(learnts_.begin(), learnts_.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (clauses_[a].activity != clauses_[b].activity)
      return clauses_[a].activity < clauses_[b].activity;
    return a < b;
  });
  std::vector<std::uint32_t> keep;
  std::size_t half = learnts_.size() / 2;
  for (std::size_t i = 0; i < learnts_.size(); ++i) {
    std::uint32_t r = learnts_[i];
    if (i < half && clauses_[r].lits.size() > 2 && !locked(r)) {
      clauses_[r].deleted = true;
    } else {
      keep.push_back(r);
    }
  }
  learnts_.swap(keep);
  for (auto& ws : watches_)
    ws.erase(std::remove_if(ws.begin(), ws.end(),
                            [&](const Watcher& w) { return clauses_[w.cref].deleted; }),
             ws.end());
  for (auto& c : clauses_)
    if (c.deleted) std::vector<Lit>().swap(c.lits);
}

Lit SatSolver::pick_branch() {
  while (!heap_.empty()) {
    std::uint32_t v = heap_pop();
    if (assigns_[v] == kUndef) return Lit(Var{v}, !phase_[v]);
  }
  return Lit();
}

int SatSolver::search(std::int64_t conflict_limit, std::span<const Lit> assumptions) {
  std::int64_t local_conflicts = 0;
  std::vector<Lit> learnt;
  for (;;) {
    std::uint32_t confl = propagate();
    if (confl != kNoRef) {
      ++conflicts_;
      ++local_conflicts;
      if (decision_level() == 0) return kFalse;
      int bt = 0;
      analyze(confl, learnt, bt);
      cancel_until(bt);
      if (learnt.size() == 1) {
        enqueue(learnt[0], kNoRef);
      } else {
        clauses_.push_back(StoredClause{learnt, true, false, 0});
        auto cref = static_cast<std::uint32_t>(clauses_.size() - 1);
        learnts_.push_back(cref);
        attach(cref);
        bump_clause(clauses_[cref]);
        enqueue(learnt[0], cref);
      }
      var_inc_ /= 0.95;
      clause_inc_ /= 0.999;
      continue;
    }
    if (local_conflicts >= conflict_limit) {
      cancel_until(0);
      return kUndef;
    }
    if (static_cast<double>(learnts_.size()) - static_cast<double>(trail_.size()) >= max_learnts_)
      reduce_db();

    Lit next;
    bool have_next = false;
    while (static_cast<std::size_t>(decision_level()) < assumptions.size()) {
      Lit a = assumptions[static_cast<std::size_t>(decision_level())];
      std::uint8_t val = lit_value(a);
      if (val == kTrue) {
        trail_lim_.push_back(trail_.size());
      } else if (val == kFalse) {
        analyze_final(a);
        return kFalse;
      } else {
        next = a;
        have_next = true;
        break;
      }
    }
    if (!have_next) {
      next = pick_branch();
      if (!next.var().valid()) return kTrue;
      ++decisions_;
    }
    trail_lim_.push_back(trail_.size());
    enqueue(next, kNoRef);
  }
}

bool SatSolver::solve(std::span<const Lit> assumptions) {
  core_.clear();
  model_.clear();
  if (!ok_) return false;
  for (Lit a : assumptions) ensure_var(a.var());
  cancel_until(0);
  max_learnts_ = std::max(1000.0, static_cast<double>(clauses_.size()) / 3.0);
  int status = kUndef;
  for (int round = 0; status == kUndef; ++round) {
    auto limit = static_cast<std::int64_t>(luby(2.0, round) * 100);
    status = search(limit, assumptions);
    max_learnts_ *= 1.05;
  }
  if (status == kTrue) model_ = assigns_;
  // An empty core means the refutation used no assumption at all.
  if (status == kFalse && core_.empty()) ok_ = false;
  cancel_until(0);
  return status == kTrue;
}

bool SatSolver::value(Var v) const {
  if (v.id >= model_.size()) return false;
  return model_[v.id] == kTrue;
}

Assignment SatSolver::model(std::span<const Var> vars) const {
  Assignment a;
  for (Var v : vars) a.set(v, value(v));
  return a;
}

void SatSolver::heap_insert(std::uint32_t v) {
  heap_pos_[v] = static_cast<int>(heap_.size());
  heap_.push_back(v);
  heap_up(heap_.size() - 1);
}

std::uint32_t SatSolver::heap_pop() {
  std::uint32_t top = heap_[0];
  heap_pos_[top] = -1;
  std::uint32_t last = heap_.back();
  heap_.pop_back();
  if (!heap_.empty()) {
    heap_[0] = last;
    heap_pos_[last] = 0;
    heap_down(0);
  }
  return top;
}

void SatSolver::heap_up(std::size_t i) {
  std::uint32_t v = heap_[i];
  while (i > 0) {
    std::size_t parent = (i - 1) / 2;
    if (!heap_less(v, heap_[parent])) break;
    heap_[i] = heap_[parent];
    heap_pos_[heap_[i]] = static_cast<int>(i);
    i = parent;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int>(i);
}

void SatSolver::heap_down(std::size_t i) {
  std::uint32_t v = heap_[i];
  for (;;) {
    std::size_t child = 2 * i + 1;
    if (child >= heap_.size()) break;
    if (child + 1 < heap_.size() && heap_less(heap_[child + 1], heap_[child])) ++child;
    if (!heap_less(heap_[child], v)) break;
    heap_[i] = heap_[child];
    heap_pos_[heap_[i]] = static_cast<int>(i);
    i = child;
  }
  heap_[i] = v;
  heap_pos_[v] = static_cast<int>(i);
}

// ---------------------------------------------------------------- wrappers

SatResult solve(const Cnf& f, std::span<const Lit> assumptions) {
  SatSolver s;
  s.add(f);
  SatResult r;
  r.sat = s.solve(assumptions);
  if (r.sat) {
    std::set<Var> vars = f.scope();
    for (Lit a : assumptions) vars.insert(a.var());
    for (Var v : vars) r.model.set(v, s.value(v));
  } else {
    r.core = s.core();
  }
  return r;
}

SatResult solve(const Cnf& f, const Assignment& assumptions) {
  auto lits = assumptions.to_lits();
  return solve(f, std::span<const Lit>(lits));
}

bool implies(const Cnf& a, const Cnf& b) {
  SatSolver s;
  s.add(a);
  std::vector<Lit> assume;
  for (const Clause& c : b) {
    assume.clear();
    for (Lit l : c) assume.push_back(~l);
    if (s.solve(assume)) return false;
  }
  return true;
}

bool implies(const Cnf& a, const Clause& c) { return implies(a, Cnf{c}); }

RelaxResult max_relax_solve(const Cnf& hard, const Cnf& soft, const Assignment& target) {
  SatSolver s;
  s.add(hard);
  for (Var v : soft.scope()) s.ensure_var(v);
  for (auto& [v, b] : target) s.ensure_var(v);

  std::vector<Lit> selectors;
  for (const Clause& c : soft) {
    Lit sel = pos(s.new_var());
    std::vector<Lit> lits(c.begin(), c.end());
    lits.push_back(sel);
    s.add_clause(lits);
    selectors.push_back(sel);
  }
  std::vector<Lit> target_lits = target.to_lits();

  auto falsified = [&](const SatSolver& solver) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < soft.size(); ++i) {
      bool sat = false;
      for (Lit l : soft[i])
        if (solver.value(l)) {
          sat = true;
          break;
        }
      if (!sat) out.push_back(i);
    }
    return out;
  };

  auto assume_except = [&](const std::vector<std::size_t>& relaxed) {
    std::vector<Lit> a = target_lits;
    std::size_t k = 0;
    for (std::size_t i = 0; i < selectors.size(); ++i) {
      if (k < relaxed.size() && relaxed[k] == i) {
        ++k;
        continue;
      }
      a.push_back(~selectors[i]);
    }
    return a;
  };

  if (!s.solve(target_lits)) throw std::invalid_argument("hard clauses conflict with the target");
  std::vector<std::size_t> fal = falsified(s);
  std::vector<Var> vars(hard.scope().begin(), hard.scope().end());
  vars.insert(vars.end(), soft.scope().begin(), soft.scope().end());
  for (auto& [v, b] : target) vars.push_back(v);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  Assignment best = s.model(vars);

  // One pass: try to satisfy each falsified soft while keeping the others.
  std::vector<std::size_t> order = fal;
  for (std::size_t i : order) {
    if (!std::binary_search(fal.begin(), fal.end(), i)) continue;
    std::vector<std::size_t> relaxed;
    for (std::size_t f : fal)
      if (f != i) relaxed.push_back(f);
    auto a = assume_except(relaxed);
    if (s.solve(a)) {
      fal = falsified(s);
      best = s.model(vars);
    }
  }
  return RelaxResult{best, fal};
}

}  // namespace pclor
