#include "pclor/pqe.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

#include "pclor/error.hpp"
#include "pclor/qe_oracle.hpp"
#include "pclor/sat.hpp"

namespace pclor {

std::set<Var> PqeTask::free_vars() const {
  std::set<Var> out;
  for (const Cnf* f : {&A, &B})
    for (Var v : f->scope())
      if (!W.count(v)) out.insert(v);
  return out;
}

DSequent join(const DSequent& d1, const DSequent& d2, Var y) {
  if (d1.clause != d2.clause) throw std::invalid_argument("join of D-sequents for different clauses");
  auto y1 = d1.subspace.get(y), y2 = d2.subspace.get(y);
  if (!y1 || !y2 || *y1 == *y2) throw std::invalid_argument("subspaces do not split on the join variable");
  DSequent out{Assignment{}, d1.clause};
  for (const DSequent* d : {&d1, &d2}) {
    for (auto [v, b] : d->subspace) {
      if (v == y) continue;
      if (auto prev = out.subspace.get(v); prev && *prev != b)
        throw std::invalid_argument("subspaces disagree on a shared variable");
      out.subspace.set(v, b);
    }
  }
  return out;
}

Clause conflict_clause_dsequent(Var y, const Clause& falsified0, const Clause& falsified1) {
  if (!falsified0.contains(pos(y)) || !falsified1.contains(neg(y)))
    throw std::invalid_argument("falsified clauses are not resolvable on the branch variable");
  auto r = resolve(falsified0, falsified1, y);
  if (!r) throw std::invalid_argument("falsified clauses have a tautological resolvent");
  return *r;
}

RedundancyCheck trivially_redundant(const Clause& c, const Cnf& pool, const Assignment& branch,
                                    const std::set<Var>& W) {
  auto value = [&](Lit l) -> std::optional<bool> {
    auto b = branch.get(l.var());
    if (!b) return std::nullopt;
    return l.eval(*b);
  };
  RedundancyCheck r;
  for (Lit l : c)
    if (value(l) == true) {
      r.reason = Redundancy::Satisfied;
      r.depends_on = {l.var()};
      return r;
    }
  for (const Clause& d : pool) {
    std::vector<Var> deps;
    bool ok = true;
    for (Lit m : d) {
      auto val = value(m);
      if (val == true) {
        ok = false;
        break;
      }
      if (val == false) {
        deps.push_back(m.var());
      } else if (!c.contains(m)) {
        ok = false;
        break;
      }
    }
    if (ok) {
      r.reason = Redundancy::Subsumed;
      r.depends_on = deps;
      return r;
    }
  }
  for (Lit l : c) {
    if (!W.count(l.var()) || value(l)) continue;
    std::vector<Var> deps;
    bool ok = true;
    for (const Clause& d : pool) {
      if (!d.contains(~l)) continue;
      auto sat = std::find_if(d.begin(), d.end(), [&](Lit m) { return value(m) == true; });
      if (sat != d.end()) {
        deps.push_back(sat->var());
        continue;
      }
      bool taut = std::any_of(d.begin(), d.end(), [&](Lit m) { return m != ~l && c.contains(~m); });
      if (!taut) {
        ok = false;
        break;
      }
    }
    if (ok) {
      r.reason = Redundancy::Blocked;
      r.depends_on = deps;
      return r;
    }
  }
  return r;
}

namespace {

using Code = std::uint32_t;  // dense literal: 2 * var index + sign

class Engine {
 public:
  Engine(const PqeTask& task, const PqeOptions& opts) : task_(task), opts_(opts) {
    std::set<Var> all = task.A.scope();
    all.insert(task.B.scope().begin(), task.B.scope().end());
    vars_.assign(all.begin(), all.end());
    for (std::uint32_t i = 0; i < vars_.size(); ++i) {
      index_[vars_[i]] = i;
      is_w_.push_back(task.W.count(vars_[i]) ? 1 : 0);
      if (!is_w_.back()) free_.push_back(i);
    }
    occ_.resize(2 * vars_.size());
    val_.assign(vars_.size(), -1);
    free_solver_.ensure_var(Var{static_cast<std::uint32_t>(vars_.size())});
    full_solver_.ensure_var(Var{static_cast<std::uint32_t>(vars_.size())});
    for (Var v : task.free_vars()) a_star_.declare(v);

    for (const Clause& c : task.A) {
      auto lits = dense(c);
      bool w = has_w(lits);
      add(std::move(lits), w, true);
    }
    for (const Clause& c : task.B) add(dense(c), false, false);
  }

  PqeResult run() {
    PqeResult out;
    std::vector<std::uint32_t> targets;
    for (std::uint32_t i = 0; i < pool_.size(); ++i)
      if (pool_[i].target) targets.push_back(i);
    try {
      if (!targets.empty()) node();
    } catch (const BudgetExceeded&) {
      std::size_t nvars = vars_.size();
      if (!opts_.allow_fallback || nvars > kEnumerationBudget) throw BudgetExceeded("pqe-budget");
      Cnf ab = task_.A;
      ab.add_all(task_.B);
      a_star_ = qe_bruteforce(task_.W, ab);
      stats_.fallback = true;
    }
    out.a_star = finish(a_star_);
    for (std::uint32_t t : targets) out.dsequents.push_back(DSequent{Assignment{}, clause(t)});
    out.trace = std::move(trace_);
    for (std::uint32_t i = 0; i < pool_.size(); ++i) out.pool.add(clause(i));
    out.stats = stats_;
    return out;
  }

 private:
  struct Entry {
    std::vector<Code> lits;
    bool target;
    bool a_desc;
  };
  // Either "all targets redundant in this subspace given deps" or a
  // non-target clause falsified here.
  struct Result {
    bool conflict = false;
    std::uint32_t clause = 0;
    std::vector<std::uint32_t> deps;
  };

  static Code code(std::uint32_t var, bool negative) { return 2 * var + (negative ? 1 : 0); }
  static std::uint32_t var_of(Code c) { return c >> 1; }
  Lit solver_lit(Code c) const { return Lit(Var{var_of(c) + 1}, c & 1u); }
  // 1 true, 0 false, -1 unassigned
  int value(Code c) const {
    int v = val_[var_of(c)];
    return v < 0 ? -1 : (v ^ static_cast<int>(c & 1u));
  }

  std::vector<Code> dense(const Clause& c) const {
    std::vector<Code> out;
    for (Lit l : c) out.push_back(code(index_.at(l.var()), l.negative()));
    std::sort(out.begin(), out.end());
    return out;
  }
  bool has_w(const std::vector<Code>& lits) const {
    return std::any_of(lits.begin(), lits.end(), [&](Code c) { return is_w_[var_of(c)]; });
  }
  Clause clause(std::uint32_t id) const {
    std::vector<Lit> lits;
    for (Code c : pool_[id].lits) lits.push_back(Lit(vars_[var_of(c)], c & 1u));
    return Clause(lits);
  }

  std::uint32_t add(std::vector<Code> lits, bool target, bool a_desc) {
    auto id = static_cast<std::uint32_t>(pool_.size());
    for (Code c : lits) occ_[c].push_back(id);
    std::vector<Lit> sl;
    for (Code c : lits) sl.push_back(solver_lit(c));
    full_solver_.add_clause(sl);
    if (!target) free_solver_.add_clause(sl);
    pool_.push_back(Entry{std::move(lits), target, a_desc});
    if (!target && a_desc && !has_w(pool_.back().lits)) a_star_.add(clause(id));
    return id;
  }

  std::uint32_t derive(std::vector<Code> lits, bool a_desc) {
    ++stats_.derived;
    for (std::uint32_t i = 0; i < pool_.size(); ++i)
      if (!pool_[i].target && pool_[i].lits == lits) return i;
    return add(std::move(lits), false, a_desc);
  }

  // ------------------------------------------------------------ search

  Result node() {
    if (++stats_.nodes > opts_.node_budget) throw BudgetExceeded("pqe-budget");
    bool target_falsified = false;
    for (std::uint32_t id = 0; id < pool_.size(); ++id) {
      if (!falsified(id)) continue;
      if (!pool_[id].target) return conflict(id);
      target_falsified = true;
    }
    if (target_falsified) return escape();

    std::vector<char> removed(pool_.size(), 0);
    std::vector<std::uint32_t> deps;
    bool changed = true;
    while (changed) {
      changed = false;
      for (std::uint32_t t = 0; t < pool_.size(); ++t) {
        if (!pool_[t].target || removed[t]) continue;
        if (satisfied_by_branch(t, deps) || subsumed(t, removed, deps) || blocked(t, removed, deps)) {
          removed[t] = 1;
          changed = true;
        }
      }
    }
    int y = -1;
    for (std::uint32_t t = 0; t < pool_.size(); ++t) {
      if (!pool_[t].target || removed[t]) continue;
      for (Code c : pool_[t].lits) {
        std::uint32_t v = var_of(c);
        if (val_[v] >= 0) continue;
        if (y < 0 || (is_w_[v] && !is_w_[y]) || (is_w_[v] == is_w_[y] && v < static_cast<std::uint32_t>(y)))
          y = static_cast<int>(v);
      }
    }
    if (y < 0) return redundant(normalize(deps));
    return branch(static_cast<std::uint32_t>(y));
  }

  Result branch(std::uint32_t y) {
    val_[y] = 0;
    Result r0 = node();
    val_[y] = -1;
    if (!depends(r0, y)) return r0;
    val_[y] = 1;
    Result r1 = node();
    val_[y] = -1;
    if (!depends(r1, y)) return r1;

    if (r0.conflict && r1.conflict) {
      std::vector<Code> lits;
      for (Code c : pool_[r0.clause].lits)
        if (var_of(c) != y) lits.push_back(c);
      for (Code c : pool_[r1.clause].lits)
        if (var_of(c) != y) lits.push_back(c);
      std::sort(lits.begin(), lits.end());
      lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
      bool a_desc = pool_[r0.clause].a_desc || pool_[r1.clause].a_desc;
      if (a_desc && has_w(lits)) {
        // Would be a tracked clause; both halves are vacuous anyway.
        std::vector<std::uint32_t> deps;
        for (Code c : lits) deps.push_back(var_of(c));
        return redundant(normalize(deps));
      }
      return conflict(derive(std::move(lits), a_desc));
    }
    std::vector<std::uint32_t> deps;
    for (const Result* r : {&r0, &r1}) {
      if (r->conflict) {
        for (Code c : pool_[r->clause].lits) deps.push_back(var_of(c));
      } else {
        deps.insert(deps.end(), r->deps.begin(), r->deps.end());
      }
    }
    deps.erase(std::remove(deps.begin(), deps.end(), y), deps.end());
    return redundant(normalize(deps));
  }

  bool depends(const Result& r, std::uint32_t y) const {
    if (r.conflict) {
      const auto& l = pool_[r.clause].lits;
      return std::any_of(l.begin(), l.end(), [&](Code c) { return var_of(c) == y; });
    }
    return std::binary_search(r.deps.begin(), r.deps.end(), y);
  }

  // A target is falsified: close the subspace by SAT. Candidate free points
  // come from the pool minus the targets; a point with no extension to the
  // whole pool yields a derived clause, one with an extension is blocked
  // together with every point agreeing on the literals that extension needs.
  Result escape() {
    ++stats_.escape_leaves;
    Lit act = pos(free_solver_.new_var());
    std::vector<Lit> assume{act};
    for (std::uint32_t v = 0; v < vars_.size(); ++v)
      if (val_[v] >= 0) assume.push_back(Lit(Var{v + 1}, val_[v] == 0));
    std::vector<Lit> point;
    for (;;) {
      ++stats_.sat_calls;
      if (!free_solver_.solve(assume)) {
        std::vector<std::uint32_t> deps;
        for (Lit l : free_solver_.core())
          if (l != act) deps.push_back(l.var().id - 1);
        free_solver_.add_clause(std::vector<Lit>{~act});
        return redundant(normalize(deps));
      }
      point.clear();
      for (std::uint32_t v : free_) point.push_back(Lit(Var{v + 1}, !free_solver_.value(Var{v + 1})));
      ++stats_.sat_calls;
      if (!full_solver_.solve(point)) {
        std::vector<Lit> core = minimize_core(full_solver_.core());
        std::vector<Code> lits;
        for (Lit l : core) lits.push_back(code(l.var().id - 1, l.positive()));
        std::sort(lits.begin(), lits.end());
        derive(std::move(lits), true);
        continue;
      }
      std::vector<Lit> cube;
      for (const Entry& e : pool_) {
        bool done = false;
        for (Code c : e.lits) {
          Lit l = solver_lit(c);
          if (full_solver_.value(l) &&
              (is_w_[var_of(c)] || std::find(cube.begin(), cube.end(), l) != cube.end())) {
            done = true;
            break;
          }
        }
        if (done) continue;
        auto it = std::find_if(e.lits.begin(), e.lits.end(),
                               [&](Code c) { return full_solver_.value(solver_lit(c)); });
        if (it == e.lits.end()) throw InternalError("model does not satisfy the pool");
        cube.push_back(solver_lit(*it));
      }
      std::vector<Lit> block{~act};
      for (Lit l : cube) block.push_back(~l);
      free_solver_.add_clause(block);
    }
  }

  std::vector<Lit> minimize_core(std::vector<Lit> core) {
    std::sort(core.begin(), core.end());
    std::vector<Lit> order = core;
    for (Lit l : order) {
      if (!std::binary_search(core.begin(), core.end(), l)) continue;
      std::vector<Lit> trial;
      for (Lit m : core)
        if (m != l) trial.push_back(m);
      ++stats_.sat_calls;
      if (!full_solver_.solve(trial)) {
        core = full_solver_.core();
        std::sort(core.begin(), core.end());
      }
    }
    return core;
  }

  bool falsified(std::uint32_t id) const {
    for (Code c : pool_[id].lits)
      if (value(c) != 0) return false;
    return true;
  }

  bool satisfied_by_branch(std::uint32_t t, std::vector<std::uint32_t>& deps) const {
    for (Code c : pool_[t].lits)
      if (value(c) == 1) {
        deps.push_back(var_of(c));
        return true;
      }
    return false;
  }

  bool subsumed(std::uint32_t t, const std::vector<char>& removed, std::vector<std::uint32_t>& deps) const {
    const auto& tl = pool_[t].lits;
    std::vector<std::uint32_t> tmp;
    for (Code l : tl) {
      if (value(l) >= 0) continue;
      for (std::uint32_t d : occ_[l]) {
        if (d == t || (d < removed.size() && removed[d])) continue;
        tmp.clear();
        bool ok = true;
        for (Code m : pool_[d].lits) {
          int v = value(m);
          if (v == 1 || (v < 0 && !std::binary_search(tl.begin(), tl.end(), m))) {
            ok = false;
            break;
          }
          if (v == 0) tmp.push_back(var_of(m));
        }
        if (ok) {
          deps.insert(deps.end(), tmp.begin(), tmp.end());
          return true;
        }
      }
    }
    return false;
  }

  bool blocked(std::uint32_t t, const std::vector<char>& removed, std::vector<std::uint32_t>& deps) const {
    const auto& tl = pool_[t].lits;
    std::vector<std::uint32_t> tmp;
    for (Code l : tl) {
      if (value(l) >= 0 || !is_w_[var_of(l)]) continue;
      tmp.clear();
      bool ok = true;
      for (std::uint32_t d : occ_[l ^ 1u]) {
        if (d < removed.size() && removed[d]) continue;
        const auto& dl = pool_[d].lits;
        auto sat = std::find_if(dl.begin(), dl.end(), [&](Code m) { return value(m) == 1; });
        if (sat != dl.end()) {
          tmp.push_back(var_of(*sat));
          continue;
        }
        bool taut = std::any_of(dl.begin(), dl.end(), [&](Code m) {
          return m != (l ^ 1u) && std::binary_search(tl.begin(), tl.end(), m ^ 1u);
        });
        if (!taut) {
          ok = false;
          break;
        }
      }
      if (ok) {
        deps.insert(deps.end(), tmp.begin(), tmp.end());
        return true;
      }
    }
    return false;
  }

  static std::vector<std::uint32_t> normalize(std::vector<std::uint32_t> deps) {
    std::sort(deps.begin(), deps.end());
    deps.erase(std::unique(deps.begin(), deps.end()), deps.end());
    return deps;
  }

  Result conflict(std::uint32_t id) {
    Result r;
    r.conflict = true;
    r.clause = id;
    return r;
  }

  Result redundant(std::vector<std::uint32_t> deps) {
    if (opts_.record_dsequents) {
      Assignment q;
      for (std::uint32_t v : deps) q.set(vars_[v], val_[v] == 1);
      for (std::uint32_t i = 0; i < pool_.size(); ++i)
        if (pool_[i].target) trace_.push_back(DSequent{q, clause(i)});
    }
    Result r;
    r.deps = std::move(deps);
    return r;
  }

  Cnf finish(const Cnf& raw) const {
    Cnf sorted = raw.normalized();
    std::vector<Clause> kept;
    for (const Clause& c : sorted) {
      bool subsumed = std::any_of(sorted.begin(), sorted.end(),
                                  [&](const Clause& d) { return d != c && d.subsumes(c); });
      if (!subsumed) kept.push_back(c);
    }
    Cnf out;
    for (Var v : task_.free_vars()) out.declare(v);
    if (!opts_.prune_implied) {
      for (Clause& c : kept) out.add(std::move(c));
      return out;
    }
    SatSolver b;
    b.add(task_.B);
    for (const Clause& c : kept) {
      std::vector<Lit> assume;
      for (Lit l : c) assume.push_back(~l);
      if (b.solve(assume)) out.add(c);
    }
    return out;
  }

  const PqeTask& task_;
  const PqeOptions& opts_;
  std::vector<Var> vars_;
  std::map<Var, std::uint32_t> index_;
  std::vector<char> is_w_;
  std::vector<std::uint32_t> free_;
  std::vector<Entry> pool_;
  std::vector<std::vector<std::uint32_t>> occ_;
  std::vector<int> val_;
  SatSolver free_solver_;  // pool minus targets, plus per-leaf blocking clauses
  SatSolver full_solver_;  // whole pool
  Cnf a_star_;
  std::vector<DSequent> trace_;
  PqeStats stats_;
};

}  // namespace

PqeResult take_out(const PqeTask& task, const PqeOptions& opts) {
  Engine e(task, opts);
  return e.run();
}

}  // namespace pclor
