#include <gtest/gtest.h>

#include <random>

#include "pclor/error.hpp"
#include "pclor/pqe.hpp"
#include "pclor/qe_oracle.hpp"
#include "pclor/sat.hpp"
#include "support.hpp"

using namespace pclor;
using namespace pclor::testing;

namespace {

struct RandomTask {
  PqeTask task;
  std::vector<Var> vars;
};

RandomTask random_task(std::mt19937& rng, std::uint32_t max_vars, int max_clauses) {
  RandomTask r;
  std::uint32_t n = 3 + rng() % (max_vars - 2);
  r.vars = var_range(n);
  std::uint32_t nw = 1 + rng() % (n - 1);
  for (std::uint32_t i = n - nw + 1; i <= n; ++i) r.task.W.insert(v(i));
  int total = 2 + static_cast<int>(rng() % static_cast<std::uint32_t>(max_clauses - 1));
  int na = 1 + static_cast<int>(rng() % 4u);
  for (int i = 0; i < total; ++i) (i < na ? r.task.A : r.task.B).add(random_clause(rng, n, 3));
  return r;
}

// Every model of pool \ {C} consistent with q agrees on the free part with a
// model of the whole pool.
bool escape_claim_holds(const Cnf& pool, const DSequent& d, const std::set<Var>& W) {
  std::vector<Var> vars = pool.vars();
  Cnf rest;
  bool dropped = false;
  for (const Clause& c : pool) {
    if (!dropped && c == d.clause) {
      dropped = true;
      continue;
    }
    rest.add(c);
  }
  std::set<std::uint64_t> free_models;  // free parts of whole-pool models
  std::uint64_t free_mask = 0;
  for (std::size_t i = 0; i < vars.size(); ++i)
    if (!W.count(vars[i])) free_mask |= 1ull << i;
  for (std::uint64_t b = 0; b < (1ull << vars.size()); ++b)
    if (holds(pool, point(vars, b))) free_models.insert(b & free_mask);
  for (std::uint64_t b = 0; b < (1ull << vars.size()); ++b) {
    Assignment p = point(vars, b);
    bool in_q = std::all_of(d.subspace.begin(), d.subspace.end(),
                            [&](auto& kv) { return p.at(kv.first) == kv.second; });
    if (in_q && holds(rest, p) && !free_models.count(b & free_mask)) return false;
  }
  return true;
}

}  // namespace

TEST(TakeOut, Examples) {
  PqeTask t{{v(3)}, Cnf{C({1, 3})}, Cnf{C({2, -3})}};
  auto r = take_out(t);
  EXPECT_TRUE(check_pqe(t.W, t.A, t.B, r.a_star));
  EXPECT_EQ(r.a_star.clauses(), std::vector<Clause>{C({1, 2})});
  ASSERT_EQ(r.dsequents.size(), 1u);
  EXPECT_TRUE(r.dsequents[0].subspace.empty());

  PqeTask empty{{v(3)}, Cnf{}, Cnf{C({2, -3})}};
  EXPECT_TRUE(take_out(empty).a_star.empty());

  PqeTask wfree{{v(3)}, Cnf{C({1})}, Cnf{C({2, 3})}};
  EXPECT_EQ(take_out(wfree).a_star.clauses(), std::vector<Clause>{C({1})});
}

TEST(TakeOut, UnsatisfiableConjunction) {
  PqeTask t{{v(2)}, Cnf{C({2})}, Cnf{C({-2})}};
  auto r = take_out(t);
  EXPECT_TRUE(check_pqe(t.W, t.A, t.B, r.a_star));
}

TEST(TakeOut, RandomTasksPassTheOracle) {
  std::mt19937 rng(4242);
  for (int round = 0; round < 500; ++round) {
    RandomTask rt = random_task(rng, 12, 30);
    auto r = take_out(rt.task);
    ASSERT_TRUE(check_pqe(rt.task.W, rt.task.A, rt.task.B, r.a_star))
        << "A=" << rt.task.A << " B=" << rt.task.B << " A*=" << r.a_star;
    Cnf ab = rt.task.A;
    ab.add_all(rt.task.B);
    for (const Clause& c : r.a_star) {
      for (Lit l : c) EXPECT_FALSE(rt.task.W.count(l.var()));
      EXPECT_TRUE(implies(ab, c));
    }
  }
}

TEST(TakeOut, DSequentsAreSound) {
  std::mt19937 rng(77);
  int checked = 0;
  for (int round = 0; round < 150; ++round) {
    RandomTask rt = random_task(rng, 10, 16);
    PqeOptions o;
    o.record_dsequents = true;
    auto r = take_out(rt.task, o);
    Cnf pool = r.pool;
    for (const DSequent& d : r.trace) {
      ASSERT_TRUE(escape_claim_holds(pool, d, rt.task.W)) << d.clause;
      ++checked;
    }
    for (const DSequent& d : r.dsequents) EXPECT_TRUE(escape_claim_holds(pool, d, rt.task.W));
  }
  EXPECT_GT(checked, 100);
}

TEST(TakeOut, Deterministic) {
  std::mt19937 rng(8);
  for (int round = 0; round < 20; ++round) {
    RandomTask rt = random_task(rng, 12, 30);
    EXPECT_EQ(take_out(rt.task).a_star.clauses(), take_out(rt.task).a_star.clauses());
  }
}

TEST(TakeOut, BudgetFallsBackToEnumeration) {
  std::mt19937 rng(9);
  RandomTask rt = random_task(rng, 12, 30);
  while (rt.task.A.empty()) rt = random_task(rng, 12, 30);
  PqeOptions o;
  o.node_budget = 0;
  auto r = take_out(rt.task, o);
  EXPECT_TRUE(r.stats.fallback || rt.task.A.size() > 0);
  EXPECT_TRUE(check_pqe(rt.task.W, rt.task.A, rt.task.B, r.a_star));
  o.allow_fallback = false;
  PqeTask t{{v(3)}, Cnf{C({1, 3})}, Cnf{C({2, -3})}};
  EXPECT_THROW(take_out(t, o), BudgetExceeded);
}

TEST(Join, Examples) {
  Clause c = C({1, 3});
  DSequent a{{{v(1), false}, {v(3), false}}, c}, b{{{v(1), false}, {v(3), true}}, c};
  DSequent j = join(a, b, v(3));
  EXPECT_EQ(j.subspace, (Assignment{{v(1), false}}));
  EXPECT_TRUE(join(DSequent{{{v(2), false}}, c}, DSequent{{{v(2), true}}, c}, v(2)).subspace.empty());
  EXPECT_THROW(join(DSequent{{{v(2), false}}, c}, DSequent{{{v(2), true}}, C({1})}, v(2)),
               std::invalid_argument);
  EXPECT_THROW(join(DSequent{{{v(2), false}, {v(1), true}}, c},
                    DSequent{{{v(2), true}, {v(1), false}}, c}, v(2)),
               std::invalid_argument);
}

TEST(ConflictClause, Examples) {
  EXPECT_EQ(conflict_clause_dsequent(v(3), C({1, 3}), C({2, -3})), C({1, 2}));
  EXPECT_TRUE(conflict_clause_dsequent(v(3), C({3}), C({-3})).empty());
  EXPECT_THROW(conflict_clause_dsequent(v(3), C({1, 3}), C({2, 3})), std::invalid_argument);
}

TEST(TriviallyRedundant, Examples) {
  std::set<Var> W{v(3)};
  Clause c = C({1, 3});
  auto a = trivially_redundant(c, Cnf{C({2, -3})}, {{v(1), true}}, W);
  EXPECT_EQ(a.reason, Redundancy::Satisfied);
  EXPECT_EQ(a.depends_on, std::vector<Var>{v(1)});
  EXPECT_EQ(trivially_redundant(c, Cnf{C({3})}, {}, W).reason, Redundancy::Subsumed);
  EXPECT_EQ(trivially_redundant(c, Cnf{C({2})}, {}, W).reason, Redundancy::Blocked);
  EXPECT_FALSE(trivially_redundant(c, Cnf{C({2, -3})}, {}, W));
  // The partner is satisfied in the branch, so the clause is blocked there.
  auto b = trivially_redundant(c, Cnf{C({2, -3})}, {{v(2), true}}, W);
  EXPECT_EQ(b.reason, Redundancy::Blocked);
  EXPECT_EQ(b.depends_on, std::vector<Var>{v(2)});
}
