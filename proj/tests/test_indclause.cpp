#include <gtest/gtest.h>

#include <variant>

#include "brute.hpp"
#include "fixtures.hpp"
#include "pclor/indclause.hpp"
#include "pclor/pclor.hpp"
#include "pclor/qe_oracle.hpp"
#include "pclor/random_circuit.hpp"
#include "pclor/sat.hpp"

using namespace pclor;
using namespace pclor::testing;

namespace {

bool inductive_relative_to(const TransitionSystem& ts, const Cnf& F, const Clause& c) {
  Cnf lhs = F;
  lhs.add(c);
  lhs.add_all(ts.trans);
  return implies(ts.init, c) && implies(lhs, ts.at_frame(c, 1));
}

Witness checked_run_ic(const TransitionSystem& ts, CheckOptions opts = {}) {
  opts.oracle_check = ts.state.size() <= 8;
  opts.on_iteration = [&](const FrameChain& chain) {
    CoReport rep = check_co(chain);
    EXPECT_TRUE(rep.ok()) << rep.describe();
    for (std::uint32_t d = 0; d <= chain.depth(); ++d) EXPECT_FALSE(bmc(ts, d)) << "depth " << d;
  };
  Witness w = pc_lor_ic(ts, opts);
  EXPECT_TRUE(witness_ok(ts, w));
  return w;
}

}  // namespace

TEST(MakeInductiveClause, StuckAtZero) {
  TransitionSystem ts = stuttered("stuck0.scirc");
  Assignment one{{ts.state[0], true}};
  auto r = make_inductive_clause(ts, Cnf{}, one);
  ASSERT_TRUE(std::holds_alternative<Clause>(r));
  Clause c = std::get<Clause>(r);
  EXPECT_EQ(c, (Clause{neg(ts.state[0])}));
  EXPECT_TRUE(inductive_relative_to(ts, Cnf{}, c));
}

TEST(MakeInductiveClause, ToggleHasACti) {
  TransitionSystem ts = stuttered("toggle.scirc");
  Assignment one{{ts.state[0], true}};
  auto r = make_inductive_clause(ts, Cnf{}, one);
  ASSERT_TRUE(std::holds_alternative<Cti>(r));
  EXPECT_FALSE(std::get<Cti>(r).state.at(ts.state[0]));
  EXPECT_EQ(std::get<Cti>(r).target, one);
}

TEST(MakeInductiveClause, InitialStateIsACtiRootedAtItself) {
  TransitionSystem ts = stuttered("stuck0.scirc");
  Assignment zero{{ts.state[0], false}};
  auto r = make_inductive_clause(ts, Cnf{}, zero);
  ASSERT_TRUE(std::holds_alternative<Cti>(r));
  EXPECT_EQ(std::get<Cti>(r).state, zero);
}

TEST(Generalize, DropsIrrelevantLiterals) {
  TransitionSystem ts = stuttered("two_stage.scirc");
  Var a = ts.state[0], b = ts.state[1];
  // (not a or not b) shrinks to (not a): NOT a is inductive and initial on its own.
  Clause c = generalize(ts, Clause{neg(a), neg(b)}, Cnf{});
  EXPECT_EQ(c, (Clause{neg(a)}));
  EXPECT_TRUE(inductive_relative_to(ts, Cnf{}, c));
  EXPECT_EQ(generalize(ts, c, Cnf{}), c);
}

TEST(Generalize, ResultStaysInductiveOnRandomSystems) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    RandomCircuitShape shape;
    shape.latches = 3;
    TransitionSystem ts = add_stuttering(encode(random_circuit(seed, shape)));
    StateSet reach = reach_bruteforce(ts, 1u << ts.state.size());
    for (std::uint64_t b = 0; b < 8; ++b) {
      if (reach.contains(b)) continue;
      Assignment s = reach.state(b);
      auto r = make_inductive_clause(ts, Cnf{}, s);
      if (!std::holds_alternative<Clause>(r)) continue;
      Clause g = generalize(ts, std::get<Clause>(r), Cnf{});
      EXPECT_TRUE(inductive_relative_to(ts, Cnf{}, g)) << "seed " << seed;
      EXPECT_EQ(evaluate(Cnf{g}, s), Truth::False);
      EXPECT_LE(g.size(), 3u);
    }
  }
}

TEST(EducatGuessRlx, DffSecSeedIsEquality) {
  TransitionSystem ts = dff_sec();
  FrameChain chain(ts);
  chain.open_frame();
  Cnf seed = educat_guess_rlx(chain, 1, tagged_clauses(ts, "interface"));
  EXPECT_TRUE(equivalent(seed, equality(ts.state[0], ts.state[1])));
  EXPECT_TRUE(verify_boundary(seed, ts, chain.trlx(0), 1));
  EXPECT_EQ(chain.removed_indices(0), tagged_clauses(ts, "interface"));
}

TEST(EducatGuessRlx, EmptyAndFullGuesses) {
  TransitionSystem ts = stuttered("stuck0.scirc");
  {
    FrameChain chain(ts);
    chain.open_frame();
    EXPECT_TRUE(educat_guess_rlx(chain, 1, {}).empty());
  }
  {
    FrameChain chain(ts);
    chain.open_frame();
    std::vector<std::size_t> all;
    for (std::size_t i = 0; i < ts.trans.size(); ++i) all.push_back(i);
    Cnf seed = educat_guess_rlx(chain, 1, all);
    EXPECT_TRUE(equivalent(seed, Cnf{Clause{neg(ts.state[0])}}));
    EXPECT_TRUE(verify_boundary(seed, ts, chain.trlx(0), 1));
  }
}

TEST(PcLorIc, DffSecConvergesWithinTwoFrames) {
  TransitionSystem ts = dff_sec();
  CheckOptions opts;
  opts.guess = "interface";
  Witness w = checked_run_ic(ts, opts);
  ASSERT_EQ(w.kind, Witness::Kind::Invariant);
  EXPECT_LE(w.frames, 2u);
  Cnf eq_p = equality(ts.state[0], ts.state[1]);
  eq_p.add_all(ts.prop);
  EXPECT_TRUE(equivalent(w.invariant, eq_p));
}

TEST(PcLorIc, SeedWithoutPropertyRunsFinRlx) {
  TransitionSystem ts = dff_sec();
  CheckOptions opts;
  opts.guess = "interface";
  opts.seed_with_prop = false;
  EXPECT_EQ(checked_run_ic(ts, opts).kind, Witness::Kind::Invariant);
}

TEST(PcLorIc, ToggleGivesShortestCounterexample) {
  TransitionSystem ts = stuttered("toggle.scirc");
  Witness w = checked_run_ic(ts);
  ASSERT_EQ(w.kind, Witness::Kind::Counterexample);
  EXPECT_EQ(w.trace.size(), 2u);
}

TEST(PcLorIc, AgreesWithLoROnFixtures) {
  for (const auto& name : single_circuit_fixtures()) {
    SCOPED_TRACE(name);
    TransitionSystem ts = stuttered(name);
    Witness a = pc_lor(ts);
    Witness b = checked_run_ic(ts);
    EXPECT_EQ(a.kind, b.kind);
    int expect = shortest_cex(ts);
    EXPECT_EQ(b.kind == Witness::Kind::Counterexample, expect >= 0);
    if (expect >= 0) EXPECT_EQ(static_cast<int>(b.trace.size()) - 1, expect);
  }
}

TEST(PcLorIc, RandomSystemsMatchEnumeration) {
  for (std::uint64_t seed = 100; seed < 130; ++seed) {
    SCOPED_TRACE(seed);
    RandomCircuitShape shape;
    shape.latches = 2 + seed % 4;
    TransitionSystem ts = add_stuttering(encode(random_circuit(seed, shape)));
    int expect = shortest_cex(ts);
    Witness w = checked_run_ic(ts);
    EXPECT_EQ(w.kind == Witness::Kind::Counterexample, expect >= 0);
  }
}

TEST(RemBadStIc, AddedClausesAreInductive) {
  TransitionSystem ts = stuttered("two_stage.scirc");
  FrameChain chain(ts);
  EXPECT_FALSE(rem_bad_st_ic(chain, 1));
  chain.open_frame();
  fin_rlx(chain, 1);
  third_co_cond_ic(chain);
  Cnf before = chain.h(1);
  EXPECT_FALSE(rem_bad_st_ic(chain, 2));
  for (const Clause& c : chain.h(1)) {
    if (before.contains(c)) continue;
    EXPECT_TRUE(inductive_relative_to(ts, chain.h(0), c)) << c;
  }
  Cnf lhs = chain.h(1);
  lhs.add_all(ts.trans);
  EXPECT_TRUE(implies(lhs, ts.at_frame(ts.prop, 1)));
}

TEST(RemBadStIc, DifferentialVerdictAgainstRemBadSt) {
  for (const auto& name : single_circuit_fixtures()) {
    SCOPED_TRACE(name);
    TransitionSystem ts = stuttered(name);
    FrameChain a(ts), b(ts);
    EXPECT_EQ(rem_bad_st(a, 1).has_value(), rem_bad_st_ic(b, 1).has_value());
  }
}
