#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pclor/circuit.hpp"
#include "pclor/error.hpp"
#include "pclor/sat.hpp"
#include "support.hpp"

using namespace pclor;
using namespace pclor::testing;

namespace {

std::vector<bool> bits(std::uint64_t b, std::size_t n) {
  std::vector<bool> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = (b >> i) & 1u;
  return out;
}

}  // namespace

TEST(Parse, Fixtures) {
  Circuit t = fixture("toggle.scirc");
  EXPECT_EQ(t.latches.size(), 1u);
  EXPECT_EQ(t.inputs.size(), 1u);
  Circuit s = fixture("stuck0.scirc");
  EXPECT_EQ(s.latches.size(), 1u);
  EXPECT_EQ(s.inputs.size(), 1u);
  EXPECT_EQ(s.latches[0].init, InitValue::Zero);
}

TEST(Parse, UndeclaredSignal) {
  EXPECT_THROW(parse_circuit("latch n init 0 next m\n"), InputError);
}

TEST(Parse, CombinationalCycle) {
  EXPECT_THROW(parse_circuit("input x\nsignal a = (b AND x)\nsignal b = NOT a\n"), InputError);
}

TEST(Parse, SyntaxErrorCarriesPosition) {
  try {
    load_circuit(fixture_path("bad_syntax.scirc"));
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
    EXPECT_EQ(e.column(), 14u);
  }
  EXPECT_THROW(parse_circuit("input x\nlatch s init 0 next (x AND\n"), ParseError);
  EXPECT_THROW(parse_circuit("input x\ninput x\n"), ParseError);
  EXPECT_THROW(parse_circuit("wire x\n"), ParseError);
}

TEST(Parse, RoundTrip) {
  for (const auto& name : single_circuit_fixtures()) {
    Circuit c = fixture(name);
    Circuit again = parse_circuit(to_scirc(c));
    EXPECT_EQ(to_scirc(again), to_scirc(c)) << name;
  }
}

TEST(Encode, StuckAtZeroClauses) {
  TransitionSystem ts = encode(fixture("stuck0.scirc"));
  Var s = ts.state[0], x = ts.inputs[0], n = ts.next[0];
  Cnf expected{Clause{neg(n), pos(s)}, Clause{neg(n), pos(x)}, Clause{pos(n), neg(s), neg(x)}};
  EXPECT_EQ(ts.trans.normalized().clauses(), expected.normalized().clauses());
  EXPECT_EQ(ts.init.clauses(), std::vector<Clause>{Clause{neg(s)}});
  EXPECT_EQ(ts.prop.clauses(), std::vector<Clause>{Clause{neg(s)}});
}

TEST(Encode, ToggleHasFourClauses) {
  TransitionSystem ts = encode(fixture("toggle.scirc"));
  EXPECT_EQ(ts.trans.size(), 4u);
  EXPECT_TRUE(ts.internals.empty());
}

TEST(Encode, PropertyOverInputIsRejected) {
  EXPECT_THROW(encode(parse_circuit("input x\nlatch s init 0 next x\nprop (s OR x)\n")), InputError);
}

TEST(Encode, MatchesSimulation) {
  std::vector<TransitionSystem> systems;
  std::vector<Circuit> circuits;
  for (const auto& name : single_circuit_fixtures()) circuits.push_back(fixture(name));
  auto d = fixture("dff.scirc");
  circuits.push_back(build_miter(d, fixture("recoded_dff.scirc")));
  for (const Circuit& c : circuits) {
    TransitionSystem ts = encode(c);
    Simulator sim(c);
    std::size_t ns = ts.state.size(), ni = ts.inputs.size();
    for (std::uint64_t sb = 0; sb < (1ull << ns); ++sb) {
      for (std::uint64_t ib = 0; ib < (1ull << ni); ++ib) {
        auto st = bits(sb, ns), in = bits(ib, ni);
        std::vector<Lit> assume;
        for (std::size_t i = 0; i < ns; ++i) assume.push_back(Lit(ts.state[i], !st[i]));
        for (std::size_t i = 0; i < ni; ++i) assume.push_back(Lit(ts.inputs[i], !in[i]));
        auto r = solve(ts.trans, assume);
        if (!sim.admissible(in)) {
          EXPECT_FALSE(r.sat);
          continue;
        }
        ASSERT_TRUE(r.sat);
        auto expect = sim.step(st, in).next;
        for (std::size_t i = 0; i < ns; ++i) EXPECT_EQ(r.model.at(ts.next[i]), expect[i]);
        // The successor is unique.
        Cnf blocked = ts.trans;
        std::vector<Lit> diff;
        for (std::size_t i = 0; i < ns; ++i) diff.push_back(Lit(ts.next[i], expect[i]));
        if (!diff.empty()) {
          blocked.add(Clause(diff));
          EXPECT_FALSE(solve(blocked, assume).sat);
        }
      }
    }
  }
}

TEST(Encode, PropertyCnfMatchesSimulation) {
  for (const auto& name : single_circuit_fixtures()) {
    Circuit c = fixture(name);
    TransitionSystem ts = encode(c);
    Simulator sim(c);
    for (std::uint64_t sb = 0; sb < (1ull << ts.state.size()); ++sb) {
      auto st = bits(sb, ts.state.size());
      Assignment a;
      for (std::size_t i = 0; i < st.size(); ++i) a.set(ts.state[i], st[i]);
      EXPECT_EQ(evaluate(ts.prop, a) == Truth::True, sim.property(st)) << name;
    }
  }
}

TEST(Stuttering, CopyBranch) {
  TransitionSystem ts = stuttered("stuck0.scirc");
  ASSERT_TRUE(ts.stutter);
  Cnf f = ts.trans;
  f.add(Clause{neg(ts.state[0])});
  f.add(Clause{neg(*ts.stutter)});
  f.add(Clause{pos(ts.next[0])});
  EXPECT_FALSE(solve(f).sat);
}

TEST(Stuttering, IdentityHolds) {
  for (const auto& name : single_circuit_fixtures()) EXPECT_TRUE(has_stuttering_identity(stuttered(name))) << name;
  // An oscillator cannot stay put until stuttering is added.
  Circuit osc = parse_circuit("latch s init 0 next NOT s\nprop NOT s\n");
  EXPECT_FALSE(has_stuttering_identity(encode(osc)));
  EXPECT_TRUE(has_stuttering_identity(add_stuttering(encode(osc))));
}

TEST(Stuttering, TwiceIsAnError) {
  TransitionSystem ts = stuttered("toggle.scirc");
  EXPECT_THROW(add_stuttering(ts), std::invalid_argument);
}

TEST(Stuttering, NativeDeclarationIsRespected) {
  Circuit c = parse_circuit("input x\nlatch s init 0 next (s OR x)\nprop NOT s\nstuttering native\n");
  TransitionSystem ts = encode(c);
  EXPECT_TRUE(ts.native_stuttering);
  EXPECT_THROW(add_stuttering(ts), std::invalid_argument);
  EXPECT_TRUE(has_stuttering_identity(ts));
}

TEST(Miter, DffSecShape) {
  TransitionSystem ts = encode(build_miter(fixture("dff.scirc"), fixture("dff.scirc")));
  EXPECT_EQ(ts.state.size(), 2u);
  int interface = 0;
  for (const auto& t : ts.tags) interface += t == "interface";
  EXPECT_EQ(interface, 2);
  // I forces equal states.
  Cnf f = ts.init;
  f.add(Clause{pos(ts.state[0]), pos(ts.state[1])});
  f.add(Clause{neg(ts.state[0]), neg(ts.state[1])});
  EXPECT_FALSE(solve(f).sat);
}

TEST(Miter, EqualityIsInductive) {
  TransitionSystem ts = encode(build_miter(fixture("dff.scirc"), fixture("dff.scirc")));
  Var a = ts.state[0], b = ts.state[1], a1 = ts.next[0], b1 = ts.next[1];
  Cnf lhs = ts.trans;
  lhs.add(Clause{neg(a), pos(b)});
  lhs.add(Clause{pos(a), neg(b)});
  EXPECT_TRUE(implies(lhs, Cnf{Clause{neg(a1), pos(b1)}, Clause{pos(a1), neg(b1)}}));
}

TEST(Miter, ArityMismatch) {
  Circuit two = parse_circuit("input x\ninput y\nlatch s init 0 next (x AND y)\noutput z = s\n");
  EXPECT_THROW(build_miter(fixture("dff.scirc"), two), InputError);
}

TEST(Frame, Instances) {
  TransitionSystem ts = encode(fixture("stuck0.scirc"));
  auto vars_of = [&](const Cnf& f) {
    std::set<std::string> out;
    for (const Clause& c : f)
      for (Lit l : c) out.insert(ts.vars->display(l.var()));
    return out;
  };
  EXPECT_EQ(vars_of(frame(ts, 0)), (std::set<std::string>{"s@0", "x@0", "s@1"}));
  EXPECT_EQ(vars_of(frame(ts, 3)), (std::set<std::string>{"s@3", "x@3", "s@4"}));
  EXPECT_EQ(frame(ts, 3).size(), ts.trans.size());
}
