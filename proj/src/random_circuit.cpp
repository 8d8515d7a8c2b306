#include "pclor/random_circuit.hpp"

#include <random>
#include <string>

namespace pclor {

namespace {

struct Gen {
  std::mt19937_64 rng;
  const RandomCircuitShape& shape;

  bool coin(double p) { return std::bernoulli_distribution(p)(rng); }
  unsigned pick(unsigned n) { return std::uniform_int_distribution<unsigned>(0, n - 1)(rng); }

  ExprPtr leaf() {
    unsigned n = shape.latches + shape.inputs;
    unsigned k = pick(n);
    ExprPtr e = Expr::ref(k < shape.latches ? "l" + std::to_string(k)
                                            : "i" + std::to_string(k - shape.latches));
    return coin(0.3) ? Expr::negate(e) : e;
  }

  ExprPtr expr(unsigned depth) {
    if (depth == 0 || coin(0.25)) return leaf();
    static const Expr::Kind ops[] = {Expr::Kind::And, Expr::Kind::Or, Expr::Kind::Xor};
    ExprPtr e = Expr::binary(ops[pick(3)], expr(depth - 1), expr(depth - 1));
    return coin(0.15) ? Expr::negate(e) : e;
  }
};

}  // namespace

Circuit random_circuit(std::uint64_t seed, const RandomCircuitShape& shape) {
  Gen g{std::mt19937_64(seed), shape};
  Circuit c;
  for (unsigned i = 0; i < shape.inputs; ++i) c.inputs.push_back("i" + std::to_string(i));
  for (unsigned i = 0; i < shape.latches; ++i) {
    Latch l;
    l.name = "l" + std::to_string(i);
    double r = std::uniform_real_distribution<double>(0, 1)(g.rng);
    l.init = r < 0.6 ? InitValue::Zero : r < 0.9 ? InitValue::One : InitValue::Free;
    l.next = g.expr(shape.depth);
    c.latches.push_back(std::move(l));
  }
  auto lit = [&](unsigned k) {
    ExprPtr e = Expr::ref("l" + std::to_string(k));
    return g.coin(0.5) ? Expr::negate(e) : e;
  };
  unsigned a = g.pick(shape.latches);
  ExprPtr cube = lit(a);
  if (shape.latches > 1) {
    unsigned b = g.pick(shape.latches - 1);
    if (b >= a) ++b;
    cube = Expr::binary(Expr::Kind::And, cube, lit(b));
  }
  c.prop = Expr::negate(cube);
  return c;
}

}  // namespace pclor
