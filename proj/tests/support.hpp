#pragma once

// Brute-force helpers shared by the unit tests. Deliberately naive: they are
// the reference the real code is checked against.

#include <cstdint>
#include <random>
#include <vector>

#include "pclor/cnf.hpp"

namespace pclor::testing {

inline Var v(std::uint32_t id) { return Var{id}; }
inline Lit L(int d) { return Lit::from_dimacs(d); }

inline Clause C(std::initializer_list<int> lits) {
  std::vector<Lit> out;
  for (int d : lits) out.push_back(L(d));
  return Clause(out);
}

inline Assignment point(const std::vector<Var>& vars, std::uint64_t bits) {
  Assignment a;
  for (std::size_t i = 0; i < vars.size(); ++i) a.set(vars[i], (bits >> i) & 1u);
  return a;
}

inline bool holds(const Clause& c, const Assignment& a) {
  for (Lit l : c)
    if (a.at(l.var()) == l.positive()) return true;
  return false;
}

inline bool holds(const Cnf& f, const Assignment& a) {
  for (const Clause& c : f)
    if (!holds(c, a)) return false;
  return true;
}

inline bool satisfiable_by_enumeration(const Cnf& f, const std::vector<Var>& vars) {
  for (std::uint64_t b = 0; b < (1ull << vars.size()); ++b)
    if (holds(f, point(vars, b))) return true;
  return false;
}

inline std::vector<Var> var_range(std::uint32_t n) {
  std::vector<Var> out;
  for (std::uint32_t i = 1; i <= n; ++i) out.push_back(Var{i});
  return out;
}

inline Clause random_clause(std::mt19937& rng, std::uint32_t nvars, int max_len) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<std::uint32_t> var(1, nvars);
  std::bernoulli_distribution sign(0.5);
  for (;;) {
    std::vector<Lit> lits;
    int n = len(rng);
    for (int i = 0; i < n; ++i) lits.push_back(Lit(Var{var(rng)}, sign(rng)));
    if (auto c = Clause::make(lits)) return *c;
  }
}

inline Cnf random_cnf(std::mt19937& rng, std::uint32_t nvars, int nclauses, int max_len) {
  Cnf f;
  for (std::uint32_t i = 1; i <= nvars; ++i) f.declare(Var{i});
  for (int i = 0; i < nclauses; ++i) f.add(random_clause(rng, nvars, max_len));
  return f;
}

}  // namespace pclor::testing
