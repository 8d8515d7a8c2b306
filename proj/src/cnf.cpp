#include "pclor/cnf.hpp"

#include <algorithm>
#include <cstdlib>
#include <stdexcept>

#include "pclor/error.hpp"

namespace pclor {

Lit Lit::from_dimacs(int d) {
  if (d == 0) throw std::invalid_argument("literal 0");
  return Lit(Var{static_cast<std::uint32_t>(std::abs(d))}, d < 0);
}

int Lit::to_dimacs() const {
  int v = static_cast<int>(var().id);
  return negative() ? -v : v;
}

const char* role_name(VarRole r) {
  switch (r) {
    case VarRole::State: return "state";
    case VarRole::Input: return "input";
    case VarRole::Internal: return "internal";
    case VarRole::Free: return "free";
    case VarRole::Quantified: return "quantified";
  }
  return "?";
}

Var VarTable::add(std::string name, VarRole role, std::optional<std::uint32_t> frame) {
  Var v{static_cast<std::uint32_t>(infos_.size() + 1)};
  infos_.push_back(VarInfo{std::move(name), role, frame, v.id});
  if (frame) instances_.emplace(std::make_pair(v.id, *frame), v);
  return v;
}

Var VarTable::instance(Var v, std::uint32_t frame) {
  const VarInfo& vi = info(v);
  if (!vi.frame) throw std::invalid_argument("variable has no frame: " + vi.name);
  if (*vi.frame == frame) return v;
  auto key = std::make_pair(vi.base, frame);
  if (auto it = instances_.find(key); it != instances_.end()) return it->second;
  Var n{static_cast<std::uint32_t>(infos_.size() + 1)};
  infos_.push_back(VarInfo{vi.name, vi.role, frame, vi.base});
  instances_.emplace(key, n);
  return n;
}

std::optional<Var> VarTable::find_instance(Var v, std::uint32_t frame) const {
  const VarInfo& vi = info(v);
  if (!vi.frame) return std::nullopt;
  if (*vi.frame == frame) return v;
  auto it = instances_.find({vi.base, frame});
  if (it == instances_.end()) return std::nullopt;
  return it->second;
}

const VarInfo& VarTable::info(Var v) const {
  if (!contains(v)) throw std::out_of_range("unknown variable " + std::to_string(v.id));
  return infos_[v.id - 1];
}

std::string VarTable::display(Var v) const {
  const VarInfo& vi = info(v);
  if (!vi.frame) return vi.name;
  return vi.name + "@" + std::to_string(*vi.frame);
}

// ---------------------------------------------------------------- Clause

std::optional<Clause> Clause::make(std::vector<Lit> lits) {
  std::sort(lits.begin(), lits.end());
  lits.erase(std::unique(lits.begin(), lits.end()), lits.end());
  for (std::size_t i = 1; i < lits.size(); ++i)
    if (lits[i].var() == lits[i - 1].var()) return std::nullopt;
  for (Lit l : lits)
    if (!l.var().valid()) throw std::invalid_argument("literal over variable 0");
  return Clause(std::move(lits), Trusted{});
}

Clause::Clause(std::vector<Lit> lits) {
  auto c = make(std::move(lits));
  if (!c) throw std::invalid_argument("tautological clause");
  lits_ = std::move(c->lits_);
}

Clause::Clause(std::initializer_list<Lit> lits) : Clause(std::vector<Lit>(lits)) {}

bool Clause::contains(Lit l) const { return std::binary_search(lits_.begin(), lits_.end(), l); }

bool Clause::has_var(Var v) const { return contains(pos(v)) || contains(neg(v)); }

bool Clause::subsumes(const Clause& other) const {
  return std::includes(other.lits_.begin(), other.lits_.end(), lits_.begin(), lits_.end());
}

// ---------------------------------------------------------------- Assignment

Assignment::Assignment(std::initializer_list<std::pair<Var, bool>> init) {
  for (auto& [v, b] : init) values_[v] = b;
}

std::optional<bool> Assignment::get(Var v) const {
  auto it = values_.find(v);
  if (it == values_.end()) return std::nullopt;
  return it->second;
}

bool Assignment::at(Var v) const {
  auto it = values_.find(v);
  if (it == values_.end()) throw std::out_of_range("unassigned variable " + std::to_string(v.id));
  return it->second;
}

bool Assignment::complete_over(std::span<const Var> vars) const {
  return std::all_of(vars.begin(), vars.end(), [&](Var v) { return contains(v); });
}

Assignment Assignment::restrict_to(std::span<const Var> vars) const {
  Assignment r;
  for (Var v : vars)
    if (auto b = get(v)) r.set(v, *b);
  return r;
}

std::vector<Lit> Assignment::to_lits() const {
  std::vector<Lit> out;
  out.reserve(values_.size());
  for (auto& [v, b] : values_) out.push_back(Lit(v, !b));
  return out;
}

Assignment Assignment::from_lits(std::span<const Lit> lits) {
  Assignment a;
  for (Lit l : lits) {
    if (auto prev = a.get(l.var()); prev && *prev != l.positive())
      throw std::invalid_argument("contradictory literals");
    a.set(l.var(), l.positive());
  }
  return a;
}

// ---------------------------------------------------------------- Cnf

Cnf::Cnf(std::initializer_list<Clause> clauses) {
  for (const Clause& c : clauses) add(c);
}

Cnf::Cnf(std::vector<Clause> clauses) {
  for (Clause& c : clauses) add(std::move(c));
}

void Cnf::add(Clause c) {
  for (Lit l : c) scope_.insert(l.var());
  clauses_.push_back(std::move(c));
}

void Cnf::add_all(const Cnf& other) {
  for (const Clause& c : other) add(c);
  scope_.insert(other.scope_.begin(), other.scope_.end());
}

bool Cnf::contains(const Clause& c) const {
  return std::find(clauses_.begin(), clauses_.end(), c) != clauses_.end();
}

Cnf Cnf::normalized() const {
  Cnf r;
  r.clauses_ = clauses_;
  std::sort(r.clauses_.begin(), r.clauses_.end());
  r.clauses_.erase(std::unique(r.clauses_.begin(), r.clauses_.end()), r.clauses_.end());
  r.scope_ = scope_;
  return r;
}

// ---------------------------------------------------------------- operations

std::optional<Clause> resolve(const Clause& c1, const Clause& c2, Var v) {
  bool p1 = c1.contains(pos(v)), n1 = c1.contains(neg(v));
  bool p2 = c2.contains(pos(v)), n2 = c2.contains(neg(v));
  if (!((p1 && n2) || (n1 && p2)))
    throw std::invalid_argument("clauses not resolvable on variable " + std::to_string(v.id));
  std::vector<Lit> lits;
  lits.reserve(c1.size() + c2.size());
  for (Lit l : c1)
    if (l.var() != v) lits.push_back(l);
  for (Lit l : c2)
    if (l.var() != v) lits.push_back(l);
  return Clause::make(std::move(lits));
}

Cnf cofactor(const Cnf& f, const Assignment& a) {
  Cnf r;
  for (const Clause& c : f) {
    std::vector<Lit> rest;
    bool sat = false;
    for (Lit l : c) {
      auto val = a.get(l.var());
      if (!val) {
        rest.push_back(l);
      } else if (l.eval(*val)) {
        sat = true;
        break;
      }
    }
    if (!sat) r.add(Clause(std::move(rest)));
  }
  for (Var v : f.scope())
    if (!a.contains(v)) r.declare(v);
  return r;
}

FrameMap frame_offset(int delta) {
  return [delta](std::uint32_t f) -> std::optional<std::uint32_t> {
    long long n = static_cast<long long>(f) + delta;
    if (n < 0) return std::nullopt;
    return static_cast<std::uint32_t>(n);
  };
}

FrameMap frame_table(std::map<std::uint32_t, std::uint32_t> table) {
  return [t = std::move(table)](std::uint32_t f) -> std::optional<std::uint32_t> {
    auto it = t.find(f);
    if (it == t.end()) return std::nullopt;
    return it->second;
  };
}

namespace {

Var rename_var(Var v, VarTable& table, const FrameMap& shift) {
  const VarInfo& vi = table.info(v);
  if (!vi.frame) return v;
  auto to = shift(*vi.frame);
  if (!to) throw std::invalid_argument("frame " + std::to_string(*vi.frame) + " is not mapped");
  return table.instance(v, *to);
}

}  // namespace

Clause rename_frame(const Clause& c, VarTable& table, const FrameMap& shift) {
  std::vector<Lit> lits;
  lits.reserve(c.size());
  for (Lit l : c) lits.push_back(Lit(rename_var(l.var(), table, shift), l.negative()));
  return Clause(std::move(lits));
}

Cnf rename_frame(const Cnf& f, VarTable& table, const FrameMap& shift) {
  Cnf r;
  for (const Clause& c : f) r.add(rename_frame(c, table, shift));
  for (Var v : f.scope()) r.declare(rename_var(v, table, shift));
  return r;
}

Clause longest_falsified_clause(const Assignment& s, std::span<const Var> vars) {
  std::vector<Lit> lits;
  lits.reserve(vars.size());
  for (Var v : vars) {
    auto b = s.get(v);
    if (!b) throw std::invalid_argument("assignment is partial over variable " + std::to_string(v.id));
    lits.push_back(Lit(v, *b));
  }
  return Clause(std::move(lits));
}

Clause longest_falsified_clause(const Assignment& s) {
  std::vector<Lit> lits;
  for (auto& [v, b] : s) lits.push_back(Lit(v, b));
  return Clause(std::move(lits));
}

Truth evaluate(const Clause& c, const Assignment& a) {
  bool open = false;
  for (Lit l : c) {
    auto v = a.get(l.var());
    if (!v) {
      open = true;
    } else if (l.eval(*v)) {
      return Truth::True;
    }
  }
  return open ? Truth::Unknown : Truth::False;
}

Truth evaluate(const Cnf& f, const Assignment& a) {
  bool open = false;
  for (const Clause& c : f) {
    Truth t = evaluate(c, a);
    if (t == Truth::False) return Truth::False;
    if (t == Truth::Unknown) open = true;
  }
  return open ? Truth::Unknown : Truth::True;
}

std::ostream& operator<<(std::ostream& os, Lit l) { return os << l.to_dimacs(); }

std::ostream& operator<<(std::ostream& os, const Clause& c) {
  os << '(';
  for (std::size_t i = 0; i < c.size(); ++i) os << (i ? " " : "") << c[i];
  return os << ')';
}

std::ostream& operator<<(std::ostream& os, const Cnf& f) {
  os << '{';
  for (std::size_t i = 0; i < f.size(); ++i) os << (i ? ", " : "") << f[i];
  return os << '}';
}

}  // namespace pclor
