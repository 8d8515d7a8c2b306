#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace pclor {

// Variables are positive integer ids. Id 0 is reserved as "no variable".
struct Var {
  std::uint32_t id = 0;
  constexpr auto operator<=>(const Var&) const = default;
  constexpr bool valid() const { return id != 0; }
};

class Lit {
 public:
  constexpr Lit() = default;
  constexpr explicit Lit(Var v, bool negative = false) : code_(v.id * 2 + (negative ? 1 : 0)) {}

  constexpr Var var() const { return Var{code_ >> 1}; }
  constexpr bool negative() const { return code_ & 1u; }
  constexpr bool positive() const { return !negative(); }
  constexpr Lit operator~() const { return from_code(code_ ^ 1u); }
  constexpr std::uint32_t code() const { return code_; }
  // Value of the literal when its variable takes value `v`.
  constexpr bool eval(bool v) const { return v != negative(); }

  static constexpr Lit from_code(std::uint32_t c) {
    Lit l;
    l.code_ = c;
    return l;
  }
  static Lit from_dimacs(int d);
  int to_dimacs() const;

  constexpr auto operator<=>(const Lit&) const = default;

 private:
  std::uint32_t code_ = 0;
};

inline Lit pos(Var v) { return Lit(v, false); }
inline Lit neg(Var v) { return Lit(v, true); }

enum class VarRole { State, Input, Internal, Free, Quantified };

const char* role_name(VarRole r);

struct VarInfo {
  std::string name;
  VarRole role;
  std::optional<std::uint32_t> frame;
  std::uint32_t base;  // id of the first instance of this signal
};

// Owns variable metadata. Instances of one signal in different time frames
// share a base id, which is what rename_frame uses to map between frames.
class VarTable {
 public:
  Var add(std::string name, VarRole role, std::optional<std::uint32_t> frame = std::nullopt);
  // The copy of `v` living in `frame`, created on first use.
  Var instance(Var v, std::uint32_t frame);
  std::optional<Var> find_instance(Var v, std::uint32_t frame) const;

  const VarInfo& info(Var v) const;
  std::string display(Var v) const;
  bool contains(Var v) const { return v.id >= 1 && v.id <= infos_.size(); }
  std::size_t size() const { return infos_.size(); }
  Var max_var() const { return Var{static_cast<std::uint32_t>(infos_.size())}; }

 private:
  std::vector<VarInfo> infos_;
  std::map<std::pair<std::uint32_t, std::uint32_t>, Var> instances_;
};

// Sorted, duplicate-free, never tautological.
class Clause {
 public:
  Clause() = default;
  Clause(std::initializer_list<Lit> lits);
  explicit Clause(std::vector<Lit> lits);
  // nullopt when `lits` contains a complementary pair.
  static std::optional<Clause> make(std::vector<Lit> lits);

  const std::vector<Lit>& lits() const { return lits_; }
  std::size_t size() const { return lits_.size(); }
  bool empty() const { return lits_.empty(); }
  auto begin() const { return lits_.begin(); }
  auto end() const { return lits_.end(); }
  const Lit& operator[](std::size_t i) const { return lits_[i]; }

  bool contains(Lit l) const;
  bool has_var(Var v) const;
  bool subsumes(const Clause& other) const;

  auto operator<=>(const Clause&) const = default;

 private:
  struct Trusted {};
  Clause(std::vector<Lit> lits, Trusted) : lits_(std::move(lits)) {}
  std::vector<Lit> lits_;
};

class Assignment {
 public:
  Assignment() = default;
  Assignment(std::initializer_list<std::pair<Var, bool>> init);

  void set(Var v, bool value) { values_[v] = value; }
  void erase(Var v) { values_.erase(v); }
  std::optional<bool> get(Var v) const;
  bool contains(Var v) const { return values_.count(v) != 0; }
  bool at(Var v) const;
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }
  auto begin() const { return values_.begin(); }
  auto end() const { return values_.end(); }

  // Complete over `vars`?
  bool complete_over(std::span<const Var> vars) const;
  Assignment restrict_to(std::span<const Var> vars) const;
  std::vector<Lit> to_lits() const;
  static Assignment from_lits(std::span<const Lit> lits);

  auto operator<=>(const Assignment&) const = default;

 private:
  std::map<Var, bool> values_;
};

enum class Truth { False, True, Unknown };

class Cnf {
 public:
  Cnf() = default;
  Cnf(std::initializer_list<Clause> clauses);
  explicit Cnf(std::vector<Clause> clauses);

  void add(Clause c);
  void add_all(const Cnf& other);
  void declare(Var v) { scope_.insert(v); }

  const std::vector<Clause>& clauses() const { return clauses_; }
  std::size_t size() const { return clauses_.size(); }
  bool empty() const { return clauses_.empty(); }
  auto begin() const { return clauses_.begin(); }
  auto end() const { return clauses_.end(); }
  const Clause& operator[](std::size_t i) const { return clauses_[i]; }

  // Declared scope: every variable of every clause plus explicit declarations.
  const std::set<Var>& scope() const { return scope_; }
  std::vector<Var> vars() const { return {scope_.begin(), scope_.end()}; }
  bool contains(const Clause& c) const;

  // Sorted, duplicate-free copy.
  Cnf normalized() const;

 private:
  std::vector<Clause> clauses_;
  std::set<Var> scope_;
};

// Resolvent of c1 and c2 on v; nullopt if it is a tautology.
// Throws std::invalid_argument unless v occurs with opposite signs in c1, c2.
std::optional<Clause> resolve(const Clause& c1, const Clause& c2, Var v);

Cnf cofactor(const Cnf& f, const Assignment& a);

// Maps a frame index to a new one; nullopt means "unmapped".
using FrameMap = std::function<std::optional<std::uint32_t>(std::uint32_t)>;
FrameMap frame_offset(int delta);
FrameMap frame_table(std::map<std::uint32_t, std::uint32_t> table);

Clause rename_frame(const Clause& c, VarTable& table, const FrameMap& shift);
Cnf rename_frame(const Cnf& f, VarTable& table, const FrameMap& shift);

// The clause falsified exactly by `s` over `vars`.
Clause longest_falsified_clause(const Assignment& s, std::span<const Var> vars);
Clause longest_falsified_clause(const Assignment& s);

Truth evaluate(const Clause& c, const Assignment& a);
Truth evaluate(const Cnf& f, const Assignment& a);

std::ostream& operator<<(std::ostream& os, Lit l);
std::ostream& operator<<(std::ostream& os, const Clause& c);
std::ostream& operator<<(std::ostream& os, const Cnf& f);

}  // namespace pclor
