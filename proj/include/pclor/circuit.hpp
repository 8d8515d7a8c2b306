#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pclor/cnf.hpp"

namespace pclor {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
  enum class Kind { Name, Const, Not, And, Or, Xor };
  Kind kind = Kind::Const;
  std::string name;  // Kind::Name
  bool value = false;  // Kind::Const
  ExprPtr lhs, rhs;

  static ExprPtr ref(std::string n);
  static ExprPtr constant(bool b);
  static ExprPtr negate(ExprPtr e);
  static ExprPtr binary(Kind k, ExprPtr a, ExprPtr b);
};

std::string to_string(const Expr& e);

enum class InitValue { Zero, One, Free };

struct Latch {
  std::string name;
  InitValue init = InitValue::Zero;
  ExprPtr next;
};

struct NamedExpr {
  std::string name;
  ExprPtr expr;
};

struct Circuit {
  std::vector<std::string> inputs;
  std::vector<Latch> latches;
  std::vector<NamedExpr> signals;
  std::vector<NamedExpr> outputs;
  // Property over latches. When absent, the property is "every output stays 0".
  ExprPtr prop;
  bool native_stuttering = false;
  // Inputs constrained equal in every step (miters).
  std::vector<std::pair<std::string, std::string>> equal_inputs;
};

// SCIRC text. Throws ParseError (syntax, with line and column) or InputError
// (undeclared or duplicate names, combinational cycles).
Circuit parse_circuit(std::string_view text);
Circuit load_circuit(const std::string& path);
std::string to_scirc(const Circuit& c);

// Gate-level simulation. Values are indexed like the vectors of the circuit.
class Simulator {
 public:
  explicit Simulator(const Circuit& c);
  struct Step {
    std::vector<bool> next;
    std::vector<bool> outputs;
  };
  Step step(const std::vector<bool>& state, const std::vector<bool>& inputs) const;
  bool eval(const Expr& e, const std::vector<bool>& state, const std::vector<bool>& inputs) const;
  // Property value of a state: prop(s), or all outputs 0 for every admissible input.
  bool property(const std::vector<bool>& state) const;
  bool admissible(const std::vector<bool>& inputs) const;

 private:
  std::map<std::string, bool> values(const std::vector<bool>& state,
                                     const std::vector<bool>& inputs) const;
  bool eval_in(const Expr& e, std::map<std::string, bool>& env) const;
  const Circuit& c_;
  std::vector<std::pair<std::size_t, std::size_t>> eq_;
  std::map<std::string, const NamedExpr*> defs_;
};

// I(S), T(S,X,Y,S'), P(S). Template variables live in frame 0, except the
// next-state variables, which are the frame-1 instances of the state variables.
struct TransitionSystem {
  std::shared_ptr<VarTable> vars;
  std::vector<Var> state;
  std::vector<Var> next;
  std::vector<Var> inputs;
  std::vector<Var> internals;
  Cnf init;
  Cnf trans;
  Cnf prop;
  std::vector<std::string> tags;  // parallel to trans; "" when untagged
  std::optional<Var> stutter;
  bool native_stuttering = false;

  std::vector<std::string> state_names() const;
  std::vector<std::string> input_names() const;
  // Template variables of one transition step other than the next state.
  std::vector<Var> step_vars() const;
  std::vector<Var> state_at(std::uint32_t frame) const;
  // Re-express a formula over S (frame 0) in frame `k`.
  Cnf at_frame(const Cnf& f, std::uint32_t k) const;
  Clause at_frame(const Clause& c, std::uint32_t k) const;
  // Clause subset of T, moved to the step k -> k+1.
  Cnf frame_clauses(const std::vector<std::size_t>& indices, std::uint32_t k) const;
};

TransitionSystem encode(const Circuit& c);
TransitionSystem add_stuttering(const TransitionSystem& ts);
Circuit build_miter(const Circuit& n, const Circuit& k);
// T over frame j -> j+1.
Cnf frame(const TransitionSystem& ts, std::uint32_t j);

// Is T(s, ., s) satisfiable for every state s? Enumerates up to 2^16 states.
bool has_stuttering_identity(const TransitionSystem& ts);

}  // namespace pclor
