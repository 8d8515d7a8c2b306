#include "pclor/circuit.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>

#include "pclor/error.hpp"
#include "pclor/sat.hpp"

namespace pclor {

ExprPtr Expr::ref(std::string n) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Name;
  e->name = std::move(n);
  return e;
}

ExprPtr Expr::constant(bool b) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Const;
  e->value = b;
  return e;
}

ExprPtr Expr::negate(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Not;
  e->lhs = std::move(a);
  return e;
}

ExprPtr Expr::binary(Kind k, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = k;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

std::string to_string(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Name: return e.name;
    case Expr::Kind::Const: return e.value ? "1" : "0";
    case Expr::Kind::Not: return "NOT " + to_string(*e.lhs);
    case Expr::Kind::And: return "(" + to_string(*e.lhs) + " AND " + to_string(*e.rhs) + ")";
    case Expr::Kind::Or: return "(" + to_string(*e.lhs) + " OR " + to_string(*e.rhs) + ")";
    case Expr::Kind::Xor: return "(" + to_string(*e.lhs) + " XOR " + to_string(*e.rhs) + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- parser

namespace {

struct Token {
  enum Kind { Word, LParen, RParen, Equals, Star, End } kind;
  std::string text;
  std::size_t column;
};

class LineLexer {
 public:
  LineLexer(std::string_view line, std::size_t line_no) : line_(line), line_no_(line_no) {
    advance();
  }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_no_, tok_.column, msg); }

  std::string expect_word(const char* what) {
    if (tok_.kind != Token::Word) fail(std::string("expected ") + what);
    return take().text;
  }
  void expect_keyword(const char* kw) {
    if (tok_.kind != Token::Word || tok_.text != kw) fail(std::string("expected '") + kw + "'");
    advance();
  }
  void expect_end() {
    if (tok_.kind != Token::End) fail("unexpected '" + tok_.text + "'");
  }

 private:
  void advance() {
    while (pos_ < line_.size() && std::isspace(static_cast<unsigned char>(line_[pos_]))) ++pos_;
    tok_.column = pos_ + 1;
    tok_.text.clear();
    if (pos_ >= line_.size() || line_[pos_] == '#') {
      tok_.kind = Token::End;
      return;
    }
    char ch = line_[pos_];
    auto single = [&](Token::Kind k) {
      tok_.kind = k;
      tok_.text = std::string(1, ch);
      ++pos_;
    };
    if (ch == '(') return single(Token::LParen);
    if (ch == ')') return single(Token::RParen);
    if (ch == '=') return single(Token::Equals);
    if (ch == '*') return single(Token::Star);
    auto word_char = [](char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '[' ||
             c == ']';
    };
    if (!word_char(ch)) throw ParseError(line_no_, pos_ + 1, std::string("unexpected character '") + ch + "'");
    std::size_t start = pos_;
    while (pos_ < line_.size() && word_char(line_[pos_])) ++pos_;
    tok_.kind = Token::Word;
    tok_.text = std::string(line_.substr(start, pos_ - start));
  }

  std::string_view line_;
  std::size_t line_no_;
  std::size_t pos_ = 0;
  Token tok_{};
};

bool is_operator_word(const std::string& w) {
  return w == "NOT" || w == "AND" || w == "OR" || w == "XOR";
}

bool valid_name(const std::string& w) {
  if (w.empty() || is_operator_word(w)) return false;
  unsigned char c = static_cast<unsigned char>(w[0]);
  return std::isalpha(c) || c == '_';
}

ExprPtr parse_term(LineLexer& lx) {
  const Token& t = lx.peek();
  if (t.kind == Token::LParen) {
    lx.take();
    ExprPtr acc = parse_term(lx);
    std::string op;
    while (lx.peek().kind == Token::Word) {
      std::string w = lx.peek().text;
      if (w != "AND" && w != "OR" && w != "XOR") lx.fail("expected AND, OR, XOR or ')'");
      if (!op.empty() && w != op) lx.fail("mixed operators need parentheses");
      op = w;
      lx.take();
      ExprPtr rhs = parse_term(lx);
      Expr::Kind k = w == "AND" ? Expr::Kind::And : w == "OR" ? Expr::Kind::Or : Expr::Kind::Xor;
      acc = Expr::binary(k, acc, rhs);
    }
    if (lx.peek().kind != Token::RParen) lx.fail("expected ')'");
    lx.take();
    return acc;
  }
  if (t.kind != Token::Word) lx.fail("expected an expression");
  if (t.text == "NOT") {
    lx.take();
    return Expr::negate(parse_term(lx));
  }
  if (t.text == "0" || t.text == "1") return Expr::constant(lx.take().text == "1");
  if (!valid_name(t.text)) lx.fail("invalid signal name '" + t.text + "'");
  return Expr::ref(lx.take().text);
}

void collect_refs(const Expr& e, std::vector<std::string>& out) {
  switch (e.kind) {
    case Expr::Kind::Name: out.push_back(e.name); break;
    case Expr::Kind::Const: break;
    case Expr::Kind::Not: collect_refs(*e.lhs, out); break;
    default:
      collect_refs(*e.lhs, out);
      collect_refs(*e.rhs, out);
  }
}

void validate(const Circuit& c, const std::map<std::string, std::size_t>& decl_line) {
  std::map<std::string, const NamedExpr*> defs;
  for (const auto& s : c.signals) defs[s.name] = &s;
  for (const auto& s : c.outputs) defs[s.name] = &s;

  auto check_refs = [&](const Expr& e, const std::string& owner) {
    std::vector<std::string> refs;
    collect_refs(e, refs);
    for (const auto& r : refs)
      if (!decl_line.count(r)) {
        auto it = decl_line.find(owner);
        std::string where = it == decl_line.end() ? "" : "line " + std::to_string(it->second) + ": ";
        throw InputError(where + "undeclared signal '" + r + "'");
      }
  };
  for (const auto& l : c.latches) check_refs(*l.next, l.name);
  for (const auto& s : c.signals) check_refs(*s.expr, s.name);
  for (const auto& s : c.outputs) check_refs(*s.expr, s.name);
  if (c.prop) check_refs(*c.prop, "prop");

  // Combinational cycles among signals and outputs.
  std::map<std::string, int> color;
  std::function<void(const std::string&)> visit = [&](const std::string& n) {
    auto it = defs.find(n);
    if (it == defs.end()) return;
    int& col = color[n];
    if (col == 2) return;
    if (col == 1) throw InputError("combinational cycle through '" + n + "'");
    col = 1;
    std::vector<std::string> refs;
    collect_refs(*it->second->expr, refs);
    for (const auto& r : refs) visit(r);
    color[n] = 2;
  };
  for (const auto& [n, d] : defs) visit(n);
}

}  // namespace

Circuit parse_circuit(std::string_view text) {
  Circuit c;
  std::map<std::string, std::size_t> decl_line;
  auto declare = [&](LineLexer& lx, const std::string& name, std::size_t line_no) {
    if (!valid_name(name)) lx.fail("invalid name '" + name + "'");
    if (decl_line.count(name))
      lx.fail("'" + name + "' already declared on line " + std::to_string(decl_line[name]));
    decl_line[name] = line_no;
  };

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    start = end + 1;

    LineLexer lx(line, line_no);
    if (lx.peek().kind == Token::End) {
      if (end == text.size()) break;
      continue;
    }
    std::string kw = lx.expect_word("a declaration");
    if (kw == "input") {
      std::string name = lx.expect_word("input name");
      declare(lx, name, line_no);
      c.inputs.push_back(name);
    } else if (kw == "latch") {
      Latch l;
      l.name = lx.expect_word("latch name");
      declare(lx, l.name, line_no);
      lx.expect_keyword("init");
      Token t = lx.take();
      if (t.kind == Token::Star)
        l.init = InitValue::Free;
      else if (t.kind == Token::Word && t.text == "0")
        l.init = InitValue::Zero;
      else if (t.kind == Token::Word && t.text == "1")
        l.init = InitValue::One;
      else
        throw ParseError(line_no, t.column, "expected 0, 1 or * after init");
      lx.expect_keyword("next");
      l.next = parse_term(lx);
      c.latches.push_back(std::move(l));
    } else if (kw == "signal" || kw == "output") {
      NamedExpr s;
      s.name = lx.expect_word("signal name");
      declare(lx, s.name, line_no);
      if (lx.peek().kind != Token::Equals) lx.fail("expected '='");
      lx.take();
      s.expr = parse_term(lx);
      (kw == "signal" ? c.signals : c.outputs).push_back(std::move(s));
    } else if (kw == "prop") {
      if (c.prop) lx.fail("second prop declaration");
      c.prop = parse_term(lx);
    } else if (kw == "stuttering") {
      lx.expect_keyword("native");
      c.native_stuttering = true;
    } else {
      throw ParseError(line_no, 1, "unknown declaration '" + kw + "'");
    }
    lx.expect_end();
    if (end == text.size()) break;
  }
  validate(c, decl_line);
  return c;
}

Circuit load_circuit(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_circuit(ss.str());
}

std::string to_scirc(const Circuit& c) {
  std::ostringstream os;
  for (const auto& i : c.inputs) os << "input " << i << "\n";
  for (const auto& l : c.latches) {
    const char* init = l.init == InitValue::Zero ? "0" : l.init == InitValue::One ? "1" : "*";
    os << "latch " << l.name << " init " << init << " next " << to_string(*l.next) << "\n";
  }
  for (const auto& s : c.signals) os << "signal " << s.name << " = " << to_string(*s.expr) << "\n";
  for (const auto& s : c.outputs) os << "output " << s.name << " = " << to_string(*s.expr) << "\n";
  if (c.prop) os << "prop " << to_string(*c.prop) << "\n";
  if (c.native_stuttering) os << "stuttering native\n";
  return os.str();
}

// ---------------------------------------------------------------- simulation

Simulator::Simulator(const Circuit& c) : c_(c) {
  for (const auto& s : c.signals) defs_[s.name] = &s;
  for (const auto& s : c.outputs) defs_[s.name] = &s;
  for (const auto& [a, b] : c.equal_inputs) {
    auto ia = std::find(c.inputs.begin(), c.inputs.end(), a);
    auto ib = std::find(c.inputs.begin(), c.inputs.end(), b);
    if (ia == c.inputs.end() || ib == c.inputs.end()) throw InputError("unknown input in constraint");
    eq_.emplace_back(ia - c.inputs.begin(), ib - c.inputs.begin());
  }
}

std::map<std::string, bool> Simulator::values(const std::vector<bool>& state,
                                              const std::vector<bool>& inputs) const {
  std::map<std::string, bool> env;
  for (std::size_t i = 0; i < c_.latches.size(); ++i) env[c_.latches[i].name] = state.at(i);
  for (std::size_t i = 0; i < c_.inputs.size(); ++i) env[c_.inputs[i]] = inputs.at(i);
  return env;
}

bool Simulator::eval_in(const Expr& e, std::map<std::string, bool>& env) const {
  switch (e.kind) {
    case Expr::Kind::Const: return e.value;
    case Expr::Kind::Name: {
      if (auto it = env.find(e.name); it != env.end()) return it->second;
      bool v = eval_in(*defs_.at(e.name)->expr, env);
      env[e.name] = v;
      return v;
    }
    case Expr::Kind::Not: return !eval_in(*e.lhs, env);
    case Expr::Kind::And: return eval_in(*e.lhs, env) && eval_in(*e.rhs, env);
    case Expr::Kind::Or: return eval_in(*e.lhs, env) || eval_in(*e.rhs, env);
    case Expr::Kind::Xor: return eval_in(*e.lhs, env) != eval_in(*e.rhs, env);
  }
  return false;
}

bool Simulator::eval(const Expr& e, const std::vector<bool>& state,
                     const std::vector<bool>& inputs) const {
  auto env = values(state, inputs);
  return eval_in(e, env);
}

Simulator::Step Simulator::step(const std::vector<bool>& state,
                                const std::vector<bool>& inputs) const {
  auto env = values(state, inputs);
  Step s;
  for (const auto& l : c_.latches) s.next.push_back(eval_in(*l.next, env));
  for (const auto& o : c_.outputs) s.outputs.push_back(eval_in(*o.expr, env));
  return s;
}

bool Simulator::admissible(const std::vector<bool>& inputs) const {
  for (auto [a, b] : eq_)
    if (inputs[a] != inputs[b]) return false;
  return true;
}

bool Simulator::property(const std::vector<bool>& state) const {
  std::size_t n = c_.inputs.size();
  if (c_.prop) return eval(*c_.prop, state, std::vector<bool>(n, false));
  if (n > 20) throw BudgetExceeded("too many inputs to enumerate");
  std::vector<bool> in(n);
  for (std::uint64_t bits = 0; bits < (1ull << n); ++bits) {
    for (std::size_t i = 0; i < n; ++i) in[i] = (bits >> i) & 1u;
    if (!admissible(in)) continue;
    for (bool z : step(state, in).outputs)
      if (z) return false;
  }
  return true;
}

// ---------------------------------------------------------------- encoding

std::vector<std::string> TransitionSystem::state_names() const {
  std::vector<std::string> out;
  for (Var v : state) out.push_back(vars->info(v).name);
  return out;
}

std::vector<std::string> TransitionSystem::input_names() const {
  std::vector<std::string> out;
  for (Var v : inputs) out.push_back(vars->info(v).name);
  return out;
}

std::vector<Var> TransitionSystem::step_vars() const {
  std::vector<Var> out = state;
  out.insert(out.end(), inputs.begin(), inputs.end());
  out.insert(out.end(), internals.begin(), internals.end());
  return out;
}

std::vector<Var> TransitionSystem::state_at(std::uint32_t frame) const {
  std::vector<Var> out;
  for (Var v : state) out.push_back(vars->instance(v, frame));
  return out;
}

Cnf TransitionSystem::at_frame(const Cnf& f, std::uint32_t k) const {
  return rename_frame(f, *vars, frame_offset(static_cast<int>(k)));
}

Clause TransitionSystem::at_frame(const Clause& c, std::uint32_t k) const {
  return rename_frame(c, *vars, frame_offset(static_cast<int>(k)));
}

Cnf TransitionSystem::frame_clauses(const std::vector<std::size_t>& indices,
                                    std::uint32_t k) const {
  Cnf out;
  auto shift = frame_offset(static_cast<int>(k));
  for (std::size_t i : indices) out.add(rename_frame(trans[i], *vars, shift));
  return out;
}

Cnf frame(const TransitionSystem& ts, std::uint32_t j) {
  return rename_frame(ts.trans, *ts.vars, frame_offset(static_cast<int>(j)));
}

namespace {

struct Node {
  bool is_const = false;
  bool value = false;
  Lit lit;

  static Node constant(bool b) { return Node{true, b, Lit()}; }
  static Node literal(Lit l) { return Node{false, false, l}; }
  Node operator!() const { return is_const ? constant(!value) : literal(~lit); }
  bool operator==(const Node& o) const {
    return is_const == o.is_const && (is_const ? value == o.value : lit == o.lit);
  }
};

class Encoder {
 public:
  Encoder(const Circuit& c, TransitionSystem& ts) : c_(c), ts_(ts) {
    for (const auto& s : c.signals) defs_[s.name] = &s;
    for (const auto& s : c.outputs) defs_[s.name] = &s;
  }

  void bind(const std::string& name, Var v) { memo_[name] = Node::literal(pos(v)); }

  void emit(std::vector<Lit> lits, const std::string& tag) {
    ts_.trans.add(Clause(std::move(lits)));
    ts_.tags.push_back(tag);
  }

  // Folds constants and trivial operand pairs; nullopt when a real gate is needed.
  static std::optional<Node> simplify(Expr::Kind k, Node a, Node b) {
    if (b.is_const) std::swap(a, b);
    switch (k) {
      case Expr::Kind::And:
        if (a.is_const) return a.value ? b : a;
        if (a == b) return a;
        if (a == !b) return Node::constant(false);
        break;
      case Expr::Kind::Or:
        if (a.is_const) return a.value ? a : b;
        if (a == b) return a;
        if (a == !b) return Node::constant(true);
        break;
      case Expr::Kind::Xor:
        if (a.is_const) return a.value ? !b : b;
        if (a == b) return Node::constant(false);
        if (a == !b) return Node::constant(true);
        break;
      default: break;
    }
    return std::nullopt;
  }

  void gate_onto(Lit y, Expr::Kind k, Lit a, Lit b, const std::string& tag) {
    switch (k) {
      case Expr::Kind::And:
        emit({~y, a}, tag);
        emit({~y, b}, tag);
        emit({y, ~a, ~b}, tag);
        break;
      case Expr::Kind::Or:
        emit({y, ~a}, tag);
        emit({y, ~b}, tag);
        emit({~y, a, b}, tag);
        break;
      case Expr::Kind::Xor:
        emit({~y, a, b}, tag);
        emit({~y, ~a, ~b}, tag);
        emit({y, ~a, b}, tag);
        emit({y, a, ~b}, tag);
        break;
      default: throw InternalError("not a gate");
    }
  }

  // Encodes `e` with its top gate (if any) driving literal `out`.
  void encode_onto(const Expr& e, Lit out, const std::string& tag) {
    if (e.kind == Expr::Kind::Not) return encode_onto(*e.lhs, ~out, tag);
    Node n;
    if (e.kind == Expr::Kind::And || e.kind == Expr::Kind::Or || e.kind == Expr::Kind::Xor) {
      Node a = encode(*e.lhs), b = encode(*e.rhs);
      auto s = simplify(e.kind, a, b);
      if (!s) return gate_onto(out, e.kind, a.lit, b.lit, tag);
      n = *s;
    } else {
      n = encode(e);
    }
    if (n.is_const) {
      emit({n.value ? out : ~out}, tag);
    } else {
      emit({~out, n.lit}, tag);
      emit({out, ~n.lit}, tag);
    }
  }

  Node encode(const Expr& e, const std::string& hint = "") {
    switch (e.kind) {
      case Expr::Kind::Const: return Node::constant(e.value);
      case Expr::Kind::Name: return named(e.name);
      case Expr::Kind::Not: return !encode(*e.lhs, hint);
      default: break;
    }
    Node a = encode(*e.lhs), b = encode(*e.rhs);
    if (auto s = simplify(e.kind, a, b)) return *s;
    std::string name = hint.empty() ? "_g" + std::to_string(++gates_) : hint;
    Var y = ts_.vars->add(name, VarRole::Internal, 0);
    ts_.internals.push_back(y);
    gate_onto(pos(y), e.kind, a.lit, b.lit, "");
    return Node::literal(pos(y));
  }

  Node named(const std::string& n) {
    if (auto it = memo_.find(n); it != memo_.end()) return it->second;
    auto d = defs_.find(n);
    if (d == defs_.end()) throw InputError("undeclared signal '" + n + "'");
    Node r = encode(*d->second->expr, n);
    memo_[n] = r;
    return r;
  }

 private:
  const Circuit& c_;
  TransitionSystem& ts_;
  std::map<std::string, const NamedExpr*> defs_;
  std::map<std::string, Node> memo_;
  int gates_ = 0;
};

// Names (latches and inputs) that `e` depends on, through signals.
void support(const Circuit& c, const Expr& e, std::set<std::string>& out,
             const std::map<std::string, const NamedExpr*>& defs) {
  std::vector<std::string> refs;
  collect_refs(e, refs);
  for (const auto& r : refs) {
    if (auto it = defs.find(r); it != defs.end()) {
      support(c, *it->second->expr, out, defs);
    } else {
      out.insert(r);
    }
  }
}

// CNF over the latch support whose models are exactly the good states.
Cnf property_cnf(const Circuit& c, const TransitionSystem& ts) {
  std::map<std::string, const NamedExpr*> defs;
  for (const auto& s : c.signals) defs[s.name] = &s;
  for (const auto& s : c.outputs) defs[s.name] = &s;

  std::set<std::string> names;
  if (c.prop) {
    support(c, *c.prop, names, defs);
  } else {
    for (const auto& o : c.outputs) support(c, *o.expr, names, defs);
  }
  std::vector<std::size_t> latch_idx, input_idx;
  for (std::size_t i = 0; i < c.latches.size(); ++i)
    if (names.count(c.latches[i].name)) latch_idx.push_back(i);
  for (std::size_t i = 0; i < c.inputs.size(); ++i)
    if (names.count(c.inputs[i])) input_idx.push_back(i);
  if (c.prop && !input_idx.empty())
    throw InputError("property depends on input '" + c.inputs[input_idx[0]] + "'");
  // Inputs tied by an equality constraint must be enumerated together.
  for (const auto& [a, b] : c.equal_inputs) {
    for (std::size_t i = 0; i < c.inputs.size(); ++i)
      if ((c.inputs[i] == a || c.inputs[i] == b) &&
          std::find(input_idx.begin(), input_idx.end(), i) == input_idx.end())
        input_idx.push_back(i);
  }
  std::sort(input_idx.begin(), input_idx.end());
  if (latch_idx.size() > 20 || input_idx.size() > 20)
    throw BudgetExceeded("property support too large for tabulation");

  Simulator sim(c);
  std::size_t k = latch_idx.size();
  std::vector<bool> good(1ull << k);
  std::vector<bool> state(c.latches.size()), in(c.inputs.size());
  for (std::uint64_t sb = 0; sb < good.size(); ++sb) {
    for (std::size_t i = 0; i < k; ++i) state[latch_idx[i]] = (sb >> i) & 1u;
    bool ok = true;
    if (c.prop) {
      ok = sim.eval(*c.prop, state, in);
    } else {
      for (std::uint64_t ib = 0; ok && ib < (1ull << input_idx.size()); ++ib) {
        for (std::size_t i = 0; i < input_idx.size(); ++i) in[input_idx[i]] = (ib >> i) & 1u;
        if (!sim.admissible(in)) continue;
        for (bool z : sim.step(state, in).outputs)
          if (z) ok = false;
      }
    }
    good[sb] = ok;
  }

  // Cover the bad points with clauses, each grown greedily from the point's
  // longest falsified clause by dropping literals while only bad points fall out.
  Cnf p;
  for (Var v : ts.state) p.declare(v);
  std::vector<std::pair<std::uint64_t, std::uint64_t>> cubes;  // (mask, value)
  for (std::uint64_t b = 0; b < good.size(); ++b) {
    if (good[b]) continue;
    bool covered = std::any_of(cubes.begin(), cubes.end(),
                               [&](auto& cv) { return (b & cv.first) == cv.second; });
    if (covered) continue;
    std::uint64_t mask = good.size() - 1;
    for (std::size_t i = 0; i < k; ++i) {
      std::uint64_t trial = mask & ~(1ull << i);
      std::uint64_t val = b & trial;
      bool all_bad = true;
      for (std::uint64_t x = 0; x < good.size() && all_bad; ++x)
        if ((x & trial) == val && good[x]) all_bad = false;
      if (all_bad) mask = trial;
    }
    cubes.emplace_back(mask, b & mask);
    std::vector<Lit> lits;
    for (std::size_t i = 0; i < k; ++i)
      if ((mask >> i) & 1u) lits.push_back(Lit(ts.state[latch_idx[i]], (b >> i) & 1u));
    p.add(Clause(lits));
  }
  return p;
}

}  // namespace

TransitionSystem encode(const Circuit& c) {
  TransitionSystem ts;
  ts.vars = std::make_shared<VarTable>();
  ts.native_stuttering = c.native_stuttering;
  Encoder enc(c, ts);
  for (const auto& l : c.latches) {
    Var s = ts.vars->add(l.name, VarRole::State, 0);
    ts.state.push_back(s);
    ts.next.push_back(ts.vars->instance(s, 1));
    enc.bind(l.name, s);
    if (l.init == InitValue::Zero) ts.init.add(Clause{neg(s)});
    if (l.init == InitValue::One) ts.init.add(Clause{pos(s)});
  }
  for (Var s : ts.state) ts.init.declare(s);
  for (const auto& i : c.inputs) {
    Var x = ts.vars->add(i, VarRole::Input, 0);
    ts.inputs.push_back(x);
    enc.bind(i, x);
  }
  for (std::size_t i = 0; i < c.latches.size(); ++i)
    enc.encode_onto(*c.latches[i].next, pos(ts.next[i]), "next");
  for (const auto& [a, b] : c.equal_inputs) {
    auto ia = std::find(c.inputs.begin(), c.inputs.end(), a) - c.inputs.begin();
    auto ib = std::find(c.inputs.begin(), c.inputs.end(), b) - c.inputs.begin();
    Var xa = ts.inputs.at(static_cast<std::size_t>(ia)), xb = ts.inputs.at(static_cast<std::size_t>(ib));
    enc.emit({neg(xa), pos(xb)}, "interface");
    enc.emit({pos(xa), neg(xb)}, "interface");
  }
  for (Var v : ts.step_vars()) ts.trans.declare(v);
  for (Var v : ts.next) ts.trans.declare(v);
  ts.prop = property_cnf(c, ts);
  return ts;
}

TransitionSystem add_stuttering(const TransitionSystem& ts) {
  if (ts.stutter) throw std::invalid_argument("transition system is already stuttered");
  if (ts.native_stuttering) throw std::invalid_argument("circuit declares native stuttering");
  TransitionSystem out = ts;
  out.trans = Cnf();
  out.tags.clear();
  VarTable& vt = *out.vars;
  Var v = vt.add("stutter", VarRole::Input, 0);
  out.inputs.push_back(v);
  out.stutter = v;

  std::map<Var, Var> fresh;
  for (std::size_t i = 0; i < ts.state.size(); ++i) {
    Var n = vt.add(vt.info(ts.state[i]).name + ".nx", VarRole::Internal, 0);
    out.internals.push_back(n);
    fresh[ts.next[i]] = n;
  }
  for (std::size_t c = 0; c < ts.trans.size(); ++c) {
    std::vector<Lit> lits;
    for (Lit l : ts.trans[c]) {
      auto it = fresh.find(l.var());
      lits.push_back(it == fresh.end() ? l : Lit(it->second, l.negative()));
    }
    out.trans.add(Clause(lits));
    out.tags.push_back(ts.tags[c]);
  }
  // v = 1 keeps the original next state, v = 0 copies the current state.
  for (std::size_t i = 0; i < ts.state.size(); ++i) {
    Lit s = pos(ts.state[i]), sn = pos(ts.next[i]), n = pos(fresh[ts.next[i]]);
    out.trans.add(Clause{neg(v), ~sn, n});
    out.trans.add(Clause{neg(v), sn, ~n});
    out.trans.add(Clause{pos(v), ~sn, s});
    out.trans.add(Clause{pos(v), sn, ~s});
    for (int k = 0; k < 4; ++k) out.tags.push_back("stutter");
  }
  for (Var x : out.step_vars()) out.trans.declare(x);
  for (Var x : out.next) out.trans.declare(x);
  return out;
}

namespace {

ExprPtr prefixed(const ExprPtr& e, const std::string& pre) {
  switch (e->kind) {
    case Expr::Kind::Name: return Expr::ref(pre + e->name);
    case Expr::Kind::Const: return e;
    case Expr::Kind::Not: return Expr::negate(prefixed(e->lhs, pre));
    default: return Expr::binary(e->kind, prefixed(e->lhs, pre), prefixed(e->rhs, pre));
  }
}

void append_prefixed(Circuit& m, const Circuit& c, const std::string& pre) {
  for (const auto& i : c.inputs) m.inputs.push_back(pre + i);
  for (const auto& l : c.latches) m.latches.push_back(Latch{pre + l.name, l.init, prefixed(l.next, pre)});
  for (const auto& s : c.signals) m.signals.push_back(NamedExpr{pre + s.name, prefixed(s.expr, pre)});
  for (const auto& s : c.outputs) m.signals.push_back(NamedExpr{pre + s.name, prefixed(s.expr, pre)});
}

}  // namespace

Circuit build_miter(const Circuit& n, const Circuit& k) {
  if (n.inputs.size() != k.inputs.size())
    throw InputError("input arity mismatch: " + std::to_string(n.inputs.size()) + " vs " +
                     std::to_string(k.inputs.size()));
  if (n.outputs.size() != k.outputs.size())
    throw InputError("output arity mismatch: " + std::to_string(n.outputs.size()) + " vs " +
                     std::to_string(k.outputs.size()));
  if (n.native_stuttering != k.native_stuttering)
    throw InputError("only one design declares native stuttering");
  Circuit m;
  append_prefixed(m, n, "N.");
  append_prefixed(m, k, "K.");
  for (std::size_t i = 0; i < n.inputs.size(); ++i)
    m.equal_inputs.emplace_back("N." + n.inputs[i], "K." + k.inputs[i]);
  ExprPtr z = Expr::constant(false);
  for (std::size_t i = 0; i < n.outputs.size(); ++i) {
    ExprPtr diff = Expr::binary(Expr::Kind::Xor, Expr::ref("N." + n.outputs[i].name),
                                Expr::ref("K." + k.outputs[i].name));
    z = i == 0 ? diff : Expr::binary(Expr::Kind::Or, z, diff);
  }
  m.outputs.push_back(NamedExpr{"miter.z", z});
  m.native_stuttering = n.native_stuttering;
  return m;
}

bool has_stuttering_identity(const TransitionSystem& ts) {
  if (ts.state.size() > 16) throw BudgetExceeded("too many state bits to enumerate");
  SatSolver s;
  s.add(ts.trans);
  for (std::size_t i = 0; i < ts.state.size(); ++i) {
    s.add_clause(Clause{neg(ts.state[i]), pos(ts.next[i])});
    s.add_clause(Clause{pos(ts.state[i]), neg(ts.next[i])});
  }
  std::vector<Lit> assume(ts.state.size());
  for (std::uint64_t b = 0; b < (1ull << ts.state.size()); ++b) {
    for (std::size_t i = 0; i < ts.state.size(); ++i) assume[i] = Lit(ts.state[i], !((b >> i) & 1u));
    if (!s.solve(assume)) return false;
  }
  return true;
}

}  // namespace pclor
