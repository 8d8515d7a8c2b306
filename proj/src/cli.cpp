#include "pclor/cli.hpp"

#include <chrono>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <sstream>

#include <json.hpp>

#include "pclor/error.hpp"
#include "pclor/indclause.hpp"
#include "pclor/qe_oracle.hpp"
#include "pclor/random_circuit.hpp"
#include "pclor/sat.hpp"

namespace pclor::cli {

namespace {

std::string bits(const std::vector<bool>& v) {
  if (v.empty()) return "-";
  std::string s;
  for (bool b : v) s += b ? '1' : '0';
  return s;
}

std::optional<std::vector<bool>> parse_bits(const std::string& s, std::size_t width) {
  if (s == "-") {
    if (width != 0) return std::nullopt;
    return std::vector<bool>{};
  }
  if (s.size() != width) return std::nullopt;
  std::vector<bool> out;
  for (char ch : s) {
    if (ch != '0' && ch != '1') return std::nullopt;
    out.push_back(ch == '1');
  }
  return out;
}

// Template variable of ts for every name in `names`.
std::vector<Var> by_name(const TransitionSystem& ts, const std::vector<Var>& pool,
                         const std::vector<std::string>& names) {
  std::map<std::string, Var> m;
  for (Var v : pool) m[ts.vars->info(v).name] = v;
  std::vector<Var> out;
  for (const auto& n : names) {
    auto it = m.find(n);
    if (it == m.end()) throw InternalError("no variable for " + n);
    out.push_back(it->second);
  }
  return out;
}

std::vector<std::string> latch_names(const Circuit& c) {
  std::vector<std::string> out;
  for (const auto& l : c.latches) out.push_back(l.name);
  return out;
}

std::vector<bool> values(const Assignment& a, const std::vector<Var>& vars) {
  std::vector<bool> out;
  for (Var v : vars) out.push_back(a.at(v));
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string stem(const std::string& path) { return std::filesystem::path(path).stem().string(); }

VerifyResult fail(std::string msg) { return {false, std::move(msg)}; }

VerifyResult verify_trace(const Circuit& c, std::istringstream& in) {
  static const std::regex line_re(R"(step (\d+): inputs (\S+) state (\S+))");
  std::vector<std::vector<bool>> states, inputs;
  std::vector<std::string> raw_inputs;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::smatch m;
    if (!std::regex_match(line, m, line_re)) return fail("malformed line: " + line);
    if (std::stoul(m[1]) != states.size()) return fail("step numbers are not consecutive at: " + line);
    auto s = parse_bits(m[3], c.latches.size());
    if (!s) return fail("step " + m[1].str() + ": state has the wrong width");
    states.push_back(*s);
    raw_inputs.push_back(m[2]);
  }
  if (states.empty()) return fail("empty trace");
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    auto x = parse_bits(raw_inputs[i], c.inputs.size());
    if (!x) return fail("step " + std::to_string(i) + ": inputs have the wrong width");
    inputs.push_back(*x);
  }
  for (std::size_t k = 0; k < c.latches.size(); ++k) {
    InitValue iv = c.latches[k].init;
    if (iv != InitValue::Free && states[0][k] != (iv == InitValue::One))
      return fail("step 0: not an initial state (latch " + c.latches[k].name + ")");
  }
  Simulator sim(c);
  for (std::size_t i = 0; i + 1 < states.size(); ++i) {
    if (!sim.admissible(inputs[i]))
      return fail("step " + std::to_string(i) + ": inputs violate an input equality");
    if (sim.step(states[i], inputs[i]).next != states[i + 1])
      return fail("step " + std::to_string(i) + ": next state does not follow from the circuit");
  }
  if (sim.property(states.back()))
    return fail("step " + std::to_string(states.size() - 1) + ": final state satisfies the property");
  return {true, "counterexample of " + std::to_string(states.size() - 1) + " transitions replays"};
}

VerifyResult verify_invariant(const Circuit& c, std::istringstream& in) {
  TransitionSystem ts = encode(c);
  std::vector<Var> latch = by_name(ts, ts.state, latch_names(c));
  std::map<std::string, Var> named;
  for (std::size_t k = 0; k < latch.size(); ++k) named[c.latches[k].name] = latch[k];
  std::map<int, Var> ids;
  Cnf inv;
  for (Var v : ts.state) inv.declare(v);
  std::string line;
  bool header = false;
  std::size_t expected = 0;
  std::vector<Lit> cur;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok)) continue;
    if (tok == "c") {
      std::string kw, name;
      int id = 0;
      if (ls >> kw && kw == "var" && ls >> id >> name) {
        auto it = named.find(name);
        if (it == named.end()) return fail("invariant names unknown latch " + name);
        ids[id] = it->second;
      }
      continue;
    }
    if (tok == "p") {
      std::string fmt;
      std::size_t nv = 0;
      if (!(ls >> fmt >> nv >> expected) || fmt != "cnf") return fail("bad header: " + line);
      header = true;
      continue;
    }
    if (!header) return fail("clause before the header");
    ls.clear();
    ls.str(line);
    int d = 0;
    while (ls >> d) {
      if (d == 0) {
        if (auto cl = Clause::make(cur)) inv.add(*cl);
        cur.clear();
        continue;
      }
      auto it = ids.find(std::abs(d));
      if (it == ids.end()) return fail("variable " + std::to_string(std::abs(d)) + " has no name");
      cur.push_back(Lit(it->second, d < 0));
    }
  }
  if (!header) return fail("missing header");
  if (!cur.empty()) return fail("unterminated clause");
  if (!implies(ts.init, inv)) return fail("condition 1: the initial states violate the invariant");
  if (!implies(inv, ts.prop)) return fail("condition 2: the invariant does not imply the property");
  Cnf lhs = inv;
  lhs.add_all(ts.trans);
  if (!implies(lhs, ts.at_frame(inv, 1))) return fail("condition 3: the invariant is not inductive");
  return {true, "invariant passes initiation, property and consecution"};
}

struct Outcome {
  int code;
  RunReport report;
};

Outcome run_check(const Circuit& c, const std::string& label, const CheckFlags& flags,
                  std::ostream& err) {
  TransitionSystem ts = encode(c);
  if (!c.native_stuttering) ts = add_stuttering(ts);
  CheckOptions opts;
  opts.max_frames = flags.max_frames;
  opts.pqe.node_budget = flags.pqe_budget;
  if (!flags.guess.empty()) {
    if (flags.guess.rfind("drop:", 0) != 0) throw InputError("guess must look like drop:<tag>");
    opts.guess = flags.guess.substr(5);
    if (tagged_clauses(ts, opts.guess).empty())
      err << "warning: no clause carries the tag " << opts.guess << "\n";
  }
  if (flags.oracle_check) {
    if (ts.state.size() <= kStateBudget)
      opts.oracle_check = true;
    else
      err << "warning: --oracle-check skipped, more than " << kStateBudget << " state bits\n";
  }
  if (flags.engine != "lor" && flags.engine != "lor-ic")
    throw InputError("unknown engine " + flags.engine);

  RunReport rep;
  rep.engine = flags.engine;
  auto t0 = std::chrono::steady_clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  };
  Witness w;
  try {
    w = flags.engine == "lor" ? pc_lor(ts, opts) : pc_lor_ic(ts, opts);
  } catch (const CheckAborted& e) {
    rep.verdict = "unknown";
    rep.message = e.what();
    rep.seconds = elapsed();
    if (e.chain()) {
      rep.frames = e.chain()->depth();
      for (std::uint32_t k = 0; k <= e.chain()->depth(); ++k) rep.frame_sizes.push_back(e.chain()->h(k).size());
    }
    return {kUnknown, rep};
  }
  rep.seconds = elapsed();
  rep.frames = w.frames;
  rep.frame_sizes = w.frame_sizes;
  bool holds = w.kind == Witness::Kind::Invariant;
  rep.verdict = holds ? "holds" : "fails";
  std::string text = holds ? format_invariant(c, ts, w.invariant) : format_trace(c, ts, w);
  VerifyResult vr = verify_witness(c, text);
  if (!vr.ok) throw InternalError("emitted witness does not verify: " + vr.message);
  rep.witness_path = flags.witness.empty() ? label + (holds ? ".inv.cnf" : ".trace") : flags.witness;
  std::ofstream f(rep.witness_path);
  if (!f) throw InputError("cannot write " + rep.witness_path);
  f << text;
  rep.message = vr.message;
  return {holds ? kHolds : kFails, rep};
}

void print_report(const RunReport& rep, const std::string& verdict_word, bool json, std::ostream& out) {
  if (json) {
    out << rep.to_json() << "\n";
    return;
  }
  out << verdict_word << "\n";
  out << "engine " << rep.engine << ", " << rep.frames << " frames, " << rep.seconds << " s\n";
  if (!rep.witness_path.empty()) out << "witness " << rep.witness_path << "\n";
  if (!rep.message.empty()) out << rep.message << "\n";
}

template <class F>
int guarded(std::ostream& err, F&& body) {
  try {
    return body();
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const BudgetExceeded& e) {
    err << "budget exhausted: " << e.what() << "\n";
    return kUnknown;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
}

}  // namespace

std::string RunReport::to_json() const {
  nlohmann::json j;
  j["verdict"] = verdict;
  j["engine"] = engine;
  j["frames"] = frames;
  j["witness"] = witness_path;
  j["frame_sizes"] = frame_sizes;
  j["seconds"] = seconds;
  j["message"] = message;
  return j.dump();
}

std::string format_trace(const Circuit& c, const TransitionSystem& ts, const Witness& w) {
  std::vector<Var> latch = by_name(ts, ts.state, latch_names(c));
  std::vector<Var> in = by_name(ts, ts.inputs, c.inputs);
  std::vector<std::vector<bool>> states{values(w.trace.at(0).state, latch)};
  std::vector<std::vector<bool>> inputs;
  for (std::size_t i = 0; i + 1 < w.trace.size(); ++i) {
    const Assignment& x = w.trace[i].inputs;
    if (ts.stutter && !x.at(*ts.stutter)) continue;
    inputs.push_back(values(x, in));
    states.push_back(values(w.trace[i + 1].state, latch));
  }
  std::ostringstream os;
  os << "# counterexample\n# inputs";
  for (const auto& n : c.inputs) os << " " << n;
  os << "\n# latches";
  for (const auto& n : latch_names(c)) os << " " << n;
  os << "\n";
  for (std::size_t i = 0; i < states.size(); ++i)
    os << "step " << i << ": inputs " << (i < inputs.size() ? bits(inputs[i]) : "-") << " state "
       << bits(states[i]) << "\n";
  return os.str();
}

std::string format_invariant(const Circuit& c, const TransitionSystem& ts, const Cnf& inv) {
  std::vector<Var> latch = by_name(ts, ts.state, latch_names(c));
  std::map<Var, int> id;
  for (std::size_t k = 0; k < latch.size(); ++k) id[latch[k]] = static_cast<int>(k + 1);
  std::ostringstream os;
  os << "c inductive invariant\n";
  for (std::size_t k = 0; k < latch.size(); ++k) os << "c var " << k + 1 << " " << c.latches[k].name << "\n";
  os << "p cnf " << latch.size() << " " << inv.size() << "\n";
  for (const Clause& cl : inv) {
    for (Lit l : cl) os << (l.negative() ? -id.at(l.var()) : id.at(l.var())) << " ";
    os << "0\n";
  }
  return os.str();
}

VerifyResult verify_witness(const Circuit& c, const std::string& text) {
  std::istringstream probe(text);
  std::string line;
  while (std::getline(probe, line)) {
    if (line.empty() || line[0] == '#' || line[0] == 'c') continue;
    std::istringstream in(text);
    if (line.rfind("step", 0) == 0) return verify_trace(c, in);
    if (line.rfind("p cnf", 0) == 0) return verify_invariant(c, in);
    break;
  }
  return fail("neither a trace nor an invariant");
}

PqeTask parse_pqe_dimacs(std::istream& in) {
  PqeTask task;
  std::string line;
  std::size_t lineno = 0, nvars = 0, na = 0, nb = 0;
  bool header = false, in_b = false;
  std::vector<Lit> cur;
  auto lit = [&](int d) {
    if (static_cast<std::size_t>(std::abs(d)) > nvars)
      throw ParseError(lineno, 1, "variable " + std::to_string(std::abs(d)) + " out of range");
    return Lit::from_dimacs(d);
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tok;
    if (!(ls >> tok) || tok == "c") continue;
    if (tok == "p") {
      std::string fmt;
      if (!(ls >> fmt >> nvars >> na >> nb) || fmt != "pqe")
        throw ParseError(lineno, 1, "expected: p pqe <vars> <A clauses> <B clauses>");
      header = true;
      continue;
    }
    if (!header) throw ParseError(lineno, 1, "missing p pqe header");
    if (tok == "%") {
      if (in_b) throw ParseError(lineno, 1, "second % separator");
      if (!cur.empty()) throw ParseError(lineno, 1, "unterminated clause before %");
      in_b = true;
      continue;
    }
    if (tok == "w") {
      int d = 0;
      while (ls >> d && d != 0) {
        if (d < 0) throw ParseError(lineno, 1, "negative variable in w line");
        task.W.insert(lit(d).var());
      }
      continue;
    }
    ls.clear();
    ls.str(line);
    std::string word;
    while (ls >> word) {
      int d = 0;
      try {
        std::size_t used = 0;
        d = std::stoi(word, &used);
        if (used != word.size()) throw std::invalid_argument(word);
      } catch (const std::exception&) {
        throw ParseError(lineno, 1, "not a literal: " + word);
      }
      if (d == 0) {
        Cnf& f = in_b ? task.B : task.A;
        if (auto cl = Clause::make(cur)) f.add(*cl);
        cur.clear();
      } else {
        cur.push_back(lit(d));
      }
    }
  }
  if (!header) throw InputError("missing p pqe header");
  if (!cur.empty()) throw InputError("unterminated clause at end of input");
  if (task.A.size() > na || task.B.size() > nb)
    throw InputError("more clauses than the header announces");
  for (Var v : task.W) task.B.declare(v);
  return task;
}

void write_clauses(std::ostream& out, const Cnf& f) {
  for (const Clause& c : f) {
    for (Lit l : c) out << l.to_dimacs() << " ";
    out << "0\n";
  }
}

int cmd_check(const std::string& file, const CheckFlags& flags, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Circuit c = load_circuit(file);
    Outcome o = run_check(c, stem(file), flags, err);
    print_report(o.report, o.report.verdict, flags.json, out);
    return o.code;
  });
}

int cmd_sec(const std::string& file_n, const std::string& file_k, const CheckFlags& flags,
            std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Circuit m = build_miter(load_circuit(file_n), load_circuit(file_k));
    Outcome o = run_check(m, stem(file_n) + "_vs_" + stem(file_k), flags, err);
    const char* word = o.code == kHolds ? "equivalent" : o.code == kFails ? "inequivalent" : "unknown";
    print_report(o.report, word, flags.json, out);
    return o.code;
  });
}

int cmd_pqe(const std::string& file, bool verify, std::uint64_t budget, std::ostream& out,
            std::ostream& err) {
  return guarded(err, [&] {
    std::ifstream in(file);
    if (!in) throw InputError("cannot open " + file);
    PqeTask task = parse_pqe_dimacs(in);
    PqeOptions opts;
    opts.node_budget = budget;
    PqeResult r = take_out(task, opts);
    write_clauses(out, r.a_star);
    if (verify) {
      std::set<Var> all = task.free_vars();
      all.insert(task.W.begin(), task.W.end());
      if (all.size() > kEnumerationBudget) {
        out << "c not verified: more than " << kEnumerationBudget << " variables\n";
      } else if (check_pqe(task.W, task.A, task.B, r.a_star)) {
        out << "c verified\n";
      } else {
        out << "c verification failed\n";
        return static_cast<int>(kInternalError);
      }
    }
    return static_cast<int>(kHolds);
  });
}

int cmd_verify_witness(const std::string& circuit, const std::string& witness,
                       const std::string& against, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Circuit c = load_circuit(circuit);
    if (!against.empty()) c = build_miter(c, load_circuit(against));
    VerifyResult r = verify_witness(c, read_file(witness));
    out << (r.ok ? "ok: " : "FAIL: ") << r.message << "\n";
    return r.ok ? static_cast<int>(kHolds) : static_cast<int>(kFails);
  });
}

int cmd_gen(std::uint64_t seed, unsigned latches, unsigned inputs, unsigned depth, std::ostream& out) {
  RandomCircuitShape shape;
  shape.latches = latches;
  shape.inputs = inputs;
  shape.depth = depth;
  out << "# random circuit, seed " << seed << "\n" << to_scirc(random_circuit(seed, shape));
  return kHolds;
}

}  // namespace pclor::cli
