#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "pclor/circuit.hpp"
#include "pclor/pclor.hpp"
#include "pclor/pqe.hpp"

namespace pclor::cli {

enum Exit : int { kHolds = 0, kFails = 1, kUnknown = 2, kInputError = 3, kInternalError = 4 };

struct RunReport {
  std::string verdict;  // holds, fails, unknown
  std::string engine;
  std::uint32_t frames = 0;
  std::string witness_path;
  std::vector<std::size_t> frame_sizes;
  double seconds = 0;
  std::string message;

  std::string to_json() const;
};

struct CheckFlags {
  std::string engine = "lor";  // lor or lor-ic
  std::string guess;           // "drop:<tag>"
  std::uint32_t max_frames = 0;
  std::uint64_t pqe_budget = 1'000'000;
  std::uint64_t seed = 0;
  std::string witness;  // default: <input stem>.inv.cnf or <input stem>.trace
  bool oracle_check = false;
  bool json = false;
};

// Trace lines "step <i>: inputs <bits> state <bits>" over the circuit's inputs
// and latches. Stutter steps of an added stutter input are dropped.
std::string format_trace(const Circuit& c, const TransitionSystem& ts, const Witness& w);
// DIMACS over the latches, numbered from 1 in declaration order.
std::string format_invariant(const Circuit& c, const TransitionSystem& ts, const Cnf& inv);

struct VerifyResult {
  bool ok = false;
  std::string message;
};

// Independent check: traces are replayed by gate-level simulation, invariants
// are checked with the SAT engine against the plain (unstuttered) encoding.
VerifyResult verify_witness(const Circuit& c, const std::string& text);

// "p pqe <vars> <A> <B>", "w <ids> 0", A clauses, "%", B clauses.
PqeTask parse_pqe_dimacs(std::istream& in);
// Clause lines only; an empty formula prints nothing.
void write_clauses(std::ostream& out, const Cnf& f);

int cmd_check(const std::string& file, const CheckFlags& flags, std::ostream& out, std::ostream& err);
int cmd_sec(const std::string& file_n, const std::string& file_k, const CheckFlags& flags,
            std::ostream& out, std::ostream& err);
int cmd_pqe(const std::string& file, bool verify, std::uint64_t budget, std::ostream& out,
            std::ostream& err);
int cmd_verify_witness(const std::string& circuit, const std::string& witness,
                       const std::string& against, std::ostream& out, std::ostream& err);
int cmd_gen(std::uint64_t seed, unsigned latches, unsigned inputs, unsigned depth, std::ostream& out);

}  // namespace pclor::cli
