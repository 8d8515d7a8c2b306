#include <iostream>

#include <CLI11.hpp>

#include "pclor/cli.hpp"

namespace {

void add_check_flags(CLI::App* cmd, pclor::cli::CheckFlags& f) {
  cmd->add_option("--engine", f.engine, "lor or lor-ic")->check(CLI::IsMember({"lor", "lor-ic"}));
  cmd->add_option("--guess", f.guess, "initial relaxation, drop:<tag>");
  cmd->add_option("--max-frames", f.max_frames, "frame bound (0: 2^|S| + 1)");
  cmd->add_option("--pqe-budget", f.pqe_budget, "node budget of each PQE call");
  cmd->add_option("--seed", f.seed, "accepted for reproducibility; the engines are deterministic");
  cmd->add_option("--witness", f.witness, "witness output path");
  cmd->add_flag("--oracle-check", f.oracle_check, "re-check every H_j by enumeration");
  cmd->add_flag("--json", f.json, "print the run report as JSON");
}

}  // namespace

int main(int argc, char** argv) {
  using namespace pclor::cli;
  CLI::App app{"Safety property checking by logic relaxation"};
  app.require_subcommand(1);

  CheckFlags check_flags;
  std::string check_file;
  auto* check = app.add_subcommand("check", "check the property of a circuit");
  check->add_option("circuit", check_file, "SCIRC file")->required();
  add_check_flags(check, check_flags);

  CheckFlags sec_flags;
  sec_flags.engine = "lor-ic";
  sec_flags.guess = "drop:interface";
  std::string sec_n, sec_k;
  auto* sec = app.add_subcommand("sec", "sequential equivalence of two circuits");
  sec->add_option("first", sec_n, "SCIRC file")->required();
  sec->add_option("second", sec_k, "SCIRC file")->required();
  add_check_flags(sec, sec_flags);

  std::string pqe_file;
  bool pqe_verify = false;
  std::uint64_t pqe_budget = 1'000'000;
  auto* pqe = app.add_subcommand("pqe", "partial quantifier elimination on extended DIMACS");
  pqe->add_option("file", pqe_file, "p pqe file")->required();
  pqe->add_flag("--verify", pqe_verify, "cross-check the answer by enumeration");
  pqe->add_option("--pqe-budget", pqe_budget, "node budget");

  std::string vw_circuit, vw_witness, vw_against;
  auto* vw = app.add_subcommand("verify-witness", "check a trace or invariant independently");
  vw->add_option("circuit", vw_circuit, "SCIRC file")->required();
  vw->add_option("witness", vw_witness, "trace or invariant file")->required();
  vw->add_option("--against", vw_against, "second circuit of a miter");

  std::uint64_t gen_seed = 1;
  unsigned gen_latches = 3, gen_inputs = 1, gen_depth = 2;
  auto* gen = app.add_subcommand("gen", "print a random circuit");
  gen->add_option("--seed", gen_seed);
  gen->add_option("--latches", gen_latches)->check(CLI::Range(1u, 30u));
  gen->add_option("--inputs", gen_inputs)->check(CLI::Range(0u, 30u));
  gen->add_option("--depth", gen_depth)->check(CLI::Range(0u, 10u));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : kInputError;
  }

  if (*check) return cmd_check(check_file, check_flags, std::cout, std::cerr);
  if (*sec) return cmd_sec(sec_n, sec_k, sec_flags, std::cout, std::cerr);
  if (*pqe) return cmd_pqe(pqe_file, pqe_verify, pqe_budget, std::cout, std::cerr);
  if (*vw) return cmd_verify_witness(vw_circuit, vw_witness, vw_against, std::cout, std::cerr);
  if (*gen) return cmd_gen(gen_seed, gen_latches, gen_inputs, gen_depth, std::cout);
  return kInputError;
}
