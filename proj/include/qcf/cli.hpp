// Command-line harness: flip | montecarlo | verify-formulas | attack | code.
// run_cli is the whole dispatcher as a function so tests can invoke commands
// in-process and compare output bytes.

#pragma once

#include <string>
#include <vector>

#include "qcf/liedetect.hpp"
#include "qcf/report.hpp"

namespace qcf {

struct CliResult {
  int exit_code = 0;     // 0 ok/completed, 2 config error, 3 aborted (flip)
  std::string output;    // report or error text
};

CliResult run_cli(const std::vector<std::string>& args);

int cli_main(int argc, char** argv);

// One cell of the formula-verification table: Algorithms I-IV run standalone
// at (freqs, s, theta); observed vs expected per Eqs. (2), (9)-(13) and the
// Algorithm-IV mirror, plus the exact structural flags.
ojson run_formula_cell(const LieFrequencies& freqs, int s, double theta, double z,
                       std::uint64_t seed);

}  // namespace qcf
