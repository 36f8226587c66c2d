#pragma once

#include <memory>
#include <optional>

#include "hlab/analyzer.hpp"
#include "hlab/machine.hpp"
#include "hlab/oracle.hpp"

namespace hlab::diagonal {

// The two pinned programs. `good` asks HALT(arg(0), arg(1)), reports the
// answer and halts; `bad` asks HALT about itself and inverts the answer:
// halts when told it diverges, loops forever when told it halts.
lang::Program build_good();
lang::Program build_bad();

const lang::Program& good_program();
const lang::Program& bad_program();

// The one calling context in which the cdf oracle answers.
machine::CallContext good_toplevel_context();

std::unique_ptr<oracle::CdfOracle> make_cdf_oracle(analyzer::AnalysisLimits limits = {});

struct DiagonalReport {
    std::string oracle;
    std::optional<int> prediction;  // the oracle's bit for HALT(bad, bad), if any
    enum class Actual { Halted, DivergesProven, TrapHaltAll };
    Actual actual = Actual::Halted;
    bool contradiction = false;
    std::uint64_t cycle_entry = 0;   // divergence witness, when proven
    std::uint64_t cycle_length = 0;
};

// Asks the oracle about bad(bad) from good's top-level context, then runs
// bad(bad) under the same oracle and checks the prediction against reality.
DiagonalReport run_diagonal(machine::Oracle& oracle, const analyzer::AnalysisLimits& limits = {},
                            machine::MachineConfig config = {});

struct CorpusCase {
    std::string name;
    lang::Program program;
    lang::Value input;
};

struct CaseReport {
    std::string name;
    enum class Status { Pass, Fail, Undecided };
    Status status = Status::Undecided;
    analyzer::Verdict ground_truth;
    std::string answer;  // the line the reporting program printed
    std::string detail;
};

struct CorpusReport {
    std::vector<CaseReport> cases;
    std::size_t passed = 0;
    std::size_t failed = 0;
    std::size_t undecided = 0;
};

// For every case with a definite analyzer verdict, runs the good program on
// (quote(case), input) under the cdf oracle and checks the printed answer
// against ground truth.
CorpusReport verify_good_halt_pair(const std::vector<CorpusCase>& corpus,
                                   const analyzer::AnalysisLimits& limits = {});

}  // namespace hlab::diagonal
