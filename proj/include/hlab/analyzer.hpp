#pragma once

#include <optional>

#include "hlab/machine.hpp"

namespace hlab::analyzer {

struct AnalysisLimits {
    std::uint64_t max_steps = 1'000'000;
    std::uint64_t max_distinct_configs = 1'000'000;
};

struct Verdict {
    enum class Kind { Halts, Diverges, Unknown };
    Kind kind = Kind::Unknown;
    std::uint64_t steps = 0;              // Halts: steps until the run ended
    std::vector<std::string> output;      // Halts: everything the run printed
    std::uint64_t cycle_entry = 0;   // Diverges: step at which the repeated config first occurred
    std::uint64_t cycle_length = 0;  // Diverges: period of the cycle
    std::uint64_t states_explored = 0;
};

// How the HALT intrinsic is treated while exploring. The default rule ends
// the run the moment HALT executes, so a verdict never depends on answering
// a nested halting question. The stub rule substitutes a constant answer.
struct OracleModelRule {
    enum class Kind { ExecutedHaltMeansHalt, Stub };
    Kind kind = Kind::ExecutedHaltMeansHalt;
    int stub_bit = 0;

    static OracleModelRule executed_halt_means_halt() { return {}; }
    static OracleModelRule stub(int bit) { return {Kind::Stub, bit}; }
};

struct Exploration {
    Verdict verdict;
    bool halt_intrinsic_executed = false;
    // Terminal machine outcome; engaged only when the run actually ended.
    std::optional<machine::Outcome> outcome;
};

// Runs `program` on `inputs` step by step, recording every configuration.
// Ends with Halts when the machine stops (trapping counts as stopping),
// Diverges when a configuration repeats, Unknown when a limit is hit first.
Exploration explore(const lang::Program& program, std::vector<lang::Value> inputs,
                    machine::Oracle& halt_model, const AnalysisLimits& limits,
                    machine::MachineConfig config = {});

Exploration explore(const lang::Program& program, std::vector<lang::Value> inputs,
                    OracleModelRule rule, const AnalysisLimits& limits,
                    machine::MachineConfig config = {});

Verdict analyze(const lang::Program& program, std::vector<lang::Value> inputs,
                OracleModelRule rule = {}, const AnalysisLimits& limits = {},
                machine::MachineConfig config = {});

// Whether the run ever reaches a HALT instruction. nullopt when exploration
// hit a limit before the question was settled.
std::optional<bool> ever_executes_halt_intrinsic(const lang::Program& program,
                                                 std::vector<lang::Value> inputs,
                                                 const AnalysisLimits& limits = {});

}  // namespace hlab::analyzer
