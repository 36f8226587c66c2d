#include "hlab/oracle.hpp"

namespace hlab::oracle {

Decision StubOracle::decide(const lang::SourceImage&, const lang::Value&, const CallContext&) {
    return Decision::ret(bit_);
}

CdfOracle::CdfOracle(Digest good_digest, analyzer::AnalysisLimits limits)
    : good_digest_(good_digest), limits_(limits) {}

Decision CdfOracle::decide(const lang::SourceImage& program, const lang::Value& input,
                           const CallContext& ctx) {
    // Step 1: the caller must be the sanctioned program at its top level.
    // This is checked before the queried program is even parsed.
    static const std::vector<std::string> main_only = {"main"};
    if (ctx.image_digest != good_digest_ || ctx.frame_chain != main_only || !ctx.entry_is_main)
        return Decision::trap_halt_all();

    lang::Program p = [&] {
        try {
            return lang::parse(program);
        } catch (const lang::ParseError& e) {
            throw MalformedProgram(e.what());
        }
    }();

    // Steps 2-4 share one exploration: under the default model an executed
    // HALT ends the run on the spot, so "ever executes HALT", "halts" and
    // "diverges" all fall out of the same trace.
    analyzer::Exploration ex =
        analyzer::explore(p, {input}, analyzer::OracleModelRule::executed_halt_means_halt(), limits_);
    if (ex.halt_intrinsic_executed) return Decision::ret(1);
    switch (ex.verdict.kind) {
        case analyzer::Verdict::Kind::Halts: return Decision::ret(1);
        case analyzer::Verdict::Kind::Diverges: return Decision::ret(0);
        case analyzer::Verdict::Kind::Unknown: break;
    }
    return Decision::undecided("limits");
}

Decision decide(Oracle& oracle, const lang::Value& program, const lang::Value& input,
                const CallContext& ctx) {
    if (!program.is_prog()) throw MalformedProgram("HALT asked about a non-program value");
    return oracle.decide(program.as_prog(), input, ctx);
}

bool is_context_independent(const Oracle& oracle) { return oracle.context_independent(); }

}  // namespace hlab::oracle
