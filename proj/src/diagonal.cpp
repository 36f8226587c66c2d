#include "hlab/diagonal.hpp"

#include <stdexcept>

namespace hlab::diagonal {

namespace {

constexpr std::string_view kGoodText =
    "fn main ( ) {\n"
    "if ( HALT ( arg ( 0 ) , arg ( 1 ) ) == 1 ) {\n"
    "print \"Program halts.\" ;\n"
    "} else {\n"
    "print \"Program runs forever.\" ;\n"
    "}\n"
    "halt ;\n"
    "}\n";

constexpr std::string_view kBadText =
    "fn main ( ) {\n"
    "if ( HALT ( arg ( 0 ) , arg ( 0 ) ) == 0 ) {\n"
    "halt ;\n"
    "}\n"
    "while ( 1 == 1 ) {\n"
    "}\n"
    "}\n";

lang::Program build_pinned(std::string_view text, std::string origin) {
    lang::Program p = lang::parse({std::string(text), std::move(origin)});
    if (p.image().bytes != text)
        throw std::logic_error("pinned source for " + p.image().origin + " is not canonical");
    return p;
}

}  // namespace

lang::Program build_good() { return build_pinned(kGoodText, "good.hl"); }
lang::Program build_bad() { return build_pinned(kBadText, "bad.hl"); }

const lang::Program& good_program() {
    static const lang::Program p = build_good();
    return p;
}

const lang::Program& bad_program() {
    static const lang::Program p = build_bad();
    return p;
}

machine::CallContext good_toplevel_context() {
    machine::CallContext ctx;
    ctx.image_digest = sha256(good_program().image().bytes);
    ctx.frame_chain = {"main"};
    ctx.entry_is_main = true;
    return ctx;
}

std::unique_ptr<oracle::CdfOracle> make_cdf_oracle(analyzer::AnalysisLimits limits) {
    return std::make_unique<oracle::CdfOracle>(sha256(good_program().image().bytes), limits);
}

DiagonalReport run_diagonal(machine::Oracle& oracle, const analyzer::AnalysisLimits& limits,
                            machine::MachineConfig config) {
    DiagonalReport r;
    r.oracle = std::string(oracle.name());

    lang::Value qbad = lang::quote(bad_program());
    machine::Decision d = oracle.decide(qbad.as_prog(), qbad, good_toplevel_context());
    if (d.kind == machine::Decision::Kind::Return) r.prediction = d.bit;

    analyzer::Exploration ex = analyzer::explore(bad_program(), {qbad}, oracle, limits, config);
    switch (ex.verdict.kind) {
        case analyzer::Verdict::Kind::Halts: {
            const machine::Outcome& out = *ex.outcome;
            if (out.status == machine::RunStatus::Trapped &&
                out.trap_reason == machine::trap::halt_all)
                r.actual = DiagonalReport::Actual::TrapHaltAll;
            else
                r.actual = DiagonalReport::Actual::Halted;
            break;
        }
        case analyzer::Verdict::Kind::Diverges:
            r.actual = DiagonalReport::Actual::DivergesProven;
            r.cycle_entry = ex.verdict.cycle_entry;
            r.cycle_length = ex.verdict.cycle_length;
            break;
        case analyzer::Verdict::Kind::Unknown:
            throw std::runtime_error("diagonal run exhausted analysis limits");
    }

    bool stopped = r.actual != DiagonalReport::Actual::DivergesProven;
    r.contradiction =
        r.prediction && ((*r.prediction == 1 && !stopped) || (*r.prediction == 0 && stopped));
    return r;
}

CorpusReport verify_good_halt_pair(const std::vector<CorpusCase>& corpus,
                                   const analyzer::AnalysisLimits& limits) {
    CorpusReport rep;
    oracle::CdfOracle cdf(sha256(good_program().image().bytes), limits);
    for (const CorpusCase& c : corpus) {
        CaseReport cr;
        cr.name = c.name;
        cr.ground_truth = analyzer::analyze(c.program, {c.input}, {}, limits);

        if (cr.ground_truth.kind == analyzer::Verdict::Kind::Unknown) {
            cr.status = CaseReport::Status::Undecided;
            cr.detail = "analyzer limits exhausted";
            ++rep.undecided;
            rep.cases.push_back(std::move(cr));
            continue;
        }

        machine::Outcome out = machine::run(good_program(), {lang::quote(c.program), c.input},
                                            cdf, limits.max_steps);
        if (!out.output.empty()) cr.answer = out.output.back();

        if (out.status == machine::RunStatus::Trapped &&
            out.trap_reason == machine::trap::oracle_undecided) {
            cr.status = CaseReport::Status::Undecided;
            cr.detail = "oracle undecided";
            ++rep.undecided;
            rep.cases.push_back(std::move(cr));
            continue;
        }

        std::string expected = cr.ground_truth.kind == analyzer::Verdict::Kind::Halts
                                   ? "Program halts."
                                   : "Program runs forever.";
        if (out.status == machine::RunStatus::Halted && out.output.size() == 1 &&
            out.output[0] == expected) {
            cr.status = CaseReport::Status::Pass;
            ++rep.passed;
        } else {
            cr.status = CaseReport::Status::Fail;
            cr.detail = "expected \"" + expected + "\"";
            ++rep.failed;
        }
        rep.cases.push_back(std::move(cr));
    }
    return rep;
}

}  // namespace hlab::diagonal
