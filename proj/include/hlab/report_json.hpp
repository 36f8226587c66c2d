#pragma once

#include <json.hpp>

#include "hlab/analyzer.hpp"
#include "hlab/cdf_demos.hpp"
#include "hlab/diagonal.hpp"
#include "hlab/machine.hpp"

namespace hlab::report {

using json = nlohmann::ordered_json;

inline std::string_view status_name(machine::RunStatus s) {
    switch (s) {
        case machine::RunStatus::Halted: return "halted";
        case machine::RunStatus::OutOfBudget: return "diverged-budget";
        case machine::RunStatus::Trapped: return "trapped";
    }
    return "?";
}

inline json to_json(const machine::Outcome& o) {
    json j;
    j["status"] = status_name(o.status);
    j["steps"] = o.steps;
    j["output"] = o.output;
    if (o.status == machine::RunStatus::Trapped) j["trap_reason"] = o.trap_reason;
    return j;
}

inline json to_json(const analyzer::Verdict& v) {
    json j;
    switch (v.kind) {
        case analyzer::Verdict::Kind::Halts:
            j["verdict"] = "halts";
            j["steps"] = v.steps;
            break;
        case analyzer::Verdict::Kind::Diverges:
            j["verdict"] = "diverges";
            j["cycle_entry"] = v.cycle_entry;
            j["cycle_length"] = v.cycle_length;
            break;
        case analyzer::Verdict::Kind::Unknown:
            j["verdict"] = "unknown";
            break;
    }
    j["states_explored"] = v.states_explored;
    if (v.kind == analyzer::Verdict::Kind::Halts) j["output"] = v.output;
    return j;
}

inline std::string_view actual_name(diagonal::DiagonalReport::Actual a) {
    switch (a) {
        case diagonal::DiagonalReport::Actual::Halted: return "halted";
        case diagonal::DiagonalReport::Actual::DivergesProven: return "diverges-proven";
        case diagonal::DiagonalReport::Actual::TrapHaltAll: return "trap-halt-all";
    }
    return "?";
}

inline json to_json(const diagonal::DiagonalReport& r) {
    json j;
    j["oracle"] = r.oracle;
    if (r.prediction) j["prediction"] = *r.prediction;
    else j["prediction"] = nullptr;
    j["actual"] = actual_name(r.actual);
    j["contradiction"] = r.contradiction;
    if (r.actual == diagonal::DiagonalReport::Actual::DivergesProven) {
        j["cycle_entry"] = r.cycle_entry;
        j["cycle_length"] = r.cycle_length;
    }
    return j;
}

inline json to_json(const demos::DemoReport& r) {
    json j;
    j["name"] = r.name;
    j["passed"] = r.passed;
    j["expected"] = r.expected;
    j["actual"] = r.actual;
    if (!r.passed) j["diff"] = r.diff;
    j["outcome"] = to_json(r.outcome);
    return j;
}

inline std::string_view case_status_name(diagonal::CaseReport::Status s) {
    switch (s) {
        case diagonal::CaseReport::Status::Pass: return "pass";
        case diagonal::CaseReport::Status::Fail: return "fail";
        case diagonal::CaseReport::Status::Undecided: return "undecided";
    }
    return "?";
}

inline json to_json(const diagonal::CorpusReport& r) {
    json j;
    json cases = json::array();
    for (const auto& c : r.cases) {
        json cj;
        cj["name"] = c.name;
        cj["status"] = case_status_name(c.status);
        cj["ground_truth"] = to_json(c.ground_truth);
        cj["answer"] = c.answer;
        if (!c.detail.empty()) cj["detail"] = c.detail;
        cases.push_back(std::move(cj));
    }
    j["cases"] = std::move(cases);
    j["passed"] = r.passed;
    j["failed"] = r.failed;
    j["undecided"] = r.undecided;
    return j;
}

inline json to_json(const machine::Decision& d) {
    json j;
    switch (d.kind) {
        case machine::Decision::Kind::Return:
            j["kind"] = "return";
            j["bit"] = d.bit;
            break;
        case machine::Decision::Kind::TrapHaltAll:
            j["kind"] = "trap-halt-all";
            break;
        case machine::Decision::Kind::Undecided:
            j["kind"] = "undecided";
            j["reason"] = d.reason;
            break;
    }
    return j;
}

inline json to_json(const machine::DecisionEvent& e) {
    json j;
    j["oracle"] = e.oracle;
    j["ctx_digest_prefix"] = e.ctx_digest_prefix;
    j["frame_chain"] = e.frame_chain;
    j["decision"] = to_json(e.decision);
    return j;
}

}  // namespace hlab::report
