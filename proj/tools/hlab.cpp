#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "hlab/diagonal.hpp"
#include "hlab/report_json.hpp"

namespace {

using namespace hlab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitTrapped = 2;
constexpr int kExitBudget = 3;
constexpr int kExitDiverges = 4;
constexpr int kExitUnknown = 5;
constexpr int kExitDiagonalMismatch = 6;
constexpr int kExitDemoFail = 7;
constexpr int kExitCorpusFail = 8;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

lang::Program load_program(const std::string& path) {
    return lang::parse({read_file(path), path});
}

lang::Value parse_input_arg(const std::string& text) {
    if (!text.empty() && text[0] == '@') return lang::quote(load_program(text.substr(1)));
    try {
        std::size_t used = 0;
        long long v = std::stoll(text, &used);
        if (used == text.size()) return lang::Value::integer(v);
    } catch (const std::exception&) {
    }
    throw UsageError("bad --input value '" + text + "' (want an integer or @file.hl)");
}

std::vector<lang::Value> parse_inputs(const std::vector<std::string>& texts) {
    std::vector<lang::Value> vals;
    for (const auto& t : texts) vals.push_back(parse_input_arg(t));
    return vals;
}

std::unique_ptr<machine::Oracle> make_oracle(const std::string& name,
                                             const analyzer::AnalysisLimits& limits) {
    if (name == "const0") return std::make_unique<oracle::StubOracle>(0);
    if (name == "const1") return std::make_unique<oracle::StubOracle>(1);
    return diagonal::make_cdf_oracle(limits);
}

void flush_decision_log(const std::vector<machine::DecisionEvent>& log) {
    for (const auto& e : log) std::cerr << report::to_json(e).dump() << "\n";
}

std::string default_corpus_dir() {
    const char* env = std::getenv("HLAB_FIXTURES");
    std::string base = env && *env ? env : "fixtures";
    return base + "/corpus";
}

int cmd_run(const std::string& file, const std::vector<std::string>& input_texts,
            const std::string& oracle_name, std::uint64_t budget,
            const analyzer::AnalysisLimits& limits, bool json, bool log_decisions) {
    lang::Program p = load_program(file);
    std::vector<lang::Value> inputs = parse_inputs(input_texts);
    auto oracle = make_oracle(oracle_name, limits);

    std::vector<machine::DecisionEvent> log;
    machine::MachineConfig cfg;
    if (log_decisions) cfg.decision_log = &log;

    machine::Outcome out = machine::run(p, std::move(inputs), *oracle, budget, cfg);
    if (log_decisions) flush_decision_log(log);

    if (json) {
        std::cout << report::to_json(out).dump() << "\n";
    } else {
        for (const auto& line : out.output) std::cout << line << "\n";
        switch (out.status) {
            case machine::RunStatus::Halted:
                std::cerr << "halted after " << out.steps << " steps\n";
                break;
            case machine::RunStatus::Trapped:
                std::cerr << "trapped (" << out.trap_reason << ") after " << out.steps
                          << " steps\n";
                break;
            case machine::RunStatus::OutOfBudget:
                std::cerr << "budget exhausted after " << out.steps << " steps\n";
                break;
        }
    }
    switch (out.status) {
        case machine::RunStatus::Halted: return kExitOk;
        case machine::RunStatus::Trapped: return kExitTrapped;
        case machine::RunStatus::OutOfBudget: return kExitBudget;
    }
    return kExitUsage;
}

int cmd_analyze(const std::string& file, const std::vector<std::string>& input_texts,
                const analyzer::AnalysisLimits& limits) {
    lang::Program p = load_program(file);
    analyzer::Verdict v = analyzer::analyze(p, parse_inputs(input_texts), {}, limits);
    std::cout << report::to_json(v).dump() << "\n";
    switch (v.kind) {
        case analyzer::Verdict::Kind::Halts: return kExitOk;
        case analyzer::Verdict::Kind::Diverges: return kExitDiverges;
        case analyzer::Verdict::Kind::Unknown: return kExitUnknown;
    }
    return kExitUsage;
}

int cmd_diagonal(const std::string& oracle_name, const analyzer::AnalysisLimits& limits,
                 bool json, bool log_decisions) {
    auto oracle = make_oracle(oracle_name, limits);
    std::vector<machine::DecisionEvent> log;
    machine::MachineConfig cfg;
    if (log_decisions) cfg.decision_log = &log;

    diagonal::DiagonalReport r = diagonal::run_diagonal(*oracle, limits, cfg);
    if (log_decisions) flush_decision_log(log);

    if (json) {
        std::cout << report::to_json(r).dump() << "\n";
    } else {
        std::cout << "oracle: " << r.oracle << "\n";
        std::cout << "prediction: " << (r.prediction ? std::to_string(*r.prediction) : "none")
                  << "\n";
        std::cout << "actual: " << report::actual_name(r.actual) << "\n";
        if (r.actual == diagonal::DiagonalReport::Actual::DivergesProven)
            std::cout << "cycle: entry " << r.cycle_entry << ", length " << r.cycle_length
                      << "\n";
        std::cout << "contradiction: " << (r.contradiction ? "yes" : "no") << "\n";
    }
    // Context-independent oracles must end in contradiction; the
    // context-dependent one must not.
    bool expected = oracle->context_independent();
    return r.contradiction == expected ? kExitOk : kExitDiagonalMismatch;
}

int cmd_demo(const std::string& name, const std::string& variant_name, bool json) {
    demos::DemoVariant variant =
        variant_name == "good" ? demos::DemoVariant::Good : demos::DemoVariant::Bad;
    demos::DemoFixture f =
        name == "mul" ? demos::build_mul_demo(variant) : demos::build_mul2_demo(variant);
    demos::DemoReport r = demos::run_demo(f);
    if (json) {
        std::cout << report::to_json(r).dump() << "\n";
    } else {
        std::cout << r.name << ": " << (r.passed ? "pass" : "fail") << "\n";
        if (!r.passed) std::cout << r.diff;
    }
    return r.passed ? kExitOk : kExitDemoFail;
}

int cmd_verify_corpus(const std::string& dir, const analyzer::AnalysisLimits& limits, bool json) {
    nlohmann::json manifest = nlohmann::json::parse(read_file(dir + "/manifest.json"));

    std::vector<diagonal::CorpusCase> cases;
    std::vector<std::string> expects;
    for (const auto& entry : manifest.at("cases")) {
        std::string file = entry.at("file").get<std::string>();
        lang::Value input = lang::Value::integer(0);
        if (entry.contains("input") && !entry.at("input").is_null()) {
            const auto& in = entry.at("input");
            if (in.contains("int"))
                input = lang::Value::integer(in.at("int").get<std::int64_t>());
            else if (in.contains("prog"))
                input = lang::quote(load_program(dir + "/" + in.at("prog").get<std::string>()));
            else
                throw UsageError("corpus input must be null, {int: N} or {prog: path}");
        }
        cases.push_back({file, load_program(dir + "/" + file), std::move(input)});
        expects.push_back(entry.value("expect", ""));
    }

    diagonal::CorpusReport rep = diagonal::verify_good_halt_pair(cases, limits);

    bool expect_ok = true;
    for (std::size_t i = 0; i < rep.cases.size(); ++i) {
        if (expects[i].empty()) continue;
        bool halts = rep.cases[i].ground_truth.kind == analyzer::Verdict::Kind::Halts;
        bool diverges = rep.cases[i].ground_truth.kind == analyzer::Verdict::Kind::Diverges;
        bool matches = (expects[i] == "halts" && halts) || (expects[i] == "runs-forever" && diverges);
        if (!matches) {
            expect_ok = false;
            std::cerr << rep.cases[i].name << ": ground truth disagrees with manifest expect '"
                      << expects[i] << "'\n";
        }
    }

    if (json) {
        std::cout << report::to_json(rep).dump() << "\n";
    } else {
        for (const auto& c : rep.cases) {
            std::cout << c.name << ": " << report::case_status_name(c.status);
            if (!c.answer.empty()) std::cout << " (" << c.answer << ")";
            if (!c.detail.empty()) std::cout << " [" << c.detail << "]";
            std::cout << "\n";
        }
        std::cout << "passed " << rep.passed << ", failed " << rep.failed << ", undecided "
                  << rep.undecided << "\n";
    }
    bool all_pass = rep.failed == 0 && rep.undecided == 0 && rep.passed == rep.cases.size();
    return all_pass && expect_ok ? kExitOk : kExitCorpusFail;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"hlab: a deterministic halting laboratory"};
    app.require_subcommand(1);
    app.fallthrough();

    bool json = false;
    std::uint64_t budget = 1'000'000;
    std::uint64_t max_configs = 1'000'000;
    std::string oracle_name = "cdf";
    bool log_decisions = false;

    app.add_flag("--json", json, "machine-readable output");
    app.add_option("--budget", budget, "step budget")->check(CLI::PositiveNumber);
    app.add_option("--max-configs", max_configs, "distinct configurations the analyzer may record")
        ->check(CLI::PositiveNumber);
    app.add_option("--oracle", oracle_name, "HALT oracle")
        ->check(CLI::IsMember({"const0", "const1", "cdf"}));
    app.add_flag("--log-decisions", log_decisions, "log oracle decisions as JSON lines on stderr");

    auto* run_cmd = app.add_subcommand("run", "execute a program");
    std::string run_file;
    std::vector<std::string> run_inputs;
    run_cmd->add_option("file", run_file, "program file")->required();
    run_cmd->add_option("--input", run_inputs, "input value: integer or @file.hl");

    auto* analyze_cmd = app.add_subcommand("analyze", "decide halting by state exploration");
    std::string analyze_file;
    std::vector<std::string> analyze_inputs;
    analyze_cmd->add_option("file", analyze_file, "program file")->required();
    analyze_cmd->add_option("--input", analyze_inputs, "input value: integer or @file.hl");

    app.add_subcommand("diagonal", "run the self-referential experiment");

    auto* demo_cmd = app.add_subcommand("demo", "run a context-dependent function demo");
    std::string demo_name;
    std::string demo_variant;
    demo_cmd->add_option("name", demo_name, "demo name")
        ->required()
        ->check(CLI::IsMember({"mul", "mul2"}));
    demo_cmd->add_option("--variant", demo_variant, "caller variant")
        ->required()
        ->check(CLI::IsMember({"good", "bad"}));

    auto* corpus_cmd = app.add_subcommand("verify-corpus", "check the reporting program against ground truth");
    std::string corpus_dir = default_corpus_dir();
    corpus_cmd->add_option("dir", corpus_dir, "corpus directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsage;
    }

    analyzer::AnalysisLimits limits{budget, max_configs};
    try {
        if (app.got_subcommand("run"))
            return cmd_run(run_file, run_inputs, oracle_name, budget, limits, json, log_decisions);
        if (app.got_subcommand("analyze")) return cmd_analyze(analyze_file, analyze_inputs, limits);
        if (app.got_subcommand("diagonal"))
            return cmd_diagonal(oracle_name, limits, json, log_decisions);
        if (app.got_subcommand("demo")) return cmd_demo(demo_name, demo_variant, json);
        if (app.got_subcommand("verify-corpus")) return cmd_verify_corpus(corpus_dir, limits, json);
    } catch (const demos::FixtureError& e) {
        std::cerr << "fixture error: " << e.what() << "\n";
        return kExitDemoFail;
    } catch (const lang::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
