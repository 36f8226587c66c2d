#include <doctest.h>

#include "hlab/analyzer.hpp"
#include "hlab/diagonal.hpp"
#include "support/helpers.hpp"

using namespace hlab;
using analyzer::AnalysisLimits;
using analyzer::OracleModelRule;
using analyzer::Verdict;
using test::parse_text;

TEST_CASE("terminating programs get a Halts verdict with their output") {
    lang::Program p = parse_text(
        "fn main ( ) var i ; {\ni = 0 ;\nwhile ( i < 3 ) {\nprint i ;\ni = i + 1 ;\n}\nhalt ;\n}\n");
    Verdict v = analyzer::analyze(p, {});
    REQUIRE(v.kind == Verdict::Kind::Halts);
    CHECK(v.output == std::vector<std::string>{"0", "1", "2"});
    CHECK(v.states_explored == v.steps);

    machine::Outcome direct = test::run_stub(p);
    CHECK(direct.steps == v.steps);
    CHECK(direct.output == v.output);
}

TEST_CASE("traps count as halting") {
    lang::Program p = parse_text("fn main ( ) var x ; {\nx = 1 / 0 ;\n}\n");
    analyzer::Exploration ex =
        analyzer::explore(p, {}, OracleModelRule::executed_halt_means_halt(), {});
    CHECK(ex.verdict.kind == Verdict::Kind::Halts);
    REQUIRE(ex.outcome.has_value());
    CHECK(ex.outcome->status == machine::RunStatus::Trapped);
    CHECK(ex.outcome->trap_reason == machine::trap::division_by_zero);
}

TEST_CASE("a repeated configuration proves divergence") {
    lang::Program p = parse_text("fn main ( ) {\nwhile ( 1 == 1 ) {\n}\n}\n");
    Verdict v = analyzer::analyze(p, {});
    REQUIRE(v.kind == Verdict::Kind::Diverges);
    CHECK(v.cycle_length > 0);
    CHECK(v.states_explored == v.cycle_entry + v.cycle_length);

    // Replay the witness: the configuration at cycle_entry recurs after
    // cycle_length more steps.
    oracle::StubOracle stub(0);
    machine::Machine m(p, {}, stub);
    for (std::uint64_t i = 0; i < v.cycle_entry; ++i) m.step();
    std::string at_entry = m.config_key();
    for (std::uint64_t i = 0; i < v.cycle_length; ++i) m.step();
    CHECK(m.config_key() == at_entry);
    CHECK(!m.done());
}

TEST_CASE("masked counters cycle and are caught") {
    lang::Program p = parse_text(
        "fn main ( ) var x ; {\nx = 0 ;\nwhile ( 1 == 1 ) {\nx = x + 1 & 7 ;\n}\n}\n");
    Verdict v = analyzer::analyze(p, {});
    REQUIRE(v.kind == Verdict::Kind::Diverges);

    oracle::StubOracle stub(0);
    machine::Machine m(p, {}, stub);
    for (std::uint64_t i = 0; i < v.cycle_entry; ++i) m.step();
    std::string at_entry = m.config_key();
    for (std::uint64_t i = 0; i < v.cycle_length; ++i) m.step();
    CHECK(m.config_key() == at_entry);
}

TEST_CASE("an unmasked counter exhausts the config limit") {
    lang::Program p = parse_text(
        "fn main ( ) var x ; {\nx = 0 ;\nwhile ( 1 == 1 ) {\nx = x + 1 ;\n}\n}\n");
    AnalysisLimits tight{.max_steps = 1'000'000'000, .max_distinct_configs = 500};
    Verdict v = analyzer::analyze(p, {}, {}, tight);
    CHECK(v.kind == Verdict::Kind::Unknown);
    CHECK(v.states_explored == 500);
}

TEST_CASE("the step limit binds independently") {
    lang::Program p = parse_text(
        "fn main ( ) var i ; {\ni = 0 ;\nwhile ( i < 1000 ) {\ni = i + 1 ;\n}\nhalt ;\n}\n");
    AnalysisLimits tight{.max_steps = 50, .max_distinct_configs = 1'000'000};
    CHECK(analyzer::analyze(p, {}, {}, tight).kind == Verdict::Kind::Unknown);
    CHECK(analyzer::analyze(p, {}).kind == Verdict::Kind::Halts);
}

TEST_CASE("raising limits refines Unknown but never flips a verdict") {
    std::vector<lang::Program> progs;
    progs.push_back(parse_text(
        "fn main ( ) var i ; {\ni = 0 ;\nwhile ( i < 200 ) {\ni = i + 1 ;\n}\nhalt ;\n}\n"));
    progs.push_back(parse_text(
        "fn main ( ) var x ; {\nx = 0 ;\nwhile ( 1 == 1 ) {\nx = x + 1 & 31 ;\n}\n}\n"));

    for (const lang::Program& p : progs) {
        std::optional<Verdict::Kind> settled;
        for (std::uint64_t budget : {10ull, 100ull, 1000ull, 100000ull}) {
            AnalysisLimits lim{.max_steps = budget, .max_distinct_configs = budget};
            Verdict v = analyzer::analyze(p, {}, {}, lim);
            if (v.kind == Verdict::Kind::Unknown) {
                CHECK(!settled.has_value());
                continue;
            }
            if (settled) CHECK(v.kind == *settled);
            settled = v.kind;
        }
        CHECK(settled.has_value());
    }
}

TEST_CASE("the default rule stops the run when HALT executes") {
    const lang::Program& bad = diagonal::bad_program();
    analyzer::Exploration ex = analyzer::explore(
        bad, {lang::quote(bad)}, OracleModelRule::executed_halt_means_halt(), {});
    CHECK(ex.verdict.kind == Verdict::Kind::Halts);
    CHECK(ex.halt_intrinsic_executed);
    REQUIRE(ex.outcome.has_value());
    CHECK(ex.outcome->status == machine::RunStatus::Trapped);
    CHECK(ex.outcome->trap_reason == machine::trap::halt_all);
}

TEST_CASE("stub rules model the stub oracles") {
    const lang::Program& good = diagonal::good_program();
    std::vector<lang::Value> inputs = {lang::quote(good), lang::Value::integer(0)};

    Verdict v1 = analyzer::analyze(good, inputs, OracleModelRule::stub(1));
    REQUIRE(v1.kind == Verdict::Kind::Halts);
    CHECK(v1.output == std::vector<std::string>{"Program halts."});

    Verdict v0 = analyzer::analyze(good, inputs, OracleModelRule::stub(0));
    REQUIRE(v0.kind == Verdict::Kind::Halts);
    CHECK(v0.output == std::vector<std::string>{"Program runs forever."});
}

TEST_CASE("ever_executes_halt_intrinsic settles reachability") {
    const lang::Program& bad = diagonal::bad_program();
    CHECK(analyzer::ever_executes_halt_intrinsic(bad, {lang::quote(bad)}) ==
          std::optional<bool>(true));

    lang::Program plain = parse_text("fn main ( ) {\nhalt ;\n}\n");
    CHECK(analyzer::ever_executes_halt_intrinsic(plain, {}) == std::optional<bool>(false));

    lang::Program dead = parse_text(
        "fn main ( ) var x ; {\nif ( 0 == 1 ) {\nx = HALT ( arg ( 0 ) , arg ( 0 ) ) ;\n}\nhalt ;\n}\n");
    CHECK(analyzer::ever_executes_halt_intrinsic(dead, {}) == std::optional<bool>(false));

    lang::Program looped = parse_text(
        "fn main ( ) var x ; {\nwhile ( 1 == 1 ) {\n}\nx = HALT ( arg ( 0 ) , arg ( 0 ) ) ;\n}\n");
    CHECK(analyzer::ever_executes_halt_intrinsic(looped, {}) == std::optional<bool>(false));

    lang::Program slow = parse_text(
        "fn main ( ) var i , x ; {\ni = 0 ;\nwhile ( i < 1000 ) {\ni = i + 1 ;\n}\n"
        "x = HALT ( arg ( 0 ) , arg ( 0 ) ) ;\n}\n");
    AnalysisLimits tiny{.max_steps = 20, .max_distinct_configs = 20};
    CHECK(analyzer::ever_executes_halt_intrinsic(slow, {}, tiny) == std::nullopt);
}

TEST_CASE("exploration with a real oracle matches the machine") {
    const lang::Program& good = diagonal::good_program();
    auto cdf = diagonal::make_cdf_oracle();
    lang::Program looper = parse_text("fn main ( ) {\nwhile ( 1 == 1 ) {\n}\n}\n");
    std::vector<lang::Value> inputs = {lang::quote(looper), lang::Value::integer(0)};

    analyzer::Exploration ex = analyzer::explore(good, inputs, *cdf, {});
    REQUIRE(ex.verdict.kind == Verdict::Kind::Halts);
    CHECK(ex.verdict.output == std::vector<std::string>{"Program runs forever."});

    machine::Outcome direct = machine::run(good, inputs, *cdf, 1'000'000);
    CHECK(direct.output == ex.verdict.output);
    CHECK(direct.steps == ex.verdict.steps);
}
