#include <doctest.h>

#include <json.hpp>

#include "hlab/cdf_demos.hpp"
#include "support/helpers.hpp"

using namespace hlab;
using demos::DemoFixture;
using demos::DemoReport;
using demos::DemoVariant;

namespace {

std::vector<std::string> split_lines(const std::string& s) {
    std::vector<std::string> lines;
    std::string cur;
    for (char c : s) {
        if (c == '\n') {
            lines.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    if (!cur.empty()) lines.push_back(cur);
    return lines;
}

std::int64_t wrap_product(std::uint64_t a, std::uint64_t b) {
    return static_cast<std::int64_t>(a * b);
}

}  // namespace

TEST_CASE("all four shipped demos pass") {
    for (DemoVariant v : {DemoVariant::Good, DemoVariant::Bad}) {
        DemoReport mul = demos::run_demo(demos::build_mul_demo(v));
        CHECK(mul.passed);
        CHECK(mul.diff.empty());
        CHECK(mul.outcome.status == machine::RunStatus::Halted);

        DemoReport mul2 = demos::run_demo(demos::build_mul2_demo(v));
        CHECK(mul2.passed);
        CHECK(mul2.diff.empty());
    }
}

TEST_CASE("mul: same call values, same first line, different products") {
    DemoFixture good = demos::build_mul_demo(DemoVariant::Good);
    DemoFixture bad = demos::build_mul_demo(DemoVariant::Bad);

    DemoReport g = demos::run_demo(good);
    DemoReport b = demos::run_demo(bad);
    REQUIRE(g.actual.size() == 2);
    REQUIRE(b.actual.size() == 2);
    CHECK(g.actual[0] == "First argument is 12; second argument is 3");
    CHECK(b.actual[0] == g.actual[0]);
    CHECK(g.actual[1] == "12*3=36");
    CHECK(b.actual[1] == "12*3=9");

    oracle::StubOracle stub(0);
    machine::MachineConfig cfg;
    cfg.record_calls = true;
    for (const DemoFixture* f : {&good, &bad}) {
        lang::Program p = lang::parse(f->source);
        machine::Machine m(p, {}, stub, cfg);
        m.run(1'000'000);
        bool saw_mul = false;
        for (const machine::CallRecord& r : m.call_records()) {
            if (r.callee != "mul") continue;
            saw_mul = true;
            CHECK(r.args == std::vector<std::int64_t>{12, 3});
        }
        CHECK(saw_mul);
    }
}

TEST_CASE("mul with the good layout multiplies correctly for any operands") {
    std::uint64_t seed = 0x243f6a8885a308d3ull;
    for (int i = 0; i < 100; ++i) {
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        std::uint64_t a = seed >> 33;
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        std::uint64_t b = seed >> 40;

        machine::Outcome out =
            test::run_stub(demos::build_mul_program(DemoVariant::Good, a, b));
        REQUIRE(out.status == machine::RunStatus::Halted);
        REQUIRE(out.output.size() == 2);
        std::string want = std::to_string(static_cast<std::int64_t>(a)) + "*" +
                           std::to_string(static_cast<std::int64_t>(b)) + "=" +
                           std::to_string(wrap_product(a, b));
        CHECK(out.output[1] == want);
    }
}

TEST_CASE("mul with the bad layout squares the second operand") {
    struct Pair { std::uint64_t a, b; };
    for (Pair p : {Pair{7, 5}, Pair{12, 3}, Pair{100, 9}, Pair{2, 11}}) {
        machine::Outcome good =
            test::run_stub(demos::build_mul_program(DemoVariant::Good, p.a, p.b));
        machine::Outcome bad =
            test::run_stub(demos::build_mul_program(DemoVariant::Bad, p.a, p.b));
        REQUIRE(good.output.size() == 2);
        REQUIRE(bad.output.size() == 2);
        CHECK(good.output[0] == bad.output[0]);

        std::string prefix =
            std::to_string(p.a) + "*" + std::to_string(p.b) + "=";
        CHECK(good.output[1] == prefix + std::to_string(wrap_product(p.a, p.b)));
        CHECK(bad.output[1] == prefix + std::to_string(wrap_product(p.b, p.b)));
    }
}

TEST_CASE("mul2: the probe address is pinned and sits inside the print string") {
    DemoFixture good = demos::build_mul2_demo(DemoVariant::Good);
    DemoFixture bad = demos::build_mul2_demo(DemoVariant::Bad);

    REQUIRE(good.probe_address.has_value());
    REQUIRE(bad.probe_address.has_value());
    CHECK(*good.probe_address == 89);
    CHECK(*bad.probe_address == 89);
    CHECK(good.source.bytes.at(*good.probe_address) == '=');
    CHECK(bad.source.bytes.at(*bad.probe_address) == ' ');
}

TEST_CASE("mul2: the sources agree byte for byte through the call") {
    DemoFixture good = demos::build_mul2_demo(DemoVariant::Good);
    DemoFixture bad = demos::build_mul2_demo(DemoVariant::Bad);

    std::vector<std::string> gl = split_lines(good.source.bytes);
    std::vector<std::string> bl = split_lines(bad.source.bytes);
    REQUIRE(gl.size() == bl.size());
    REQUIRE(gl.size() >= 5);
    CHECK(gl[3] == "z = mul2 ( x , y ) ;");
    for (int i = 0; i < 4; ++i) CHECK(gl[i] == bl[i]);
    CHECK(gl[4] != bl[4]);

    // mul2 itself is textually identical in both variants.
    std::size_t g_fn = good.source.bytes.find("fn mul2");
    std::size_t b_fn = bad.source.bytes.find("fn mul2");
    REQUIRE(g_fn != std::string::npos);
    REQUIRE(b_fn != std::string::npos);
    CHECK(good.source.bytes.substr(g_fn) == bad.source.bytes.substr(b_fn));
}

TEST_CASE("mul2: products differ only through the probed byte") {
    DemoReport g = demos::run_demo(demos::build_mul2_demo(DemoVariant::Good));
    DemoReport b = demos::run_demo(demos::build_mul2_demo(DemoVariant::Bad));
    CHECK(g.actual == std::vector<std::string>{"12*3=36"});
    CHECK(b.actual == std::vector<std::string>{"12*3 = 7"});
    // 36 + (' ' & 127) - '=' = 36 + 32 - 61 = 7.
    CHECK(36 + (' ' & 127) - '=' == 7);
}

TEST_CASE("a wrong expectation produces a diff, not a crash") {
    DemoFixture f = demos::build_mul_demo(DemoVariant::Good);
    f.expected_output[1] = "12*3=37";
    DemoReport r = demos::run_demo(f);
    CHECK(!r.passed);
    CHECK(r.diff.find("line 2") != std::string::npos);
    CHECK(r.diff.find("12*3=37") != std::string::npos);
    CHECK(r.diff.find("12*3=36") != std::string::npos);
}

TEST_CASE("the shipped fixture files and manifest match the builders") {
    nlohmann::json manifest =
        nlohmann::json::parse(test::read_file(test::fixture_path("manifest.json")));
    CHECK(manifest.at("digest_algorithm") == "sha256");
    CHECK(manifest.at("mul2_probe_address") == 89);

    auto check_fixture = [&](const DemoFixture& f) {
        std::string rel = "cdf/" + f.name + ".hl";
        std::string disk = test::read_file(test::fixture_path(rel));
        CHECK(disk == f.source.bytes);
        CHECK(manifest.at("files").at(rel) == to_hex(sha256(disk)));
        CHECK(manifest.at("expected_outputs").at(rel).get<std::vector<std::string>>() ==
              f.expected_output);
    };
    check_fixture(demos::build_mul_demo(DemoVariant::Good));
    check_fixture(demos::build_mul_demo(DemoVariant::Bad));
    check_fixture(demos::build_mul2_demo(DemoVariant::Good));
    check_fixture(demos::build_mul2_demo(DemoVariant::Bad));

    for (const char* rel : {"good.hl", "bad.hl"}) {
        std::string disk = test::read_file(test::fixture_path(rel));
        CHECK(manifest.at("files").at(rel) == to_hex(sha256(disk)));
    }
}
