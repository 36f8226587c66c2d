#include "hlab/cdf_demos.hpp"

#include "hlab/oracle.hpp"

namespace hlab::demos {

namespace {

const std::vector<std::string> kCallerLocals = {"x", "y", "z"};

std::string mul_caller(DemoVariant v, std::uint64_t a, std::uint64_t b) {
    std::string s = "fn main ( ) var x , y , z ; {\n";
    if (v == DemoVariant::Good) {
        s += "x = " + std::to_string(a) + " ;\n";
        s += "y = " + std::to_string(b) + " ;\n";
        s += "z = mul ( x , y ) ;\n";
        s += "print x , \"*\" , y , \"=\" , z ;\n";
    } else {
        s += "x = " + std::to_string(b) + " ;\n";
        s += "y = " + std::to_string(a) + " ;\n";
        s += "z = mul ( y , x ) ;\n";
        s += "print y , \"*\" , x , \"=\" , z ;\n";
    }
    s += "halt ;\n";
    s += "}\n";
    return s;
}

std::string mul_fn() {
    // The probe depth is the caller's frame size: that far below mul's own
    // first cell sits the caller's first local.
    std::string depth = std::to_string(kCallerLocals.size());
    return "fn mul ( xx , yy ) var p , x ; {\n"
           "p = addr_of ( xx ) - " + depth + " ;\n"
           "x = load ( p ) ;\n"
           "print \"First argument is \" , xx , \"; second argument is \" , yy ;\n"
           "return x * yy ;\n"
           "}\n";
}

std::string mul2_caller(std::string_view eq_string) {
    std::string s = "fn main ( ) var x , y , z ; {\n";
    s += "x = 12 ;\n";
    s += "y = 3 ;\n";
    s += "z = mul2 ( x , y ) ;\n";
    s += "print x , \"*\" , y , \"" + std::string(eq_string) + "\" , z ;\n";
    s += "halt ;\n";
    s += "}\n";
    return s;
}

std::string mul2_fn(std::uint64_t probe) {
    std::string mask = std::to_string(127);
    std::string eq = std::to_string(static_cast<int>('='));
    return "fn mul2 ( x , y ) var z ; {\n"
           "z = x * y ;\n"
           "z = z + ( ( load ( " + std::to_string(probe) + " ) & " + mask + " ) - " + eq + " ) ;\n"
           "return z ;\n"
           "}\n";
}

lang::Program parse_pinned(std::string text, std::string origin) {
    lang::Program p = lang::parse({std::move(text), std::move(origin)});
    return p;
}

std::uint64_t locate_probe(const std::string& image) {
    const std::string needle = "\"=\"";
    std::size_t pos = image.find(needle);
    if (pos == std::string::npos)
        throw FixtureError("mul2 probe: no \"=\" string in the caller source");
    if (image.find(needle, pos + 1) != std::string::npos)
        throw FixtureError("mul2 probe: \"=\" string is not unique in the caller source");
    return pos + 1;  // skip the opening quote
}

}  // namespace

lang::Program build_mul_program(DemoVariant variant, std::uint64_t a, std::uint64_t b) {
    std::string origin = variant == DemoVariant::Good ? "mul_good.hl" : "mul_bad.hl";
    return parse_pinned(mul_caller(variant, a, b) + mul_fn(), std::move(origin));
}

DemoFixture build_mul_demo(DemoVariant variant) {
    lang::Program p = build_mul_program(variant, 12, 3);
    DemoFixture f;
    f.name = variant == DemoVariant::Good ? "mul_good" : "mul_bad";
    f.source = p.image();
    f.expected_output = {"First argument is 12; second argument is 3",
                         variant == DemoVariant::Good ? "12*3=36" : "12*3=9"};
    return f;
}

DemoFixture build_mul2_demo(DemoVariant variant) {
    // The probe address is found in the good caller with a placeholder
    // operand; the main function precedes mul2, so substituting the real
    // address does not move any byte before it.
    lang::Program draft = parse_pinned(mul2_caller("=") + mul2_fn(0), "mul2_draft.hl");
    std::uint64_t probe = locate_probe(draft.image().bytes);

    bool good = variant == DemoVariant::Good;
    std::string caller = good ? mul2_caller("=") : mul2_caller(" = ");
    std::string origin = good ? "mul2_good.hl" : "mul2_bad.hl";
    lang::Program p = parse_pinned(caller + mul2_fn(probe), std::move(origin));

    const std::string& image = p.image().bytes;
    if (probe >= image.size()) throw FixtureError("mul2 probe address outside the image");
    char at = image[static_cast<std::size_t>(probe)];
    if (good && at != '=')
        throw FixtureError("mul2 good fixture: probe byte is not '='");
    if (!good && at != ' ')
        throw FixtureError("mul2 bad fixture: probe byte is not ' '");

    DemoFixture f;
    f.name = good ? "mul2_good" : "mul2_bad";
    f.source = p.image();
    f.expected_output = {good ? "12*3=36" : "12*3 = 7"};
    f.probe_address = probe;
    return f;
}

DemoReport run_demo(const DemoFixture& fixture) {
    DemoReport r;
    r.name = fixture.name;
    r.expected = fixture.expected_output;

    lang::Program p = lang::parse(fixture.source);
    oracle::StubOracle stub(0);
    r.outcome = machine::run(p, {}, stub, 1'000'000);
    r.actual = r.outcome.output;

    std::string diff;
    if (r.outcome.status != machine::RunStatus::Halted) {
        diff += "run did not halt cleanly: ";
        diff += r.outcome.status == machine::RunStatus::Trapped
                    ? "trapped (" + r.outcome.trap_reason + ")"
                    : "budget exhausted";
        diff += "\n";
    }
    std::size_t n = std::max(r.expected.size(), r.actual.size());
    for (std::size_t i = 0; i < n; ++i) {
        const std::string* want = i < r.expected.size() ? &r.expected[i] : nullptr;
        const std::string* got = i < r.actual.size() ? &r.actual[i] : nullptr;
        if (want && got && *want == *got) continue;
        diff += "line " + std::to_string(i + 1) + ": ";
        diff += want ? "expected \"" + *want + "\"" : "expected nothing";
        diff += got ? ", got \"" + *got + "\"" : ", got nothing";
        diff += "\n";
    }
    r.diff = diff;
    r.passed = diff.empty();
    return r;
}

}  // namespace hlab::demos
