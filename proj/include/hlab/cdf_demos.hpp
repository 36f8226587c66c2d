#pragma once

#include <optional>

#include "hlab/machine.hpp"

namespace hlab::demos {

enum class DemoVariant { Good, Bad };

class FixtureError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct DemoFixture {
    std::string name;
    lang::SourceImage source;
    std::vector<std::string> expected_output;
    std::optional<std::uint64_t> probe_address;  // mul2 fixtures only
};

// `mul` peeks below its own frame into the caller's first local instead of
// trusting its first parameter. The good caller keeps the first operand
// there, so mul looks correct; the bad caller swaps its locals around and
// gets a wrong product from identical call arguments.
DemoFixture build_mul_demo(DemoVariant variant);

// `mul2` reads one byte out of the program image at a fixed address inside
// the caller's print string and adds (byte & 127) - '=' to the product. In
// the good source that byte is '=' so the correction is zero; the bad
// source widens the string by one space and the same address now holds ' '.
DemoFixture build_mul2_demo(DemoVariant variant);

// The mul caller with arbitrary operands, for property tests.
lang::Program build_mul_program(DemoVariant variant, std::uint64_t a, std::uint64_t b);

struct DemoReport {
    std::string name;
    bool passed = false;
    std::vector<std::string> expected;
    std::vector<std::string> actual;
    std::string diff;
    machine::Outcome outcome;
};

// Runs a fixture to completion and compares printed lines byte for byte.
DemoReport run_demo(const DemoFixture& fixture);

}  // namespace hlab::demos
