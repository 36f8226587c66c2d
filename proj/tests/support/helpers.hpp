#pragma once

#include <fstream>
#include <sstream>
#include <string>

#include "hlab/analyzer.hpp"
#include "hlab/machine.hpp"
#include "hlab/oracle.hpp"

namespace hlab::test {

inline lang::Program parse_text(std::string text, std::string origin = "test.hl") {
    return lang::parse({std::move(text), std::move(origin)});
}

inline machine::Outcome run_stub(const lang::Program& p, std::vector<lang::Value> inputs = {},
                                 std::uint64_t budget = 1'000'000, int bit = 0,
                                 machine::MachineConfig cfg = {}) {
    oracle::StubOracle stub(bit);
    return machine::run(p, std::move(inputs), stub, budget, cfg);
}

inline std::string fixture_path(const std::string& rel) {
    return std::string(HLAB_FIXTURE_DIR) + "/" + rel;
}

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace hlab::test
