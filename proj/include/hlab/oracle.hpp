#pragma once

#include "hlab/analyzer.hpp"
#include "hlab/machine.hpp"

namespace hlab::oracle {

using machine::CallContext;
using machine::Decision;
using machine::MalformedProgram;
using machine::Oracle;

// Answers a fixed bit no matter what is asked or from where.
class StubOracle : public Oracle {
  public:
    explicit StubOracle(int bit) : bit_(bit ? 1 : 0) {}

    Decision decide(const lang::SourceImage&, const lang::Value&, const CallContext&) override;
    bool context_independent() const override { return true; }
    std::string_view name() const override { return bit_ ? "const1" : "const0"; }

  private:
    int bit_;
};

// The context-dependent oracle. Outside the one sanctioned calling context
// (the pinned answer-reporting program at its top level) every query ends
// the whole machine. Inside it, the queried program is explored: executing
// a HALT counts as halting, a finished or trapped run counts as halting, a
// repeated configuration proves divergence, and anything past the limits is
// Undecided.
class CdfOracle : public Oracle {
  public:
    CdfOracle(Digest good_digest, analyzer::AnalysisLimits limits = {});

    Decision decide(const lang::SourceImage& program, const lang::Value& input,
                    const CallContext& ctx) override;
    bool context_independent() const override { return false; }
    std::string_view name() const override { return "cdf"; }

    const Digest& good_digest() const { return good_digest_; }

  private:
    Digest good_digest_;
    analyzer::AnalysisLimits limits_;
};

// Query sugar: unwraps a Prog value and forwards to the oracle.
Decision decide(Oracle& oracle, const lang::Value& program, const lang::Value& input,
                const CallContext& ctx);

bool is_context_independent(const Oracle& oracle);

}  // namespace hlab::oracle
