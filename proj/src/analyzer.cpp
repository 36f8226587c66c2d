#include "hlab/analyzer.hpp"

#include <unordered_map>

namespace hlab::analyzer {

namespace {

class ExecutedHaltModel : public machine::Oracle {
  public:
    machine::Decision decide(const lang::SourceImage&, const lang::Value&,
                             const machine::CallContext&) override {
        return machine::Decision::trap_halt_all();
    }
    bool context_independent() const override { return true; }
    std::string_view name() const override { return "model-executed-halt"; }
};

class ConstantModel : public machine::Oracle {
  public:
    explicit ConstantModel(int bit) : bit_(bit) {}
    machine::Decision decide(const lang::SourceImage&, const lang::Value&,
                             const machine::CallContext&) override {
        return machine::Decision::ret(bit_);
    }
    bool context_independent() const override { return true; }
    std::string_view name() const override { return bit_ ? "model-stub-1" : "model-stub-0"; }

  private:
    int bit_;
};

}  // namespace

Exploration explore(const lang::Program& program, std::vector<lang::Value> inputs,
                    machine::Oracle& halt_model, const AnalysisLimits& limits,
                    machine::MachineConfig config) {
    machine::Machine m(program, std::move(inputs), halt_model, config);
    std::unordered_map<std::string, std::uint64_t> seen;
    Exploration ex;
    Verdict& v = ex.verdict;
    for (;;) {
        if (m.done()) {
            v.kind = Verdict::Kind::Halts;
            v.steps = m.steps();
            v.output = m.output();
            ex.outcome = m.outcome();
            break;
        }
        if (m.steps() >= limits.max_steps || seen.size() >= limits.max_distinct_configs) {
            v.kind = Verdict::Kind::Unknown;
            break;
        }
        auto [it, inserted] = seen.emplace(m.config_key(), m.steps());
        if (!inserted) {
            v.kind = Verdict::Kind::Diverges;
            v.cycle_entry = it->second;
            v.cycle_length = m.steps() - it->second;
            break;
        }
        m.step();
    }
    v.states_explored = seen.size();
    ex.halt_intrinsic_executed = m.halt_intrinsic_executed();
    return ex;
}

Exploration explore(const lang::Program& program, std::vector<lang::Value> inputs,
                    OracleModelRule rule, const AnalysisLimits& limits,
                    machine::MachineConfig config) {
    if (rule.kind == OracleModelRule::Kind::Stub) {
        ConstantModel model(rule.stub_bit);
        return explore(program, std::move(inputs), model, limits, config);
    }
    ExecutedHaltModel model;
    return explore(program, std::move(inputs), model, limits, config);
}

Verdict analyze(const lang::Program& program, std::vector<lang::Value> inputs,
                OracleModelRule rule, const AnalysisLimits& limits,
                machine::MachineConfig config) {
    return explore(program, std::move(inputs), rule, limits, config).verdict;
}

std::optional<bool> ever_executes_halt_intrinsic(const lang::Program& program,
                                                 std::vector<lang::Value> inputs,
                                                 const AnalysisLimits& limits) {
    ExecutedHaltModel model;
    Exploration ex = explore(program, std::move(inputs), model, limits);
    if (ex.halt_intrinsic_executed) return true;
    if (ex.verdict.kind == Verdict::Kind::Unknown) return std::nullopt;
    return false;
}

}  // namespace hlab::analyzer
