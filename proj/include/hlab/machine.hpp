#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "hlab/digest.hpp"
#include "hlab/lang.hpp"

namespace hlab::machine {

// Where a HALT query is being made from: which program image is running and
// the chain of active function frames, entry first.
struct CallContext {
    Digest image_digest{};
    std::vector<std::string> frame_chain;
    bool entry_is_main = false;
};

struct Decision {
    enum class Kind { Return, TrapHaltAll, Undecided };
    Kind kind = Kind::Undecided;
    int bit = 0;
    std::string reason;

    static Decision ret(int b) { return {Kind::Return, b, {}}; }
    static Decision trap_halt_all() { return {Kind::TrapHaltAll, 0, {}}; }
    static Decision undecided(std::string why) { return {Kind::Undecided, 0, std::move(why)}; }
};

// Thrown by an oracle when the queried program value does not parse.
class MalformedProgram : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

class Oracle {
  public:
    virtual ~Oracle() = default;
    virtual Decision decide(const lang::SourceImage& program, const lang::Value& input,
                            const CallContext& ctx) = 0;
    virtual bool context_independent() const = 0;
    virtual std::string_view name() const = 0;
};

struct DecisionEvent {
    std::string oracle;
    std::string ctx_digest_prefix;
    std::vector<std::string> frame_chain;
    Decision decision;
};

struct CallRecord {
    std::string callee;
    std::vector<std::int64_t> args;
};

struct MachineConfig {
    std::size_t memory_cells = 65536;
    std::size_t max_frames = 256;
    bool record_calls = false;
    std::vector<DecisionEvent>* decision_log = nullptr;
};

enum class RunStatus { Halted, OutOfBudget, Trapped };

struct Outcome {
    RunStatus status = RunStatus::OutOfBudget;
    std::uint64_t steps = 0;
    std::vector<std::string> output;
    std::string trap_reason;
    bool halt_intrinsic_executed = false;
};

namespace trap {
inline constexpr std::string_view division_by_zero = "division-by-zero";
inline constexpr std::string_view load_out_of_range = "load-out-of-range";
inline constexpr std::string_view frame_overflow = "frame-overflow";
inline constexpr std::string_view unknown_function = "call-to-unknown-function";
inline constexpr std::string_view type_error = "type-error";
inline constexpr std::string_view halt_all = "halt-all";
inline constexpr std::string_view oracle_undecided = "oracle-undecided";
}  // namespace trap

// Requested a call context while not stopped at a HALT instruction.
class ContextUnavailable : public std::logic_error {
  public:
    ContextUnavailable() : std::logic_error("no HALT query in progress") {}
};

enum class Op : std::uint8_t {
    PushInt, PushStr, LoadVar, StoreVar, AddrOf, LoadMem, Arg,
    Add, Sub, Mul, Div, Eq, Ne, Lt, Le, Gt, Ge, BitAnd, Shl, Shr,
    Jmp, JmpIfZero, Call, Ret, Halt, Print, HaltOracle,
};

struct Instr {
    Op op;
    std::int64_t a = 0;
    std::int64_t b = 0;
};

struct CompiledFunction {
    std::string name;
    std::size_t entry = 0;
    std::size_t nparams = 0;
    std::size_t frame_size = 0;
};

struct Code {
    std::vector<Instr> instrs;
    std::vector<std::string> strings;
    std::vector<CompiledFunction> functions;
    std::size_t main_index = 0;
};

Code compile(const lang::Program& program);

struct Frame {
    std::size_t fn = 0;
    std::size_t return_site = 0;
    std::size_t base = 0;
    std::size_t size = 0;
};

class Machine {
  public:
    Machine(const lang::Program& program, std::vector<lang::Value> inputs, Oracle& oracle,
            MachineConfig config = {});

    bool done() const { return status_ != Status::Running; }
    bool halted() const { return status_ == Status::Halted; }
    bool trapped() const { return status_ == Status::Trapped; }
    const std::string& trap_reason() const { return trap_reason_; }

    void step();
    Outcome run(std::uint64_t max_steps);
    Outcome outcome() const;

    // Byte string identifying the live configuration: instruction pointer,
    // frames with their cells, and the operand stack. Output, step count and
    // the immutable image region are excluded, so a repeated key under a
    // deterministic step function proves the run never terminates.
    std::string config_key() const;

    // Only answerable while stopped at a HALT instruction.
    CallContext current_context() const;
    bool at_halt_intrinsic() const;

    const std::vector<std::string>& output() const { return output_; }
    std::uint64_t steps() const { return steps_; }
    bool halt_intrinsic_executed() const { return halt_executed_; }
    const std::vector<CallRecord>& call_records() const { return call_records_; }
    const lang::Program& program() const { return program_; }
    const std::vector<std::int64_t>& memory() const { return memory_; }
    std::size_t image_length() const { return image_len_; }

  private:
    enum class Status { Running, Halted, Trapped };

    void trap(std::string_view reason);
    lang::Value pop();
    bool pop_int(std::int64_t& out);
    void push_frame(std::size_t fn_index, std::vector<std::int64_t> args);

    const lang::Program& program_;
    Code code_;
    std::vector<lang::Value> inputs_;
    Oracle* oracle_;
    MachineConfig config_;
    Digest image_digest_{};

    Status status_ = Status::Running;
    std::string trap_reason_;
    std::size_t pc_ = 0;
    std::vector<std::int64_t> memory_;
    std::size_t image_len_ = 0;
    std::vector<Frame> frames_;
    std::vector<lang::Value> stack_;
    std::vector<std::string> output_;
    std::uint64_t steps_ = 0;
    bool halt_executed_ = false;
    std::vector<CallRecord> call_records_;
};

// One-shot convenience wrapper.
Outcome run(const lang::Program& program, std::vector<lang::Value> inputs, Oracle& oracle,
            std::uint64_t max_steps, MachineConfig config = {});

}  // namespace hlab::machine
