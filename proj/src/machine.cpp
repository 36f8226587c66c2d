#include "hlab/machine.hpp"

#include <algorithm>
#include <cassert>
#include <unordered_map>

namespace hlab::machine {

// ---------------------------------------------------------------------------
// Compiler
// ---------------------------------------------------------------------------

namespace {

using lang::Expr;
using lang::Stmt;

class Compiler {
  public:
    explicit Compiler(const lang::Program& p) : program_(p) {}

    Code compile() {
        const auto& fns = program_.functions();
        code_.functions.resize(fns.size());
        for (std::size_t i = 0; i < fns.size(); ++i) {
            CompiledFunction& cf = code_.functions[i];
            cf.name = fns[i].name;
            cf.nparams = fns[i].params.size();
            cf.frame_size = fns[i].params.size() + fns[i].locals.size();
        }
        code_.main_index = *program_.index_of("main");
        for (std::size_t i = 0; i < fns.size(); ++i) {
            code_.functions[i].entry = code_.instrs.size();
            slots_.clear();
            std::int64_t slot = 0;
            for (const std::string& p : fns[i].params) slots_[p] = slot++;
            for (const std::string& v : fns[i].locals) slots_[v] = slot++;
            stmts(fns[i].body);
            emit(Op::PushInt, 0);
            emit(Op::Ret);
        }
        return std::move(code_);
    }

  private:
    const lang::Program& program_;
    Code code_;
    std::unordered_map<std::string, std::int64_t> slots_;

    std::size_t emit(Op op, std::int64_t a = 0, std::int64_t b = 0) {
        code_.instrs.push_back({op, a, b});
        return code_.instrs.size() - 1;
    }

    void patch(std::size_t at, std::size_t target) {
        code_.instrs[at].a = static_cast<std::int64_t>(target);
    }

    std::size_t here() const { return code_.instrs.size(); }

    void stmts(const std::vector<Stmt>& body) {
        for (const Stmt& s : body) stmt(s);
    }

    void stmt(const Stmt& s) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, lang::AssignStmt>) {
                    expr(*n.value);
                    emit(Op::StoreVar, slots_.at(n.target));
                } else if constexpr (std::is_same_v<T, lang::IfStmt>) {
                    expr(*n.cond);
                    std::size_t to_else = emit(Op::JmpIfZero);
                    stmts(n.then_body);
                    if (n.else_body.empty()) {
                        patch(to_else, here());
                    } else {
                        std::size_t to_end = emit(Op::Jmp);
                        patch(to_else, here());
                        stmts(n.else_body);
                        patch(to_end, here());
                    }
                } else if constexpr (std::is_same_v<T, lang::WhileStmt>) {
                    std::size_t top = here();
                    expr(*n.cond);
                    std::size_t to_end = emit(Op::JmpIfZero);
                    stmts(n.body);
                    emit(Op::Jmp, static_cast<std::int64_t>(top));
                    patch(to_end, here());
                } else if constexpr (std::is_same_v<T, lang::HaltStmt>) {
                    emit(Op::Halt);
                } else if constexpr (std::is_same_v<T, lang::PrintStmt>) {
                    for (const lang::PrintArg& a : n.args) {
                        if (a.literal) {
                            code_.strings.push_back(*a.literal);
                            emit(Op::PushStr, static_cast<std::int64_t>(code_.strings.size() - 1));
                        } else {
                            expr(*a.value);
                        }
                    }
                    emit(Op::Print, static_cast<std::int64_t>(n.args.size()));
                } else if constexpr (std::is_same_v<T, lang::ReturnStmt>) {
                    expr(*n.value);
                    emit(Op::Ret);
                }
            },
            s.node);
    }

    static Op binop_op(lang::BinOp op) {
        switch (op) {
            case lang::BinOp::Mul: return Op::Mul;
            case lang::BinOp::Div: return Op::Div;
            case lang::BinOp::Add: return Op::Add;
            case lang::BinOp::Sub: return Op::Sub;
            case lang::BinOp::Shl: return Op::Shl;
            case lang::BinOp::Shr: return Op::Shr;
            case lang::BinOp::Eq: return Op::Eq;
            case lang::BinOp::Ne: return Op::Ne;
            case lang::BinOp::Lt: return Op::Lt;
            case lang::BinOp::Le: return Op::Le;
            case lang::BinOp::Gt: return Op::Gt;
            case lang::BinOp::Ge: return Op::Ge;
            case lang::BinOp::BitAnd: return Op::BitAnd;
        }
        assert(false);
        return Op::Add;
    }

    void expr(const Expr& e) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, lang::IntLit>) {
                    emit(Op::PushInt, static_cast<std::int64_t>(n.value));
                } else if constexpr (std::is_same_v<T, lang::VarRef>) {
                    emit(Op::LoadVar, slots_.at(n.name));
                } else if constexpr (std::is_same_v<T, lang::BinExpr>) {
                    expr(*n.lhs);
                    expr(*n.rhs);
                    emit(binop_op(n.op));
                } else if constexpr (std::is_same_v<T, lang::CallExpr>) {
                    for (const auto& a : n.args) expr(*a);
                    emit(Op::Call, static_cast<std::int64_t>(*program_.index_of(n.callee)),
                         static_cast<std::int64_t>(n.args.size()));
                } else if constexpr (std::is_same_v<T, lang::HaltExpr>) {
                    expr(*n.program);
                    expr(*n.input);
                    emit(Op::HaltOracle);
                } else if constexpr (std::is_same_v<T, lang::AddrOfExpr>) {
                    emit(Op::AddrOf, slots_.at(n.name));
                } else if constexpr (std::is_same_v<T, lang::LoadExpr>) {
                    expr(*n.address);
                    emit(Op::LoadMem);
                } else if constexpr (std::is_same_v<T, lang::ArgExpr>) {
                    emit(Op::Arg, static_cast<std::int64_t>(n.index));
                }
            },
            e.node);
    }
};

void append_u64(std::string& out, std::uint64_t v) {
    for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_i64(std::string& out, std::int64_t v) { append_u64(out, static_cast<std::uint64_t>(v)); }

}  // namespace

Code compile(const lang::Program& program) { return Compiler(program).compile(); }

// ---------------------------------------------------------------------------
// Machine
// ---------------------------------------------------------------------------

Machine::Machine(const lang::Program& program, std::vector<lang::Value> inputs, Oracle& oracle,
                 MachineConfig config)
    : program_(program),
      code_(compile(program)),
      inputs_(std::move(inputs)),
      oracle_(&oracle),
      config_(config) {
    const std::string& image = program.image().bytes;
    image_digest_ = sha256(image);
    image_len_ = image.size();
    memory_.reserve(image_len_);
    for (char c : image) memory_.push_back(static_cast<unsigned char>(c));

    const CompiledFunction& main_fn = code_.functions[code_.main_index];
    if (image_len_ + main_fn.frame_size > config_.memory_cells) {
        trap(trap::frame_overflow);
        return;
    }
    frames_.push_back({code_.main_index, 0, image_len_, main_fn.frame_size});
    memory_.resize(image_len_ + main_fn.frame_size, 0);
    pc_ = main_fn.entry;
}

void Machine::trap(std::string_view reason) {
    status_ = Status::Trapped;
    trap_reason_ = reason;
}

lang::Value Machine::pop() {
    assert(!stack_.empty());
    lang::Value v = std::move(stack_.back());
    stack_.pop_back();
    return v;
}

bool Machine::pop_int(std::int64_t& out) {
    lang::Value v = pop();
    if (!v.is_int()) {
        trap(trap::type_error);
        return false;
    }
    out = v.as_int();
    return true;
}

bool Machine::at_halt_intrinsic() const {
    return status_ == Status::Running && pc_ < code_.instrs.size() &&
           code_.instrs[pc_].op == Op::HaltOracle;
}

CallContext Machine::current_context() const {
    if (!at_halt_intrinsic()) throw ContextUnavailable();
    CallContext ctx;
    ctx.image_digest = image_digest_;
    for (const Frame& f : frames_) ctx.frame_chain.push_back(code_.functions[f.fn].name);
    ctx.entry_is_main = frames_.size() == 1 && ctx.frame_chain.front() == "main";
    return ctx;
}

void Machine::push_frame(std::size_t fn_index, std::vector<std::int64_t> args) {
    const CompiledFunction& f = code_.functions[fn_index];
    if (frames_.size() >= config_.max_frames) {
        trap(trap::frame_overflow);
        return;
    }
    std::size_t base = memory_.size();
    if (base + f.frame_size > config_.memory_cells) {
        trap(trap::frame_overflow);
        return;
    }
    frames_.push_back({fn_index, pc_, base, f.frame_size});
    memory_.resize(base + f.frame_size, 0);
    for (std::size_t i = 0; i < args.size(); ++i) memory_[base + i] = args[i];
    if (config_.record_calls) call_records_.push_back({f.name, std::move(args)});
    pc_ = f.entry;
}

void Machine::step() {
    if (status_ != Status::Running) return;
    const Instr& in = code_.instrs[pc_];
    ++pc_;
    ++steps_;

    auto frame = [&]() -> Frame& { return frames_.back(); };

    switch (in.op) {
        case Op::PushInt:
            stack_.push_back(lang::Value::integer(in.a));
            break;
        case Op::PushStr:
            stack_.push_back(lang::Value::str(code_.strings[static_cast<std::size_t>(in.a)]));
            break;
        case Op::LoadVar:
            stack_.push_back(lang::Value::integer(memory_[frame().base + static_cast<std::size_t>(in.a)]));
            break;
        case Op::StoreVar: {
            std::int64_t v;
            if (!pop_int(v)) return;
            memory_[frame().base + static_cast<std::size_t>(in.a)] = v;
            break;
        }
        case Op::AddrOf:
            stack_.push_back(lang::Value::integer(
                static_cast<std::int64_t>(frame().base + static_cast<std::size_t>(in.a))));
            break;
        case Op::LoadMem: {
            std::int64_t addr;
            if (!pop_int(addr)) return;
            if (addr < 0 || static_cast<std::uint64_t>(addr) >= memory_.size()) {
                trap(trap::load_out_of_range);
                return;
            }
            stack_.push_back(lang::Value::integer(memory_[static_cast<std::size_t>(addr)]));
            break;
        }
        case Op::Arg: {
            std::uint64_t idx = static_cast<std::uint64_t>(in.a);
            if (idx < inputs_.size()) stack_.push_back(inputs_[static_cast<std::size_t>(idx)]);
            else stack_.push_back(lang::Value::integer(0));
            break;
        }
        case Op::Eq:
        case Op::Ne: {
            lang::Value rhs = pop();
            lang::Value lhs = pop();
            bool eq;
            if (lhs.is_int() && rhs.is_int()) eq = lhs.as_int() == rhs.as_int();
            else if (lhs.is_prog() && rhs.is_prog()) eq = lhs.as_prog().bytes == rhs.as_prog().bytes;
            else {
                trap(trap::type_error);
                return;
            }
            bool want = in.op == Op::Eq;
            stack_.push_back(lang::Value::integer(eq == want ? 1 : 0));
            break;
        }
        case Op::Add:
        case Op::Sub:
        case Op::Mul:
        case Op::Div:
        case Op::Lt:
        case Op::Le:
        case Op::Gt:
        case Op::Ge:
        case Op::BitAnd:
        case Op::Shl:
        case Op::Shr: {
            std::int64_t b, a;
            if (!pop_int(b) || !pop_int(a)) return;
            std::uint64_t ua = static_cast<std::uint64_t>(a);
            std::uint64_t ub = static_cast<std::uint64_t>(b);
            std::int64_t r = 0;
            switch (in.op) {
                case Op::Add: r = static_cast<std::int64_t>(ua + ub); break;
                case Op::Sub: r = static_cast<std::int64_t>(ua - ub); break;
                case Op::Mul: r = static_cast<std::int64_t>(ua * ub); break;
                case Op::Div:
                    if (b == 0) {
                        trap(trap::division_by_zero);
                        return;
                    }
                    if (a == INT64_MIN && b == -1) r = INT64_MIN;
                    else r = a / b;
                    break;
                case Op::Lt: r = a < b; break;
                case Op::Le: r = a <= b; break;
                case Op::Gt: r = a > b; break;
                case Op::Ge: r = a >= b; break;
                case Op::BitAnd: r = a & b; break;
                case Op::Shl: r = static_cast<std::int64_t>(ua << (ub & 63)); break;
                case Op::Shr: r = a >> (ub & 63); break;
                default: break;
            }
            stack_.push_back(lang::Value::integer(r));
            break;
        }
        case Op::Jmp:
            pc_ = static_cast<std::size_t>(in.a);
            break;
        case Op::JmpIfZero: {
            std::int64_t v;
            if (!pop_int(v)) return;
            if (v == 0) pc_ = static_cast<std::size_t>(in.a);
            break;
        }
        case Op::Call: {
            std::size_t fi = static_cast<std::size_t>(in.a);
            std::size_t nargs = static_cast<std::size_t>(in.b);
            std::vector<std::int64_t> args(nargs);
            for (std::size_t i = nargs; i-- > 0;)
                if (!pop_int(args[i])) return;
            if (nargs != code_.functions[fi].nparams) {
                trap(trap::unknown_function);
                return;
            }
            push_frame(fi, std::move(args));
            break;
        }
        case Op::Ret: {
            lang::Value v = pop();
            if (frames_.size() == 1) {
                status_ = Status::Halted;
                return;
            }
            Frame done = frames_.back();
            frames_.pop_back();
            memory_.resize(done.base);
            pc_ = done.return_site;
            stack_.push_back(std::move(v));
            break;
        }
        case Op::Halt:
            status_ = Status::Halted;
            break;
        case Op::Print: {
            std::size_t n = static_cast<std::size_t>(in.a);
            std::vector<lang::Value> vals;
            vals.reserve(n);
            for (std::size_t i = 0; i < n; ++i) vals.push_back(pop());
            std::reverse(vals.begin(), vals.end());
            std::string line;
            for (const lang::Value& v : vals) {
                if (v.is_int()) line += std::to_string(v.as_int());
                else if (v.is_str()) line += v.as_str();
                else {
                    trap(trap::type_error);
                    return;
                }
            }
            output_.push_back(std::move(line));
            break;
        }
        case Op::HaltOracle: {
            halt_executed_ = true;
            lang::Value input = pop();
            lang::Value prog = pop();
            if (!prog.is_prog()) {
                trap(trap::type_error);
                return;
            }
            CallContext ctx;
            ctx.image_digest = image_digest_;
            for (const Frame& f : frames_) ctx.frame_chain.push_back(code_.functions[f.fn].name);
            ctx.entry_is_main = frames_.size() == 1 && ctx.frame_chain.front() == "main";

            Decision d;
            try {
                d = oracle_->decide(prog.as_prog(), input, ctx);
            } catch (const MalformedProgram&) {
                trap(trap::type_error);
                return;
            }
            if (config_.decision_log)
                config_.decision_log->push_back(
                    {std::string(oracle_->name()), hex_prefix(image_digest_), ctx.frame_chain, d});
            switch (d.kind) {
                case Decision::Kind::Return:
                    stack_.push_back(lang::Value::integer(d.bit ? 1 : 0));
                    break;
                case Decision::Kind::TrapHaltAll:
                    trap(trap::halt_all);
                    return;
                case Decision::Kind::Undecided:
                    trap(trap::oracle_undecided);
                    return;
            }
            break;
        }
    }
}

Outcome Machine::run(std::uint64_t max_steps) {
    while (status_ == Status::Running && steps_ < max_steps) step();
    return outcome();
}

Outcome Machine::outcome() const {
    Outcome o;
    switch (status_) {
        case Status::Halted: o.status = RunStatus::Halted; break;
        case Status::Trapped: o.status = RunStatus::Trapped; break;
        case Status::Running: o.status = RunStatus::OutOfBudget; break;
    }
    o.steps = steps_;
    o.output = output_;
    o.trap_reason = trap_reason_;
    o.halt_intrinsic_executed = halt_executed_;
    return o;
}

std::string Machine::config_key() const {
    std::string key;
    append_u64(key, pc_);
    append_u64(key, frames_.size());
    for (const Frame& f : frames_) {
        append_u64(key, f.fn);
        append_u64(key, f.return_site);
        append_u64(key, f.size);
        for (std::size_t i = 0; i < f.size; ++i) append_i64(key, memory_[f.base + i]);
    }
    append_u64(key, stack_.size());
    for (const lang::Value& v : stack_) {
        if (v.is_int()) {
            key.push_back(0);
            append_i64(key, v.as_int());
        } else if (v.is_prog()) {
            key.push_back(1);
            append_u64(key, v.as_prog().bytes.size());
            key += v.as_prog().bytes;
        } else {
            key.push_back(2);
            append_u64(key, v.as_str().size());
            key += v.as_str();
        }
    }
    return key;
}

Outcome run(const lang::Program& program, std::vector<lang::Value> inputs, Oracle& oracle,
            std::uint64_t max_steps, MachineConfig config) {
    Machine m(program, std::move(inputs), oracle, config);
    return m.run(max_steps);
}

}  // namespace hlab::machine
