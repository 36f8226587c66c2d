#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

// The HL toy language: a tiny imperative language whose programs double as
// values. A Program carries its canonical source bytes (the "image"), so a
// program can be quoted, passed around as input, compared byte-for-byte and
// even read back cell-by-cell from the VM's memory.
//
// Canonical form (what serialize() emits and what the pinned fixtures use):
// exactly one space between tokens, one statement per line, no indentation,
// every line terminated by a single 0x0A. Byte offsets into a canonical
// image are therefore stable, which some programs in this repository rely
// on.

namespace hlab::lang {

struct SourceImage {
    std::string bytes;
    std::string origin;  // label for diagnostics only; not part of identity
};

struct ParseError : std::runtime_error {
    int line;
    int col;
    ParseError(int line, int col, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(line) + ":" +
                             std::to_string(col) + ": " + msg),
          line(line),
          col(col) {}
};

// ---------------------------------------------------------------------------
// Expressions
// ---------------------------------------------------------------------------

struct Expr;
using ExprPtr = std::unique_ptr<Expr>;

enum class BinOp { Mul, Div, Add, Sub, Shl, Shr, Eq, Ne, Lt, Le, Gt, Ge, BitAnd };

std::string_view binop_token(BinOp op);
int binop_precedence(BinOp op);  // 5 = * /, 4 = + -, 3 = shifts, 2 = comparisons, 1 = &

// Integer literals are unsigned decimal in the source; at runtime the bit
// pattern is reinterpreted as a signed 64-bit value.
struct IntLit { std::uint64_t value = 0; };
struct VarRef { std::string name; };
struct BinExpr { BinOp op; ExprPtr lhs, rhs; };
struct CallExpr { std::string callee; std::vector<ExprPtr> args; };
struct HaltExpr { ExprPtr program, input; };   // HALT(P, I) oracle intrinsic
struct AddrOfExpr { std::string name; };       // address of a param/local cell
struct LoadExpr { ExprPtr address; };          // raw memory read
struct ArgExpr { std::uint64_t index = 0; };   // i-th top-level input value

struct Expr {
    std::variant<IntLit, VarRef, BinExpr, CallExpr, HaltExpr, AddrOfExpr, LoadExpr, ArgExpr> node;
};

ExprPtr make_expr(Expr e);

// ---------------------------------------------------------------------------
// Statements
// ---------------------------------------------------------------------------

struct Stmt;

struct AssignStmt { std::string target; ExprPtr value; };
struct IfStmt { ExprPtr cond; std::vector<Stmt> then_body, else_body; };
struct WhileStmt { ExprPtr cond; std::vector<Stmt> body; };
struct HaltStmt {};
// A print argument is either a string literal (stored only in the code
// image, never in data memory) or an integer-valued expression.
struct PrintArg { std::optional<std::string> literal; ExprPtr value; };
struct PrintStmt { std::vector<PrintArg> args; };
struct ReturnStmt { ExprPtr value; };

struct Stmt {
    std::variant<AssignStmt, IfStmt, WhileStmt, HaltStmt, PrintStmt, ReturnStmt> node;
};

struct FunctionDef {
    std::string name;
    std::vector<std::string> params;
    std::vector<std::string> locals;  // declaration order fixes the frame layout
    std::vector<Stmt> body;
};

// ---------------------------------------------------------------------------
// Program
// ---------------------------------------------------------------------------

class Program {
  public:
    const std::vector<FunctionDef>& functions() const { return functions_; }
    const std::string& entry() const { return entry_; }
    const SourceImage& image() const { return image_; }

    std::optional<std::size_t> index_of(std::string_view name) const;
    const FunctionDef& function(std::size_t i) const { return functions_[i]; }

  private:
    friend Program parse(SourceImage src);
    friend Program compose(std::vector<FunctionDef> functions, std::string origin);

    std::vector<FunctionDef> functions_;
    std::string entry_;
    SourceImage image_;
};

// Parses a source image. Every byte sequence either yields a Program or
// throws ParseError; the returned Program's image is the canonical
// re-serialization of the AST (not the raw input bytes).
Program parse(SourceImage src);

// Builds a Program directly from an AST; validates the same invariants as
// parse() and synthesizes the canonical image.
Program compose(std::vector<FunctionDef> functions, std::string origin);

// Canonical byte serialization of a program. Deterministic; for a program
// built by parse()/compose() it equals program.image().bytes.
SourceImage serialize(const Program& p);

// ---------------------------------------------------------------------------
// Values
// ---------------------------------------------------------------------------

// Runtime value: a signed wrap-around 64-bit integer, a quoted program
// image, or a print-only string.
class Value {
  public:
    static Value integer(std::int64_t v) { return Value(v); }
    static Value prog(SourceImage image);
    static Value str(std::string bytes);

    bool is_int() const { return std::holds_alternative<std::int64_t>(v_); }
    bool is_prog() const { return std::holds_alternative<std::shared_ptr<const SourceImage>>(v_); }
    bool is_str() const { return std::holds_alternative<std::shared_ptr<const std::string>>(v_); }

    std::int64_t as_int() const;
    const SourceImage& as_prog() const;
    const std::string& as_str() const;

    // Equality on matching variants: Int by value, Prog and Str by bytes.
    // Cross-variant comparison is false here; the VM separately traps it.
    bool operator==(const Value& other) const;

  private:
    explicit Value(std::int64_t v) : v_(v) {}
    std::variant<std::int64_t, std::shared_ptr<const SourceImage>, std::shared_ptr<const std::string>> v_;
};

// Program-as-value: the canonical source bytes, ready to be passed as input.
Value quote(const Program& p);

// ---------------------------------------------------------------------------
// Structural equality (ASTs compared node by node, images ignored)
// ---------------------------------------------------------------------------

bool equal(const Expr& a, const Expr& b);
bool equal(const Stmt& a, const Stmt& b);
bool equal(const FunctionDef& a, const FunctionDef& b);
bool structurally_equal(const Program& a, const Program& b);

}  // namespace hlab::lang
