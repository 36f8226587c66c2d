#include "hlab/lang.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <unordered_map>
#include <unordered_set>

namespace hlab::lang {

std::string_view binop_token(BinOp op) {
    switch (op) {
        case BinOp::Mul: return "*";
        case BinOp::Div: return "/";
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Shl: return "<<";
        case BinOp::Shr: return ">>";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::BitAnd: return "&";
    }
    return "?";
}

int binop_precedence(BinOp op) {
    switch (op) {
        case BinOp::Mul:
        case BinOp::Div: return 5;
        case BinOp::Add:
        case BinOp::Sub: return 4;
        case BinOp::Shl:
        case BinOp::Shr: return 3;
        case BinOp::Eq:
        case BinOp::Ne:
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge: return 2;
        case BinOp::BitAnd: return 1;
    }
    return 0;
}

ExprPtr make_expr(Expr e) { return std::make_unique<Expr>(std::move(e)); }

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
    Ident, Int, String,
    KwFn, KwVar, KwIf, KwElse, KwWhile, KwHalt, KwPrint, KwReturn,
    KwHALT, KwAddrOf, KwLoad, KwArg,
    LParen, RParen, LBrace, RBrace, Comma, Semi, Assign,
    Plus, Minus, Star, Slash, EqEq, NotEq, Lt, Le, Gt, Ge, Amp, Shl, Shr,
    Eof,
};

struct Token {
    Tok kind;
    std::string text;      // ident text or decoded string bytes
    std::uint64_t number = 0;
    int line = 1, col = 1;
};

const std::unordered_map<std::string_view, Tok>& keywords() {
    static const std::unordered_map<std::string_view, Tok> kw = {
        {"fn", Tok::KwFn},       {"var", Tok::KwVar},   {"if", Tok::KwIf},
        {"else", Tok::KwElse},   {"while", Tok::KwWhile}, {"halt", Tok::KwHalt},
        {"print", Tok::KwPrint}, {"return", Tok::KwReturn}, {"HALT", Tok::KwHALT},
        {"addr_of", Tok::KwAddrOf}, {"load", Tok::KwLoad}, {"arg", Tok::KwArg},
    };
    return kw;
}

class Lexer {
  public:
    explicit Lexer(std::string_view src) : src_(src) {}

    std::vector<Token> lex() {
        std::vector<Token> out;
        for (;;) {
            skip_ws();
            Token t = next();
            bool eof = t.kind == Tok::Eof;
            out.push_back(std::move(t));
            if (eof) break;
        }
        return out;
    }

  private:
    std::string_view src_;
    std::size_t pos_ = 0;
    int line_ = 1, col_ = 1;

    [[noreturn]] void fail(const std::string& msg) { throw ParseError(line_, col_, msg); }

    bool eof() const { return pos_ >= src_.size(); }
    char peek() const { return src_[pos_]; }

    char advance() {
        char c = src_[pos_++];
        if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
        return c;
    }

    void skip_ws() {
        while (!eof()) {
            char c = peek();
            if (c == ' ' || c == '\t' || c == '\r' || c == '\n') advance();
            else break;
        }
    }

    Token make(Tok kind) { return Token{kind, {}, 0, line_, col_}; }

    Token next() {
        if (eof()) return make(Tok::Eof);
        int line = line_, col = col_;
        char c = advance();
        auto tok = [&](Tok k, std::string text = {}, std::uint64_t num = 0) {
            return Token{k, std::move(text), num, line, col};
        };
        switch (c) {
            case '(': return tok(Tok::LParen);
            case ')': return tok(Tok::RParen);
            case '{': return tok(Tok::LBrace);
            case '}': return tok(Tok::RBrace);
            case ',': return tok(Tok::Comma);
            case ';': return tok(Tok::Semi);
            case '+': return tok(Tok::Plus);
            case '-': return tok(Tok::Minus);
            case '*': return tok(Tok::Star);
            case '/': return tok(Tok::Slash);
            case '&': return tok(Tok::Amp);
            case '=':
                if (!eof() && peek() == '=') { advance(); return tok(Tok::EqEq); }
                return tok(Tok::Assign);
            case '!':
                if (!eof() && peek() == '=') { advance(); return tok(Tok::NotEq); }
                fail("expected '=' after '!'");
            case '<':
                if (!eof() && peek() == '=') { advance(); return tok(Tok::Le); }
                if (!eof() && peek() == '<') { advance(); return tok(Tok::Shl); }
                return tok(Tok::Lt);
            case '>':
                if (!eof() && peek() == '=') { advance(); return tok(Tok::Ge); }
                if (!eof() && peek() == '>') { advance(); return tok(Tok::Shr); }
                return tok(Tok::Gt);
            case '"': return lex_string(line, col);
            default: break;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::string digits(1, c);
            while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) digits.push_back(advance());
            std::uint64_t v = 0;
            auto [p, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
            if (ec != std::errc() || p != digits.data() + digits.size())
                throw ParseError(line, col, "integer literal out of range: " + digits);
            return tok(Tok::Int, std::move(digits), v);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::string name(1, c);
            while (!eof() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_'))
                name.push_back(advance());
            auto it = keywords().find(name);
            if (it != keywords().end()) return tok(it->second, std::move(name));
            return tok(Tok::Ident, std::move(name));
        }
        throw ParseError(line, col, std::string("unexpected character '") + c + "'");
    }

    Token lex_string(int line, int col) {
        std::string bytes;
        for (;;) {
            if (eof()) throw ParseError(line, col, "unterminated string literal");
            char c = advance();
            if (c == '"') break;
            if (c == '\n') throw ParseError(line, col, "raw newline in string literal");
            if (static_cast<unsigned char>(c) < 0x20)
                throw ParseError(line, col, "raw control byte in string literal");
            if (c == '\\') {
                if (eof()) throw ParseError(line, col, "unterminated escape");
                char e = advance();
                switch (e) {
                    case '\\': bytes.push_back('\\'); break;
                    case '"': bytes.push_back('"'); break;
                    case 'n': bytes.push_back('\n'); break;
                    case 't': bytes.push_back('\t'); break;
                    default: throw ParseError(line, col, std::string("unknown escape '\\") + e + "'");
                }
            } else {
                bytes.push_back(c);
            }
        }
        return Token{Tok::String, std::move(bytes), 0, line, col};
    }
};

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

std::optional<BinOp> binop_of(Tok t) {
    switch (t) {
        case Tok::Star: return BinOp::Mul;
        case Tok::Slash: return BinOp::Div;
        case Tok::Plus: return BinOp::Add;
        case Tok::Minus: return BinOp::Sub;
        case Tok::Shl: return BinOp::Shl;
        case Tok::Shr: return BinOp::Shr;
        case Tok::EqEq: return BinOp::Eq;
        case Tok::NotEq: return BinOp::Ne;
        case Tok::Lt: return BinOp::Lt;
        case Tok::Le: return BinOp::Le;
        case Tok::Gt: return BinOp::Gt;
        case Tok::Ge: return BinOp::Ge;
        case Tok::Amp: return BinOp::BitAnd;
        default: return std::nullopt;
    }
}

class Parser {
  public:
    explicit Parser(std::vector<Token> toks) : toks_(std::move(toks)) {}

    std::vector<FunctionDef> parse_program() {
        std::vector<FunctionDef> fns;
        while (!at(Tok::Eof)) fns.push_back(parse_fn());
        if (fns.empty()) fail("empty program: expected at least one 'fn'");
        return fns;
    }

  private:
    std::vector<Token> toks_;
    std::size_t pos_ = 0;

    const Token& cur() const { return toks_[pos_]; }
    bool at(Tok k) const { return cur().kind == k; }

    [[noreturn]] void fail(const std::string& msg) const {
        throw ParseError(cur().line, cur().col, msg);
    }

    Token eat(Tok k, const char* what) {
        if (!at(k)) fail(std::string("expected ") + what);
        return toks_[pos_++];
    }

    bool accept(Tok k) {
        if (at(k)) { ++pos_; return true; }
        return false;
    }

    FunctionDef parse_fn() {
        eat(Tok::KwFn, "'fn'");
        FunctionDef fn;
        fn.name = eat(Tok::Ident, "function name").text;
        eat(Tok::LParen, "'('");
        if (!at(Tok::RParen)) {
            fn.params.push_back(eat(Tok::Ident, "parameter name").text);
            while (accept(Tok::Comma))
                fn.params.push_back(eat(Tok::Ident, "parameter name").text);
        }
        eat(Tok::RParen, "')'");
        if (accept(Tok::KwVar)) {
            fn.locals.push_back(eat(Tok::Ident, "variable name").text);
            while (accept(Tok::Comma))
                fn.locals.push_back(eat(Tok::Ident, "variable name").text);
            eat(Tok::Semi, "';' after var clause");
        }
        fn.body = parse_block();
        return fn;
    }

    std::vector<Stmt> parse_block() {
        eat(Tok::LBrace, "'{'");
        std::vector<Stmt> stmts;
        while (!at(Tok::RBrace)) {
            if (at(Tok::Eof)) fail("unterminated block");
            stmts.push_back(parse_stmt());
        }
        eat(Tok::RBrace, "'}'");
        return stmts;
    }

    Stmt parse_stmt() {
        switch (cur().kind) {
            case Tok::Ident: {
                std::string target = toks_[pos_++].text;
                eat(Tok::Assign, "'=' in assignment");
                ExprPtr value = parse_expr();
                eat(Tok::Semi, "';'");
                return Stmt{AssignStmt{std::move(target), std::move(value)}};
            }
            case Tok::KwIf: {
                ++pos_;
                eat(Tok::LParen, "'('");
                ExprPtr cond = parse_expr();
                eat(Tok::RParen, "')'");
                std::vector<Stmt> then_body = parse_block();
                std::vector<Stmt> else_body;
                if (accept(Tok::KwElse)) else_body = parse_block();
                return Stmt{IfStmt{std::move(cond), std::move(then_body), std::move(else_body)}};
            }
            case Tok::KwWhile: {
                ++pos_;
                eat(Tok::LParen, "'('");
                ExprPtr cond = parse_expr();
                eat(Tok::RParen, "')'");
                std::vector<Stmt> body = parse_block();
                return Stmt{WhileStmt{std::move(cond), std::move(body)}};
            }
            case Tok::KwHalt: {
                ++pos_;
                eat(Tok::Semi, "';'");
                return Stmt{HaltStmt{}};
            }
            case Tok::KwPrint: {
                ++pos_;
                std::vector<PrintArg> args;
                args.push_back(parse_print_arg());
                while (accept(Tok::Comma)) args.push_back(parse_print_arg());
                eat(Tok::Semi, "';'");
                return Stmt{PrintStmt{std::move(args)}};
            }
            case Tok::KwReturn: {
                ++pos_;
                ExprPtr value = parse_expr();
                eat(Tok::Semi, "';'");
                return Stmt{ReturnStmt{std::move(value)}};
            }
            default:
                fail("expected statement");
        }
    }

    PrintArg parse_print_arg() {
        if (at(Tok::String)) {
            PrintArg a;
            a.literal = toks_[pos_++].text;
            return a;
        }
        PrintArg a;
        a.value = parse_expr();
        return a;
    }

    ExprPtr parse_expr() { return parse_bin(1); }

    ExprPtr parse_bin(int min_prec) {
        ExprPtr lhs = parse_primary();
        for (;;) {
            auto op = binop_of(cur().kind);
            if (!op || binop_precedence(*op) < min_prec) break;
            ++pos_;
            ExprPtr rhs = parse_bin(binop_precedence(*op) + 1);
            lhs = make_expr(Expr{BinExpr{*op, std::move(lhs), std::move(rhs)}});
        }
        return lhs;
    }

    ExprPtr parse_primary() {
        switch (cur().kind) {
            case Tok::Int: {
                std::uint64_t v = toks_[pos_++].number;
                return make_expr(Expr{IntLit{v}});
            }
            case Tok::Ident: {
                std::string name = toks_[pos_++].text;
                if (accept(Tok::LParen)) {
                    std::vector<ExprPtr> args;
                    if (!at(Tok::RParen)) {
                        args.push_back(parse_expr());
                        while (accept(Tok::Comma)) args.push_back(parse_expr());
                    }
                    eat(Tok::RParen, "')'");
                    return make_expr(Expr{CallExpr{std::move(name), std::move(args)}});
                }
                return make_expr(Expr{VarRef{std::move(name)}});
            }
            case Tok::LParen: {
                ++pos_;
                ExprPtr e = parse_expr();
                eat(Tok::RParen, "')'");
                return e;
            }
            case Tok::KwHALT: {
                ++pos_;
                eat(Tok::LParen, "'('");
                ExprPtr p = parse_expr();
                eat(Tok::Comma, "','");
                ExprPtr i = parse_expr();
                eat(Tok::RParen, "')'");
                return make_expr(Expr{HaltExpr{std::move(p), std::move(i)}});
            }
            case Tok::KwAddrOf: {
                ++pos_;
                eat(Tok::LParen, "'('");
                std::string name = eat(Tok::Ident, "variable name").text;
                eat(Tok::RParen, "')'");
                return make_expr(Expr{AddrOfExpr{std::move(name)}});
            }
            case Tok::KwLoad: {
                ++pos_;
                eat(Tok::LParen, "'('");
                ExprPtr a = parse_expr();
                eat(Tok::RParen, "')'");
                return make_expr(Expr{LoadExpr{std::move(a)}});
            }
            case Tok::KwArg: {
                ++pos_;
                eat(Tok::LParen, "'('");
                std::uint64_t idx = eat(Tok::Int, "input index").number;
                eat(Tok::RParen, "')'");
                return make_expr(Expr{ArgExpr{idx}});
            }
            case Tok::String:
                fail("string literal only allowed as a print argument");
            default:
                fail("expected expression");
        }
    }
};

// ---------------------------------------------------------------------------
// Validation
// ---------------------------------------------------------------------------

struct Scope {
    const std::unordered_map<std::string, std::size_t>* fns;
    std::unordered_set<std::string> vars;
};

[[noreturn]] void invalid(const std::string& msg) { throw ParseError(0, 0, msg); }

void check_expr(const Expr& e, const Scope& sc);

void check_exprs(const std::vector<ExprPtr>& es, const Scope& sc) {
    for (const auto& e : es) check_expr(*e, sc);
}

void check_expr(const Expr& e, const Scope& sc) {
    std::visit(
        [&](const auto& n) {
            using T = std::decay_t<decltype(n)>;
            if constexpr (std::is_same_v<T, VarRef>) {
                if (!sc.vars.count(n.name)) invalid("undeclared variable '" + n.name + "'");
            } else if constexpr (std::is_same_v<T, BinExpr>) {
                check_expr(*n.lhs, sc);
                check_expr(*n.rhs, sc);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                if (!sc.fns->count(n.callee)) invalid("call to unknown function '" + n.callee + "'");
                check_exprs(n.args, sc);
            } else if constexpr (std::is_same_v<T, HaltExpr>) {
                check_expr(*n.program, sc);
                check_expr(*n.input, sc);
            } else if constexpr (std::is_same_v<T, AddrOfExpr>) {
                if (!sc.vars.count(n.name)) invalid("addr_of of undeclared variable '" + n.name + "'");
            } else if constexpr (std::is_same_v<T, LoadExpr>) {
                check_expr(*n.address, sc);
            }
        },
        e.node);
}

void check_stmts(const std::vector<Stmt>& body, const Scope& sc) {
    for (const Stmt& s : body) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    if (!sc.vars.count(n.target)) invalid("assignment to undeclared variable '" + n.target + "'");
                    check_expr(*n.value, sc);
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    check_expr(*n.cond, sc);
                    check_stmts(n.then_body, sc);
                    check_stmts(n.else_body, sc);
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    check_expr(*n.cond, sc);
                    check_stmts(n.body, sc);
                } else if constexpr (std::is_same_v<T, PrintStmt>) {
                    for (const PrintArg& a : n.args)
                        if (!a.literal) check_expr(*a.value, sc);
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    check_expr(*n.value, sc);
                }
            },
            s.node);
    }
}

void validate(const std::vector<FunctionDef>& fns) {
    std::unordered_map<std::string, std::size_t> by_name;
    for (std::size_t i = 0; i < fns.size(); ++i) {
        if (!by_name.emplace(fns[i].name, i).second)
            invalid("duplicate function '" + fns[i].name + "'");
    }
    if (!by_name.count("main")) invalid("program has no 'main' function");

    for (const FunctionDef& fn : fns) {
        Scope sc{&by_name, {}};
        for (const std::string& p : fn.params)
            if (!sc.vars.insert(p).second) invalid("duplicate parameter '" + p + "' in '" + fn.name + "'");
        for (const std::string& v : fn.locals)
            if (!sc.vars.insert(v).second) invalid("duplicate variable '" + v + "' in '" + fn.name + "'");
        check_stmts(fn.body, sc);
    }
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

std::string escape_string(const std::string& bytes) {
    std::string out = "\"";
    for (char c : bytes) {
        switch (c) {
            case '\\': out += "\\\\"; break;
            case '"': out += "\\\""; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    out.push_back('"');
    return out;
}

class Writer {
  public:
    std::string take() { return std::move(out_); }

    void write_fn(const FunctionDef& fn) {
        line_.clear();
        tok("fn");
        tok(fn.name);
        tok("(");
        list(fn.params);
        tok(")");
        if (!fn.locals.empty()) {
            tok("var");
            list(fn.locals);
            tok(";");
        }
        tok("{");
        endline();
        write_stmts(fn.body);
        tok("}");
        endline();
    }

  private:
    std::string out_;
    std::vector<std::string> line_;

    void tok(std::string_view t) { line_.emplace_back(t); }

    void list(const std::vector<std::string>& names) {
        for (std::size_t i = 0; i < names.size(); ++i) {
            if (i) tok(",");
            tok(names[i]);
        }
    }

    void endline() {
        for (std::size_t i = 0; i < line_.size(); ++i) {
            if (i) out_.push_back(' ');
            out_ += line_[i];
        }
        out_.push_back('\n');
        line_.clear();
    }

    void write_stmts(const std::vector<Stmt>& body) {
        for (const Stmt& s : body) write_stmt(s);
    }

    void write_stmt(const Stmt& s) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, AssignStmt>) {
                    tok(n.target);
                    tok("=");
                    expr(*n.value, 0);
                    tok(";");
                    endline();
                } else if constexpr (std::is_same_v<T, IfStmt>) {
                    tok("if");
                    tok("(");
                    expr(*n.cond, 0);
                    tok(")");
                    tok("{");
                    endline();
                    write_stmts(n.then_body);
                    if (!n.else_body.empty()) {
                        tok("}");
                        tok("else");
                        tok("{");
                        endline();
                        write_stmts(n.else_body);
                    }
                    tok("}");
                    endline();
                } else if constexpr (std::is_same_v<T, WhileStmt>) {
                    tok("while");
                    tok("(");
                    expr(*n.cond, 0);
                    tok(")");
                    tok("{");
                    endline();
                    write_stmts(n.body);
                    tok("}");
                    endline();
                } else if constexpr (std::is_same_v<T, HaltStmt>) {
                    tok("halt");
                    tok(";");
                    endline();
                } else if constexpr (std::is_same_v<T, PrintStmt>) {
                    tok("print");
                    for (std::size_t i = 0; i < n.args.size(); ++i) {
                        if (i) tok(",");
                        if (n.args[i].literal) tok(escape_string(*n.args[i].literal));
                        else expr(*n.args[i].value, 0);
                    }
                    tok(";");
                    endline();
                } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                    tok("return");
                    expr(*n.value, 0);
                    tok(";");
                    endline();
                }
            },
            s.node);
    }

    // Minimal parentheses: a binary child is wrapped when its precedence is
    // below the parent's, or equal on the right (operators are
    // left-associative). `need` carries the threshold; 0 means none.
    void expr(const Expr& e, int need) {
        std::visit(
            [&](const auto& n) {
                using T = std::decay_t<decltype(n)>;
                if constexpr (std::is_same_v<T, IntLit>) {
                    tok(std::to_string(n.value));
                } else if constexpr (std::is_same_v<T, VarRef>) {
                    tok(n.name);
                } else if constexpr (std::is_same_v<T, BinExpr>) {
                    int prec = binop_precedence(n.op);
                    bool wrap = prec < need;
                    if (wrap) tok("(");
                    expr(*n.lhs, prec);
                    tok(binop_token(n.op));
                    expr(*n.rhs, prec + 1);
                    if (wrap) tok(")");
                } else if constexpr (std::is_same_v<T, CallExpr>) {
                    tok(n.callee);
                    tok("(");
                    for (std::size_t i = 0; i < n.args.size(); ++i) {
                        if (i) tok(",");
                        expr(*n.args[i], 0);
                    }
                    tok(")");
                } else if constexpr (std::is_same_v<T, HaltExpr>) {
                    tok("HALT");
                    tok("(");
                    expr(*n.program, 0);
                    tok(",");
                    expr(*n.input, 0);
                    tok(")");
                } else if constexpr (std::is_same_v<T, AddrOfExpr>) {
                    tok("addr_of");
                    tok("(");
                    tok(n.name);
                    tok(")");
                } else if constexpr (std::is_same_v<T, LoadExpr>) {
                    tok("load");
                    tok("(");
                    expr(*n.address, 0);
                    tok(")");
                } else if constexpr (std::is_same_v<T, ArgExpr>) {
                    tok("arg");
                    tok("(");
                    tok(std::to_string(n.index));
                    tok(")");
                }
            },
            e.node);
    }
};

std::string canonical_text(const std::vector<FunctionDef>& fns) {
    Writer w;
    for (const FunctionDef& fn : fns) w.write_fn(fn);
    return w.take();
}

}  // namespace

// ---------------------------------------------------------------------------
// Public operations
// ---------------------------------------------------------------------------

std::optional<std::size_t> Program::index_of(std::string_view name) const {
    for (std::size_t i = 0; i < functions_.size(); ++i)
        if (functions_[i].name == name) return i;
    return std::nullopt;
}

Program parse(SourceImage src) {
    Lexer lexer(src.bytes);
    Parser parser(lexer.lex());
    std::vector<FunctionDef> fns = parser.parse_program();
    validate(fns);
    Program p;
    p.image_ = SourceImage{canonical_text(fns), std::move(src.origin)};
    p.functions_ = std::move(fns);
    p.entry_ = "main";
    return p;
}

Program compose(std::vector<FunctionDef> functions, std::string origin) {
    validate(functions);
    Program p;
    p.image_ = SourceImage{canonical_text(functions), std::move(origin)};
    p.functions_ = std::move(functions);
    p.entry_ = "main";
    return p;
}

SourceImage serialize(const Program& p) {
    return SourceImage{canonical_text(p.functions()), p.image().origin};
}

Value Value::prog(SourceImage image) {
    Value v(0);
    v.v_ = std::make_shared<const SourceImage>(std::move(image));
    return v;
}

Value Value::str(std::string bytes) {
    Value v(0);
    v.v_ = std::make_shared<const std::string>(std::move(bytes));
    return v;
}

std::int64_t Value::as_int() const {
    if (!is_int()) throw std::logic_error("value is not an integer");
    return std::get<std::int64_t>(v_);
}

const SourceImage& Value::as_prog() const {
    if (!is_prog()) throw std::logic_error("value is not a program");
    return *std::get<std::shared_ptr<const SourceImage>>(v_);
}

const std::string& Value::as_str() const {
    if (!is_str()) throw std::logic_error("value is not a string");
    return *std::get<std::shared_ptr<const std::string>>(v_);
}

bool Value::operator==(const Value& other) const {
    if (is_int() && other.is_int()) return as_int() == other.as_int();
    if (is_prog() && other.is_prog()) return as_prog().bytes == other.as_prog().bytes;
    if (is_str() && other.is_str()) return as_str() == other.as_str();
    return false;
}

Value quote(const Program& p) { return Value::prog(p.image()); }

// ---------------------------------------------------------------------------
// Structural equality
// ---------------------------------------------------------------------------

bool equal(const Expr& a, const Expr& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, IntLit>) {
                return x.value == y.value;
            } else if constexpr (std::is_same_v<T, VarRef>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, BinExpr>) {
                return x.op == y.op && equal(*x.lhs, *y.lhs) && equal(*x.rhs, *y.rhs);
            } else if constexpr (std::is_same_v<T, CallExpr>) {
                if (x.callee != y.callee || x.args.size() != y.args.size()) return false;
                for (std::size_t i = 0; i < x.args.size(); ++i)
                    if (!equal(*x.args[i], *y.args[i])) return false;
                return true;
            } else if constexpr (std::is_same_v<T, HaltExpr>) {
                return equal(*x.program, *y.program) && equal(*x.input, *y.input);
            } else if constexpr (std::is_same_v<T, AddrOfExpr>) {
                return x.name == y.name;
            } else if constexpr (std::is_same_v<T, LoadExpr>) {
                return equal(*x.address, *y.address);
            } else if constexpr (std::is_same_v<T, ArgExpr>) {
                return x.index == y.index;
            }
        },
        a.node);
}

namespace {
bool equal_bodies(const std::vector<Stmt>& a, const std::vector<Stmt>& b) {
    if (a.size() != b.size()) return false;
    for (std::size_t i = 0; i < a.size(); ++i)
        if (!equal(a[i], b[i])) return false;
    return true;
}
}  // namespace

bool equal(const Stmt& a, const Stmt& b) {
    if (a.node.index() != b.node.index()) return false;
    return std::visit(
        [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            const auto& y = std::get<T>(b.node);
            if constexpr (std::is_same_v<T, AssignStmt>) {
                return x.target == y.target && equal(*x.value, *y.value);
            } else if constexpr (std::is_same_v<T, IfStmt>) {
                return equal(*x.cond, *y.cond) && equal_bodies(x.then_body, y.then_body) &&
                       equal_bodies(x.else_body, y.else_body);
            } else if constexpr (std::is_same_v<T, WhileStmt>) {
                return equal(*x.cond, *y.cond) && equal_bodies(x.body, y.body);
            } else if constexpr (std::is_same_v<T, HaltStmt>) {
                return true;
            } else if constexpr (std::is_same_v<T, PrintStmt>) {
                if (x.args.size() != y.args.size()) return false;
                for (std::size_t i = 0; i < x.args.size(); ++i) {
                    const PrintArg& p = x.args[i];
                    const PrintArg& q = y.args[i];
                    if (p.literal.has_value() != q.literal.has_value()) return false;
                    if (p.literal) {
                        if (*p.literal != *q.literal) return false;
                    } else if (!equal(*p.value, *q.value)) {
                        return false;
                    }
                }
                return true;
            } else if constexpr (std::is_same_v<T, ReturnStmt>) {
                return equal(*x.value, *y.value);
            }
        },
        a.node);
}

bool equal(const FunctionDef& a, const FunctionDef& b) {
    return a.name == b.name && a.params == b.params && a.locals == b.locals &&
           equal_bodies(a.body, b.body);
}

bool structurally_equal(const Program& a, const Program& b) {
    if (a.functions().size() != b.functions().size()) return false;
    for (std::size_t i = 0; i < a.functions().size(); ++i)
        if (!equal(a.functions()[i], b.functions()[i])) return false;
    return true;
}

}  // namespace hlab::lang
