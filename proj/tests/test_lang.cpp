#include <doctest.h>

#include <filesystem>

#include "hlab/lang.hpp"
#include "support/helpers.hpp"

using namespace hlab;
using test::parse_text;
using test::run_stub;

TEST_CASE("smallest program parses and canonicalizes") {
    lang::Program p = parse_text("fn main(){ halt; }");
    CHECK(p.image().bytes == "fn main ( ) {\nhalt ;\n}\n");
    CHECK(p.functions().size() == 1);
    CHECK(p.entry() == "main");
    CHECK(p.index_of("main") == 0);
    CHECK(!p.index_of("nope").has_value());
}

TEST_CASE("canonical sources round-trip byte for byte") {
    const char* sources[] = {
        "fn main ( ) {\nhalt ;\n}\n",
        "fn main ( ) {\nwhile ( 1 == 1 ) {\n}\n}\n",
        "fn main ( ) var x , y ; {\nx = 1 + 2 * 3 ;\ny = ( 1 + 2 ) * 3 ;\nprint x , \" \" , y ;\nhalt ;\n}\n",
        "fn main ( a , b ) var t ; {\nif ( a < b ) {\nt = a ;\n} else {\nt = b ;\n}\nreturn t ;\n}\n",
        "fn main ( ) {\nif ( HALT ( arg ( 0 ) , arg ( 1 ) ) == 1 ) {\nhalt ;\n}\n}\n",
        "fn main ( ) var p ; {\np = addr_of ( p ) - 3 ;\np = load ( p ) >> 2 & 15 ;\nhalt ;\n}\n",
    };
    for (const char* s : sources) {
        lang::Program p = parse_text(s);
        CHECK(p.image().bytes == s);
        CHECK(lang::serialize(p).bytes == s);
    }
}

TEST_CASE("messy whitespace normalizes to canonical form") {
    lang::Program a = parse_text("fn main()var x;{x=(1+2)*3;print x;halt;}");
    lang::Program b = parse_text("fn main ( )\n  var x ;\n{\n  x = ( 1 + 2 ) * 3 ;\n  print x ;\n  halt ;\n}");
    CHECK(a.image().bytes == "fn main ( ) var x ; {\nx = ( 1 + 2 ) * 3 ;\nprint x ;\nhalt ;\n}\n");
    CHECK(a.image().bytes == b.image().bytes);
    CHECK(lang::structurally_equal(a, b));
}

TEST_CASE("serializer emits minimal parentheses") {
    auto canon = [](const std::string& e) {
        return parse_text("fn main ( ) var a , b , c , x ; {\nx = " + e + " ;\n}\n")
            .image()
            .bytes;
    };
    CHECK(canon("( a )") == canon("a"));
    CHECK(canon("( a + b ) + c") == canon("a + b + c"));
    CHECK(canon("a + ( b * c )") == canon("a + b * c"));
    CHECK(canon("a + ( b + c )") != canon("a + b + c"));
    CHECK(canon("( a + b ) * c") != canon("a + b * c"));
    CHECK(canon("a - ( b - c )").find("a - ( b - c )") != std::string::npos);
    CHECK(canon("( ( a ) )") == canon("a"));
}

TEST_CASE("operator precedence and associativity") {
    auto eval = [](const std::string& e) {
        lang::Program p = parse_text("fn main ( ) var a , b , c , x ; {\na = 8 ;\nb = 3 ;\nc = 2 ;\nx = " +
                                     e + " ;\nprint x ;\nhalt ;\n}\n");
        machine::Outcome out = run_stub(p);
        REQUIRE(out.status == machine::RunStatus::Halted);
        REQUIRE(out.output.size() == 1);
        return out.output[0];
    };
    CHECK(eval("1 + 2 * 3") == "7");
    CHECK(eval("8 - 3 - 2") == "3");
    CHECK(eval("8 / 2 / 2") == "2");
    CHECK(eval("1 << 2 + 1") == "8");
    CHECK(eval("7 & 3 == 3") == "1");
    CHECK(eval("2 + 1 < 2 * 2") == "1");
    CHECK(eval("a >> b - 1") == "2");
}

TEST_CASE("parse errors carry positions and reject bad input") {
    auto rejects = [](const std::string& src) {
        CHECK_THROWS_AS(parse_text(src), lang::ParseError);
    };
    rejects("");
    rejects("fn main ( ) { halt }");
    rejects("fn main ( ) { x = 1 ; }");
    rejects("fn main ( ) var x ; { x = ; }");
    rejects("fn main ( ) { halt ; ");
    rejects("fn helper ( ) { halt ; }");
    rejects("fn main ( ) { halt ; } fn main ( ) { halt ; }");
    rejects("fn main ( a , a ) { halt ; }");
    rejects("fn main ( a ) var a ; { halt ; }");
    rejects("fn main ( ) var x ; { x = y ; }");
    rejects("fn main ( ) var x ; { x = f ( ) ; }");
    rejects("fn main ( ) { x = 1 ; halt ; }");
    rejects("fn main ( ) var x ; { x = addr_of ( y ) ; }");
    rejects("fn main ( ) { print \"a ; }");
    rejects("fn main ( ) { print \"a\\q\" ; }");
    rejects("fn main ( ) { print \"a\nb\" ; }");
    rejects("fn main ( ) var x ; { x = 18446744073709551616 ; }");
    rejects("fn main ( ) var x ; { x = \"str\" ; }");
    rejects("fn main ( ) var x ; { x = 1 ! 2 ; }");
    rejects("fn main ( ) { arg ( x ) ; }");

    try {
        parse_text("fn main ( ) {\nhalt @ ;\n}\n");
        FAIL("expected ParseError");
    } catch (const lang::ParseError& e) {
        CHECK(e.line == 2);
        CHECK(std::string(e.what()).find("parse error at 2:") != std::string::npos);
    }
}

TEST_CASE("string escapes survive the round trip") {
    std::string src = "fn main ( ) {\nprint \"tab\\there \\\"quoted\\\" back\\\\slash\\n\" ;\nhalt ;\n}\n";
    lang::Program p = parse_text(src);
    CHECK(p.image().bytes == src);
    machine::Outcome out = run_stub(p);
    REQUIRE(out.output.size() == 1);
    CHECK(out.output[0] == "tab\there \"quoted\" back\\slash\n");
}

TEST_CASE("unsigned literals are reinterpreted as signed at runtime") {
    lang::Program p = parse_text(
        "fn main ( ) {\nprint 18446744073709551615 ;\nprint 9223372036854775808 ;\nhalt ;\n}\n");
    machine::Outcome out = run_stub(p);
    REQUIRE(out.output.size() == 2);
    CHECK(out.output[0] == "-1");
    CHECK(out.output[1] == "-9223372036854775808");
}

TEST_CASE("quotation carries the canonical image") {
    lang::Program p = parse_text("fn main(){halt;}");
    lang::Value q = lang::quote(p);
    REQUIRE(q.is_prog());
    CHECK(q.as_prog().bytes == p.image().bytes);
    CHECK(q == lang::quote(p));

    lang::Program back = lang::parse(q.as_prog());
    CHECK(lang::structurally_equal(back, p));

    lang::Program other = parse_text("fn main ( ) {\nwhile ( 1 == 1 ) {\n}\n}\n");
    CHECK(!(q == lang::quote(other)));
}

TEST_CASE("values compare within their own variant only") {
    lang::Value i1 = lang::Value::integer(7);
    lang::Value i2 = lang::Value::integer(7);
    lang::Value i3 = lang::Value::integer(8);
    CHECK(i1 == i2);
    CHECK(!(i1 == i3));

    lang::Value s1 = lang::Value::str("x");
    lang::Value s2 = lang::Value::str("x");
    CHECK(s1 == s2);
    CHECK(!(s1 == i1));

    lang::Value p = lang::quote(parse_text("fn main(){halt;}"));
    CHECK(!(p == i1));
    CHECK(!(p == s1));
    CHECK_THROWS(p.as_int());
    CHECK_THROWS(i1.as_prog());
    CHECK_THROWS(s1.as_prog());
}

TEST_CASE("compose builds the same program as parsing its serialization") {
    lang::FunctionDef fn;
    fn.name = "main";
    fn.locals = {"x"};
    std::vector<lang::Stmt> body;
    body.push_back(lang::Stmt{lang::AssignStmt{
        "x", lang::make_expr(lang::Expr{lang::BinExpr{
                 lang::BinOp::Add, lang::make_expr(lang::Expr{lang::IntLit{1}}),
                 lang::make_expr(lang::Expr{lang::IntLit{2}})}})}});
    body.push_back(lang::Stmt{lang::HaltStmt{}});
    fn.body = std::move(body);

    std::vector<lang::FunctionDef> fns;
    fns.push_back(std::move(fn));
    lang::Program p = lang::compose(std::move(fns), "composed");
    CHECK(p.image().bytes == "fn main ( ) var x ; {\nx = 1 + 2 ;\nhalt ;\n}\n");
    CHECK(lang::structurally_equal(p, parse_text(p.image().bytes)));
}

TEST_CASE("structural equality distinguishes different programs") {
    lang::Program a = parse_text("fn main ( ) var x ; {\nx = 1 ;\n}\n");
    lang::Program b = parse_text("fn main ( ) var x ; {\nx = 2 ;\n}\n");
    lang::Program c = parse_text("fn main ( ) var y ; {\ny = 1 ;\n}\n");
    CHECK(!lang::structurally_equal(a, b));
    CHECK(!lang::structurally_equal(a, c));
    CHECK(lang::structurally_equal(a, parse_text("fn main()var x;{x=1;}")));
}

TEST_CASE("serialization is deterministic across structurally equal parses") {
    std::string loose = "fn main(  )var x,y;{x=1;\n\n\ty=x+ 1;halt;}";
    lang::Program a = parse_text(loose);
    lang::Program b = parse_text(loose);
    CHECK(lang::serialize(a).bytes == lang::serialize(b).bytes);
    CHECK(lang::serialize(a).bytes == a.image().bytes);
}

TEST_CASE("every shipped fixture program is a canonical fixed point") {
    namespace fs = std::filesystem;
    std::size_t checked = 0;
    for (const char* dir : {"", "cdf", "corpus"}) {
        for (const auto& entry : fs::directory_iterator(test::fixture_path(dir))) {
            if (entry.path().extension() != ".hl") continue;
            std::string bytes = test::read_file(entry.path().string());
            lang::Program p = lang::parse({bytes, entry.path().filename().string()});
            CHECK(p.image().bytes == bytes);
            ++checked;
        }
    }
    CHECK(checked >= 30);
}
