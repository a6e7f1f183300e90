#include "cosem/corpus.hpp"
#include "cosem/lang.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace cosem;
using namespace cosem::test;

TEST_CASE("parse: atomic productions") {
  CHECK(P("skip")->is<Stmt::Skip>());
  auto a = P("x := 1")->as<Stmt::Assign>();
  REQUIRE(a);
  CHECK(a->var == "x");
  CHECK(eval_expr(*a->value, State()) == 1);
}

TEST_CASE("parse: parallel of assignment and sequence") {
  StmtPtr s = P("x := 1 || (x := x+2; x := x+2)");
  StmtPtr expected = Stmt::par(
      Stmt::assign("x", Expr::lit(1)),
      Stmt::seq(Stmt::assign("x", Expr::arith(ArithOp::Add, Expr::var("x"), Expr::lit(2))),
                Stmt::assign("x", Expr::arith(ArithOp::Add, Expr::var("x"), Expr::lit(2)))));
  CHECK(equal(*s, *expected));
}

TEST_CASE("parse: ; binds tighter than ||, both right-associative") {
  auto a = Stmt::assign("a", Expr::lit(1));
  auto b = Stmt::assign("b", Expr::lit(2));
  auto c = Stmt::assign("c", Expr::lit(3));
  CHECK(equal(*P("a := 1; b := 2 || c := 3"), *Stmt::par(Stmt::seq(a, b), c)));
  CHECK(equal(*P("a := 1 || b := 2 || c := 3"), *Stmt::par(a, Stmt::par(b, c))));
  CHECK(equal(*P("a := 1; b := 2; c := 3"), *Stmt::seq(a, Stmt::seq(b, c))));
  CHECK(equal(*P("(a := 1; b := 2); c := 3"), *Stmt::seq(Stmt::seq(a, b), c)));
}

TEST_CASE("parse: await with and without braces") {
  auto plain = P("await x = 0 then x := 1");
  auto braced = P("await x = 0 then { x := 1 }");
  CHECK(equal(*plain, *braced));
  auto body = P("await x = 0 then { x := 1; y := 2 }")->as<Stmt::Await>();
  REQUIRE(body);
  CHECK(body->body->is<Stmt::Seq>());
  // Unbraced body is a single atom.
  CHECK(P("await x = 0 then x := 1; y := 2")->is<Stmt::Seq>());
}

TEST_CASE("parse: expression precedence") {
  State st = S("{x=2, y=3}");
  auto val = [&](const std::string& e) {
    return eval_expr(*P("z := " + e)->as<Stmt::Assign>()->value, st);
  };
  CHECK(val("1+2*3") == 7);
  CHECK(val("(1+2)*3") == 9);
  CHECK(val("10-3-2") == 5);
  CHECK(val("x*y-1") == 5);
  CHECK(val("-4+x") == -2);
  auto guard = [&](const std::string& g) {
    return sat(*P("while " + g + " do skip od")->as<Stmt::While>()->guard, st);
  };
  CHECK(guard("not x = 2 or y = 3"));
  CHECK_FALSE(guard("not (x = 2 or y = 3)"));
  CHECK(guard("x < y and y <= 3"));
  CHECK_FALSE(guard("true and false or false"));
  CHECK(guard("false or true and true"));
}

TEST_CASE("parse: syntax errors carry a location") {
  try {
    parse("x := ");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::Syntax);
    CHECK(e.line() == 1);
    CHECK(e.column() == 6);
  }
  try {
    parse("skip;\n  skip skip");
    FAIL("no error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 8);
  }
  CHECK_THROWS_AS(parse("if x then skip else skip"), ParseError);
  CHECK_THROWS_AS(parse("(skip"), ParseError);
  CHECK_THROWS_AS(parse(""), ParseError);
}

TEST_CASE("parse: sort errors") {
  auto kind_of = [](const std::string& src) {
    try {
      parse(src);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("no error for " << src);
    return ParseError::Kind::Syntax;
  };
  CHECK(kind_of("if 1 then skip else skip fi") == ParseError::Kind::Type);
  CHECK(kind_of("x := true") == ParseError::Kind::Type);
  CHECK(kind_of("while x + (1 < 2) do skip od") == ParseError::Kind::Type);
  CHECK(kind_of("await not 3 then skip") == ParseError::Kind::Type);
}

TEST_CASE("parse: auxiliary forms are not concrete syntax") {
  CHECK_THROWS_AS(parse("suspend"), ParseError);
  for (const auto& e : gen_corpus(3, 200, 12)) CHECK_FALSE(has_auxiliary_forms(*e.program));
}

TEST_CASE("pretty: basic forms") {
  CHECK(pretty(*Stmt::skip()) == "skip");
  CHECK(pretty(*Stmt::await(Expr::compare(CmpOp::Eq, Expr::var("x"), Expr::lit(0)),
                            Stmt::assign("x", Expr::lit(1)))) == "await x = 0 then x := 1");
  CHECK(pretty(*P("x := 1 || (x := x+2; x := x+2)")) == "x := 1 || (x := x+2; x := x+2)");
  CHECK(pretty(*P("if x=0 then skip else y:=1 fi")) == "if x = 0 then skip else y := 1 fi");
  CHECK(pretty(*P("while x<3 do x:=x+1 od")) == "while x < 3 do x := x+1 od");
  CHECK(pretty(*P("atomic{skip}")) == "atomic { skip }");
  CHECK(pretty(*P("await true then {skip; skip}")) == "await true then { skip; skip }");
}

TEST_CASE("pretty/parse round trip over generated programs") {
  auto corpus = gen_corpus(2024, 500, 12);
  REQUIRE(corpus.size() == 500);
  for (const auto& e : corpus) {
    std::string text = pretty(*e.program);
    StmtPtr back = parse(text);
    INFO(text);
    CHECK(equal(*back, *e.program));
  }
}

TEST_CASE("round trip keeps grouping that precedence would lose") {
  auto a = Stmt::assign("a", Expr::lit(1));
  auto b = Stmt::assign("b", Expr::lit(2));
  auto c = Stmt::assign("c", Expr::lit(3));
  for (const StmtPtr& s :
       {Stmt::seq(Stmt::par(a, b), c), Stmt::par(Stmt::par(a, b), c), Stmt::seq(Stmt::seq(a, b), c),
        Stmt::await(Expr::boolean(true), Stmt::par(a, b)),
        Stmt::assign("x", Expr::arith(ArithOp::Sub, Expr::lit(1),
                                      Expr::arith(ArithOp::Sub, Expr::lit(2), Expr::lit(3)))),
        Stmt::assign("x", Expr::arith(ArithOp::Mul, Expr::arith(ArithOp::Add, Expr::var("x"),
                                                                 Expr::lit(1)),
                                      Expr::lit(-2)))}) {
    INFO(pretty(*s));
    CHECK(equal(*parse(pretty(*s)), *s));
  }
}

TEST_CASE("eval_expr") {
  CHECK(eval_expr(*Expr::lit(0), S("{x=4}")) == 0);
  auto x_plus_2 = Expr::arith(ArithOp::Add, Expr::var("x"), Expr::lit(2));
  CHECK(eval_expr(*x_plus_2, S("{x=0}")) == 2);
  CHECK(eval_expr(*Expr::var("x"), S("{x=5}")) == 5);
  CHECK(eval_expr(*Expr::var("nobody"), S("{x=5}")) == 0);
}

TEST_CASE("eval_expr: arbitrary precision") {
  auto sq = [](ExprPtr e) { return Expr::arith(ArithOp::Mul, e, e); };
  ExprPtr e = Expr::lit(2);
  for (int i = 0; i < 7; ++i) e = sq(e);  // 2^128
  Int v = eval_expr(*e, State());
  CHECK(v.str() == "340282366920938463463374607431768211456");
  State st = State().with("x", v);
  CHECK(st.to_string() == "{x=340282366920938463463374607431768211456}");
  CHECK(parse_state(st.to_string()) == st);
}

TEST_CASE("sat") {
  auto x_is_0 = Expr::compare(CmpOp::Eq, Expr::var("x"), Expr::lit(0));
  CHECK(sat(*Expr::boolean(true), S("{x=9}")));
  CHECK_FALSE(sat(*x_is_0, S("{x=2}")));
  CHECK(sat(*x_is_0, S("{x=0}")));
  CHECK(sat(*x_is_0, State()));
}

TEST_CASE("evaluation is pure") {
  auto e = P("z := x*x+y-3")->as<Stmt::Assign>()->value;
  State st = S("{x=7, y=1}");
  CHECK(eval_expr(*e, st) == eval_expr(*e, st));
  CHECK(eval_expr(*e, st) == 47);
}

TEST_CASE("state: update, lookup, immutability, literals") {
  State a = S("{x=1, y=-2}");
  State b = a.with("x", 10);
  CHECK(a.lookup("x") == 1);
  CHECK(b.lookup("x") == 10);
  CHECK(b.lookup("y") == -2);
  CHECK(b.lookup("z") == 0);
  CHECK_FALSE(b.contains("z"));
  CHECK(a.to_string() == "{x=1, y=-2}");
  CHECK(State().to_string() == "{}");
  CHECK(S("{}") == State());
  CHECK(S("{ y = 3 , x=0 }").to_string() == "{x=0, y=3}");
  CHECK(a != b);
  CHECK(a.hash() == S("{y=-2, x=1}").hash());
  CHECK_THROWS_AS(parse_state("{x=}"), ParseError);
  CHECK_THROWS_AS(parse_state("x=1"), ParseError);
}

TEST_CASE("variables and unassigned reads") {
  StmtPtr s = P("x := y+1; while z < 3 do z := z+1 od");
  CHECK(variables(*s) == std::set<std::string>{"x", "y", "z"});
  CHECK(unassigned_reads(*s) == std::set<std::string>{"y"});
}
