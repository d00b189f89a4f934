#include <doctest.h>

#include "support.hpp"

using namespace dcsim;
using namespace dcsim::expr;

TEST_SUITE("expr") {

TEST_CASE("parse comparisons") {
  CHECK(parse("d_w >= 2") == Expr::compare("d_w", CmpOp::Ge, 2));
  CHECK(parse("(((x == 0)))") == Expr::compare("x", CmpOp::Eq, 0));
  CHECK(parse("x!=3") == Expr::compare("x", CmpOp::Ne, 3));
  CHECK(parse("  _a1 < 18446744073709551615 ") == Expr::compare("_a1", CmpOp::Lt, kTop));
}

TEST_CASE("precedence and structure") {
  const auto e = parse("a >= 1 && !(b < 3)");
  CHECK(e == Expr::all_of(Expr::compare("a", CmpOp::Ge, 1), Expr::negate(Expr::compare("b", CmpOp::Lt, 3))));
  // && binds tighter than ||
  CHECK(parse("a > 1 || b > 2 && c > 3") ==
        Expr::any_of(Expr::compare("a", CmpOp::Gt, 1),
                     Expr::all_of(Expr::compare("b", CmpOp::Gt, 2), Expr::compare("c", CmpOp::Gt, 3))));
  CHECK(parse("!!(x == 1)") == Expr::negate(Expr::negate(Expr::compare("x", CmpOp::Eq, 1))));
}

TEST_CASE("parse errors carry a position") {
  const auto fails_at = [](std::string_view text, std::size_t pos) {
    try {
      parse(text);
    } catch (const ParseError& e) {
      return e.position() == pos;
    }
    return false;
  };
  CHECK(fails_at("", 0));
  CHECK(fails_at("x >= ", 5));
  CHECK(fails_at("x => 1", 2));   // unknown operator
  CHECK(fails_at("x = 1", 2));
  CHECK(fails_at("(x > 1", 6));
  CHECK(fails_at("x > 1 y", 6));
  CHECK(fails_at("x > 99999999999999999999", 4));
  CHECK(fails_at("3 > x", 0));
  CHECK_THROWS_AS(parse("x > 1 & y > 2"), ParseError);
}

TEST_CASE("eval") {
  const auto e = parse("d_w >= 2");
  CHECK_FALSE(eval(e, {{"d_w", 1}}));
  CHECK(eval(e, {{"d_w", 2}}));
  CHECK(eval(parse("x == 0"), {{"x", 0}}));
  CHECK_THROWS_AS(eval(e, {{"other", 2}}), EvalError);
  CHECK(eval_single(parse("x < 3 || x > 10"), "x", 11));
  CHECK_THROWS_AS(eval_single(parse("x < 3 || y > 10"), "x", 11), EvalError);
}

TEST_CASE("variables") {
  CHECK(variables(parse("d_w >= 2")) == std::set<std::string>{"d_w"});
  CHECK(variables(parse("a >= 1 && b < 3")) == std::set<std::string>{"a", "b"});
  CHECK(variables(parse("!(a >= 1 || a < 0)")) == std::set<std::string>{"a"});
}

TEST_CASE("render") {
  CHECK(render(parse("d_w>=2")) == "d_w >= 2");
  CHECK(render(parse("(a > 1 || b > 2) && c > 3")) == "(a > 1 || b > 2) && c > 3");
  CHECK(render(parse("a > 1 && (b > 2 && c > 3)")) == "a > 1 && (b > 2 && c > 3)");
  CHECK(render(parse("!!(x == 1)")) == "!!(x == 1)");
  CHECK(parse(render(parse("a > 1 && (b > 2 && c > 3)"))) == parse("a > 1 && (b > 2 && c > 3)"));
}

}  // TEST_SUITE
