#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <memory>
#include <random>

#include "riggedframes/errors.hpp"
#include "riggedframes/weight_expr.hpp"

using namespace rigged;
using Op = WeightExpr::Op;
using NodePtr = std::shared_ptr<const WeightExpr::Node>;

namespace {

NodePtr num(double v) {
  auto n = std::make_shared<WeightExpr::Node>();
  n->op = Op::Number;
  n->value = v;
  return n;
}
NodePtr var() {
  auto n = std::make_shared<WeightExpr::Node>();
  n->op = Op::Var;
  return n;
}
NodePtr bin(Op op, NodePtr a, NodePtr b) {
  auto n = std::make_shared<WeightExpr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}
NodePtr un(Op op, NodePtr a) {
  auto n = std::make_shared<WeightExpr::Node>();
  n->op = op;
  n->lhs = std::move(a);
  return n;
}
NodePtr pw(NodePtr a, int e) {
  auto n = std::make_shared<WeightExpr::Node>();
  n->op = Op::Pow;
  n->lhs = std::move(a);
  n->exponent = e;
  return n;
}

NodePtr random_tree(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 1 : 9);
  std::uniform_int_distribution<int> small(0, 999);
  switch (pick(rng)) {
    case 0: {
      // non-negative literals only; a leading minus always parses to Neg
      const double choices[] = {0.0, 1.0, 2.5, 1e-7, 3.0e5, 0.1, 123456.789};
      if (small(rng) % 2 == 0) return num(choices[small(rng) % 7]);
      return num(small(rng) / 7.0);
    }
    case 1: return var();
    case 2: return bin(Op::Add, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 3: return bin(Op::Sub, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 4: return bin(Op::Mul, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 5: return bin(Op::Div, random_tree(rng, depth - 1), random_tree(rng, depth - 1));
    case 6: return un(Op::Neg, random_tree(rng, depth - 1));
    case 7: return pw(random_tree(rng, depth - 1), small(rng) % 7 - 3);
    case 8: return un(Op::Sin, random_tree(rng, depth - 1));
    default: return un(small(rng) % 2 ? Op::Cos : Op::Exp, random_tree(rng, depth - 1));
  }
}

std::size_t error_offset(std::string_view text) {
  try {
    parse_weight(text);
  } catch (const ParseError& e) {
    return e.offset();
  }
  FAIL("expected a parse error for ", text);
  return 0;
}

}  // namespace

TEST_CASE("parse_weight trees") {
  CHECK(parse_weight("2+sin(x)") == WeightExpr(bin(Op::Add, num(2), un(Op::Sin, var()))));
  CHECK(parse_weight("1+x^2") == WeightExpr(bin(Op::Add, num(1), pw(var(), 2))));
  CHECK(parse_weight(" 1 + x ^ 2 ") == parse_weight("1+x^2"));
}

TEST_CASE("precedence and associativity") {
  // ^ binds tighter than unary minus
  CHECK(parse_weight("-x^2") == WeightExpr(un(Op::Neg, pw(var(), 2))));
  // unary minus binds tighter than * and /
  CHECK(parse_weight("-x*3") == WeightExpr(bin(Op::Mul, un(Op::Neg, var()), num(3))));
  CHECK(parse_weight("1-2-3") == WeightExpr(bin(Op::Sub, bin(Op::Sub, num(1), num(2)), num(3))));
  CHECK(parse_weight("8/4/2") == WeightExpr(bin(Op::Div, bin(Op::Div, num(8), num(4)), num(2))));
  CHECK(parse_weight("1+2*x") == WeightExpr(bin(Op::Add, num(1), bin(Op::Mul, num(2), var()))));
  CHECK(parse_weight("(1+2)*x") == WeightExpr(bin(Op::Mul, bin(Op::Add, num(1), num(2)), var())));
  CHECK(parse_weight("x^-2") == WeightExpr(pw(var(), -2)));
  CHECK(eval_weight(parse_weight("1-2-3"), 0.0) == -4.0);
  CHECK(eval_weight(parse_weight("8/4/2"), 0.0) == 1.0);
  CHECK(eval_weight(parse_weight("-x^2"), 3.0) == -9.0);
}

TEST_CASE("syntax errors carry offsets") {
  CHECK(error_offset("2+*x") == 2);
  CHECK(error_offset("sin(") == 4);
  CHECK(error_offset("") == 0);
  CHECK(error_offset("1+") == 2);
  CHECK(error_offset("(x") == 2);
  CHECK(error_offset("x)") == 1);
  CHECK(error_offset("x^2.5") == 3);
  CHECK(error_offset("x^y") == 2);
  CHECK_THROWS_AS(parse_weight("tan(x)"), ParseError);
  CHECK_THROWS_AS(parse_weight("y+1"), ParseError);
  CHECK_THROWS_AS(parse_weight("2 3"), ParseError);
}

TEST_CASE("eval_weight") {
  CHECK(eval_weight(parse_weight("2+sin(x)"), 0.0) == 2.0);
  CHECK(eval_weight(parse_weight("1+x^2"), 3.0) == 10.0);
  CHECK(eval_weight(parse_weight("exp(-x^2/2)*cos(x)"), 0.5) ==
        doctest::Approx(std::exp(-0.125) * std::cos(0.5)).epsilon(1e-15));
  CHECK_THROWS_AS(eval_weight(parse_weight("1/x"), 0.0), EvalError);
  CHECK_THROWS_AS(eval_weight(parse_weight("x^-1"), 0.0), EvalError);
  CHECK_THROWS_AS(eval_weight(parse_weight("exp(x)"), 1000.0), EvalError);
  CHECK_THROWS_AS(eval_weight(WeightExpr(), 0.0), EvalError);
}

TEST_CASE("parse-print-parse is the identity on trees") {
  std::mt19937_64 rng(2024);
  for (int t = 0; t < 500; ++t) {
    const WeightExpr tree(random_tree(rng, 5));
    const std::string printed = tree.to_string();
    const WeightExpr again = parse_weight(printed);
    INFO(printed);
    REQUIRE(again == tree);
    CHECK(parse_weight(again.to_string()) == again);
  }
}

TEST_CASE("evaluation is deterministic") {
  const auto e = parse_weight("sin(x)^3 - exp(cos(x))/(1+x^2)");
  for (double x = -5.0; x <= 5.0; x += 0.25) {
    CHECK(eval_weight(e, x) == eval_weight(parse_weight(e.to_string()), x));
  }
}
