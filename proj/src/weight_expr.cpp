#include "riggedframes/weight_expr.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>

#include "riggedframes/errors.hpp"

namespace rigged {

namespace {

using Node = WeightExpr::Node;
using NodePtr = std::shared_ptr<const Node>;
using Op = WeightExpr::Op;

NodePtr make(Op op, NodePtr lhs = nullptr, NodePtr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  NodePtr parse() {
    auto e = expr();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const { throw ParseError(what, pos_); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' before end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  NodePtr expr() {
    auto lhs = term();
    for (;;) {
      if (accept('+')) {
        lhs = make(Op::Add, lhs, term());
      } else if (accept('-')) {
        lhs = make(Op::Sub, lhs, term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr term() {
    auto lhs = unary();
    for (;;) {
      if (accept('*')) {
        lhs = make(Op::Mul, lhs, unary());
      } else if (accept('/')) {
        lhs = make(Op::Div, lhs, unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr unary() {
    if (accept('-')) return make(Op::Neg, unary());
    return power();
  }

  NodePtr power() {
    auto base = primary();
    if (!accept('^')) return base;
    skip_space();
    const std::size_t start = pos_;
    bool negative = false;
    if (pos_ < text_.size() && text_[pos_] == '-') {
      negative = true;
      ++pos_;
    }
    const std::size_t digits = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == digits) {
      pos_ = start;
      fail("expected integer exponent");
    }
    int value = 0;
    const auto [ptr, ec] = std::from_chars(text_.data() + digits, text_.data() + pos_, value);
    if (ec != std::errc()) {
      pos_ = start;
      fail("exponent out of range");
    }
    auto n = std::make_shared<Node>();
    n->op = Op::Pow;
    n->exponent = negative ? -value : value;
    n->lhs = std::move(base);
    skip_space();
    if (pos_ < text_.size() && (text_[pos_] == '^' || text_[pos_] == '.')) {
      fail("chained or fractional exponent; use parentheses");
    }
    return n;
  }

  NodePtr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (accept('(')) {
      auto e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
      const std::size_t start = pos_;
      while (pos_ < text_.size() && std::isalnum(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      const std::string_view name = text_.substr(start, pos_ - start);
      if (name == "x") return make(Op::Var);
      Op op;
      if (name == "sin") {
        op = Op::Sin;
      } else if (name == "cos") {
        op = Op::Cos;
      } else if (name == "exp") {
        op = Op::Exp;
      } else {
        pos_ = start;
        fail("unknown identifier '" + std::string(name) + "'");
      }
      expect('(');
      auto arg = expr();
      expect(')');
      return make(op, std::move(arg));
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  NodePtr number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < text_.size() && text_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < text_.size() && (text_[pos_] == 'e' || text_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) ++pos_;
      const std::size_t exp_digits = pos_;
      digits();
      if (pos_ == exp_digits) pos_ = save;
    }
    const std::string literal(text_.substr(start, pos_ - start));
    char* end = nullptr;
    const double v = std::strtod(literal.c_str(), &end);
    if (literal == "." || end != literal.c_str() + literal.size() || !std::isfinite(v)) {
      pos_ = start;
      fail("malformed number");
    }
    auto n = std::make_shared<Node>();
    n->op = Op::Number;
    n->value = v;
    return n;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

double checked(double v) {
  if (!std::isfinite(v)) throw EvalError("weight expression evaluated to a non-finite value");
  return v;
}

double eval_node(const Node& n, double x) {
  switch (n.op) {
    case Op::Number: return n.value;
    case Op::Var: return x;
    case Op::Add: return checked(eval_node(*n.lhs, x) + eval_node(*n.rhs, x));
    case Op::Sub: return checked(eval_node(*n.lhs, x) - eval_node(*n.rhs, x));
    case Op::Mul: return checked(eval_node(*n.lhs, x) * eval_node(*n.rhs, x));
    case Op::Div: {
      const double den = eval_node(*n.rhs, x);
      if (den == 0.0) throw EvalError("division by zero in weight expression");
      return checked(eval_node(*n.lhs, x) / den);
    }
    case Op::Neg: return -eval_node(*n.lhs, x);
    case Op::Pow: {
      const double base = eval_node(*n.lhs, x);
      if (base == 0.0 && n.exponent < 0) throw EvalError("division by zero in weight expression");
      return checked(std::pow(base, n.exponent));
    }
    case Op::Sin: return std::sin(eval_node(*n.lhs, x));
    case Op::Cos: return std::cos(eval_node(*n.lhs, x));
    case Op::Exp: return checked(std::exp(eval_node(*n.lhs, x)));
  }
  throw EvalError("corrupt weight expression");
}

void print_node(const Node& n, std::string& out) {
  auto binary = [&](char sym) {
    out += '(';
    print_node(*n.lhs, out);
    out += sym;
    print_node(*n.rhs, out);
    out += ')';
  };
  auto call = [&](const char* name) {
    out += name;
    out += '(';
    print_node(*n.lhs, out);
    out += ')';
  };
  switch (n.op) {
    case Op::Number: {
      char buf[32];
      std::snprintf(buf, sizeof buf, "%.17g", n.value);
      if (n.value < 0) {
        out += "(-";
        out += buf + 1;
        out += ')';
      } else {
        out += buf;
      }
      return;
    }
    case Op::Var: out += 'x'; return;
    case Op::Add: binary('+'); return;
    case Op::Sub: binary('-'); return;
    case Op::Mul: binary('*'); return;
    case Op::Div: binary('/'); return;
    case Op::Neg:
      out += "(-";
      print_node(*n.lhs, out);
      out += ')';
      return;
    case Op::Pow:
      out += '(';
      print_node(*n.lhs, out);
      out += '^';
      out += std::to_string(n.exponent);
      out += ')';
      return;
    case Op::Sin: call("sin"); return;
    case Op::Cos: call("cos"); return;
    case Op::Exp: call("exp"); return;
  }
}

bool equal_nodes(const Node* a, const Node* b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->op != b->op) return false;
  if (a->op == Op::Number && a->value != b->value) return false;
  if (a->op == Op::Pow && a->exponent != b->exponent) return false;
  return equal_nodes(a->lhs.get(), b->lhs.get()) && equal_nodes(a->rhs.get(), b->rhs.get());
}

}  // namespace

double WeightExpr::eval(double x) const {
  if (!root_) throw EvalError("empty weight expression");
  return eval_node(*root_, x);
}

std::string WeightExpr::to_string() const {
  std::string out;
  if (root_) print_node(*root_, out);
  return out;
}

bool operator==(const WeightExpr& a, const WeightExpr& b) {
  return equal_nodes(a.root(), b.root());
}

WeightExpr parse_weight(std::string_view text) { return WeightExpr(Parser(text).parse()); }

double eval_weight(const WeightExpr& e, double x) { return e.eval(x); }

}  // namespace rigged
