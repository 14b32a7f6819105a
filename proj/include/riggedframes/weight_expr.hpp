#pragma once

// Weight functions g(x) for weighted delta maps.
//
// Grammar (highest precedence first):
//   primary := number | x | sin(expr) | cos(expr) | exp(expr) | (expr)
//   power   := primary [ ^ integer ]
//   unary   := - unary | power
//   term    := unary { (*|/) unary }
//   expr    := term { (+|-) term }

#include <memory>
#include <string>
#include <string_view>

namespace rigged {

class WeightExpr {
 public:
  enum class Op { Number, Var, Add, Sub, Mul, Div, Neg, Pow, Sin, Cos, Exp };

  struct Node {
    Op op = Op::Number;
    double value = 0.0;  // Number
    int exponent = 0;    // Pow
    std::shared_ptr<const Node> lhs;
    std::shared_ptr<const Node> rhs;
  };

  WeightExpr() = default;
  explicit WeightExpr(std::shared_ptr<const Node> root) : root_(std::move(root)) {}

  const Node* root() const { return root_.get(); }
  bool empty() const { return root_ == nullptr; }

  /// Throws EvalError on division by zero or a non-finite result.
  double eval(double x) const;

  /// Fully parenthesized form; parsing it yields an equal tree.
  std::string to_string() const;

  friend bool operator==(const WeightExpr& a, const WeightExpr& b);

 private:
  std::shared_ptr<const Node> root_;
};

/// Throws ParseError carrying the byte offset of the first bad token.
WeightExpr parse_weight(std::string_view text);

double eval_weight(const WeightExpr& e, double x);

}  // namespace rigged
