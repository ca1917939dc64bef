#pragma once

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "splitgeom/jet.hpp"

namespace splitgeom {

enum class NodeKind { Constant, Coordinate, Unary, Binary };
enum class UnaryOp { Neg, Sin, Cos, Exp, Log, Sqrt };
enum class BinaryOp { Add, Sub, Mul, Div, Pow };

struct ExprNode;
using ExprNodePtr = std::shared_ptr<const ExprNode>;

struct ExprNode {
  NodeKind kind = NodeKind::Constant;
  double constant = 0.0;  // Constant; always >= 0 (negation is a Unary node)
  int coordinate = 0;     // Coordinate, 0-based
  UnaryOp unary = UnaryOp::Neg;
  BinaryOp binary = BinaryOp::Add;
  ExprNodePtr lhs;  // Unary operand or Binary left
  ExprNodePtr rhs;  // Binary right
};

/// Immutable closed-form expression over chart coordinates x1..xn.
///
/// Grammar: numbers, `x1..xn`, `pi`, `+ - * / ^`, `sin cos exp log sqrt`,
/// parentheses. Precedence, tightest first: `^` (right associative), unary
/// minus, `* /`, `+ -`. The exponent of `^` must be constant; non-integer
/// exponents require a positive base.
///
/// Copies share the tree; evaluation is re-entrant.
class Expr {
 public:
  Expr() : Expr(constant(0.0)) {}

  static Expr constant(double c);
  /// The coordinate x^(index+1) of a `dim`-dimensional chart.
  static Expr coordinate(int index, int dim);

  /// Number of chart coordinates this expression was built against.
  int dim() const { return dim_; }
  const ExprNode& root() const { return *root_; }

  bool depends_on(int coordinate) const;
  bool is_constant() const;

  /// Canonical, fully parenthesised rendering; parse(str()) == *this.
  std::string str() const;

  template <class Scalar>
  Scalar eval(std::span<const Scalar> x) const;

  double operator()(std::span<const double> x) const { return eval<double>(x); }

  /// Symbolic partial derivative along x^(coordinate+1), with zero and one
  /// factors folded away.
  Expr derivative(int coordinate) const;

  friend bool operator==(const Expr& a, const Expr& b);

  friend Expr operator+(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a, const Expr& b);
  friend Expr operator*(const Expr& a, const Expr& b);
  friend Expr operator/(const Expr& a, const Expr& b);
  friend Expr operator-(const Expr& a);
  friend Expr pow(const Expr& base, double exponent);
  friend Expr sin(const Expr& a);
  friend Expr cos(const Expr& a);
  friend Expr exp(const Expr& a);
  friend Expr log(const Expr& a);
  friend Expr sqrt(const Expr& a);

 private:
  friend class ExprParser;
  Expr(ExprNodePtr root, int dim) : root_(std::move(root)), dim_(dim) {}

  ExprNodePtr root_;
  int dim_ = 0;
};

/// Parses `source` against a chart of dimension `dim`. Throws ParseError
/// (with byte offset) on syntax errors, unknown identifiers, coordinate
/// indices outside 1..dim and non-constant exponents.
Expr parse_expr(std::string_view source, int dim);

/// Evaluates value, gradient and Hessian of `e` at `point`.
Jet eval_jet(const Expr& e, std::span<const double> point);

extern template double Expr::eval<double>(std::span<const double>) const;
extern template Jet Expr::eval<Jet>(std::span<const Jet>) const;

}  // namespace splitgeom
