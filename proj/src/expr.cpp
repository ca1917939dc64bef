#include "splitgeom/expr.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <numbers>
#include <vector>

namespace splitgeom {

namespace {

ExprNodePtr make_constant(double c) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Constant;
  n->constant = c;
  return n;
}

ExprNodePtr make_unary(UnaryOp op, ExprNodePtr a) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Unary;
  n->unary = op;
  n->lhs = std::move(a);
  return n;
}

ExprNodePtr make_binary(BinaryOp op, ExprNodePtr a, ExprNodePtr b) {
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Binary;
  n->binary = op;
  n->lhs = std::move(a);
  n->rhs = std::move(b);
  return n;
}

bool node_depends_on(const ExprNode& n, int coord) {
  switch (n.kind) {
    case NodeKind::Constant:
      return false;
    case NodeKind::Coordinate:
      return coord < 0 || n.coordinate == coord;
    case NodeKind::Unary:
      return node_depends_on(*n.lhs, coord);
    case NodeKind::Binary:
      return node_depends_on(*n.lhs, coord) || node_depends_on(*n.rhs, coord);
  }
  return false;
}

bool node_equal(const ExprNode& a, const ExprNode& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case NodeKind::Constant:
      return a.constant == b.constant;
    case NodeKind::Coordinate:
      return a.coordinate == b.coordinate;
    case NodeKind::Unary:
      return a.unary == b.unary && node_equal(*a.lhs, *b.lhs);
    case NodeKind::Binary:
      return a.binary == b.binary && node_equal(*a.lhs, *b.lhs) && node_equal(*a.rhs, *b.rhs);
  }
  return false;
}

std::string format_number(double c) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), c);
  return std::string(buf, res.ptr);
}

const char* unary_name(UnaryOp op) {
  switch (op) {
    case UnaryOp::Neg: return "-";
    case UnaryOp::Sin: return "sin";
    case UnaryOp::Cos: return "cos";
    case UnaryOp::Exp: return "exp";
    case UnaryOp::Log: return "log";
    case UnaryOp::Sqrt: return "sqrt";
  }
  return "?";
}

const char* binary_symbol(BinaryOp op) {
  switch (op) {
    case BinaryOp::Add: return " + ";
    case BinaryOp::Sub: return " - ";
    case BinaryOp::Mul: return " * ";
    case BinaryOp::Div: return " / ";
    case BinaryOp::Pow: return " ^ ";
  }
  return "?";
}

void print_node(const ExprNode& n, std::string& out) {
  switch (n.kind) {
    case NodeKind::Constant:
      out += format_number(n.constant);
      return;
    case NodeKind::Coordinate:
      out += 'x';
      out += std::to_string(n.coordinate + 1);
      return;
    case NodeKind::Unary:
      if (n.unary == UnaryOp::Neg) {
        out += "(-";
        print_node(*n.lhs, out);
        out += ')';
      } else {
        out += unary_name(n.unary);
        out += '(';
        print_node(*n.lhs, out);
        out += ')';
      }
      return;
    case NodeKind::Binary:
      out += '(';
      print_node(*n.lhs, out);
      out += binary_symbol(n.binary);
      print_node(*n.rhs, out);
      out += ')';
      return;
  }
}

double constant_value(const ExprNode& n);

template <class S>
S eval_node(const ExprNode& n, std::span<const S> x) {
  using std::cos;
  using std::exp;
  using std::log;
  using std::sin;
  using std::sqrt;
  switch (n.kind) {
    case NodeKind::Constant:
      return S(n.constant);
    case NodeKind::Coordinate:
      if (n.coordinate >= static_cast<int>(x.size()))
        throw ArgumentError("expression uses x" + std::to_string(n.coordinate + 1) +
                            " but point has dimension " + std::to_string(x.size()));
      return x[n.coordinate];
    case NodeKind::Unary: {
      S a = eval_node(*n.lhs, x);
      switch (n.unary) {
        case UnaryOp::Neg: return -a;
        case UnaryOp::Sin: return sin(a);
        case UnaryOp::Cos: return cos(a);
        case UnaryOp::Exp: return exp(a);
        case UnaryOp::Log:
          if (!(value_of(a) > 0.0)) throw DomainError("log of non-positive value");
          return log(a);
        case UnaryOp::Sqrt:
          if constexpr (std::is_same_v<S, double>) {
            if (!(a >= 0.0)) throw DomainError("sqrt of negative value");
          } else {
            if (!(value_of(a) > 0.0)) throw DomainError("sqrt of non-positive value");
          }
          return sqrt(a);
      }
      break;
    }
    case NodeKind::Binary: {
      if (n.binary == BinaryOp::Pow) {
        S base = eval_node(*n.lhs, x);
        const double p = constant_value(*n.rhs);
        const bool integral = std::floor(p) == p && std::abs(p) < 1e15;
        if (!integral && !(value_of(base) > 0.0))
          throw DomainError("non-integer power of non-positive base");
        if (integral && p < 0.0 && value_of(base) == 0.0) throw DomainError("division by zero");
        using std::pow;
        return pow(base, p);
      }
      S a = eval_node(*n.lhs, x);
      S b = eval_node(*n.rhs, x);
      switch (n.binary) {
        case BinaryOp::Add: return a + b;
        case BinaryOp::Sub: return a - b;
        case BinaryOp::Mul: return a * b;
        case BinaryOp::Div:
          if (value_of(b) == 0.0) throw DomainError("division by zero");
          return a / b;
        case BinaryOp::Pow: break;
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

double constant_value(const ExprNode& n) {
  return eval_node<double>(n, std::span<const double>());
}

}  // namespace

Expr Expr::constant(double c) {
  if (std::signbit(c) && c != 0.0) return Expr(make_unary(UnaryOp::Neg, make_constant(-c)), 0);
  return Expr(make_constant(c == 0.0 ? 0.0 : c), 0);
}

Expr Expr::coordinate(int index, int dim) {
  if (index < 0 || index >= dim) throw ArgumentError("coordinate index out of range");
  auto n = std::make_shared<ExprNode>();
  n->kind = NodeKind::Coordinate;
  n->coordinate = index;
  return Expr(n, dim);
}

bool Expr::depends_on(int coordinate) const { return node_depends_on(*root_, coordinate); }
bool Expr::is_constant() const { return !node_depends_on(*root_, -1); }

std::string Expr::str() const {
  std::string out;
  print_node(*root_, out);
  return out;
}

template <class Scalar>
Scalar Expr::eval(std::span<const Scalar> x) const {
  return eval_node<Scalar>(*root_, x);
}

template double Expr::eval<double>(std::span<const double>) const;
template Jet Expr::eval<Jet>(std::span<const Jet>) const;

bool operator==(const Expr& a, const Expr& b) { return node_equal(*a.root_, *b.root_); }

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(make_binary(BinaryOp::Add, a.root_, b.root_), std::max(a.dim_, b.dim_));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(make_binary(BinaryOp::Sub, a.root_, b.root_), std::max(a.dim_, b.dim_));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(make_binary(BinaryOp::Mul, a.root_, b.root_), std::max(a.dim_, b.dim_));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(make_binary(BinaryOp::Div, a.root_, b.root_), std::max(a.dim_, b.dim_));
}
Expr operator-(const Expr& a) { return Expr(make_unary(UnaryOp::Neg, a.root_), a.dim_); }
Expr pow(const Expr& base, double exponent) {
  return Expr(make_binary(BinaryOp::Pow, base.root_, Expr::constant(exponent).root_), base.dim_);
}
Expr sin(const Expr& a) { return Expr(make_unary(UnaryOp::Sin, a.root_), a.dim_); }
Expr cos(const Expr& a) { return Expr(make_unary(UnaryOp::Cos, a.root_), a.dim_); }
Expr exp(const Expr& a) { return Expr(make_unary(UnaryOp::Exp, a.root_), a.dim_); }
Expr log(const Expr& a) { return Expr(make_unary(UnaryOp::Log, a.root_), a.dim_); }
Expr sqrt(const Expr& a) { return Expr(make_unary(UnaryOp::Sqrt, a.root_), a.dim_); }

namespace {

bool is_const_value(const Expr& e, double v) {
  const auto& r = e.root();
  return r.kind == NodeKind::Constant && r.constant == v;
}

Expr add(const Expr& a, const Expr& b) {
  if (is_const_value(a, 0.0)) return b;
  if (is_const_value(b, 0.0)) return a;
  return a + b;
}

Expr sub(const Expr& a, const Expr& b) {
  if (is_const_value(b, 0.0)) return a;
  if (is_const_value(a, 0.0)) return -b;
  return a - b;
}

Expr mul(const Expr& a, const Expr& b) {
  if (is_const_value(a, 0.0) || is_const_value(b, 0.0)) return Expr::constant(0.0);
  if (is_const_value(a, 1.0)) return b;
  if (is_const_value(b, 1.0)) return a;
  return a * b;
}

}  // namespace

Expr Expr::derivative(int coordinate) const {
  const ExprNode& n = *root_;
  const int d = dim_;
  auto child = [d](const ExprNodePtr& p) { return Expr(p, d); };
  switch (n.kind) {
    case NodeKind::Constant: return constant(0.0);
    case NodeKind::Coordinate: return constant(n.coordinate == coordinate ? 1.0 : 0.0);
    case NodeKind::Unary: {
      const Expr a = child(n.lhs);
      const Expr da = a.derivative(coordinate);
      if (is_const_value(da, 0.0)) return constant(0.0);
      switch (n.unary) {
        case UnaryOp::Neg: return -da;
        case UnaryOp::Sin: return mul(cos(a), da);
        case UnaryOp::Cos: return mul(-sin(a), da);
        case UnaryOp::Exp: return mul(*this, da);
        case UnaryOp::Log: return da / a;
        case UnaryOp::Sqrt: return da / (constant(2.0) * *this);
      }
      break;
    }
    case NodeKind::Binary: {
      const Expr a = child(n.lhs), b = child(n.rhs);
      const Expr da = a.derivative(coordinate);
      switch (n.binary) {
        case BinaryOp::Add: return add(da, b.derivative(coordinate));
        case BinaryOp::Sub: return sub(da, b.derivative(coordinate));
        case BinaryOp::Mul: return add(mul(da, b), mul(a, b.derivative(coordinate)));
        case BinaryOp::Div: {
          const Expr db = b.derivative(coordinate);
          const Expr first = is_const_value(da, 0.0) ? constant(0.0) : da / b;
          if (is_const_value(db, 0.0)) return first;
          return sub(first, mul(a, db) / (b * b));
        }
        case BinaryOp::Pow: {
          if (is_const_value(da, 0.0)) return constant(0.0);
          const double p = constant_value(*n.rhs);
          if (p == 1.0) return da;
          return mul(mul(constant(p), pow(a, p - 1.0)), da);
        }
      }
      break;
    }
  }
  throw Error("corrupt expression node");
}

// Recursive descent over the grammar documented on Expr.
class ExprParser {
 public:
  ExprParser(std::string_view src, int dim) : src_(src), dim_(dim) {}

  Expr parse() {
    ExprNodePtr root = parse_sum();
    skip_space();
    if (pos_ != src_.size()) fail("unexpected character '" + std::string(1, src_[pos_]) + "'");
    return Expr(root, dim_);
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip_space() {
    while (pos_ < src_.size() && (src_[pos_] == ' ' || src_[pos_] == '\t' || src_[pos_] == '\n' ||
                                  src_[pos_] == '\r'))
      ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  ExprNodePtr parse_sum() {
    ExprNodePtr lhs = parse_product();
    for (;;) {
      if (accept('+')) {
        lhs = make_binary(BinaryOp::Add, lhs, parse_product());
      } else if (accept('-')) {
        lhs = make_binary(BinaryOp::Sub, lhs, parse_product());
      } else {
        return lhs;
      }
    }
  }

  ExprNodePtr parse_product() {
    ExprNodePtr lhs = parse_unary();
    for (;;) {
      if (accept('*')) {
        lhs = make_binary(BinaryOp::Mul, lhs, parse_unary());
      } else if (accept('/')) {
        lhs = make_binary(BinaryOp::Div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  ExprNodePtr parse_unary() {
    if (accept('-')) return make_unary(UnaryOp::Neg, parse_unary());
    return parse_power();
  }

  ExprNodePtr parse_power() {
    ExprNodePtr base = parse_primary();
    skip_space();
    if (pos_ < src_.size() && src_[pos_] == '^') {
      const std::size_t at = pos_;
      ++pos_;
      ExprNodePtr exponent = parse_unary();
      if (node_depends_on(*exponent, -1)) fail_at("exponent must be constant", at);
      return make_binary(BinaryOp::Pow, base, exponent);
    }
    return base;
  }

  ExprNodePtr parse_primary() {
    skip_space();
    if (pos_ >= src_.size()) fail("unexpected end of input");
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      ExprNodePtr inner = parse_sum();
      if (!accept(')')) fail("expected ')'");
      return inner;
    }
    if ((c >= '0' && c <= '9') || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  ExprNodePtr parse_number() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
      ++pos_;
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t p = pos_ + 1;
      if (p < src_.size() && (src_[p] == '+' || src_[p] == '-')) ++p;
      if (p < src_.size() && std::isdigit(static_cast<unsigned char>(src_[p]))) {
        pos_ = p;
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
      }
    }
    double v = 0.0;
    auto res = std::from_chars(src_.data() + start, src_.data() + pos_, v);
    if (res.ec != std::errc() || res.ptr != src_.data() + pos_) fail_at("malformed number", start);
    return make_constant(v);
  }

  ExprNodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() &&
           (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
      ++pos_;
    const std::string_view id = src_.substr(start, pos_ - start);

    if (id.size() >= 2 && id[0] == 'x' &&
        id.find_first_not_of("0123456789", 1) == std::string_view::npos) {
      int index = 0;
      auto res = std::from_chars(id.data() + 1, id.data() + id.size(), index);
      if (res.ec != std::errc() || index < 1 || index > dim_)
        fail_at("coordinate " + std::string(id) + " outside x1..x" + std::to_string(dim_), start);
      auto n = std::make_shared<ExprNode>();
      n->kind = NodeKind::Coordinate;
      n->coordinate = index - 1;
      return n;
    }
    if (id == "pi") return make_constant(std::numbers::pi);

    UnaryOp op;
    if (id == "sin") {
      op = UnaryOp::Sin;
    } else if (id == "cos") {
      op = UnaryOp::Cos;
    } else if (id == "exp") {
      op = UnaryOp::Exp;
    } else if (id == "log") {
      op = UnaryOp::Log;
    } else if (id == "sqrt") {
      op = UnaryOp::Sqrt;
    } else {
      fail_at("unknown identifier '" + std::string(id) + "'", start);
    }
    if (!accept('(')) fail("expected '(' after " + std::string(id));
    ExprNodePtr arg = parse_sum();
    if (!accept(')')) fail("expected ')'");
    return make_unary(op, arg);
  }

  std::string_view src_;
  int dim_;
  std::size_t pos_ = 0;
};

Expr parse_expr(std::string_view source, int dim) {
  if (dim < 0) throw ArgumentError("negative chart dimension");
  return ExprParser(source, dim).parse();
}

Jet eval_jet(const Expr& e, std::span<const double> point) {
  const int n = static_cast<int>(point.size());
  std::vector<Jet> seeds;
  seeds.reserve(point.size());
  for (int a = 0; a < n; ++a) seeds.push_back(Jet::variable(n, a, point[a]));
  return e.eval<Jet>(seeds);
}

}  // namespace splitgeom
