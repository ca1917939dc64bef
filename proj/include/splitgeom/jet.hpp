#pragma once

#include <array>
#include <cmath>
#include <ostream>

#include "splitgeom/errors.hpp"

namespace splitgeom {

/// Second-order jet of a scalar function on a chart: value, gradient and
/// Hessian with respect to the chart coordinates x^1..x^n.
///
/// Arithmetic follows the product and chain rules exactly, so a jet built
/// from seeded coordinates carries the analytic first and second partials of
/// the composed expression. The Hessian is stored as a packed upper triangle
/// and is therefore symmetric by construction.
///
/// Entries past `dim()` are always zero, which lets constants (dim 0) mix
/// freely with jets of any dimension.
class Jet {
 public:
  static constexpr int kMaxDim = 6;
  static constexpr int kPacked = kMaxDim * (kMaxDim + 1) / 2;

  Jet() = default;
  // NOLINTNEXTLINE(google-explicit-constructor): constants promote implicitly.
  Jet(double value) : value_(value) {}
  Jet(int dim, double value) : dim_(check_dim(dim)), value_(value) {}

  /// The coordinate function x^index (0-based) evaluated at `value`.
  static Jet variable(int dim, int index, double value) {
    Jet j(dim, value);
    j.grad_[index] = 1.0;
    return j;
  }

  int dim() const { return dim_; }
  double value() const { return value_; }
  double grad(int a) const { return grad_[a]; }
  double hess(int a, int b) const { return hess_[packed(a, b)]; }

  void set_grad(int a, double v) { grad_[a] = v; }
  void set_hess(int a, int b, double v) { hess_[packed(a, b)] = v; }

  /// ∂f/∂x^a as a jet whose value and gradient are exact. Its Hessian would
  /// need third derivatives and is left at zero, so only first-order
  /// information survives further differentiation.
  Jet derivative(int a) const {
    Jet d(dim_, grad_[a]);
    for (int b = 0; b < dim_; ++b) d.grad_[b] = hess_[packed(a, b)];
    return d;
  }

  Jet operator-() const {
    Jet r(*this);
    r.value_ = -r.value_;
    for (int a = 0; a < kMaxDim; ++a) r.grad_[a] = -r.grad_[a];
    for (int p = 0; p < kPacked; ++p) r.hess_[p] = -r.hess_[p];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    dim_ = dim_ > o.dim_ ? dim_ : o.dim_;
    value_ += o.value_;
    for (int a = 0; a < dim_; ++a) grad_[a] += o.grad_[a];
    const int np = dim_ * (dim_ + 1) / 2;
    for (int p = 0; p < np; ++p) hess_[p] += o.hess_[p];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    dim_ = dim_ > o.dim_ ? dim_ : o.dim_;
    value_ -= o.value_;
    for (int a = 0; a < dim_; ++a) grad_[a] -= o.grad_[a];
    const int np = dim_ * (dim_ + 1) / 2;
    for (int p = 0; p < np; ++p) hess_[p] -= o.hess_[p];
    return *this;
  }
  Jet& operator*=(double s) {
    value_ *= s;
    for (int a = 0; a < dim_; ++a) grad_[a] *= s;
    const int np = dim_ * (dim_ + 1) / 2;
    for (int p = 0; p < np; ++p) hess_[p] *= s;
    return *this;
  }
  Jet& operator*=(const Jet& o) {
    *this = *this * o;
    return *this;
  }
  Jet& operator/=(const Jet& o) {
    *this = *this / o;
    return *this;
  }

  /// this += a * b without a temporary.
  void add_product(const Jet& a, const Jet& b) {
    const int n = a.dim_ > b.dim_ ? a.dim_ : b.dim_;
    if (n > dim_) dim_ = n;
    value_ += a.value_ * b.value_;
    for (int i = 0; i < n; ++i) grad_[i] += a.value_ * b.grad_[i] + b.value_ * a.grad_[i];
    for (int j = 0; j < n; ++j) {
      for (int i = 0; i <= j; ++i) {
        hess_[packed_ordered(i, j)] += a.value_ * b.hess_[packed_ordered(i, j)] +
                                       b.value_ * a.hess_[packed_ordered(i, j)] +
                                       a.grad_[i] * b.grad_[j] + a.grad_[j] * b.grad_[i];
      }
    }
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, double s) { return a *= s; }
  friend Jet operator*(double s, Jet a) { return a *= s; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(a.dim_ > b.dim_ ? a.dim_ : b.dim_, 0.0);
    r.add_product(a, b);
    return r;
  }
  friend Jet operator/(const Jet& a, const Jet& b) { return a * reciprocal(b); }
  friend Jet operator/(const Jet& a, double s) {
    if (s == 0.0) throw DomainError("division by zero");
    return a * (1.0 / s);
  }

  /// Applies a scalar function given its value and first two derivatives at
  /// value(): (f∘u)' = f'·u', (f∘u)'' = f'·u'' + f''·u'⊗u'.
  Jet chain(double f0, double f1, double f2) const {
    Jet r(dim_, f0);
    for (int a = 0; a < dim_; ++a) r.grad_[a] = f1 * grad_[a];
    for (int j = 0; j < dim_; ++j) {
      for (int i = 0; i <= j; ++i) {
        const int p = packed_ordered(i, j);
        r.hess_[p] = f1 * hess_[p] + f2 * grad_[i] * grad_[j];
      }
    }
    return r;
  }

  friend Jet reciprocal(const Jet& x) {
    if (x.value_ == 0.0) throw DomainError("division by zero");
    const double inv = 1.0 / x.value_;
    return x.chain(inv, -inv * inv, 2.0 * inv * inv * inv);
  }

  friend bool operator==(const Jet& a, const Jet& b) {
    if (a.value_ != b.value_) return false;
    for (int i = 0; i < kMaxDim; ++i)
      if (a.grad_[i] != b.grad_[i]) return false;
    for (int p = 0; p < kPacked; ++p)
      if (a.hess_[p] != b.hess_[p]) return false;
    return true;
  }

  friend std::ostream& operator<<(std::ostream& os, const Jet& j) {
    os << "Jet{" << j.value_ << "; [";
    for (int a = 0; a < j.dim_; ++a) os << (a ? ", " : "") << j.grad_[a];
    os << "]}";
    return os;
  }

 private:
  static int check_dim(int dim) {
    if (dim < 0 || dim > kMaxDim) throw ArgumentError("jet dimension out of range");
    return dim;
  }
  static constexpr int packed_ordered(int i, int j) { return j * (j + 1) / 2 + i; }
  static constexpr int packed(int a, int b) {
    return a <= b ? packed_ordered(a, b) : packed_ordered(b, a);
  }

  int dim_ = 0;
  double value_ = 0.0;
  std::array<double, kMaxDim> grad_{};
  std::array<double, kPacked> hess_{};
};

inline Jet sin(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(s, c, -s);
}
inline Jet cos(const Jet& x) {
  const double s = std::sin(x.value()), c = std::cos(x.value());
  return x.chain(c, -s, -c);
}
inline Jet exp(const Jet& x) {
  const double e = std::exp(x.value());
  return x.chain(e, e, e);
}
inline Jet log(const Jet& x) {
  if (!(x.value() > 0.0)) throw DomainError("log of non-positive value");
  const double inv = 1.0 / x.value();
  return x.chain(std::log(x.value()), inv, -inv * inv);
}
inline Jet sqrt(const Jet& x) {
  if (!(x.value() > 0.0)) throw DomainError("sqrt of non-positive value");
  const double s = std::sqrt(x.value());
  return x.chain(s, 0.5 / s, -0.25 / (s * x.value()));
}
/// x^p for a constant exponent p.
inline Jet pow(const Jet& x, double p) {
  const double v = x.value();
  if (p == 0.0) return Jet(x.dim(), 1.0);
  if (p == 1.0) return x;
  if (p == 2.0) return x * x;
  return x.chain(std::pow(v, p), p * std::pow(v, p - 1.0), p * (p - 1.0) * std::pow(v, p - 2.0));
}

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

}  // namespace splitgeom
