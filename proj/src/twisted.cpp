#include <cmath>
#include <numbers>

#include "splitgeom/models.hpp"

namespace splitgeom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

std::vector<Axis> periodic_axes(int n) { return std::vector<Axis>(static_cast<std::size_t>(n), Axis{0.0, kTwoPi, true}); }

}  // namespace

Geometry build_twisted_torus(const std::vector<int>& dims, const std::string& twist) {
  int n = 0;
  for (int d : dims) n += d;
  if (n < 2) throw ArgumentError("twisted torus needs dimension >= 2");
  const Expr f = parse_expr(twist, n);

  // Spot-check periodicity along every axis.
  std::vector<double> p(static_cast<std::size_t>(n)), q;
  for (int s = 0; s < 5; ++s) {
    for (int a = 0; a < n; ++a) p[a] = 0.37 + 1.13 * s + 0.71 * a;
    const double base = f(p);
    for (int a = 0; a < n; ++a) {
      q = p;
      q[a] += kTwoPi;
      if (std::abs(f(q) - base) > 1e-12)
        throw ArgumentError("twist expression is not 2pi-periodic in x" + std::to_string(a + 1));
    }
  }

  std::vector<Expr> metric(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) metric[a * n + b] = Expr::constant(a == b ? 1.0 : 0.0);

  std::vector<std::vector<Expr>> frame(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) frame[a][i] = Expr::constant(a == i ? 1.0 : 0.0);
  frame[0][0] = cos(f);
  frame[0][1] = sin(f);
  frame[1][0] = -sin(f);
  frame[1][1] = cos(f);

  return Geometry{ChartManifold(periodic_axes(n), std::move(metric)), SplitStructure(dims, std::move(frame))};
}

}  // namespace splitgeom
