#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "splitgeom/chart.hpp"
#include "splitgeom/errors.hpp"

using namespace splitgeom;

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

ChartManifold diagonal(std::vector<Axis> axes, const std::vector<std::string>& diag) {
  const int n = static_cast<int>(axes.size());
  std::vector<Expr> g(n * n, Expr::constant(0.0));
  for (int a = 0; a < n; ++a) g[a * n + a] = parse_expr(diag[a], n);
  return ChartManifold(std::move(axes), std::move(g));
}

ChartManifold torus(int n, std::vector<Expr> g) {
  return ChartManifold(std::vector<Axis>(n, Axis{0.0, kTwoPi, true}), std::move(g));
}

// A non-diagonal metric on T^3.
ChartManifold curved_t3() {
  const char* src[9] = {"2 + sin(x2)",        "0.3*cos(x3)",        "0.1*sin(x1 + x2)",
                        "0.3*cos(x3)",        "1.5 + 0.5*cos(x1)",  "0.2*sin(x3)",
                        "0.1*sin(x1 + x2)",   "0.2*sin(x3)",        "1 + 0.25*sin(x1)^2"};
  std::vector<Expr> g;
  for (const char* s : src) g.push_back(parse_expr(s, 3));
  return torus(3, std::move(g));
}

}  // namespace

TEST_CASE("flat metric has vanishing connection and curvature") {
  const auto m = diagonal(std::vector<Axis>(3, Axis{0.0, kTwoPi, true}), {"1", "1", "1"});
  const std::vector<double> p{0.3, 1.1, 2.0};
  const auto d = connection_at(m, p);
  for (double v : d.gamma) CHECK(v == 0.0);
  for (double v : d.riemann) CHECK(v == 0.0);
}

TEST_CASE("round sphere has sectional curvature +1") {
  const auto m = diagonal({Axis{0.1, M_PI - 0.1, false}, Axis{0.0, kTwoPi, true}}, {"1", "sin(x1)^2"});
  for (double theta : {M_PI / 2, 0.7, 2.2}) {
    const std::vector<double> p{theta, 0.4};
    const auto d = connection_at(m, p);
    const std::vector<double> u{1.0, 0.0}, v{0.0, 1.0 / std::sin(theta)};
    CHECK(d.sectional(u, v) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("warped surface curvature is -u''/u") {
  const auto m = diagonal({Axis{0.0, kTwoPi, true}, Axis{0.0, kTwoPi, true}}, {"1", "(2 + sin(x1))^2"});
  for (double t : {0.0, M_PI / 2, 1.3}) {
    const std::vector<double> p{t, 0.0};
    const auto d = connection_at(m, p);
    const double u = 2.0 + std::sin(t);
    const std::vector<double> e1{1.0, 0.0}, e2{0.0, 1.0 / u};
    CHECK(d.sectional(e1, e2) == doctest::Approx(std::sin(t) / u).epsilon(1e-12));
  }
}

TEST_CASE("curvature tensor symmetries and first Bianchi identity") {
  const auto m = curved_t3();
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> c(0.0, kTwoPi);
  for (int trial = 0; trial < 10; ++trial) {
    const std::vector<double> p{c(rng), c(rng), c(rng)};
    const auto d = connection_at(m, p);
    double scale = 0.0;
    for (double v : d.riemann) scale = std::max(scale, std::abs(v));
    CHECK(scale > 1e-3);
    const double tol = 1e-12 * (1.0 + scale);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int e = 0; e < 3; ++e)
          for (int f = 0; f < 3; ++f) {
            const double r = d.curvature(a, b, e, f);
            CHECK(std::abs(r + d.curvature(b, a, e, f)) <= tol);
            CHECK(std::abs(r + d.curvature(a, b, f, e)) <= tol);
            CHECK(std::abs(r - d.curvature(e, f, a, b)) <= tol);
            CHECK(std::abs(r + d.curvature(b, e, a, f) + d.curvature(e, a, b, f)) <= tol);
          }
  }
}

TEST_CASE("divergence in coordinates") {
  const auto flat = diagonal({Axis{-1.0, 1.0, false}}, {"1"});
  const VectorField radial = [](std::span<const Jet> x) { return std::vector<Jet>{x[0]}; };
  const std::vector<double> p{0.37};
  CHECK(divergence(flat, radial, p) == doctest::Approx(1.0));

  // On the sphere, Div grad cos(theta) = -2 cos(theta).
  const auto sphere = diagonal({Axis{0.1, M_PI - 0.1, false}, Axis{0.0, kTwoPi, true}}, {"1", "sin(x1)^2"});
  const ScalarField f = [](std::span<const Jet> x) { return cos(x[0]); };
  const std::vector<double> q{0.8, 1.0};
  CHECK(div_grad(sphere, f, q) == doctest::Approx(-2.0 * std::cos(0.8)).epsilon(1e-12));
  CHECK(laplacian_geom(sphere, f, q) == doctest::Approx(2.0 * std::cos(0.8)).epsilon(1e-12));
}

TEST_CASE("divergence does not depend on the coordinates used") {
  // The field x1 d1 + x2 d2 on the flat plane, in Cartesian and polar charts:
  // in polar coordinates it is r d_r, and both divergences equal 2.
  const auto cart = diagonal({Axis{-2, 2, false}, Axis{-2, 2, false}}, {"1", "1"});
  const auto polar = diagonal({Axis{0.5, 2, false}, Axis{0, kTwoPi, true}}, {"1", "x1^2"});
  const VectorField euler = [](std::span<const Jet> x) { return std::vector<Jet>{x[0], x[1]}; };
  const VectorField radial = [](std::span<const Jet> x) { return std::vector<Jet>{x[0], Jet(0.0)}; };
  const std::vector<double> pc{0.6, -0.8}, pp{1.0, 5.355};
  CHECK(divergence(cart, euler, pc) == doctest::Approx(2.0));
  CHECK(divergence(polar, radial, pp) == doctest::Approx(2.0));
}

TEST_CASE("quadrature on closed charts") {
  const int g32[] = {32};
  const auto warped = diagonal({Axis{0.0, kTwoPi, true}, Axis{0.0, kTwoPi, true}}, {"1", "(2 + sin(x1))^2"});
  CHECK(integrate(warped, [](auto) { return 1.0; }, g32) == doctest::Approx(8.0 * M_PI * M_PI).epsilon(1e-13));
  CHECK(std::abs(integrate(warped, [](auto x) { return std::sin(x[0]) * std::cos(x[1]); }, g32)) < 1e-13);

  // Rectangle rule converges spectrally for periodic analytic integrands.
  const auto circle = diagonal({Axis{0.0, kTwoPi, true}}, {"1"});
  const double exact = kTwoPi * std::cyl_bessel_i(0.0, 1.0);
  double prev = 1.0;
  for (int n : {4, 8, 16}) {
    const int grid[] = {n};
    const double err = std::abs(integrate(circle, [](auto x) { return std::exp(std::sin(x[0])); }, grid) - exact);
    CHECK(err < prev);
    prev = err;
  }
  CHECK(prev < 1e-13);
}

TEST_CASE("divergence integrates to zero on a closed chart") {
  const auto m = curved_t3();
  const VectorField X = [](std::span<const Jet> x) {
    return std::vector<Jet>{sin(x[1]) * cos(x[2]), exp(cos(x[0])), sin(x[0] + x[2])};
  };
  const int grid[] = {24};
  const double total = integrate(m, [&](std::span<const double> p) { return divergence(m, X, p); }, grid);
  CHECK(std::abs(total) < 1e-11);
}

TEST_CASE("quadrature is independent of the thread count") {
  const auto m = curved_t3();
  const int grid[] = {16};
  auto f = [](std::span<const double> x) { return std::sin(x[0]) * std::exp(std::cos(x[1] + x[2])); };
  const double a = integrate(m, f, grid, 1);
  CHECK(integrate(m, f, grid, 3) == a);
  CHECK(integrate(m, f, grid, 4) == a);
}

TEST_CASE("metric validation") {
  const auto bad = diagonal({Axis{-1, 1, false}}, {"x1"});
  const std::vector<std::vector<double>> samples{{-0.5}, {0.5}};
  CHECK_THROWS_AS(bad.validate(samples), GeometryError);
  const auto nonperiodic = diagonal({Axis{0.0, 1.0, true}}, {"2 + sin(x1)"});
  const std::vector<std::vector<double>> s1{{0.2}};
  CHECK_THROWS_AS(nonperiodic.validate(s1), GeometryError);
  const std::vector<double> p{-0.5};
  CHECK_THROWS_AS(metric_jets(bad, p), GeometryError);
}
