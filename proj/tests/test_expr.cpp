#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "doctest.h"
#include "splitgeom/errors.hpp"
#include "splitgeom/expr.hpp"

using namespace splitgeom;

namespace {

double at(const std::string& src, std::vector<double> x) { return parse_expr(src, static_cast<int>(x.size()))(x); }

// Random expressions of bounded depth whose domain is all of R^n.
std::string random_expr(std::mt19937_64& rng, int depth, int dim) {
  std::uniform_int_distribution<int> pick(0, 9);
  std::uniform_real_distribution<double> cst(0.5, 2.0);
  if (depth == 0 || pick(rng) < 2) {
    if (pick(rng) < 3) return std::to_string(cst(rng));
    return "x" + std::to_string(1 + std::uniform_int_distribution<int>(0, dim - 1)(rng));
  }
  const std::string a = random_expr(rng, depth - 1, dim);
  const std::string b = random_expr(rng, depth - 1, dim);
  switch (pick(rng)) {
    case 0: return "sin(" + a + ")";
    case 1: return "cos(" + a + ")";
    case 2: return "exp(0.3*sin(" + a + "))";
    case 3: return "log(2 + sin(" + a + "))";
    case 4: return "sqrt(2 + cos(" + a + "))";
    case 5: return "(" + a + ") + (" + b + ")";
    case 6: return "(" + a + ") - (" + b + ")";
    case 7: return "sin(" + a + ")*cos(" + b + ")";
    case 8: return "(" + a + ")/(2 + sin(" + b + "))";
    default: return "sin(" + a + ")^" + std::to_string(2 + pick(rng) % 2);
  }
}

}  // namespace

TEST_CASE("parse and evaluate small expressions") {
  CHECK(at("2 + sin(x1)", {0.0}) == doctest::Approx(2.0));
  CHECK(at("x1^2 * x2", {3.0, 2.0}) == doctest::Approx(18.0));
  CHECK(at("2*pi", {}) == doctest::Approx(2.0 * M_PI));
  CHECK(at("-x1^2", {3.0}) == doctest::Approx(-9.0));
  CHECK(at("2^3^2", {}) == doctest::Approx(512.0));
  CHECK(at("1 - 2 - 3", {}) == doctest::Approx(-4.0));
  CHECK(at("8/4/2", {}) == doctest::Approx(1.0));
  CHECK(at("1.5e1 + x2", {0.0, 1.0}) == doctest::Approx(16.0));
}

TEST_CASE("parse errors carry the byte offset") {
  CHECK_THROWS_AS(parse_expr("x3", 2), ParseError);
  CHECK_THROWS_AS(parse_expr("foo(x1)", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("x1 +", 1), ParseError);
  CHECK_THROWS_AS(parse_expr("x1^x1", 1), ParseError);
  try {
    parse_expr("1 + * 2", 1);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 4);
  }
}

TEST_CASE("domain errors") {
  CHECK_THROWS_AS(at("log(x1)", {-1.0}), DomainError);
  CHECK_THROWS_AS(at("1/x1", {0.0}), DomainError);
  CHECK_THROWS_AS(at("sqrt(x1)", {-1.0}), DomainError);
  CHECK_THROWS_AS(at("x1^0.5", {-1.0}), DomainError);
}

TEST_CASE("jets of elementary expressions") {
  const std::vector<double> zero{0.0};
  const Jet s = eval_jet(parse_expr("sin(x1)", 1), zero);
  CHECK(s.value() == doctest::Approx(0.0));
  CHECK(s.grad(0) == doctest::Approx(1.0));
  CHECK(s.hess(0, 0) == doctest::Approx(0.0));

  const std::vector<double> p{2.0, 3.0};
  const Jet m = eval_jet(parse_expr("x1*x2", 2), p);
  CHECK(m.value() == doctest::Approx(6.0));
  CHECK(m.grad(0) == doctest::Approx(3.0));
  CHECK(m.grad(1) == doctest::Approx(2.0));
  CHECK(m.hess(0, 1) == doctest::Approx(1.0));
  CHECK(m.hess(0, 0) == doctest::Approx(0.0));

  const std::vector<double> one{1.0};
  const Jet e = eval_jet(parse_expr("exp(x1^2)", 1), one);
  CHECK(e.grad(0) == doctest::Approx(2.0 * M_E).epsilon(1e-14));
  CHECK(e.hess(0, 0) == doctest::Approx(6.0 * M_E).epsilon(1e-14));
  // Central differences, step 1e-4.
  const auto f = [](double x) { return std::exp(x * x); };
  const double h = 1e-4;
  CHECK(std::abs((f(1 + h) - f(1 - h)) / (2 * h) - e.grad(0)) <= 1e-6 * e.grad(0));
  CHECK(std::abs((f(1 + h) - 2 * f(1) + f(1 - h)) / (h * h) - e.hess(0, 0)) <= 1e-6 * e.hess(0, 0));
}

TEST_CASE("random expressions: jets agree with finite differences and print round-trips") {
  std::mt19937_64 rng(20240611);
  std::uniform_real_distribution<double> coord(-2.0, 2.0);
  const int dim = 3;
  for (int trial = 0; trial < 1000; ++trial) {
    const Expr e = parse_expr(random_expr(rng, 5, dim), dim);
    CHECK(parse_expr(e.str(), dim) == e);

    std::vector<double> p(dim);
    for (auto& x : p) x = coord(rng);
    const Jet j = eval_jet(e, p);
    CHECK(j.value() == doctest::Approx(e(p)).epsilon(1e-14));
    // Richardson-extrapolated central differences, O(h^4).
    auto f = [&](int a, double da, int b, double db) {
      auto q = p;
      q[a] += da;
      q[b] += db;
      return e(q);
    };
    for (int a = 0; a < dim; ++a) {
      auto d1 = [&](double h) { return (f(a, h, a, 0) - f(a, -h, a, 0)) / (2 * h); };
      const double fd = (4 * d1(5e-4) - d1(1e-3)) / 3;
      CHECK(std::abs(fd - j.grad(a)) <= 1e-7 * (1.0 + std::abs(j.grad(a))));
      for (int b = 0; b < dim; ++b) {
        auto d2 = [&](double h) {
          if (a == b) return (f(a, h, a, 0) - 2 * e(p) + f(a, -h, a, 0)) / (h * h);
          return (f(a, h, b, h) - f(a, h, b, -h) - f(a, -h, b, h) + f(a, -h, b, -h)) / (4 * h * h);
        };
        const double fd2 = (4 * d2(1e-3) - d2(2e-3)) / 3;
        CHECK(std::abs(fd2 - j.hess(a, b)) <= 1e-6 * (1.0 + std::abs(j.hess(a, b))));
        CHECK(j.hess(a, b) == j.hess(b, a));
      }
    }
  }
}

TEST_CASE("symbolic derivative matches the jet gradient") {
  std::mt19937_64 rng(7);
  const int dim = 2;
  for (int trial = 0; trial < 200; ++trial) {
    const Expr e = parse_expr(random_expr(rng, 4, dim), dim);
    const std::vector<double> p{0.3, -0.7};
    const Jet j = eval_jet(e, p);
    for (int a = 0; a < dim; ++a) CHECK(e.derivative(a)(p) == doctest::Approx(j.grad(a)).epsilon(1e-12));
  }
}
