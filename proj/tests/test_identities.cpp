#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "splitgeom/errors.hpp"
#include "splitgeom/identities.hpp"
#include "splitgeom/models.hpp"

using namespace splitgeom;

namespace {

std::vector<std::vector<double>> points(int n, int count, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> c(0.0, 2 * M_PI);
  std::vector<std::vector<double>> out(count, std::vector<double>(n));
  for (auto& p : out)
    for (auto& x : p) x = c(rng);
  return out;
}

// Non-diagonal metric with a non-coordinate split (2,1,1) on T^4.
Geometry generic_k3() {
  std::vector<Expr> g;
  const char* src[16] = {"2 + sin(x2)", "0.2*cos(x3)", "0", "0.1*sin(x4)",
                         "0.2*cos(x3)", "1.5 + 0.3*cos(x1)", "0.3*sin(x1)", "0",
                         "0", "0.3*sin(x1)", "1 + 0.2*cos(x4)", "0",
                         "0.1*sin(x4)", "0", "0", "1 + 0.1*sin(x2)^2"};
  for (const char* s : src) g.push_back(parse_expr(s, 4));
  ChartManifold m(std::vector<Axis>(4, Axis{0.0, 2 * M_PI, true}), g);
  auto e = [](const char* s) { return parse_expr(s, 4); };
  std::vector<std::vector<Expr>> frame{{e("1"), e("0.3*sin(x3)"), e("0"), e("0")},
                                       {e("0.2"), e("1"), e("0.1*cos(x1)"), e("0")},
                                       {e("0"), e("0"), e("1"), e("0.4*sin(x2)")},
                                       {e("0.1"), e("0"), e("0.2"), e("1")}};
  return {std::move(m), SplitStructure({2, 1, 1}, std::move(frame))};
}

double rel(const IdentityValue& v) { return std::abs(v.residual) / (1.0 + v.max_term); }

}  // namespace

TEST_CASE("k = 2: the main identity counts each H_i twice") {
  const auto geo = build_twisted_torus({1, 2}, "sin(x3) + 0.5*cos(x1)");
  for (const auto& p : points(3, 20, 1)) {
    const SplitPoint sp(geo.manifold, geo.split, p);
    IdentityContext ctx(sp);
    const auto main = ctx.evaluate(IdentityKind::Main);
    const auto w = ctx.evaluate(IdentityKind::Walczak);
    CHECK(main.lhs == doctest::Approx(2 * w.lhs).epsilon(1e-12));
    CHECK(main.rhs == doctest::Approx(2 * w.rhs).epsilon(1e-12));
    CHECK(rel(w) < 1e-10);
    CHECK(residual_main(geo.split, geo.manifold, p) == doctest::Approx(2 * residual_walczak(geo.split, geo.manifold, p)));
  }
}

TEST_CASE("pointwise identities on a generic k = 3 split") {
  const auto geo = generic_k3();
  double worst_printed = 0.0;
  for (const auto& p : points(4, 25, 2)) {
    const SplitPoint sp(geo.manifold, geo.split, p);
    IdentityContext ctx(sp);
    const auto main = ctx.evaluate(IdentityKind::Main);
    const auto aux = ctx.evaluate(IdentityKind::Aux, 2);
    const auto comp = ctx.evaluate(IdentityKind::Companion);
    CHECK(main.max_term > 1e-3);
    CHECK(rel(main) < 1e-10);
    CHECK(rel(aux) < 1e-10);
    CHECK(rel(comp) < 1e-10);
    CHECK(rel(ctx.evaluate(IdentityKind::CompanionK3)) < 1e-10);
    CHECK(rel(ctx.evaluate(IdentityKind::SmixLemma)) < 1e-10);
    CHECK(std::abs(comp.residual - (main.residual - aux.residual)) < 1e-9 * (1.0 + main.max_term));
    worst_printed = std::max(worst_printed, rel(ctx.evaluate(IdentityKind::AuxAsPrinted, 2)));

    // Companion left side is 2 Div(H_1 + H_2 + H_3), computed independently.
    std::vector<Jet> field(4, Jet(0.0));
    for (int i = 0; i < 3; ++i) {
      const auto Hi = sp.mean_curvature(Subset({i}));
      for (int a = 0; a < 4; ++a) field[a] += Hi[a];
    }
    CHECK(comp.lhs == doctest::Approx(2 * sp.divergence(field)).epsilon(1e-11));
  }
  // The alternative right-hand side does not hold once the H_i are nonzero.
  CHECK(worst_printed > 1e-3);
}

TEST_CASE("free functions agree with the context") {
  const auto geo = generic_k3();
  const std::vector<double> p{0.1, 0.2, 0.3, 0.4};
  CHECK(std::abs(residual_main(geo.split, geo.manifold, p)) < 1e-9);
  CHECK(std::abs(residual_aux(geo.split, geo.manifold, 2, p)) < 1e-9);
  CHECK(std::abs(residual_companion(geo.split, geo.manifold, p)) < 1e-9);
  CHECK(std::abs(residual_smix_lemma(geo.split, geo.manifold, p)) < 1e-9);
  CHECK_THROWS_AS(residual_walczak(geo.split, geo.manifold, p), ArgumentError);
}

TEST_CASE("product metric: every term vanishes") {
  const auto geo = build_twisted_torus({1, 1, 1, 1}, "0");
  for (const auto& p : points(4, 5, 3)) {
    const SplitPoint sp(geo.manifold, geo.split, p);
    IdentityContext ctx(sp);
    CHECK(ctx.evaluate(IdentityKind::Main).max_term == 0.0);
    for (int r = 2; r <= 3; ++r) CHECK(ctx.evaluate(IdentityKind::Aux, r).residual == 0.0);
  }
}

TEST_CASE("k = 4 auxiliary identities") {
  const auto geo = build_twisted_torus({1, 1, 1, 1}, "sin(x4) + 0.3*cos(x1 + x3)");
  for (const auto& p : points(4, 10, 4)) {
    const SplitPoint sp(geo.manifold, geo.split, p);
    IdentityContext ctx(sp);
    CHECK(rel(ctx.evaluate(IdentityKind::Main)) < 1e-10);
    CHECK(rel(ctx.evaluate(IdentityKind::Aux, 2)) < 1e-10);
    CHECK(rel(ctx.evaluate(IdentityKind::Aux, 3)) < 1e-10);
    CHECK(rel(ctx.evaluate(IdentityKind::Companion)) < 1e-10);
  }
}

TEST_CASE("identity field coefficients") {
  // Aux field: sum over pairs minus C(k-2, r-1) times the sum of the H_i.
  const auto f = identity_field(IdentityKind::Aux, 4, 2);
  double pair_coeff = 0.0, single_coeff = 0.0;
  for (const auto& t : f) (t.q.size() == 2 ? pair_coeff : single_coeff) = t.coefficient;
  CHECK(pair_coeff == 1.0);
  CHECK(single_coeff == -2.0);
}

TEST_CASE("identity ranges") {
  CHECK_THROWS_AS(check_identity_range(IdentityKind::Aux, 3, 3), ArgumentError);
  CHECK_THROWS_AS(check_identity_range(IdentityKind::Aux, 3, 1), ArgumentError);
  CHECK_THROWS_AS(check_identity_range(IdentityKind::Aux, 2, 1), ArgumentError);
  CHECK_THROWS_AS(check_identity_range(IdentityKind::Walczak, 3, 0), ArgumentError);
  CHECK_THROWS_AS(check_identity_range(IdentityKind::CompanionK3, 4, 0), ArgumentError);
  CHECK_NOTHROW(check_identity_range(IdentityKind::Aux, 4, 3));
  try {
    check_identity_range(IdentityKind::Aux, 3, 3);
  } catch (const ArgumentError& e) {
    CHECK(std::string(e.what()).find("r out of range") != std::string::npos);
  }
}

TEST_CASE("integrals of the right-hand sides vanish on a closed chart") {
  const auto geo = build_twisted_torus({1, 1, 1}, "sin(x3) + 0.3*sin(x1 + x2)");
  const IdentityKind kinds[] = {IdentityKind::Main, IdentityKind::Aux, IdentityKind::Companion};
  const int rs[] = {0, 2, 0};
  const int grid[] = {16};
  const auto res = integral_checks(geo.split, geo.manifold, kinds, rs, grid, 1);
  REQUIRE(res.size() == 3);
  for (const auto& r : res) {
    CHECK(r.normalizer > 1.0);
    CHECK(r.ratio() < 1e-10);
    CHECK(r.stokes_ratio() < 1e-10);
  }
  const auto again = integral_checks(geo.split, geo.manifold, kinds, rs, grid, 3);
  for (std::size_t i = 0; i < res.size(); ++i) CHECK(again[i].integral == res[i].integral);
}
