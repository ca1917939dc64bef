#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "splitgeom/errors.hpp"
#include "splitgeom/kproduct.hpp"
#include "splitgeom/models.hpp"

using namespace splitgeom;

namespace {

std::vector<double> apply(const std::vector<double>& P, const std::vector<double>& v, int n) {
  std::vector<double> out(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += P[i * n + j] * v[j];
  return out;
}

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// A flat 4-torus split by a frame that is neither orthonormal nor coordinate.
Geometry skew_geometry() {
  std::vector<Expr> g;
  const char* src[16] = {"2 + sin(x2)", "0.2*cos(x3)", "0", "0.1*sin(x4)",
                         "0.2*cos(x3)", "1.5", "0.3*sin(x1)", "0",
                         "0", "0.3*sin(x1)", "1 + 0.2*cos(x4)", "0",
                         "0.1*sin(x4)", "0", "0", "1"};
  for (const char* s : src) g.push_back(parse_expr(s, 4));
  ChartManifold m(std::vector<Axis>(4, Axis{0.0, 2 * M_PI, true}), g);
  auto e = [](const char* s) { return parse_expr(s, 4); };
  std::vector<std::vector<Expr>> frame{{e("1"), e("0.3*sin(x3)"), e("0"), e("0")},
                                       {e("0.2"), e("1"), e("0.1*cos(x1)"), e("0")},
                                       {e("0"), e("0"), e("1"), e("0.4*sin(x2)")},
                                       {e("0.1"), e("0"), e("0.2"), e("1")}};
  return {std::move(m), SplitStructure({2, 1, 1}, std::move(frame))};
}

}  // namespace

TEST_CASE("subset enumeration") {
  for (int k = 1; k <= 8; ++k)
    for (int r = 1; r <= k; ++r) {
      const auto s = subsets(r, k);
      CHECK(static_cast<long long>(s.size()) == binomial(k, r));
      CHECK(std::is_sorted(s.begin(), s.end()));
      CHECK(std::adjacent_find(s.begin(), s.end()) == s.end());
    }
  const auto s = subsets(2, 4);
  CHECK(s.front().str() == "{1,2}");
  CHECK(s.back().str() == "{3,4}");
  CHECK(s[2].str() == "{1,4}");
  CHECK_THROWS_AS(subsets(0, 3), ArgumentError);
  CHECK_THROWS_AS(subsets(4, 3), ArgumentError);
  CHECK(Subset({0, 2}).complement(4) == Subset({1, 3}));
  CHECK_THROWS_AS(Subset({2, 1}), ArgumentError);
}

TEST_CASE("adapted frame and projectors") {
  const auto geo = skew_geometry();
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(0.0, 2 * M_PI);
  for (int trial = 0; trial < 20; ++trial) {
    const std::vector<double> p{c(rng), c(rng), c(rng), c(rng)};
    const SplitPoint sp(geo.manifold, geo.split, p);
    const auto af = sp.adapted_frame();
    const int n = af.n;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const std::vector<double> ea(af.frame.begin() + a * n, af.frame.begin() + (a + 1) * n);
        const std::vector<double> eb(af.frame.begin() + b * n, af.frame.begin() + (b + 1) * n);
        CHECK(std::abs(sp.inner(ea, eb) - (a == b ? 1.0 : 0.0)) < 1e-13);
      }
    std::vector<double> sum(n * n, 0.0);
    for (int i = 0; i < af.k; ++i) {
      const auto& P = af.projectors[i];
      for (int j = 0; j < n * n; ++j) sum[j] += P[j];
      // Idempotent, mutually annihilating, self-adjoint for g.
      for (int col = 0; col < n; ++col) {
        std::vector<double> v(n, 0.0);
        v[col] = 1.0;
        const auto pv = apply(P, v, n);
        const auto ppv = apply(P, pv, n);
        for (int j = 0; j < n; ++j) CHECK(std::abs(ppv[j] - pv[j]) < 1e-13);
        for (int other = 0; other < af.k; ++other)
          if (other != i) CHECK(max_abs(apply(af.projectors[other], pv, n)) < 1e-13);
        for (int col2 = 0; col2 < n; ++col2) {
          std::vector<double> w(n, 0.0);
          w[col2] = 1.0;
          CHECK(std::abs(sp.inner(pv, w) - sp.inner(v, apply(P, w, n))) < 1e-13);
        }
      }
    }
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) CHECK(std::abs(sum[i * n + j] - (i == j ? 1.0 : 0.0)) < 1e-13);

    for (const auto& q : subsets(2, 3)) {
      const auto fd = sp.fundamental(q);
      const int in = static_cast<int>(fd.inside.size()), out = static_cast<int>(fd.outside.size());
      for (int a = 0; a < in; ++a)
        for (int b = 0; b < in; ++b)
          for (int e = 0; e < out; ++e) {
            CHECK(std::abs(fd.h_at(a, b, e) - fd.h_at(b, a, e)) < 1e-13);
            CHECK(std::abs(fd.T_at(a, b, e) + fd.T_at(b, a, e)) < 1e-13);
          }
      CHECK(max_abs(apply(sp.projector(q), fd.H, n)) < 1e-13);
    }
  }
}

TEST_CASE("rescaling the spanning frame does not change the distributions") {
  const auto geo = skew_geometry();
  std::vector<std::vector<Expr>> scaled = geo.split.frame();
  for (auto& v : scaled)
    for (auto& e : v) e = e * parse_expr("2 + cos(x1)", 4);
  const SplitStructure s2(geo.split.dims(), scaled);
  const std::vector<double> p{0.4, 1.9, 3.3, 5.0};
  const SplitPoint a(geo.manifold, geo.split, p), b(geo.manifold, s2, p);
  for (int r = 1; r < 3; ++r)
    for (const auto& q : subsets(r, 3)) {
      const auto fa = a.fundamental(q), fb = b.fundamental(q);
      for (int i = 0; i < 4; ++i) CHECK(fa.H[i] == doctest::Approx(fb.H[i]).epsilon(1e-12));
      CHECK(fa.h_norm2 == doctest::Approx(fb.h_norm2).epsilon(1e-12));
      CHECK(fa.T_norm2 == doctest::Approx(fb.T_norm2).epsilon(1e-12));
    }
}

TEST_CASE("twisted torus: h and T by hand") {
  // f = sin(x3): at p = 0, grad_{X3} X1 = f' X2, and grad_{X1} X3 = 0.
  const auto geo = build_twisted_torus({1, 1, 1}, "sin(x3)");
  const std::vector<double> p{0.0, 0.0, 0.0};
  const SplitPoint sp(geo.manifold, geo.split, p);
  const auto fd = sp.fundamental(Subset({0, 2}));
  REQUIRE(fd.inside.size() == 2);
  REQUIRE(fd.outside.size() == 1);
  CHECK(fd.h_at(0, 1, 0) == doctest::Approx(0.5).epsilon(1e-13));
  CHECK(fd.T_at(0, 1, 0) == doctest::Approx(-0.5).epsilon(1e-13));
  CHECK(std::abs(fd.h_at(0, 0, 0)) < 1e-14);
  CHECK(std::abs(fd.h_at(1, 1, 0)) < 1e-14);
  // <[X1,X3], X2> = -f'(0).
  CHECK(sp.omega(0, 2, 1) - sp.omega(2, 0, 1) == doctest::Approx(-1.0).epsilon(1e-13));
}

TEST_CASE("warped product: mean curvature and mixed curvature") {
  const WarpedModel w({1, {1}, {"2 + sin(x1)"}});
  const auto& geo = w.geometry();
  for (double t : {0.0, M_PI / 2, 2.0}) {
    const std::vector<double> p{t, 1.0};
    const SplitPoint sp(geo.manifold, geo.split, p);
    const auto fd = sp.fundamental(Subset({1}));
    CHECK(fd.H[0] == doctest::Approx(-std::cos(t) / (2 + std::sin(t))).epsilon(1e-13));
    CHECK(std::abs(fd.H[1]) < 1e-14);
    CHECK(sp.smix() == doctest::Approx(std::sin(t) / (2 + std::sin(t))).epsilon(1e-12));
    CHECK(sp.fundamental(Subset({0})).h_norm2 < 1e-26);
    CHECK(w.residuals(p).mean_curvature < 1e-13);
  }
  const std::vector<double> p{M_PI / 2, 0.0};
  const SplitPoint sp(geo.manifold, geo.split, p);
  CHECK(sp.smix() == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  const std::vector<double> p0{0.0, 0.0};
  CHECK(std::abs(SplitPoint(geo.manifold, geo.split, p0).mixed_curvature(0, 1)) < 1e-14);
}

TEST_CASE("partial divergence") {
  const auto geo = skew_geometry();
  const std::vector<double> p{1.0, 2.0, 0.5, 4.0};
  const SplitPoint sp(geo.manifold, geo.split, p);
  const auto H1 = sp.mean_curvature(Subset({0}));
  const double full = sp.divergence(H1);
  CHECK(sp.partial_divergence(Subset({0, 1, 2}), H1) == doctest::Approx(full).epsilon(1e-12));
  double sum = 0.0;
  for (int i = 0; i < 3; ++i) sum += sp.partial_divergence(Subset({i}), H1);
  CHECK(sum == doctest::Approx(full).epsilon(1e-12));
  const double H1_norm2 = sp.fundamental(Subset({0})).H_norm2;
  CHECK(H1_norm2 > 1e-4);
  CHECK(sp.partial_divergence(Subset({1, 2}), H1) == doctest::Approx(full + H1_norm2).epsilon(1e-11));
}

TEST_CASE("pair predicates") {
  std::vector<std::vector<double>> samples;
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> c(0.0, 2 * M_PI);
  for (int i = 0; i < 10; ++i) samples.push_back({c(rng), c(rng), c(rng)});

  const auto product = build_twisted_torus({1, 1, 1}, "0");
  const auto pp = pair_predicates(product.split, product.manifold, 0, 1, samples);
  CHECK(pp.mixed_totally_geodesic);
  CHECK(pp.mixed_integrable);

  const WarpedModel w({1, {1, 1}, {"2 + sin(x1)", "2 + cos(x1)"}});
  for (auto [i, j] : {std::pair{0, 1}, {0, 2}, {1, 2}}) {
    const auto wp = pair_predicates(w.geometry().split, w.geometry().manifold, i, j, samples);
    CHECK(wp.mixed_totally_geodesic);
    CHECK(wp.mixed_integrable);
  }

  const auto twisted = build_twisted_torus({1, 1, 1}, "sin(x3)");
  const auto tp = pair_predicates(twisted.split, twisted.manifold, 0, 2, samples);
  CHECK_FALSE(tp.mixed_integrable);
  CHECK(tp.sup_T > 0.1);

  CHECK_THROWS_AS(pair_predicates(w.geometry().split, w.geometry().manifold, 0, 0, samples), ArgumentError);
  const auto k2 = build_twisted_torus({1, 2}, "sin(x3)");
  CHECK_THROWS_AS(pair_predicates(k2.split, k2.manifold, 0, 1, samples), ArgumentError);
}

TEST_CASE("umbilicity algebra on a warped product with orthogonal warping gradients") {
  const WarpedModel w({2, {2, 1}, {"2 + sin(x1)", "2 + cos(x2)"}});
  const auto& geo = w.geometry();
  const std::vector<double> p{0.7, 2.1, 0.3, 1.0, 4.0};
  const SplitPoint sp(geo.manifold, geo.split, p);
  const int n = sp.dim(), k = sp.k();
  for (int r = 1; r < k; ++r)
    for (const auto& q : subsets(r, k)) {
      const auto fd = sp.fundamental(q);
      const auto P = sp.projector(q.complement(k));
      double rhs = 0.0;
      for (int i : q.members()) {
        const double ni = sp.dims()[i];
        const auto v = apply(P, sp.fundamental(Subset({i})).H, n);
        rhs -= (ni - 1.0) / ni * sp.inner(v, v);
      }
      CHECK(std::abs(fd.h_norm2 - fd.H_norm2 - rhs) < 1e-12);
    }
}
