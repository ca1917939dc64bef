#include <cmath>
#include <memory>
#include <random>
#include <vector>

#include "doctest.h"
#include "splitgeom/errors.hpp"
#include "splitgeom/identities.hpp"
#include "splitgeom/models.hpp"
#include "splitgeom/scenario.hpp"

using namespace splitgeom;

namespace {

const HypersurfaceModel& catalog_hypersurface(const char* name) {
  static std::vector<std::unique_ptr<Scenario>> keep;
  keep.push_back(std::make_unique<Scenario>(Scenario::build(catalog_config(name))));
  return *keep.back()->hypersurface();
}

}  // namespace

TEST_CASE("warped products: closed forms") {
  const WarpedModel orth({2, {1, 1}, {"2 + sin(x1)", "2 + cos(x2)"}});
  const WarpedModel parallel({1, {1, 1}, {"2 + sin(x1)", "2 + cos(x1)"}});
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> c(0.0, 2 * M_PI);
  double worst_printed = 0.0;
  for (int i = 0; i < 20; ++i) {
    const std::vector<double> p4{c(rng), c(rng), c(rng), c(rng)};
    const auto r = orth.residuals(p4);
    CHECK(r.cross_gradients < 1e-15);
    CHECK(r.mean_curvature < 1e-12);
    CHECK(r.div_printed < 1e-10);
    CHECK(r.smix_printed < 1e-10);
    CHECK(r.base_geodesic < 1e-12);

    const std::vector<double> p3{c(rng), c(rng), c(rng)};
    const auto s = parallel.residuals(p3);
    CHECK(s.div_corrected < 1e-10);
    CHECK(s.smix_corrected < 1e-10);
    worst_printed = std::max(worst_printed, s.div_printed);
  }
  // <grad u_2, grad u_3> = -sin cos / ((2+sin)(2+cos)) is not zero.
  CHECK(worst_printed > 0.1);
}

TEST_CASE("torus of revolution: principal curvatures and Gauss curvature") {
  const auto& torus = catalog_hypersurface("torus_of_revolution");
  REQUIRE(torus.split());
  for (double theta : {0.3, 1.0, 2.5, 4.0}) {
    const std::vector<double> p{theta, 0.7};
    const auto pd = torus.principal_data(p);
    const double k1 = std::cos(theta) / (2 + std::cos(theta));
    REQUIRE(pd.distinct.size() == 2);
    CHECK(pd.distinct[0] == doctest::Approx(k1).epsilon(1e-9));
    CHECK(pd.distinct[1] == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(torus.mixed_curvature_residual(p) < 1e-8);

    // Div(H_1 + H_2) equals the Gauss curvature for two line fields.
    const SplitPoint sp(torus.manifold(), *torus.split(), p);
    std::vector<Jet> field(2, Jet(0.0));
    for (int i = 0; i < 2; ++i) {
      const auto Hi = sp.mean_curvature(Subset({i}));
      for (int a = 0; a < 2; ++a) field[a] += Hi[a];
    }
    CHECK(sp.divergence(field) == doctest::Approx(k1).epsilon(1e-11));
    CHECK(sp.smix() == doctest::Approx(k1).epsilon(1e-11));

    const auto id = torus.identity(p);
    CHECK(std::abs(id.residual) < 1e-6 * (1 + id.max_term));
  }
  CHECK_THROWS_AS(torus.dperp_integrability({}, 1e-6), ArgumentError);
}

TEST_CASE("Clifford torus has principal curvatures -1 and 1") {
  const auto& cl = catalog_hypersurface("clifford_torus");
  const std::vector<double> p{0.4, 2.0};
  const auto pd = cl.principal_data(p);
  REQUIRE(pd.distinct.size() == 2);
  CHECK(pd.distinct[0] == doctest::Approx(-1.0).epsilon(1e-10));
  CHECK(pd.distinct[1] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(cl.mixed_curvature_residual(p) < 1e-8);
  const auto cz = cl.codazzi(p);
  CHECK(cz.symmetry < 1e-5);
}

TEST_CASE("round sphere is rejected as umbilical") {
  HypersurfaceSpec s;
  s.dim = 2;
  s.immersion = {"sin(x1)*cos(x2)", "sin(x1)*sin(x2)", "cos(x1)"};
  s.axes = {Axis{0.3, 2.8, false}, Axis{0.0, 2 * M_PI, true}};
  s.multiplicities = {1, 1};
  const HypersurfaceModel sphere(s);
  const std::vector<double> p{1.0, 1.0};
  CHECK_THROWS_AS(sphere.principal_data(p), GeometryError);

  s.multiplicities = {2};
  CHECK_THROWS_AS(HypersurfaceModel{s}, GeometryError);
}

TEST_CASE("isoparametric triple in the sphere: mixed curvature sum vanishes") {
  const double r3 = std::sqrt(3.0);
  const double mu[] = {-r3, 0.0, r3};
  const int n[] = {1, 1, 1};
  const double grad[] = {0.0, 0.0, 0.0};
  CHECK(std::abs(hypersurface_k3_rhs(mu, n, 1.0, grad, 1.0)) < 1e-15);
  CHECK(std::abs(hypersurface_k3_rhs(mu, n, 1.0, grad, 0.5)) < 1e-15);
  // With multiplicity two the gradient terms enter with weight n(1-n) = -2.
  const int n2[] = {2, 1, 1};
  const double g2[] = {1.0, 0.0, 0.0};
  CHECK(hypersurface_k3_rhs(mu, n2, 0.0, g2, 0.0) == doctest::Approx(-2.0));
}

TEST_CASE("D-perp integrability flags agree on k = 3 hypersurfaces") {
  for (const char* name : {"graph_r4", "rotated_torus_r4"}) {
    const Scenario sc = Scenario::build(catalog_config(name));
    const auto samples = sc.sample_points();
    const std::vector<std::vector<double>> few(samples.begin(), samples.begin() + 5);
    const auto d = sc.hypersurface()->dperp_integrability(few, 1e-6);
    CHECK(d.flags_agree_everywhere);
    CHECK(d.forall_zero_A_cross == d.brackets_tangent);
  }
}
