#pragma once

#include <functional>
#include <span>
#include <vector>

#include "splitgeom/expr.hpp"
#include "splitgeom/jet.hpp"

namespace splitgeom {

/// One coordinate axis of a chart box.
struct Axis {
  double lo = 0.0;
  double hi = 1.0;
  bool periodic = false;

  double length() const { return hi - lo; }
};

/// A coordinate box carrying a Riemannian metric given entrywise by
/// closed-form expressions. A box whose axes are all periodic is a closed
/// torus chart and supports quadrature.
class ChartManifold {
 public:
  /// `metric` is row-major n×n; entries (a,b) and (b,a) must print the same.
  ChartManifold(std::vector<Axis> axes, std::vector<Expr> metric);

  int dim() const { return static_cast<int>(axes_.size()); }
  const std::vector<Axis>& axes() const { return axes_; }
  bool closed() const;

  const Expr& metric_entry(int a, int b) const { return metric_[a * dim() + b]; }

  /// Row-major metric values at p.
  std::vector<double> metric_at(std::span<const double> p) const;
  /// Row-major metric jets for jet-valued coordinates.
  std::vector<Jet> metric_jets(std::span<const Jet> x) const;

  /// Checks positive definiteness at each sample and periodicity of every
  /// metric entry along periodic axes (|g(x) - g(x + period)| <= 1e-12).
  /// Throws GeometryError.
  void validate(std::span<const std::vector<double>> samples) const;

 private:
  std::vector<Axis> axes_;
  std::vector<Expr> metric_;
};

/// Seeded coordinates plus jets of g, g^{-1} and the Christoffel symbols at
/// one point. g and g^{-1} are exact to second order, Γ to first order.
struct MetricJets {
  int n = 0;
  std::vector<double> point;
  std::vector<Jet> x;      // x^a seeded at point
  std::vector<Jet> g;      // g_ab, row-major
  std::vector<Jet> ginv;   // g^ab, row-major
  std::vector<Jet> gamma;  // Γ^c_ab at [(c*n + a)*n + b]
  double sqrt_det = 0.0;

  const Jet& metric(int a, int b) const { return g[a * n + b]; }
  const Jet& inverse(int a, int b) const { return ginv[a * n + b]; }
  const Jet& christoffel(int c, int a, int b) const { return gamma[(c * n + a) * n + b]; }

  double inner(std::span<const double> u, std::span<const double> v) const;
};

/// Inverse of a row-major SPD jet matrix (Gauss-Jordan, no pivoting).
std::vector<Jet> invert_spd_jets(std::vector<Jet> a, int n);

/// Throws GeometryError if the metric is not positive definite at p.
MetricJets metric_jets(const ChartManifold& m, std::span<const double> p);

/// Point values of g, Γ and the curvature tensor.
///
/// Curvature sign: R(X,Y) = ∇_Y∇_X - ∇_X∇_Y + ∇_[X,Y], so that a space form
/// of curvature c has R(X,Y)Z = c(<X,Z>Y - <Y,Z>X) and <R(E_a,E_b)E_a,E_b>
/// is the sectional curvature of an orthonormal pair.
struct PointFrameData {
  int n = 0;
  std::vector<double> point;
  std::vector<double> g;        // row-major
  std::vector<double> gamma;    // Γ^c_ab at [(c*n + a)*n + b]
  std::vector<double> riemann;  // R_abcd = <R(∂_a,∂_b)∂_c, ∂_d> at [((a*n+b)*n+c)*n+d]

  double metric(int a, int b) const { return g[a * n + b]; }
  double christoffel(int c, int a, int b) const { return gamma[(c * n + a) * n + b]; }
  double curvature(int a, int b, int c, int d) const { return riemann[((a * n + b) * n + c) * n + d]; }
  /// <R(u,v)u, v>; the sectional curvature when u, v are orthonormal.
  double sectional(std::span<const double> u, std::span<const double> v) const;
};

PointFrameData connection_at(const ChartManifold& m, std::span<const double> p);

/// Covariant curvature tensor (paper sign, see PointFrameData) from jets.
std::vector<double> riemann_tensor(const MetricJets& mj);

/// A vector field given by its coordinate components as a function of the
/// (jet-valued) coordinates, so that its derivatives are exact.
using VectorField = std::function<std::vector<Jet>(std::span<const Jet> x)>;
using ScalarField = std::function<Jet(std::span<const Jet> x)>;

/// Div X = ∂_a X^a + Γ^a_ab X^b, using the first-order part of `field`.
double divergence(const MetricJets& mj, std::span<const Jet> field);
double divergence(const ChartManifold& m, const VectorField& field, std::span<const double> p);

/// Coordinate components of ∇f = g^{ab} ∂_b f, exact to first order.
std::vector<Jet> gradient(const MetricJets& mj, const Jet& f);

/// Div(∇f), the analyst's Laplacian.
double div_grad(const ChartManifold& m, const ScalarField& f, std::span<const double> p);
/// -Div(∇f), the geometer's (non-negative) Laplacian.
double laplacian_geom(const ChartManifold& m, const ScalarField& f, std::span<const double> p);

/// Per-axis resolution; a single entry applies to every axis.
std::vector<int> expand_grid(std::span<const int> grid, int dim);

/// Visits every node of the uniform periodic grid in row-major order.
std::vector<std::vector<double>> grid_points(const ChartManifold& m, std::span<const int> grid);

/// Rectangle-rule quadrature of f dvol_g over a closed chart. Samples are
/// evaluated in parallel and summed in grid order with compensation, so
/// the result does not depend on `threads` (0 = default worker count).
double integrate(const ChartManifold& m, const std::function<double(std::span<const double>)>& f,
                 std::span<const int> grid, int threads = 0);

/// Integrates `width` functions at once: f writes its values into `out`.
/// Returns the integrals; if `abs_integrals` is non-null it receives the
/// integrals of |f_i|.
std::vector<double> integrate_many(const ChartManifold& m, std::size_t width,
                                   const std::function<void(std::span<const double>, std::span<double>)>& f,
                                   std::span<const int> grid, int threads = 0,
                                   std::vector<double>* abs_integrals = nullptr);

}  // namespace splitgeom
