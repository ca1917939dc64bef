#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "splitgeom/kproduct.hpp"

namespace splitgeom {

/// A chart together with a k-split.
struct Geometry {
  ChartManifold manifold;
  SplitStructure split;
};

/// Flat torus [0,2π]^n whose first two coordinate directions are rotated by
/// the angle f(x) before being grouped into blocks of sizes `dims`:
///   X_1 = cos f ∂_1 + sin f ∂_2,  X_2 = -sin f ∂_1 + cos f ∂_2,  X_a = ∂_a (a > 2).
/// `twist` must be 2π-periodic in every coordinate (checked on samples).
Geometry build_twisted_torus(const std::vector<int>& dims, const std::string& twist);

/// Multiply warped product F_1 ×_{u_2} F_2 × ... ×_{u_k} F_k of flat tori,
/// all coordinates 2π-periodic. The warping functions depend on the base
/// coordinates x1..x_{n_1} only.
struct WarpedSpec {
  int base_dim = 1;
  std::vector<int> fiber_dims;
  std::vector<std::string> warping;  // u_2..u_k
};

/// Pointwise residuals of the warped-product formulas. The closed forms use
/// the base Laplacian Δ_B u = Σ_a ∂_a² u (flat base).
struct WarpedResiduals {
  double mean_curvature = 0.0;   // max_i |H_i + n_i ∇log u_i|
  double div_printed = 0.0;      // max_i |Div H_i - (-n_i Δ_B u_i/u_i - (n_i²-n_i)|P_î∇u_i|²/u_i²)|
  double div_corrected = 0.0;    // same, including the cross terms -n_i Σ_{j≠i} n_j <∇u_i,∇u_j>/(u_i u_j)
  double smix_printed = 0.0;     // |S_mix - Σ_i n_i (-Δ_B u_i)/u_i|
  double smix_corrected = 0.0;   // same, including -Σ_{i<j} n_i n_j <∇u_i,∇u_j>/(u_i u_j)
  double base_geodesic = 0.0;    // |h_1|
  double cross_gradients = 0.0;  // max_{i<j} |<∇u_i,∇u_j>|/(u_i u_j)
  double max_term = 0.0;
};

class WarpedModel {
 public:
  explicit WarpedModel(WarpedSpec spec);

  const WarpedSpec& spec() const { return spec_; }
  const Geometry& geometry() const { return geometry_; }
  int k() const { return static_cast<int>(spec_.fiber_dims.size()) + 1; }

  WarpedResiduals residuals(std::span<const double> p) const;

 private:
  WarpedSpec spec_;
  std::vector<Expr> u_;
  Geometry geometry_;
};

/// Immersion F of a chart box into R^{n+1} (c = 0) or into the unit sphere
/// S^{n+1} ⊂ R^{n+2} (c = 1).
struct HypersurfaceSpec {
  int dim = 2;
  int curvature = 0;  // c ∈ {0, 1}
  std::vector<std::string> immersion;
  std::vector<Axis> axes;
  std::vector<int> multiplicities;  // expected n_i in ascending order of μ
  double orientation = 1.0;         // multiplies the generalized cross-product normal
  double gap_fraction = 1e-3;       // minimal gap relative to max|μ|
  /// Optional closed-form frame of the principal distributions (same
  /// layout as SplitStructure), enabling the generic identities.
  std::vector<std::vector<std::string>> principal_frame;
};

/// Principal curvatures and directions at one point.
struct PrincipalData {
  int n = 0;
  std::vector<double> mu;            // all eigenvalues, ascending
  std::vector<double> distinct;      // grouped values μ̂_1 < ... < μ̂_k
  std::vector<int> multiplicity;
  std::vector<int> group_of;         // eigenvector -> group
  std::vector<double> frame;         // g-orthonormal eigenvectors, [a*n + i]
  std::vector<std::vector<double>> grad_mu;     // ∇μ̂_i, coordinate components
  std::vector<std::vector<double>> projectors;  // P_i as n×n matrices
  std::vector<double> g;             // metric, row-major
  std::vector<double> shape;         // A = g^{-1} II, row-major (A^a_b at [a*n + b])
  double sqrt_det = 0.0;

  double inner(std::span<const double> u, std::span<const double> v) const;
};

struct CodazziResiduals {
  double symmetry = 0.0;       // (i) max over permutations
  double lemma_cross = 0.0;    // (ii) j ≠ l
  double lemma_diag = 0.0;     // (iii)
  double corollary = 0.0;      // (iv) i, j, l distinct
  double max_term = 0.0;
  bool simple_spectrum = false;  // (ii)-(iv) evaluated only when all n_i = 1
};

struct HypersurfaceIdentity {
  double lhs = 0.0;          // Div Σ_i n_i Σ_{j≠i} P_j ∇μ_i/(μ_i - μ_j)
  /// S_mix + Σ_i n_i(1-n_i) Σ_{j≠i} |P_j∇μ_i|²/(μ_i-μ_j)², and for k = 3 also
  /// -Σ_{i<j} n_i n_j <P_l∇μ_i, P_l∇μ_j>/((μ_i-μ_l)(μ_j-μ_l)) with l the third index.
  double rhs = 0.0;
  /// k = 3: ½ S_mix + gradient terms, without the cross term.
  /// k = 2: uses |∇μ_i|² in place of |P_j∇μ_i|².
  double rhs_printed = 0.0;
  double residual = 0.0;
  double residual_printed = 0.0;
  double max_term = 0.0;
};

struct DperpResult {
  bool forall_zero_A_cross = false;   // every |A(X_i,X_j,X_l)| <= tolerance (i<j<l)
  bool brackets_tangent = false;      // every <[X_j,X_l], X_i> <= tolerance
  double sup_A = 0.0;
  double sup_bracket = 0.0;
  bool flags_agree_everywhere = true;  // per-sample agreement of the two flags
};

class HypersurfaceModel {
 public:
  explicit HypersurfaceModel(HypersurfaceSpec spec);

  const HypersurfaceSpec& spec() const { return spec_; }
  int dim() const { return spec_.dim; }
  int k() const { return static_cast<int>(spec_.multiplicities.size()); }
  double curvature() const { return spec_.curvature; }
  /// Induced metric DFᵀDF as a chart.
  const ChartManifold& manifold() const { return manifold_; }
  /// Present when `principal_frame` was given.
  const std::optional<SplitStructure>& split() const { return split_; }

  /// Throws GeometryError on rank loss, |F| != 1 for c = 1, a multiplicity
  /// mismatch or a gap violation.
  PrincipalData principal_data(std::span<const double> p) const;

  /// Per unit pair: max |K(X_i,X_j) - (c + μ_i μ_j)| over eigenvectors of different groups.
  double mixed_curvature_residual(std::span<const double> p) const;

  CodazziResiduals codazzi(std::span<const double> p) const;
  HypersurfaceIdentity identity(std::span<const double> p) const;
  DperpResult dperp_integrability(std::span<const std::vector<double>> samples, double tolerance = 1e-6) const;

  /// Central-difference step at p: cbrt(machine epsilon) · max(1, max|p_i|).
  /// Every stencil is Richardson-extrapolated over h and h/2.
  double fd_step(std::span<const double> p) const;

 private:
  struct Embedding;
  Embedding embed(std::span<const double> p) const;
  std::vector<double> aligned_frame(std::span<const double> p, const PrincipalData& ref) const;
  std::vector<double> theorem_field(std::span<const double> p) const;
  /// ω_{abc} = <∇_{X_a} X_b, X_c> over the eigenframe, by central differences.
  std::vector<double> frame_connection(std::span<const double> p, const PrincipalData& pd) const;

  HypersurfaceSpec spec_;
  std::vector<Expr> F_;
  std::vector<std::vector<Expr>> dF_;   // [a][component]
  std::vector<std::vector<Expr>> ddF_;  // [a*n + b][component]
  ChartManifold manifold_;
  std::optional<SplitStructure> split_;
};

/// Right-hand side of the k = 3 hypersurface identity from pointwise data:
/// coefficient · Σ_{i<j} n_i n_j (c + μ_i μ_j) + Σ_i n_i(1-n_i) gradient_terms[i].
double hypersurface_k3_rhs(std::span<const double> mu, std::span<const int> n, double c,
                           std::span<const double> gradient_terms, double smix_coefficient);

}  // namespace splitgeom
