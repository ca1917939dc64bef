#pragma once

#include <compare>
#include <span>
#include <string>
#include <vector>

#include "splitgeom/chart.hpp"
#include "splitgeom/expr.hpp"

namespace splitgeom {

/// A subset q = {q_1 < ... < q_r} of the distribution indices {0..k-1}.
/// Printed 1-based, e.g. "{1,3}".
class Subset {
 public:
  Subset() = default;
  /// Members must be strictly increasing and non-negative.
  explicit Subset(std::vector<int> members);

  const std::vector<int>& members() const { return members_; }
  int size() const { return static_cast<int>(members_.size()); }
  int operator[](int i) const { return members_[i]; }
  bool contains(int i) const;
  Subset complement(int k) const;
  std::string str() const;

  friend bool operator==(const Subset&, const Subset&) = default;
  friend auto operator<=>(const Subset&, const Subset&) = default;

 private:
  std::vector<int> members_;
};

/// All r-element subsets of {0..k-1} in lexicographic order; C(k,r) of them.
std::vector<Subset> subsets(int r, int k);

/// Binomial coefficient C(n, r); 0 when r is outside 0..n.
long long binomial(int n, int r);

/// The k distributions: block sizes n_1..n_k and a spanning frame of n
/// vector fields, the first n_1 spanning D_1, the next n_2 spanning D_2...
///
/// The adapted frame is obtained by Gram-Schmidt over the whole sequence in
/// input order, so D_1 is the span of block 1 and D_i is the span of block i
/// projected onto (D_1 + ... + D_{i-1})^⊥. Blocks that are already mutually
/// orthogonal are left untouched.
class SplitStructure {
 public:
  /// frame[a] holds the n coordinate components of spanning vector a.
  SplitStructure(std::vector<int> dims, std::vector<std::vector<Expr>> frame);

  /// Coordinate frame ∂_1..∂_n grouped into blocks.
  static SplitStructure coordinate(std::vector<int> dims);

  int k() const { return static_cast<int>(dims_.size()); }
  int dim() const { return n_; }
  const std::vector<int>& dims() const { return dims_; }
  int offset(int block) const { return offsets_[block]; }
  int block_of(int frame_index) const { return block_of_[frame_index]; }
  const std::vector<std::vector<Expr>>& frame() const { return frame_; }

  /// Frame components as jets, row-major [vector * n + component].
  std::vector<Jet> frame_jets(std::span<const Jet> x) const;

 private:
  std::vector<int> dims_;
  std::vector<int> offsets_;
  std::vector<int> block_of_;
  std::vector<std::vector<Expr>> frame_;
  int n_ = 0;
};

/// Orthonormal adapted frame and the orthoprojectors P_i at a point.
struct AdaptedFrame {
  int n = 0;
  int k = 0;
  std::vector<double> frame;                     // E_a^i at [a * n + i]
  std::vector<std::vector<double>> projectors;   // P_i as n×n matrices (P^i_j at [i*n + j])
};

/// Second fundamental form, integrability tensor and mean curvature of
/// D_q = ⊕_{i∈q} D_i in the adapted frame.
struct FundamentalData {
  Subset q;
  std::vector<int> inside;   // adapted-frame indices spanning D_q
  std::vector<int> outside;  // adapted-frame indices spanning D_q^⊥
  std::vector<double> h;     // h_q(E_a,E_b) along E_c at [(a*|in| + b)*|out| + c] (local indices)
  std::vector<double> T;     // same layout
  std::vector<double> H;     // coordinate components of H_q
  std::vector<double> H_frame;  // components of H_q along the outside frame vectors
  double h_norm2 = 0.0;      // sums over ordered pairs (a,b) of D_q
  double T_norm2 = 0.0;
  double H_norm2 = 0.0;

  double h_at(int a, int b, int c) const { return h[(a * inside.size() + b) * outside.size() + c]; }
  double T_at(int a, int b, int c) const { return T[(a * inside.size() + b) * outside.size() + c]; }
};

/// Everything the identities need at one point: metric jets, the adapted
/// frame as jets, the frame connection coefficients ω_abc = <∇_{E_a}E_b, E_c>
/// (exact to first order) and, optionally, curvature.
class SplitPoint {
 public:
  SplitPoint(const ChartManifold& m, const SplitStructure& s, std::span<const double> p,
             bool with_curvature = true);

  int dim() const { return n_; }
  int k() const { return k_; }
  const std::vector<int>& dims() const { return dims_; }
  int block_of(int a) const { return block_of_[a]; }
  const MetricJets& metric() const { return mj_; }
  std::span<const double> point() const { return mj_.point; }

  const Jet& frame(int a, int i) const { return frame_[a * n_ + i]; }
  const Jet& omega_jet(int a, int b, int c) const { return omega_[(a * n_ + b) * n_ + c]; }
  double omega(int a, int b, int c) const { return omega_jet(a, b, c).value(); }

  AdaptedFrame adapted_frame() const;
  std::vector<double> projector(const Subset& q) const;

  FundamentalData fundamental(const Subset& q) const;
  /// H_q as coordinate-component jets (exact to first order).
  std::vector<Jet> mean_curvature(const Subset& q) const;

  /// <R(E_a,E_b)E_a, E_b> for adapted frame vectors a, b.
  double frame_sectional(int a, int b) const { return sectional_[a * n_ + b]; }
  double mixed_curvature(int i, int j) const;
  double smix() const;
  /// S_mix(D_i, D_i^⊥).
  double smix_pairsplit(int i) const;

  double divergence(std::span<const Jet> field) const { return splitgeom::divergence(mj_, field); }
  /// Σ_{a ∈ D_q} <∇_{E_a} X, E_a>.
  double partial_divergence(const Subset& q, std::span<const Jet> field) const;

  double inner(std::span<const double> u, std::span<const double> v) const { return mj_.inner(u, v); }

 private:
  int n_ = 0;
  int k_ = 0;
  std::vector<int> dims_;
  std::vector<int> block_of_;
  MetricJets mj_;
  std::vector<Jet> frame_;      // E_a^i
  std::vector<Jet> omega_;      // ω_abc
  std::vector<double> sectional_;
  bool with_curvature_ = true;
};

AdaptedFrame adapted_frame(const SplitStructure& s, const ChartManifold& m, std::span<const double> p);
FundamentalData fundamental_data(const SplitStructure& s, const ChartManifold& m, const Subset& q,
                                 std::span<const double> p);
double mixed_curvature_pair(const SplitStructure& s, const ChartManifold& m, int i, int j,
                            std::span<const double> p);
double smix(const SplitStructure& s, const ChartManifold& m, std::span<const double> p);
double smix_pairsplit(const SplitStructure& s, const ChartManifold& m, int i, std::span<const double> p);
double partial_divergence(const SplitStructure& s, const ChartManifold& m, const Subset& q,
                          const VectorField& field, std::span<const double> p);

struct PairPredicates {
  bool mixed_totally_geodesic = false;
  bool mixed_integrable = false;
  double sup_h = 0.0;  // sup over samples of |h_ij restricted to D_i × D_j|
  double sup_T = 0.0;
};

/// Cross-block parts of h_{ij} and T_{ij} (X ∈ D_i, Y ∈ D_j, values in
/// D_{ij}^⊥), maximised over the samples. Needs k > 2.
PairPredicates pair_predicates(const SplitStructure& s, const ChartManifold& m, int i, int j,
                               std::span<const std::vector<double>> samples, double tolerance = 1e-9);

/// Norm of the part of h_q (or T_q) with X ∈ D_i, Y ∈ D_j for blocks i≠j in q.
double cross_block_norm(const FundamentalData& fd, const SplitPoint& sp, int i, int j, bool integrability);

}  // namespace splitgeom
