#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "splitgeom/kproduct.hpp"

namespace splitgeom {

/// The divergence identities. Each has the form Div X = F where X is a
/// combination of mean curvature fields H_q and F is built from S_mix and the
/// fundamental tensors.
enum class IdentityKind {
  Main,          // X = Σ_{r∈{1,k-1}} Σ_{q∈S(r,k)} H_q
  Walczak,       // k = 2: Div(H_1 + H_2) = S_mix + Σ_i (|h_i|² - |H_i|² - |T_i|²)
  Aux,           // X = Σ_{q∈S(r,k)} H_q - C(k-2, r-1) Σ_i H_i, 2 <= r <= k-1
  AuxAsPrinted,  // Aux field against the alternative right-hand side (diagnostic)
  Companion,     // 2 Div(Σ_i H_i) = RHS(Main) - RHS(Aux, r = k-1)
  CompanionK3,   // k = 3 expanded form of the companion, for Div(H_1 + H_2 + H_3)
  SmixLemma,     // 2 S_mix = Σ_i S_mix(D_i, D_i^⊥)
};

std::string identity_name(IdentityKind kind);

/// One pointwise evaluation: residual = lhs - rhs.
struct IdentityValue {
  double lhs = 0.0;
  double rhs = 0.0;
  double residual = 0.0;
  double max_term = 0.0;   // largest |term| on either side
  double abs_terms = 0.0;  // Σ |terms| of the right-hand side

  double relative() const;
};

/// X = Σ coefficient · H_q.
struct FieldTerm {
  double coefficient = 0.0;
  Subset q;
};

std::vector<FieldTerm> identity_field(IdentityKind kind, int k, int r = 0);

/// Throws ArgumentError when (kind, k, r) is outside the identity's range.
void check_identity_range(IdentityKind kind, int k, int r);

/// Per-point cache of fundamental data and Div H_q shared by every identity
/// evaluated at that point.
class IdentityContext {
 public:
  explicit IdentityContext(const SplitPoint& sp) : sp_(sp) {}

  const SplitPoint& point() const { return sp_; }
  const FundamentalData& data(const Subset& q);
  double div_mean_curvature(const Subset& q);
  double divergence(std::span<const FieldTerm> field);

  IdentityValue evaluate(IdentityKind kind, int r = 0);

 private:
  struct Entry {
    FundamentalData data;
    bool have_div = false;
    double div = 0.0;
  };
  Entry& entry(const Subset& q);

  IdentityValue main_rhs();
  IdentityValue walczak_rhs();
  IdentityValue aux_rhs(int r);
  IdentityValue aux_printed_rhs(int r);
  IdentityValue companion_k3_rhs();
  double inner_h(const Subset& a, const Subset& b);

  const SplitPoint& sp_;
  std::map<Subset, Entry> cache_;
};

double residual_main(const SplitStructure& s, const ChartManifold& m, std::span<const double> p);
double residual_walczak(const SplitStructure& s, const ChartManifold& m, std::span<const double> p);
double residual_aux(const SplitStructure& s, const ChartManifold& m, int r, std::span<const double> p);
double residual_companion(const SplitStructure& s, const ChartManifold& m, std::span<const double> p);
double residual_smix_lemma(const SplitStructure& s, const ChartManifold& m, std::span<const double> p);

/// Result of integrating one identity over a closed chart.
struct IntegralResult {
  double integral = 0.0;    // ∫ RHS dvol
  double normalizer = 0.0;  // ∫ Σ|terms| dvol
  double stokes = 0.0;      // ∫ Div X dvol
  double ratio() const;          // |integral| / normalizer (0 when the integrand vanishes)
  double stokes_ratio() const;   // |stokes| / normalizer
};

/// Integrates the right-hand sides of several identities in one grid pass.
std::vector<IntegralResult> integral_checks(const SplitStructure& s, const ChartManifold& m,
                                            std::span<const IdentityKind> kinds, std::span<const int> rs,
                                            std::span<const int> grid, int threads = 0);

}  // namespace splitgeom
