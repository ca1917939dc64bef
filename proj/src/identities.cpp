#include "splitgeom/identities.hpp"

#include <algorithm>
#include <cmath>

namespace splitgeom {

namespace {

// Accumulates signed terms of a right-hand side.
struct Terms {
  double sum = 0.0;
  double abs_sum = 0.0;
  double max_abs = 0.0;

  void add(double t) {
    sum += t;
    abs_sum += std::abs(t);
    max_abs = std::max(max_abs, std::abs(t));
  }
  void merge(const Terms& o, double sign) {
    sum += sign * o.sum;
    abs_sum += o.abs_sum;
    max_abs = std::max(max_abs, o.max_abs);
  }
  IdentityValue value() const {
    IdentityValue v;
    v.rhs = sum;
    v.abs_terms = abs_sum;
    v.max_term = max_abs;
    return v;
  }
};

Subset single(int i) { return Subset(std::vector<int>{i}); }

std::vector<double> sum_singletons(IdentityContext& ctx, const std::vector<int>& members, int n) {
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i : members) {
    const auto& h = ctx.data(single(i)).H;
    for (int a = 0; a < n; ++a) out[a] += h[a];
  }
  return out;
}

}  // namespace

std::string identity_name(IdentityKind kind) {
  switch (kind) {
    case IdentityKind::Main: return "main";
    case IdentityKind::Walczak: return "walczak";
    case IdentityKind::Aux: return "aux";
    case IdentityKind::AuxAsPrinted: return "aux_as_printed";
    case IdentityKind::Companion: return "companion";
    case IdentityKind::CompanionK3: return "companion_k3";
    case IdentityKind::SmixLemma: return "smix_lemma";
  }
  return "unknown";
}

double IdentityValue::relative() const { return std::abs(residual) / (1.0 + max_term); }

void check_identity_range(IdentityKind kind, int k, int r) {
  if (k < 2) throw ArgumentError("identities need k >= 2");
  switch (kind) {
    case IdentityKind::Walczak:
      if (k != 2) throw ArgumentError("walczak identity needs k = 2 (k=" + std::to_string(k) + ")");
      break;
    case IdentityKind::Aux:
    case IdentityKind::AuxAsPrinted:
      if (r < 2 || r > k - 1)
        throw ArgumentError("r out of range: aux needs 2 <= r <= k-1 (r=" + std::to_string(r) +
                            ", k=" + std::to_string(k) + ")");
      break;
    case IdentityKind::Companion:
      if (k < 3) throw ArgumentError("companion identity needs k >= 3 (k=" + std::to_string(k) + ")");
      break;
    case IdentityKind::CompanionK3:
      if (k != 3) throw ArgumentError("companion_k3 needs k = 3 (k=" + std::to_string(k) + ")");
      break;
    case IdentityKind::Main:
    case IdentityKind::SmixLemma: break;
  }
}

std::vector<FieldTerm> identity_field(IdentityKind kind, int k, int r) {
  check_identity_range(kind, k, r);
  std::map<Subset, double> coef;
  switch (kind) {
    case IdentityKind::Main:
      for (int rr : {1, k - 1})
        for (const auto& q : subsets(rr, k)) coef[q] += 1.0;
      break;
    case IdentityKind::Walczak:
    case IdentityKind::CompanionK3:
      for (int i = 0; i < k; ++i) coef[single(i)] += 1.0;
      break;
    case IdentityKind::Aux:
    case IdentityKind::AuxAsPrinted:
      for (const auto& q : subsets(r, k)) coef[q] += 1.0;
      for (int i = 0; i < k; ++i) coef[single(i)] -= static_cast<double>(binomial(k - 2, r - 1));
      break;
    case IdentityKind::Companion:
      for (int i = 0; i < k; ++i) coef[single(i)] += 2.0;
      break;
    case IdentityKind::SmixLemma: break;
  }
  std::vector<FieldTerm> out;
  for (const auto& [q, c] : coef)
    if (c != 0.0) out.push_back({c, q});
  return out;
}

IdentityContext::Entry& IdentityContext::entry(const Subset& q) {
  auto it = cache_.find(q);
  if (it == cache_.end()) it = cache_.emplace(q, Entry{sp_.fundamental(q)}).first;
  return it->second;
}

const FundamentalData& IdentityContext::data(const Subset& q) { return entry(q).data; }

double IdentityContext::div_mean_curvature(const Subset& q) {
  Entry& e = entry(q);
  if (!e.have_div) {
    e.div = sp_.divergence(sp_.mean_curvature(q));
    e.have_div = true;
  }
  return e.div;
}

double IdentityContext::divergence(std::span<const FieldTerm> field) {
  double s = 0.0;
  for (const auto& t : field) s += t.coefficient * div_mean_curvature(t.q);
  return s;
}

IdentityValue IdentityContext::main_rhs() {
  const int k = sp_.k();
  Terms t;
  t.add(2.0 * sp_.smix());
  for (int r : {1, k - 1})
    for (const auto& q : subsets(r, k)) {
      const auto& fd = data(q);
      t.add(fd.h_norm2);
      t.add(-fd.H_norm2);
      t.add(-fd.T_norm2);
    }
  return t.value();
}

IdentityValue IdentityContext::walczak_rhs() {
  Terms t;
  t.add(sp_.smix());
  for (int i = 0; i < 2; ++i) {
    const auto& fd = data(single(i));
    t.add(fd.h_norm2);
    t.add(-fd.H_norm2);
    t.add(-fd.T_norm2);
  }
  return t.value();
}

IdentityValue IdentityContext::aux_rhs(int r) {
  const int k = sp_.k(), n = sp_.dim();
  const double c = static_cast<double>(binomial(k - 2, r - 1));
  Terms t;
  for (int i = 0; i < k; ++i) t.add(c * data(single(i)).H_norm2);
  for (const auto& q : subsets(r, k)) {
    const auto& hq = data(q).H;
    auto inside = sum_singletons(*this, q.members(), n);
    const auto outside = sum_singletons(*this, q.complement(k).members(), n);
    for (int a = 0; a < n; ++a) inside[a] -= hq[a];
    t.add(sp_.inner(inside, outside));
    t.add(-data(q).H_norm2);
  }
  return t.value();
}

IdentityValue IdentityContext::aux_printed_rhs(int r) {
  const int k = sp_.k(), n = sp_.dim();
  Terms t;
  for (const auto& q : subsets(r, k)) {
    const auto& hq = data(q).H;
    auto inside = sum_singletons(*this, q.members(), n);
    const auto outside = sum_singletons(*this, q.complement(k).members(), n);
    for (int a = 0; a < n; ++a) inside[a] -= r * hq[a];
    t.add(data(q).H_norm2);
    t.add(sp_.inner(inside, outside));
  }
  return t.value();
}

double IdentityContext::inner_h(const Subset& a, const Subset& b) { return sp_.inner(data(a).H, data(b).H); }

IdentityValue IdentityContext::companion_k3_rhs() {
  Terms t;
  t.add(sp_.smix());
  for (int i = 0; i < 3; ++i) {
    const auto& fd = data(single(i));
    t.add(-fd.H_norm2);
    t.add(0.5 * fd.h_norm2);
    t.add(-0.5 * fd.T_norm2);
  }
  for (const auto& q : subsets(2, 3)) {
    t.add(-inner_h(single(q[0]), single(q[1])));
    const auto& fd = data(q);
    t.add(0.5 * fd.h_norm2);
    t.add(-0.5 * fd.T_norm2);
  }
  return t.value();
}

IdentityValue IdentityContext::evaluate(IdentityKind kind, int r) {
  const int k = sp_.k();
  check_identity_range(kind, k, r);
  IdentityValue v;
  switch (kind) {
    case IdentityKind::Main: v = main_rhs(); break;
    case IdentityKind::Walczak: v = walczak_rhs(); break;
    case IdentityKind::Aux: v = aux_rhs(r); break;
    case IdentityKind::AuxAsPrinted: v = aux_printed_rhs(r); break;
    case IdentityKind::Companion: {
      Terms t;
      const auto main = main_rhs();
      const auto aux = aux_rhs(k - 1);
      t.sum = main.rhs - aux.rhs;
      t.abs_sum = main.abs_terms + aux.abs_terms;
      t.max_abs = std::max(main.max_term, aux.max_term);
      v = t.value();
      break;
    }
    case IdentityKind::CompanionK3: v = companion_k3_rhs(); break;
    case IdentityKind::SmixLemma: {
      Terms t;
      for (int i = 0; i < k; ++i) t.add(sp_.smix_pairsplit(i));
      v = t.value();
      v.lhs = 2.0 * sp_.smix();
      v.residual = v.lhs - v.rhs;
      v.max_term = std::max(v.max_term, std::abs(v.lhs));
      return v;
    }
  }
  const auto field = identity_field(kind, k, r);
  v.lhs = divergence(field);
  v.residual = v.lhs - v.rhs;
  v.max_term = std::max(v.max_term, std::abs(v.lhs));
  return v;
}

namespace {

double evaluate_once(const SplitStructure& s, const ChartManifold& m, std::span<const double> p,
                     IdentityKind kind, int r) {
  check_identity_range(kind, s.k(), r);
  SplitPoint sp(m, s, p);
  IdentityContext ctx(sp);
  return ctx.evaluate(kind, r).residual;
}

}  // namespace

double residual_main(const SplitStructure& s, const ChartManifold& m, std::span<const double> p) {
  return evaluate_once(s, m, p, IdentityKind::Main, 0);
}

double residual_walczak(const SplitStructure& s, const ChartManifold& m, std::span<const double> p) {
  return evaluate_once(s, m, p, IdentityKind::Walczak, 0);
}

double residual_aux(const SplitStructure& s, const ChartManifold& m, int r, std::span<const double> p) {
  return evaluate_once(s, m, p, IdentityKind::Aux, r);
}

double residual_companion(const SplitStructure& s, const ChartManifold& m, std::span<const double> p) {
  return evaluate_once(s, m, p, IdentityKind::Companion, 0);
}

double residual_smix_lemma(const SplitStructure& s, const ChartManifold& m, std::span<const double> p) {
  return evaluate_once(s, m, p, IdentityKind::SmixLemma, 0);
}

double IntegralResult::ratio() const {
  if (normalizer == 0.0) return std::abs(integral) == 0.0 ? 0.0 : INFINITY;
  return std::abs(integral) / normalizer;
}

double IntegralResult::stokes_ratio() const {
  if (normalizer == 0.0) return std::abs(stokes) == 0.0 ? 0.0 : INFINITY;
  return std::abs(stokes) / normalizer;
}

std::vector<IntegralResult> integral_checks(const SplitStructure& s, const ChartManifold& m,
                                            std::span<const IdentityKind> kinds, std::span<const int> rs,
                                            std::span<const int> grid, int threads) {
  if (kinds.size() != rs.size()) throw ArgumentError("kinds and rs must have the same length");
  if (!m.closed()) throw ArgumentError("integral checks need a closed (fully periodic) chart");
  for (std::size_t i = 0; i < kinds.size(); ++i) check_identity_range(kinds[i], s.k(), rs[i]);
  const std::size_t count = kinds.size();
  auto f = [&](std::span<const double> p, std::span<double> out) {
    SplitPoint sp(m, s, p);
    IdentityContext ctx(sp);
    for (std::size_t i = 0; i < count; ++i) {
      const auto v = ctx.evaluate(kinds[i], rs[i]);
      out[3 * i] = v.rhs;
      out[3 * i + 1] = v.lhs;
      out[3 * i + 2] = v.abs_terms;
    }
  };
  const auto totals = integrate_many(m, 3 * count, f, grid, threads);
  std::vector<IntegralResult> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i].integral = totals[3 * i];
    out[i].stokes = totals[3 * i + 1];
    out[i].normalizer = totals[3 * i + 2];
  }
  return out;
}

}  // namespace splitgeom
