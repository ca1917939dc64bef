#include "splitgeom/kproduct.hpp"

#include <algorithm>
#include <cmath>

namespace splitgeom {

Subset::Subset(std::vector<int> members) : members_(std::move(members)) {
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (members_[i] < 0) throw ArgumentError("subset members must be non-negative");
    if (i > 0 && members_[i] <= members_[i - 1]) throw ArgumentError("subset members must be strictly increasing");
  }
}

bool Subset::contains(int i) const { return std::binary_search(members_.begin(), members_.end(), i); }

Subset Subset::complement(int k) const {
  std::vector<int> out;
  for (int i = 0; i < k; ++i)
    if (!contains(i)) out.push_back(i);
  return Subset(std::move(out));
}

std::string Subset::str() const {
  std::string s = "{";
  for (std::size_t i = 0; i < members_.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(members_[i] + 1);
  }
  return s + "}";
}

std::vector<Subset> subsets(int r, int k) {
  if (k < 1 || r < 1 || r > k)
    throw ArgumentError("r out of range: need 1 <= r <= k (r=" + std::to_string(r) + ", k=" + std::to_string(k) + ")");
  std::vector<Subset> out;
  std::vector<int> idx(static_cast<std::size_t>(r));
  for (int i = 0; i < r; ++i) idx[i] = i;
  for (;;) {
    out.emplace_back(idx);
    int i = r - 1;
    while (i >= 0 && idx[i] == k - r + i) --i;
    if (i < 0) break;
    ++idx[i];
    for (int j = i + 1; j < r; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

long long binomial(int n, int r) {
  if (r < 0 || r > n) return 0;
  r = std::min(r, n - r);
  long long c = 1;
  for (int i = 1; i <= r; ++i) c = c * (n - r + i) / i;
  return c;
}

SplitStructure::SplitStructure(std::vector<int> dims, std::vector<std::vector<Expr>> frame)
    : dims_(std::move(dims)), frame_(std::move(frame)) {
  if (dims_.size() < 2) throw ArgumentError("a split needs at least two distributions");
  for (int d : dims_) {
    if (d < 1) throw ArgumentError("distribution dimensions must be positive");
    offsets_.push_back(n_);
    for (int i = 0; i < d; ++i) block_of_.push_back(static_cast<int>(offsets_.size()) - 1);
    n_ += d;
  }
  if (static_cast<int>(frame_.size()) != n_) throw ArgumentError("spanning frame must have sum(dims) vectors");
  for (const auto& v : frame_)
    if (static_cast<int>(v.size()) != n_) throw ArgumentError("frame vectors must have n components");
}

SplitStructure SplitStructure::coordinate(std::vector<int> dims) {
  int n = 0;
  for (int d : dims) n += d;
  std::vector<std::vector<Expr>> frame(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) frame[a][i] = Expr::constant(a == i ? 1.0 : 0.0);
  return SplitStructure(std::move(dims), std::move(frame));
}

std::vector<Jet> SplitStructure::frame_jets(std::span<const Jet> x) const {
  std::vector<Jet> out;
  out.reserve(static_cast<std::size_t>(n_ * n_));
  for (const auto& v : frame_)
    for (const auto& e : v) out.push_back(e.eval<Jet>(x));
  return out;
}

SplitPoint::SplitPoint(const ChartManifold& m, const SplitStructure& s, std::span<const double> p,
                       bool with_curvature)
    : n_(m.dim()), k_(s.k()), dims_(s.dims()), with_curvature_(with_curvature) {
  if (s.dim() != n_) throw ArgumentError("split dimension does not match chart dimension");
  for (int a = 0; a < n_; ++a) block_of_.push_back(s.block_of(a));
  mj_ = metric_jets(m, p);
  const int n = n_;

  // Gram-Schmidt on jets in input order.
  frame_ = s.frame_jets(mj_.x);
  std::vector<Jet> lowered(static_cast<std::size_t>(n * n));  // (E_a)_i = g_ij E_a^j
  for (int a = 0; a < n; ++a) {
    Jet* v = &frame_[a * n];
    double input_norm2 = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) input_norm2 += mj_.metric(i, j).value() * v[i].value() * v[j].value();
    for (int b = 0; b < a; ++b) {
      Jet c(n, 0.0);
      for (int i = 0; i < n; ++i) c.add_product(lowered[b * n + i], v[i]);
      for (int i = 0; i < n; ++i) v[i] -= c * frame_[b * n + i];
    }
    Jet norm2(n, 0.0);
    for (int i = 0; i < n; ++i) {
      Jet li(n, 0.0);
      for (int j = 0; j < n; ++j) li.add_product(mj_.metric(i, j), v[j]);
      norm2.add_product(li, v[i]);
    }
    if (!(norm2.value() > 1e-24 * std::max(input_norm2, 1e-300)) || !(input_norm2 > 0.0))
      throw GeometryError("spanning frame is rank deficient at vector " + std::to_string(a + 1));
    const Jet inv_norm = reciprocal(sqrt(norm2));
    for (int i = 0; i < n; ++i) v[i] *= inv_norm;
    for (int i = 0; i < n; ++i) {
      Jet li(n, 0.0);
      for (int j = 0; j < n; ++j) li.add_product(mj_.metric(i, j), v[j]);
      lowered[a * n + i] = li;
    }
  }

  // Covariant derivative of each frame vector along each coordinate:
  // cov[(b*n + j)*n + i] = ∂_j E_b^i + Γ^i_jl E_b^l.
  std::vector<Jet> cov(static_cast<std::size_t>(n * n * n));
  for (int b = 0; b < n; ++b)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        Jet d = frame_[b * n + i].derivative(j);
        for (int l = 0; l < n; ++l) d.add_product(mj_.christoffel(i, j, l), frame_[b * n + l]);
        cov[(b * n + j) * n + i] = d;
      }
  // ω_abc = Σ_j E_a^j <cov_j E_b, E_c>.
  omega_.assign(static_cast<std::size_t>(n * n * n), Jet(0.0));
  std::vector<Jet> w(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < n; ++i) {
        Jet acc(n, 0.0);
        for (int j = 0; j < n; ++j) acc.add_product(frame_[a * n + j], cov[(b * n + j) * n + i]);
        w[i] = acc;
      }
      for (int c = 0; c < n; ++c) {
        Jet acc(n, 0.0);
        for (int i = 0; i < n; ++i) acc.add_product(w[i], lowered[c * n + i]);
        omega_[(a * n + b) * n + c] = acc;
      }
    }

  sectional_.assign(static_cast<std::size_t>(n * n), 0.0);
  if (with_curvature_) {
    const auto r = riemann_tensor(mj_);
    std::vector<double> e(static_cast<std::size_t>(n * n));
    for (int i = 0; i < n * n; ++i) e[i] = frame_[i].value();
    std::vector<double> t1(static_cast<std::size_t>(n * n * n)), t2(static_cast<std::size_t>(n * n));
    for (int a = 0; a < n; ++a) {
      // t1_jkl = R_ijkl E_a^i ; t2_jl = t1_jkl E_a^k
      std::fill(t1.begin(), t1.end(), 0.0);
      for (int i = 0; i < n; ++i) {
        const double ea = e[a * n + i];
        if (ea == 0.0) continue;
        for (int jkl = 0; jkl < n * n * n; ++jkl) t1[jkl] += r[i * n * n * n + jkl] * ea;
      }
      std::fill(t2.begin(), t2.end(), 0.0);
      for (int j = 0; j < n; ++j)
        for (int kk = 0; kk < n; ++kk)
          for (int l = 0; l < n; ++l) t2[j * n + l] += t1[(j * n + kk) * n + l] * e[a * n + kk];
      for (int b = 0; b < n; ++b) {
        double s = 0.0;
        for (int j = 0; j < n; ++j)
          for (int l = 0; l < n; ++l) s += t2[j * n + l] * e[b * n + j] * e[b * n + l];
        sectional_[a * n + b] = s;
      }
    }
  }
}

AdaptedFrame SplitPoint::adapted_frame() const {
  AdaptedFrame af;
  af.n = n_;
  af.k = k_;
  af.frame.resize(static_cast<std::size_t>(n_ * n_));
  for (int i = 0; i < n_ * n_; ++i) af.frame[i] = frame_[i].value();
  for (int blk = 0; blk < k_; ++blk) af.projectors.push_back(projector(Subset({blk})));
  return af;
}

std::vector<double> SplitPoint::projector(const Subset& q) const {
  const int n = n_;
  std::vector<double> p(static_cast<std::size_t>(n * n), 0.0);
  for (int a = 0; a < n; ++a) {
    if (!q.contains(block_of_[a])) continue;
    std::vector<double> low(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) low[i] += mj_.metric(i, j).value() * frame_[a * n + j].value();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) p[i * n + j] += frame_[a * n + i].value() * low[j];
  }
  return p;
}

FundamentalData SplitPoint::fundamental(const Subset& q) const {
  FundamentalData fd;
  fd.q = q;
  for (int a = 0; a < n_; ++a) (q.contains(block_of_[a]) ? fd.inside : fd.outside).push_back(a);
  const std::size_t ni = fd.inside.size(), no = fd.outside.size();
  fd.h.assign(ni * ni * no, 0.0);
  fd.T.assign(ni * ni * no, 0.0);
  fd.H_frame.assign(no, 0.0);
  for (std::size_t a = 0; a < ni; ++a)
    for (std::size_t b = 0; b < ni; ++b)
      for (std::size_t c = 0; c < no; ++c) {
        const double ab = omega(fd.inside[a], fd.inside[b], fd.outside[c]);
        const double ba = omega(fd.inside[b], fd.inside[a], fd.outside[c]);
        const double hv = 0.5 * (ab + ba), tv = 0.5 * (ab - ba);
        fd.h[(a * ni + b) * no + c] = hv;
        fd.T[(a * ni + b) * no + c] = tv;
        fd.h_norm2 += hv * hv;
        fd.T_norm2 += tv * tv;
        if (a == b) fd.H_frame[c] += hv;
      }
  fd.H.assign(static_cast<std::size_t>(n_), 0.0);
  for (std::size_t c = 0; c < no; ++c) {
    fd.H_norm2 += fd.H_frame[c] * fd.H_frame[c];
    for (int i = 0; i < n_; ++i) fd.H[i] += fd.H_frame[c] * frame_[fd.outside[c] * n_ + i].value();
  }
  return fd;
}

std::vector<Jet> SplitPoint::mean_curvature(const Subset& q) const {
  std::vector<Jet> out(static_cast<std::size_t>(n_), Jet(n_, 0.0));
  for (int c = 0; c < n_; ++c) {
    if (q.contains(block_of_[c])) continue;
    Jet coef(n_, 0.0);
    for (int a = 0; a < n_; ++a)
      if (q.contains(block_of_[a])) coef += omega_jet(a, a, c);
    for (int i = 0; i < n_; ++i) out[i].add_product(coef, frame_[c * n_ + i]);
  }
  return out;
}

double SplitPoint::mixed_curvature(int i, int j) const {
  if (!with_curvature_) throw ArgumentError("curvature was not computed for this point");
  if (i == j) throw ArgumentError("mixed curvature needs two different distributions");
  double s = 0.0;
  for (int a = 0; a < n_; ++a) {
    if (block_of_[a] != i) continue;
    for (int b = 0; b < n_; ++b)
      if (block_of_[b] == j) s += frame_sectional(a, b);
  }
  return s;
}

double SplitPoint::smix() const {
  double s = 0.0;
  for (int i = 0; i < k_; ++i)
    for (int j = i + 1; j < k_; ++j) s += mixed_curvature(i, j);
  return s;
}

double SplitPoint::smix_pairsplit(int i) const {
  if (!with_curvature_) throw ArgumentError("curvature was not computed for this point");
  double s = 0.0;
  for (int a = 0; a < n_; ++a) {
    if (block_of_[a] != i) continue;
    for (int b = 0; b < n_; ++b)
      if (block_of_[b] != i) s += frame_sectional(a, b);
  }
  return s;
}

double SplitPoint::partial_divergence(const Subset& q, std::span<const Jet> field) const {
  const int n = n_;
  if (static_cast<int>(field.size()) != n) throw ArgumentError("vector field dimension does not match chart");
  // ∇_j X^i = ∂_j X^i + Γ^i_jl X^l
  std::vector<double> cov(static_cast<std::size_t>(n * n));
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      double v = field[i].grad(j);
      for (int l = 0; l < n; ++l) v += mj_.christoffel(i, j, l).value() * field[l].value();
      cov[j * n + i] = v;
    }
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    if (!q.contains(block_of_[a])) continue;
    for (int i = 0; i < n; ++i) {
      double ti = 0.0;
      for (int j = 0; j < n; ++j) ti += frame_[a * n + j].value() * cov[j * n + i];
      for (int m = 0; m < n; ++m) s += mj_.metric(i, m).value() * ti * frame_[a * n + m].value();
    }
  }
  return s;
}

AdaptedFrame adapted_frame(const SplitStructure& s, const ChartManifold& m, std::span<const double> p) {
  return SplitPoint(m, s, p, false).adapted_frame();
}

FundamentalData fundamental_data(const SplitStructure& s, const ChartManifold& m, const Subset& q,
                                 std::span<const double> p) {
  return SplitPoint(m, s, p, false).fundamental(q);
}

double mixed_curvature_pair(const SplitStructure& s, const ChartManifold& m, int i, int j,
                            std::span<const double> p) {
  return SplitPoint(m, s, p).mixed_curvature(i, j);
}

double smix(const SplitStructure& s, const ChartManifold& m, std::span<const double> p) {
  return SplitPoint(m, s, p).smix();
}

double smix_pairsplit(const SplitStructure& s, const ChartManifold& m, int i, std::span<const double> p) {
  return SplitPoint(m, s, p).smix_pairsplit(i);
}

double partial_divergence(const SplitStructure& s, const ChartManifold& m, const Subset& q,
                          const VectorField& field, std::span<const double> p) {
  SplitPoint sp(m, s, p, false);
  const auto x = field(sp.metric().x);
  return sp.partial_divergence(q, x);
}

double cross_block_norm(const FundamentalData& fd, const SplitPoint& sp, int i, int j, bool integrability) {
  double s = 0.0;
  const auto& tensor = integrability ? fd.T : fd.h;
  const std::size_t ni = fd.inside.size(), no = fd.outside.size();
  for (std::size_t a = 0; a < ni; ++a) {
    if (sp.block_of(fd.inside[a]) != i) continue;
    for (std::size_t b = 0; b < ni; ++b) {
      if (sp.block_of(fd.inside[b]) != j) continue;
      for (std::size_t c = 0; c < no; ++c) {
        const double v = tensor[(a * ni + b) * no + c];
        s += v * v;
      }
    }
  }
  return std::sqrt(s);
}

PairPredicates pair_predicates(const SplitStructure& s, const ChartManifold& m, int i, int j,
                               std::span<const std::vector<double>> samples, double tolerance) {
  if (i == j) throw ArgumentError("pair predicates need i != j");
  if (s.k() <= 2) throw ArgumentError("pair predicates need k > 2");
  if (i < 0 || j < 0 || i >= s.k() || j >= s.k()) throw ArgumentError("distribution index out of range");
  PairPredicates out;
  const Subset q(std::vector<int>{std::min(i, j), std::max(i, j)});
  for (const auto& p : samples) {
    SplitPoint sp(m, s, p, false);
    const auto fd = sp.fundamental(q);
    out.sup_h = std::max(out.sup_h, cross_block_norm(fd, sp, i, j, false));
    out.sup_T = std::max(out.sup_T, cross_block_norm(fd, sp, i, j, true));
  }
  out.mixed_totally_geodesic = out.sup_h <= tolerance;
  out.mixed_integrable = out.sup_T <= tolerance;
  return out;
}

}  // namespace splitgeom
