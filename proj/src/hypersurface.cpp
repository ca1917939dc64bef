#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "splitgeom/models.hpp"

namespace splitgeom {

struct HypersurfaceModel::Embedding {
  MetricJets mj;
  std::vector<Jet> II;     // second fundamental form, row-major
  std::vector<Jet> shape;  // A = g^{-1} II
};

namespace {

std::vector<Expr> induced_metric(const std::vector<std::vector<Expr>>& dF, int n) {
  std::vector<Expr> g(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Expr s = Expr::constant(0.0);
      bool first = true;
      for (std::size_t c = 0; c < dF[a].size(); ++c) {
        const Expr term = dF[a][c] * dF[b][c];
        s = first ? term : s + term;
        first = false;
      }
      g[a * n + b] = s;
      g[b * n + a] = s;
    }
  return g;
}

std::vector<std::vector<Expr>> first_derivatives(const std::vector<Expr>& F, int n) {
  std::vector<std::vector<Expr>> out(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (const auto& f : F) out[a].push_back(f.derivative(a));
  return out;
}

std::vector<std::vector<Expr>> second_derivatives(const std::vector<std::vector<Expr>>& dF, int n) {
  std::vector<std::vector<Expr>> out(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (const auto& f : dF[a]) out[a * n + b].push_back(f.derivative(b));
  return out;
}

// Central difference of fn at p along axis a, Richardson-extrapolated over h and h/2.
template <class Fn>
std::vector<double> richardson(Fn&& fn, std::span<const double> p, int a, double h) {
  std::vector<double> q(p.begin(), p.end());
  auto diff = [&](double step) {
    q[a] = p[a] + step;
    const auto plus = fn(q);
    q[a] = p[a] - step;
    const auto minus = fn(q);
    q[a] = p[a];
    std::vector<double> d(plus.size());
    for (std::size_t i = 0; i < d.size(); ++i) d[i] = (plus[i] - minus[i]) / (2.0 * step);
    return d;
  };
  const auto coarse = diff(h);
  const auto fine = diff(0.5 * h);
  std::vector<double> out(coarse.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return out;
}

}  // namespace

double PrincipalData::inner(std::span<const double> u, std::span<const double> v) const {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += g[a * n + b] * u[a] * v[b];
  return s;
}

HypersurfaceModel::HypersurfaceModel(HypersurfaceSpec spec)
    : spec_(std::move(spec)),
      F_([&] {
        const int n = spec_.dim;
        if (n < 2 || n > Jet::kMaxDim) throw ArgumentError("hypersurface dimension must be in 2..6");
        if (spec_.curvature != 0 && spec_.curvature != 1) throw ArgumentError("ambient curvature must be 0 or 1");
        const std::size_t expected = static_cast<std::size_t>(n + 1 + spec_.curvature);
        if (spec_.immersion.size() != expected)
          throw ArgumentError("immersion needs " + std::to_string(expected) + " components");
        if (static_cast<int>(spec_.axes.size()) != n) throw ArgumentError("hypersurface needs one axis per dimension");
        if (spec_.multiplicities.size() < 2)
          throw GeometryError("hypersurface needs at least two distinct principal curvatures (umbilical data rejected)");
        int total = 0;
        for (int m : spec_.multiplicities) {
          if (m < 1) throw ArgumentError("multiplicities must be positive");
          total += m;
        }
        if (total != n) throw ArgumentError("multiplicities must sum to the dimension");
        std::vector<Expr> F;
        for (const auto& s : spec_.immersion) F.push_back(parse_expr(s, n));
        return F;
      }()),
      dF_(first_derivatives(F_, spec_.dim)),
      ddF_(second_derivatives(dF_, spec_.dim)),
      manifold_(spec_.axes, induced_metric(dF_, spec_.dim)) {
  if (!spec_.principal_frame.empty()) {
    const int n = spec_.dim;
    std::vector<std::vector<Expr>> frame;
    for (const auto& v : spec_.principal_frame) {
      std::vector<Expr> comps;
      for (const auto& s : v) comps.push_back(parse_expr(s, n));
      frame.push_back(std::move(comps));
    }
    split_.emplace(spec_.multiplicities, std::move(frame));
  }
}

double HypersurfaceModel::fd_step(std::span<const double> p) const {
  double scale = 1.0;
  for (double x : p) scale = std::max(scale, std::abs(x));
  return std::cbrt(std::numeric_limits<double>::epsilon()) * scale;
}

HypersurfaceModel::Embedding HypersurfaceModel::embed(std::span<const double> p) const {
  const int n = spec_.dim;
  const int ambient = n + 1 + spec_.curvature;
  const int cols = ambient - 1;
  Embedding e;
  e.mj = metric_jets(manifold_, p);
  const auto& x = e.mj.x;

  // Columns spanning the tangent space of M (plus F itself on the sphere).
  std::vector<std::vector<Jet>> B(static_cast<std::size_t>(cols));
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < ambient; ++c) B[a].push_back(dF_[a][c].eval<Jet>(x));
  if (spec_.curvature == 1) {
    double norm2 = 0.0;
    for (int c = 0; c < ambient; ++c) {
      B[n].push_back(F_[c].eval<Jet>(x));
      norm2 += B[n].back().value() * B[n].back().value();
    }
    if (std::abs(std::sqrt(norm2) - 1.0) > 1e-12) throw GeometryError("immersion does not lie on the unit sphere");
  }

  // Generalized cross product of the columns fixes the orientation.
  Eigen::VectorXd cross(ambient);
  for (int i = 0; i < ambient; ++i) {
    Eigen::MatrixXd mat = Eigen::MatrixXd::Zero(ambient, ambient);
    mat(0, i) = 1.0;
    for (int r = 0; r < cols; ++r)
      for (int c = 0; c < ambient; ++c) mat(r + 1, c) = B[r][c].value();
    cross(i) = mat.determinant();
  }
  if (!(cross.norm() > 1e-12)) throw GeometryError("immersion loses rank");
  int pivot = 0;
  cross.cwiseAbs().maxCoeff(&pivot);

  // N = e_pivot minus its projection onto the column span, normalized.
  std::vector<Jet> gram(static_cast<std::size_t>(cols * cols));
  for (int r = 0; r < cols; ++r)
    for (int s = 0; s < cols; ++s) {
      Jet acc(n, 0.0);
      for (int c = 0; c < ambient; ++c) acc.add_product(B[r][c], B[s][c]);
      gram[r * cols + s] = acc;
    }
  const auto gram_inv = invert_spd_jets(gram, cols);
  std::vector<Jet> coef(static_cast<std::size_t>(cols), Jet(n, 0.0));
  for (int r = 0; r < cols; ++r)
    for (int s = 0; s < cols; ++s) coef[r].add_product(gram_inv[r * cols + s], B[s][pivot]);
  std::vector<Jet> N(static_cast<std::size_t>(ambient));
  for (int c = 0; c < ambient; ++c) {
    Jet v(n, c == pivot ? 1.0 : 0.0);
    for (int r = 0; r < cols; ++r) v -= coef[r] * B[r][c];
    N[c] = v;
  }
  Jet nn(n, 0.0);
  for (const auto& v : N) nn.add_product(v, v);
  double sign = 0.0;
  for (int c = 0; c < ambient; ++c) sign += N[c].value() * cross(c);
  const Jet scale = (sign >= 0.0 ? spec_.orientation : -spec_.orientation) * reciprocal(sqrt(nn));
  for (auto& v : N) v *= scale;

  e.II.assign(static_cast<std::size_t>(n * n), Jet(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = a; b < n; ++b) {
      Jet acc(n, 0.0);
      for (int c = 0; c < ambient; ++c) acc.add_product(ddF_[a * n + b][c].eval<Jet>(x), N[c]);
      e.II[a * n + b] = acc;
      e.II[b * n + a] = acc;
    }
  e.shape.assign(static_cast<std::size_t>(n * n), Jet(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) e.shape[a * n + b].add_product(e.mj.inverse(a, d), e.II[d * n + b]);
  return e;
}

PrincipalData HypersurfaceModel::principal_data(std::span<const double> p) const {
  const int n = spec_.dim;
  const Embedding e = embed(p);
  PrincipalData pd;
  pd.n = n;
  pd.sqrt_det = e.mj.sqrt_det;
  Eigen::MatrixXd g(n, n), II(n, n);
  pd.g.resize(static_cast<std::size_t>(n * n));
  pd.shape.resize(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      g(a, b) = e.mj.metric(a, b).value();
      II(a, b) = e.II[a * n + b].value();
      pd.g[a * n + b] = g(a, b);
      pd.shape[a * n + b] = e.shape[a * n + b].value();
    }
  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> solver(II, g);
  if (solver.info() != Eigen::Success) throw GeometryError("shape operator eigen-decomposition failed");
  const Eigen::VectorXd mu = solver.eigenvalues();
  const Eigen::MatrixXd V = solver.eigenvectors();
  pd.mu.assign(mu.data(), mu.data() + n);
  pd.frame.resize(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a) {
    int big = 0;
    V.col(a).cwiseAbs().maxCoeff(&big);
    const double s = V(big, a) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) pd.frame[a * n + i] = s * V(i, a);
  }

  // Group into the declared multiplicities and enforce the gap.
  double max_abs = 0.0;
  for (double m : pd.mu) max_abs = std::max(max_abs, std::abs(m));
  const double gap = spec_.gap_fraction * std::max(max_abs, 1e-300);
  int start = 0;
  for (std::size_t grp = 0; grp < spec_.multiplicities.size(); ++grp) {
    const int len = spec_.multiplicities[grp];
    const double lo = pd.mu[start], hi = pd.mu[start + len - 1];
    if (hi - lo > gap) throw GeometryError("principal curvature multiplicities do not match the declared ones");
    if (grp > 0 && pd.mu[start] - pd.mu[start - 1] < gap)
      throw GeometryError("principal curvature gap violated (near-umbilic point)");
    double mean = 0.0;
    for (int a = start; a < start + len; ++a) {
      mean += pd.mu[a];
      pd.group_of.push_back(static_cast<int>(grp));
    }
    pd.distinct.push_back(mean / len);
    pd.multiplicity.push_back(len);
    start += len;
  }

  // ∂_c μ̂ = (1/n_i) Σ_{v in group} vᵀ (∂_c II - μ̂ ∂_c g) v; ∇μ̂ = g^{-1} dμ̂.
  const Eigen::MatrixXd ginv = g.inverse();
  const int k = static_cast<int>(pd.distinct.size());
  for (int grp = 0; grp < k; ++grp) {
    Eigen::VectorXd dmu = Eigen::VectorXd::Zero(n);
    for (int c = 0; c < n; ++c) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) {
        if (pd.group_of[a] != grp) continue;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            s += V(i, a) * V(j, a) * (e.II[i * n + j].grad(c) - pd.distinct[grp] * e.mj.metric(i, j).grad(c));
      }
      dmu(c) = s / pd.multiplicity[grp];
    }
    const Eigen::VectorXd grad = ginv * dmu;
    pd.grad_mu.emplace_back(grad.data(), grad.data() + n);

    std::vector<double> P(static_cast<std::size_t>(n * n), 0.0);
    for (int a = 0; a < n; ++a) {
      if (pd.group_of[a] != grp) continue;
      const Eigen::VectorXd low = g * V.col(a);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) P[i * n + j] += V(i, a) * low(j);
    }
    pd.projectors.push_back(std::move(P));
  }
  return pd;
}

double HypersurfaceModel::mixed_curvature_residual(std::span<const double> p) const {
  const int n = spec_.dim;
  const auto pd = principal_data(p);
  const auto pf = connection_at(manifold_, p);
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (pd.group_of[a] == pd.group_of[b]) continue;
      const std::span<const double> u(&pd.frame[a * n], n), v(&pd.frame[b * n], n);
      const double K = pf.sectional(u, v);
      worst = std::max(worst, std::abs(K - (spec_.curvature + pd.mu[a] * pd.mu[b])));
    }
  return worst;
}

std::vector<double> HypersurfaceModel::aligned_frame(std::span<const double> p, const PrincipalData& ref) const {
  const int n = spec_.dim;
  auto pd = principal_data(p);
  for (int a = 0; a < n; ++a) {
    const std::span<const double> u(&pd.frame[a * n], n), v(&ref.frame[a * n], n);
    if (pd.inner(u, v) < 0.0)
      for (int i = 0; i < n; ++i) pd.frame[a * n + i] = -pd.frame[a * n + i];
  }
  return pd.frame;
}

std::vector<double> HypersurfaceModel::frame_connection(std::span<const double> p, const PrincipalData& pd) const {
  const int n = spec_.dim;
  const double h = fd_step(p);
  // dframe[c][a*n + i] = ∂_c X_a^i
  std::vector<std::vector<double>> dframe;
  for (int c = 0; c < n; ++c)
    dframe.push_back(richardson([&](std::span<const double> q) { return aligned_frame(q, pd); }, p, c, h));
  const auto pf = connection_at(manifold_, p);
  std::vector<double> omega(static_cast<std::size_t>(n * n * n), 0.0);
  std::vector<double> w(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      // w = ∇_{X_a} X_b
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int c = 0; c < n; ++c) {
          double cov = dframe[c][b * n + i];
          for (int d = 0; d < n; ++d) cov += pf.christoffel(i, c, d) * pd.frame[b * n + d];
          s += pd.frame[a * n + c] * cov;
        }
        w[i] = s;
      }
      for (int c = 0; c < n; ++c) omega[(a * n + b) * n + c] = pd.inner(w, std::span<const double>(&pd.frame[c * n], n));
    }
  return omega;
}

namespace {

// 𝒜(X_a, X_b, X_c) = <(∇_{X_a} A) X_b, X_c> over a frame, from exact jets of A.
std::vector<double> codazzi_tensor(const MetricJets& mj, std::span<const Jet> shape, std::span<const double> frame,
                                   int n) {
  // nablaA[(c*n + i)*n + j] = (∇_c A)^i_j
  std::vector<double> nabla(static_cast<std::size_t>(n * n * n));
  for (int c = 0; c < n; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = shape[i * n + j].grad(c);
        for (int d = 0; d < n; ++d)
          v += mj.christoffel(i, c, d).value() * shape[d * n + j].value() -
               shape[i * n + d].value() * mj.christoffel(d, c, j).value();
        nabla[(c * n + i) * n + j] = v;
      }
  std::vector<double> out(static_cast<std::size_t>(n * n * n), 0.0);
  std::vector<double> y(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      for (int i = 0; i < n; ++i) {
        double s = 0.0;
        for (int c = 0; c < n; ++c)
          for (int j = 0; j < n; ++j) s += frame[a * n + c] * nabla[(c * n + i) * n + j] * frame[b * n + j];
        y[i] = s;
      }
      for (int c = 0; c < n; ++c) {
        double s = 0.0;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j) s += mj.metric(i, j).value() * y[i] * frame[c * n + j];
        out[(a * n + b) * n + c] = s;
      }
    }
  return out;
}

}  // namespace

CodazziResiduals HypersurfaceModel::codazzi(std::span<const double> p) const {
  const int n = spec_.dim;
  const auto pd = principal_data(p);
  const Embedding e = embed(p);
  const auto A = codazzi_tensor(e.mj, e.shape, pd.frame, n);
  auto at = [&](int a, int b, int c) { return A[(a * n + b) * n + c]; };
  CodazziResiduals out;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        const double v = at(a, b, c);
        out.max_term = std::max(out.max_term, std::abs(v));
        for (double w : {at(a, c, b), at(b, a, c), at(b, c, a), at(c, a, b), at(c, b, a)})
          out.symmetry = std::max(out.symmetry, std::abs(v - w));
      }

  out.simple_spectrum = std::all_of(pd.multiplicity.begin(), pd.multiplicity.end(), [](int m) { return m == 1; });
  if (!out.simple_spectrum) return out;

  const auto omega = frame_connection(p, pd);
  auto om = [&](int a, int b, int c) { return omega[(a * n + b) * n + c]; };
  // X_i(μ_j) from central differences of the eigenvalues.
  const double h = fd_step(p);
  std::vector<std::vector<double>> dmu;
  for (int c = 0; c < n; ++c)
    dmu.push_back(richardson([&](std::span<const double> q) { return principal_data(q).mu; }, p, c, h));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double xi_muj = 0.0;
      for (int c = 0; c < n; ++c) xi_muj += pd.frame[i * n + c] * dmu[c][j];
      out.lemma_diag = std::max(out.lemma_diag, std::abs(at(i, j, j) - xi_muj));
      for (int l = 0; l < n; ++l) {
        if (l == j) continue;
        const double rhs = (pd.mu[j] - pd.mu[l]) * om(i, j, l);
        out.lemma_cross = std::max(out.lemma_cross, std::abs(at(i, j, l) - rhs));
        if (i != j && i != l) {
          const double other = (pd.mu[i] - pd.mu[l]) * om(j, i, l);
          out.corollary = std::max(out.corollary, std::abs(rhs - other));
          out.max_term = std::max(out.max_term, std::abs(rhs));
        }
      }
    }
  return out;
}

std::vector<double> HypersurfaceModel::theorem_field(std::span<const double> p) const {
  const int n = spec_.dim;
  const auto pd = principal_data(p);
  const int k = static_cast<int>(pd.distinct.size());
  std::vector<double> y(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      const double coef = pd.multiplicity[i] / (pd.distinct[i] - pd.distinct[j]);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) y[a] += coef * pd.projectors[j][a * n + b] * pd.grad_mu[i][b];
    }
  for (auto& v : y) v *= pd.sqrt_det;
  return y;
}

HypersurfaceIdentity HypersurfaceModel::identity(std::span<const double> p) const {
  const int n = spec_.dim;
  const int k = this->k();
  if (k != 2 && k != 3) throw ArgumentError("hypersurface identity is implemented for k = 2 and k = 3");
  const double h = fd_step(p);
  for (int a = 0; a < n; ++a) {
    const auto& ax = spec_.axes[a];
    if (!ax.periodic && (p[a] - h < ax.lo || p[a] + h > ax.hi))
      throw GeometryError("finite-difference stencil leaves the sampled region");
  }
  const auto pd = principal_data(p);
  HypersurfaceIdentity out;

  // Div Y = (1/√g) Σ_a ∂_a(√g Y^a)
  double div = 0.0;
  for (int a = 0; a < n; ++a) div += richardson([&](std::span<const double> q) { return theorem_field(q); }, p, a, h)[a];
  out.lhs = div / pd.sqrt_det;

  const double c = spec_.curvature;
  std::vector<double> grad_terms(static_cast<std::size_t>(k), 0.0);
  std::vector<double> full_terms(static_cast<std::size_t>(k), 0.0);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      if (j == i) continue;
      std::vector<double> pg(static_cast<std::size_t>(n), 0.0);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) pg[a] += pd.projectors[j][a * n + b] * pd.grad_mu[i][b];
      const double d2 = (pd.distinct[i] - pd.distinct[j]) * (pd.distinct[i] - pd.distinct[j]);
      grad_terms[i] += pd.inner(pg, pg) / d2;
      full_terms[i] += pd.inner(pd.grad_mu[i], pd.grad_mu[i]) / d2;
    }
  // k = 3: -Σ_{i<j} <P_l H_i, P_l H_j> with P_l H_i = n_i P_l∇μ_i/(μ_i - μ_l), l the third index.
  double cross = 0.0;
  if (k == 3) {
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j) {
        const int l = 3 - i - j;
        std::vector<double> pi(static_cast<std::size_t>(n), 0.0), pj(static_cast<std::size_t>(n), 0.0);
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) {
            pi[a] += pd.projectors[l][a * n + b] * pd.grad_mu[i][b];
            pj[a] += pd.projectors[l][a * n + b] * pd.grad_mu[j][b];
          }
        cross += pd.multiplicity[i] * pd.multiplicity[j] * pd.inner(pi, pj) /
                 ((pd.distinct[i] - pd.distinct[l]) * (pd.distinct[j] - pd.distinct[l]));
      }
  }
  out.rhs = hypersurface_k3_rhs(pd.distinct, pd.multiplicity, c, grad_terms, 1.0) - cross;
  out.rhs_printed = k == 2 ? hypersurface_k3_rhs(pd.distinct, pd.multiplicity, c, full_terms, 1.0)
                           : hypersurface_k3_rhs(pd.distinct, pd.multiplicity, c, grad_terms, 0.5);
  out.residual = out.lhs - out.rhs;
  out.residual_printed = out.lhs - out.rhs_printed;
  out.max_term = std::max({std::abs(out.lhs), std::abs(out.rhs), std::abs(out.rhs_printed), std::abs(cross)});
  return out;
}

DperpResult HypersurfaceModel::dperp_integrability(std::span<const std::vector<double>> samples,
                                                   double tolerance) const {
  const int n = spec_.dim;
  if (k() < 3) throw ArgumentError("D_i-perp integrability test needs k >= 3");
  for (int m : spec_.multiplicities)
    if (m != 1) throw ArgumentError("D_i-perp integrability test needs simple principal curvatures");
  DperpResult out;
  out.forall_zero_A_cross = true;
  out.brackets_tangent = true;
  for (const auto& p : samples) {
    const auto pd = principal_data(p);
    const Embedding e = embed(p);
    const auto A = codazzi_tensor(e.mj, e.shape, pd.frame, n);
    const auto omega = frame_connection(p, pd);
    double sup_a = 0.0, sup_b = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          if (i == j || j == l || i == l) continue;
          if (i < j && j < l) sup_a = std::max(sup_a, std::abs(A[(i * n + j) * n + l]));
          // <[X_j, X_l], X_i> with X_j, X_l ∈ D_i^⊥
          const double br = omega[(j * n + l) * n + i] - omega[(l * n + j) * n + i];
          sup_b = std::max(sup_b, std::abs(br));
        }
    const bool fa = sup_a <= tolerance, fb = sup_b <= tolerance;
    out.flags_agree_everywhere = out.flags_agree_everywhere && fa == fb;
    out.forall_zero_A_cross = out.forall_zero_A_cross && fa;
    out.brackets_tangent = out.brackets_tangent && fb;
    out.sup_A = std::max(out.sup_A, sup_a);
    out.sup_bracket = std::max(out.sup_bracket, sup_b);
  }
  return out;
}

double hypersurface_k3_rhs(std::span<const double> mu, std::span<const int> n, double c,
                           std::span<const double> gradient_terms, double smix_coefficient) {
  const std::size_t k = mu.size();
  if (n.size() != k || gradient_terms.size() != k) throw ArgumentError("mismatched principal data lengths");
  double smix = 0.0;
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = i + 1; j < k; ++j) smix += n[i] * n[j] * (c + mu[i] * mu[j]);
  double grad = 0.0;
  for (std::size_t i = 0; i < k; ++i) grad += n[i] * (1.0 - n[i]) * gradient_terms[i];
  return smix_coefficient * smix + grad;
}

}  // namespace splitgeom
