#include "splitgeom/chart.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Core>
#include <cmath>
#include <string>

#include "splitgeom/parallel.hpp"

namespace splitgeom {

namespace {

Eigen::MatrixXd to_matrix(std::span<const double> rowmajor, int n) {
  Eigen::MatrixXd g(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) g(a, b) = rowmajor[a * n + b];
  return g;
}

std::string point_string(std::span<const double> p) {
  std::string s = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) s += ", ";
    s += std::to_string(p[i]);
  }
  return s + ")";
}

// sqrt(det g); throws if g is not positive definite.
double checked_volume_factor(std::span<const double> g, int n, std::span<const double> p) {
  Eigen::LLT<Eigen::MatrixXd> llt(to_matrix(g, n));
  if (llt.info() != Eigen::Success) throw GeometryError("metric is not positive definite at " + point_string(p));
  const auto& l = llt.matrixLLT();
  double det = 1.0;
  for (int a = 0; a < n; ++a) {
    if (!(l(a, a) > 0.0)) throw GeometryError("metric is not positive definite at " + point_string(p));
    det *= l(a, a);
  }
  return det;
}

// Gauss-Jordan inverse of an SPD jet matrix (no pivoting needed).
std::vector<Jet> invert_spd(std::vector<Jet> a, int n) {
  std::vector<Jet> inv(static_cast<std::size_t>(n * n), Jet(0.0));
  for (int i = 0; i < n; ++i) inv[i * n + i] = Jet(1.0);
  for (int col = 0; col < n; ++col) {
    const Jet pivot_inv = reciprocal(a[col * n + col]);
    for (int j = 0; j < n; ++j) {
      a[col * n + j] *= pivot_inv;
      inv[col * n + j] *= pivot_inv;
    }
    for (int row = 0; row < n; ++row) {
      if (row == col) continue;
      const Jet factor = a[row * n + col];
      if (factor.value() == 0.0 && factor == Jet(factor.dim(), 0.0)) continue;
      for (int j = 0; j < n; ++j) {
        a[row * n + j] -= factor * a[col * n + j];
        inv[row * n + j] -= factor * inv[col * n + j];
      }
    }
  }
  return inv;
}

}  // namespace

std::vector<Jet> invert_spd_jets(std::vector<Jet> a, int n) { return invert_spd(std::move(a), n); }

ChartManifold::ChartManifold(std::vector<Axis> axes, std::vector<Expr> metric)
    : axes_(std::move(axes)), metric_(std::move(metric)) {
  const int n = dim();
  if (n < 1 || n > Jet::kMaxDim)
    throw ArgumentError("chart dimension must be in 1.." + std::to_string(Jet::kMaxDim));
  if (static_cast<int>(metric_.size()) != n * n) throw ArgumentError("metric must have n*n entries");
  for (const auto& ax : axes_)
    if (!(ax.hi > ax.lo)) throw ArgumentError("axis interval must have hi > lo");
  for (int a = 0; a < n; ++a)
    for (int b = a + 1; b < n; ++b)
      if (!(metric_[a * n + b] == metric_[b * n + a]))
        throw ArgumentError("metric entries (" + std::to_string(a + 1) + "," + std::to_string(b + 1) +
                            ") and its transpose differ");
  for (const auto& e : metric_)
    for (int c = n; c < e.dim(); ++c)
      if (e.depends_on(c)) throw ArgumentError("metric entry uses a coordinate beyond the chart dimension");
}

bool ChartManifold::closed() const {
  for (const auto& ax : axes_)
    if (!ax.periodic) return false;
  return true;
}

std::vector<double> ChartManifold::metric_at(std::span<const double> p) const {
  const int n = dim();
  std::vector<double> g(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      const double v = metric_[a * n + b](p);
      g[a * n + b] = v;
      g[b * n + a] = v;
    }
  }
  return g;
}

std::vector<Jet> ChartManifold::metric_jets(std::span<const Jet> x) const {
  const int n = dim();
  std::vector<Jet> g(static_cast<std::size_t>(n * n));
  for (int a = 0; a < n; ++a) {
    for (int b = a; b < n; ++b) {
      Jet v = metric_[a * n + b].eval<Jet>(x);
      g[a * n + b] = v;
      g[b * n + a] = v;
    }
  }
  return g;
}

void ChartManifold::validate(std::span<const std::vector<double>> samples) const {
  const int n = dim();
  for (const auto& p : samples) {
    const auto g = metric_at(p);
    checked_volume_factor(g, n, p);
    for (int ax = 0; ax < n; ++ax) {
      if (!axes_[ax].periodic) continue;
      std::vector<double> q = p;
      q[ax] += axes_[ax].length();
      const auto gq = metric_at(q);
      for (int i = 0; i < n * n; ++i) {
        if (std::abs(g[i] - gq[i]) > 1e-12 * std::max(1.0, std::abs(g[i])))
          throw GeometryError("metric is not periodic along x" + std::to_string(ax + 1) + " at " +
                              point_string(p));
      }
    }
  }
}

double MetricJets::inner(std::span<const double> u, std::span<const double> v) const {
  double s = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) s += g[a * n + b].value() * u[a] * v[b];
  return s;
}

MetricJets metric_jets(const ChartManifold& m, std::span<const double> p) {
  const int n = m.dim();
  if (static_cast<int>(p.size()) != n) throw ArgumentError("point dimension does not match chart");
  MetricJets mj;
  mj.n = n;
  mj.point.assign(p.begin(), p.end());
  mj.x.reserve(n);
  for (int a = 0; a < n; ++a) mj.x.push_back(Jet::variable(n, a, p[a]));
  mj.g = m.metric_jets(mj.x);

  std::vector<double> gv(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n * n; ++i) gv[i] = mj.g[i].value();
  mj.sqrt_det = checked_volume_factor(gv, n, p);
  mj.ginv = invert_spd(mj.g, n);

  // Christoffel symbols of the first kind, then raised.
  std::vector<Jet> dg(static_cast<std::size_t>(n * n * n));  // ∂_c g_ab at [(c*n+a)*n+b]
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        dg[(c * n + a) * n + b] = mj.g[a * n + b].derivative(c);
        dg[(c * n + b) * n + a] = dg[(c * n + a) * n + b];
      }
  std::vector<Jet> first(static_cast<std::size_t>(n * n * n));  // Γ_{d,ab}
  for (int d = 0; d < n; ++d)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Jet v = dg[(a * n + d) * n + b] + dg[(b * n + d) * n + a] - dg[(d * n + a) * n + b];
        v *= 0.5;
        first[(d * n + a) * n + b] = v;
        first[(d * n + b) * n + a] = v;
      }
  mj.gamma.assign(static_cast<std::size_t>(n * n * n), Jet(0.0));
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        Jet v(n, 0.0);
        for (int d = 0; d < n; ++d) v.add_product(mj.ginv[c * n + d], first[(d * n + a) * n + b]);
        mj.gamma[(c * n + a) * n + b] = v;
        mj.gamma[(c * n + b) * n + a] = v;
      }
  return mj;
}

std::vector<double> riemann_tensor(const MetricJets& mj) {
  const int n = mj.n;
  // Standard-sign R^d_{cab}: R(∂_a,∂_b)∂_c = R^d_cab ∂_d with
  // R(X,Y) = ∇_X∇_Y - ∇_Y∇_X - ∇_[X,Y].
  std::vector<double> rup(static_cast<std::size_t>(n * n * n * n), 0.0);
  auto G = [&](int c, int a, int b) -> const Jet& { return mj.christoffel(c, a, b); };
  for (int d = 0; d < n; ++d)
    for (int c = 0; c < n; ++c)
      for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
          double v = G(d, b, c).grad(a) - G(d, a, c).grad(b);
          for (int e = 0; e < n; ++e)
            v += G(d, a, e).value() * G(e, b, c).value() - G(d, b, e).value() * G(e, a, c).value();
          rup[((d * n + c) * n + a) * n + b] = v;
          rup[((d * n + c) * n + b) * n + a] = -v;
        }
  // Lower and flip sign: R_abcd = <R(∂_a,∂_b)∂_c, ∂_d> = -g_de R^e_cab.
  std::vector<double> r(static_cast<std::size_t>(n * n * n * n), 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double v = 0.0;
          for (int e = 0; e < n; ++e) v -= mj.metric(d, e).value() * rup[((e * n + c) * n + a) * n + b];
          r[((a * n + b) * n + c) * n + d] = v;
        }
  return r;
}

double PointFrameData::sectional(std::span<const double> u, std::span<const double> v) const {
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    if (u[a] == 0.0) continue;
    for (int b = 0; b < n; ++b) {
      if (v[b] == 0.0) continue;
      for (int c = 0; c < n; ++c) {
        if (u[c] == 0.0) continue;
        for (int d = 0; d < n; ++d) s += curvature(a, b, c, d) * u[a] * v[b] * u[c] * v[d];
      }
    }
  }
  return s;
}

PointFrameData connection_at(const ChartManifold& m, std::span<const double> p) {
  const MetricJets mj = metric_jets(m, p);
  PointFrameData out;
  out.n = mj.n;
  out.point = mj.point;
  out.g.reserve(mj.g.size());
  for (const auto& j : mj.g) out.g.push_back(j.value());
  out.gamma.reserve(mj.gamma.size());
  for (const auto& j : mj.gamma) out.gamma.push_back(j.value());
  out.riemann = riemann_tensor(mj);
  return out;
}

double divergence(const MetricJets& mj, std::span<const Jet> field) {
  const int n = mj.n;
  if (static_cast<int>(field.size()) != n) throw ArgumentError("vector field dimension does not match chart");
  double div = 0.0;
  for (int a = 0; a < n; ++a) {
    div += field[a].grad(a);
    for (int b = 0; b < n; ++b) div += mj.christoffel(a, a, b).value() * field[b].value();
  }
  return div;
}

double divergence(const ChartManifold& m, const VectorField& field, std::span<const double> p) {
  const MetricJets mj = metric_jets(m, p);
  const auto x = field(mj.x);
  return divergence(mj, x);
}

std::vector<Jet> gradient(const MetricJets& mj, const Jet& f) {
  const int n = mj.n;
  std::vector<Jet> df;
  df.reserve(n);
  for (int b = 0; b < n; ++b) df.push_back(f.derivative(b));
  std::vector<Jet> grad(static_cast<std::size_t>(n), Jet(n, 0.0));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) grad[a].add_product(mj.inverse(a, b), df[b]);
  return grad;
}

double div_grad(const ChartManifold& m, const ScalarField& f, std::span<const double> p) {
  const MetricJets mj = metric_jets(m, p);
  const auto grad = gradient(mj, f(mj.x));
  return divergence(mj, grad);
}

double laplacian_geom(const ChartManifold& m, const ScalarField& f, std::span<const double> p) {
  return -div_grad(m, f, p);
}

std::vector<int> expand_grid(std::span<const int> grid, int dim) {
  std::vector<int> out;
  if (grid.size() == 1) {
    out.assign(static_cast<std::size_t>(dim), grid[0]);
  } else if (static_cast<int>(grid.size()) == dim) {
    out.assign(grid.begin(), grid.end());
  } else {
    throw ArgumentError("grid must give one resolution or one per axis");
  }
  for (int r : out)
    if (r < 4) throw ArgumentError("grid resolution must be at least 4");
  return out;
}

std::vector<std::vector<double>> grid_points(const ChartManifold& m, std::span<const int> grid) {
  const int n = m.dim();
  const auto res = expand_grid(grid, n);
  std::size_t total = 1;
  for (int r : res) total *= static_cast<std::size_t>(r);
  std::vector<std::vector<double>> pts;
  pts.reserve(total);
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (std::size_t k = 0; k < total; ++k) {
    std::vector<double> p(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) p[a] = m.axes()[a].lo + m.axes()[a].length() * idx[a] / res[a];
    pts.push_back(std::move(p));
    for (int a = n - 1; a >= 0; --a) {
      if (++idx[a] < res[a]) break;
      idx[a] = 0;
    }
  }
  return pts;
}

std::vector<double> integrate_many(const ChartManifold& m, std::size_t width,
                                   const std::function<void(std::span<const double>, std::span<double>)>& f,
                                   std::span<const int> grid, int threads, std::vector<double>* abs_integrals) {
  if (!m.closed()) throw ArgumentError("quadrature needs a chart whose axes are all periodic");
  const int n = m.dim();
  const auto res = expand_grid(grid, n);
  const auto pts = grid_points(m, res);
  double cell = 1.0;
  for (int a = 0; a < n; ++a) cell *= m.axes()[a].length() / res[a];

  std::vector<double> values(pts.size() * width, 0.0);
  parallel_for(pts.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      std::span<double> out(values.data() + i * width, width);
      f(pts[i], out);
      const double w = checked_volume_factor(m.metric_at(pts[i]), n, pts[i]);
      for (auto& v : out) v *= w;
    }
  });

  std::vector<CompensatedSum> sums(width), abs_sums(width);
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = 0; j < width; ++j) {
      sums[j].add(values[i * width + j]);
      abs_sums[j].add(std::abs(values[i * width + j]));
    }
  std::vector<double> out(width);
  for (std::size_t j = 0; j < width; ++j) out[j] = sums[j].value() * cell;
  if (abs_integrals) {
    abs_integrals->resize(width);
    for (std::size_t j = 0; j < width; ++j) (*abs_integrals)[j] = abs_sums[j].value() * cell;
  }
  return out;
}

double integrate(const ChartManifold& m, const std::function<double(std::span<const double>)>& f,
                 std::span<const int> grid, int threads) {
  const auto r = integrate_many(
      m, 1, [&](std::span<const double> p, std::span<double> out) { out[0] = f(p); }, grid, threads);
  return r[0];
}

}  // namespace splitgeom
