#include <algorithm>
#include <cmath>
#include <numbers>

#include "splitgeom/models.hpp"

namespace splitgeom {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

Geometry assemble(const WarpedSpec& spec, const std::vector<Expr>& u) {
  int n = spec.base_dim;
  for (int d : spec.fiber_dims) n += d;
  std::vector<Expr> metric(static_cast<std::size_t>(n * n), Expr::constant(0.0));
  for (int a = 0; a < spec.base_dim; ++a) metric[a * n + a] = Expr::constant(1.0);
  int offset = spec.base_dim;
  for (std::size_t i = 0; i < spec.fiber_dims.size(); ++i) {
    const Expr u2 = u[i] * u[i];
    for (int a = 0; a < spec.fiber_dims[i]; ++a) metric[(offset + a) * n + offset + a] = u2;
    offset += spec.fiber_dims[i];
  }
  std::vector<int> dims{spec.base_dim};
  dims.insert(dims.end(), spec.fiber_dims.begin(), spec.fiber_dims.end());
  return Geometry{ChartManifold(std::vector<Axis>(static_cast<std::size_t>(n), Axis{0.0, kTwoPi, true}),
                                std::move(metric)),
                  SplitStructure::coordinate(std::move(dims))};
}

std::vector<Expr> parse_warping(const WarpedSpec& spec) {
  if (spec.base_dim < 1) throw ArgumentError("warped product needs a base of dimension >= 1");
  if (spec.fiber_dims.empty()) throw ArgumentError("warped product needs at least one fiber");
  if (spec.warping.size() != spec.fiber_dims.size())
    throw ArgumentError("warped product needs one warping function per fiber");
  int n = spec.base_dim;
  for (int d : spec.fiber_dims) {
    if (d < 1) throw ArgumentError("fiber dimensions must be positive");
    n += d;
  }
  std::vector<Expr> u;
  for (std::size_t i = 0; i < spec.warping.size(); ++i) {
    u.push_back(parse_expr(spec.warping[i], n));
    for (int a = spec.base_dim; a < n; ++a)
      if (u.back().depends_on(a))
        throw ArgumentError("warping function u_" + std::to_string(i + 2) + " depends on a fiber coordinate");
  }
  return u;
}

}  // namespace

WarpedModel::WarpedModel(WarpedSpec spec)
    : spec_(std::move(spec)), u_(parse_warping(spec_)), geometry_(assemble(spec_, u_)) {
  // Positivity of u_i on a base grid with 16 nodes per axis.
  const int nb = spec_.base_dim;
  const int n = geometry_.manifold.dim();
  const int per_axis = 16;
  long long total = 1;
  for (int a = 0; a < nb; ++a) total *= per_axis;
  std::vector<double> p(static_cast<std::size_t>(n), 0.0);
  for (long long idx = 0; idx < total; ++idx) {
    long long rest = idx;
    for (int a = nb - 1; a >= 0; --a) {
      p[a] = kTwoPi * static_cast<double>(rest % per_axis) / per_axis;
      rest /= per_axis;
    }
    for (std::size_t i = 0; i < u_.size(); ++i)
      if (!(u_[i](p) > 0.0)) throw ArgumentError("warping function u_" + std::to_string(i + 2) + " is not positive");
  }
}

WarpedResiduals WarpedModel::residuals(std::span<const double> p) const {
  const auto& m = geometry_.manifold;
  const int n = m.dim(), nb = spec_.base_dim, k = this->k();
  SplitPoint sp(m, geometry_.split, p);
  const auto& mj = sp.metric();
  WarpedResiduals out;

  std::vector<double> u(static_cast<std::size_t>(k), 1.0), lap(static_cast<std::size_t>(k), 0.0);
  std::vector<std::vector<double>> grad(static_cast<std::size_t>(k), std::vector<double>(static_cast<std::size_t>(n), 0.0));
  for (int i = 1; i < k; ++i) {
    const Jet uj = u_[i - 1].eval<Jet>(mj.x);
    u[i] = uj.value();
    if (!(u[i] > 0.0)) throw DomainError("warping function u_" + std::to_string(i + 1) + " is not positive");
    const auto g = gradient(mj, uj);
    for (int a = 0; a < n; ++a) grad[i][a] = g[a].value();
    for (int a = 0; a < nb; ++a) lap[i] += uj.hess(a, a);
  }
  auto cross = [&](int i, int j) { return sp.inner(grad[i], grad[j]) / (u[i] * u[j]); };
  const auto& dims = geometry_.split.dims();

  double smix_printed = 0.0, smix_cross = 0.0;
  for (int i = 1; i < k; ++i) {
    const double ni = dims[i];
    const Subset qi(std::vector<int>{i});
    const auto fd = sp.fundamental(qi);
    for (int a = 0; a < n; ++a) {
      const double expected = -ni * grad[i][a] / u[i];
      out.mean_curvature = std::max(out.mean_curvature, std::abs(fd.H[a] - expected));
      out.max_term = std::max(out.max_term, std::abs(expected));
    }

    const auto proj = sp.projector(qi.complement(k));
    std::vector<double> pg(static_cast<std::size_t>(n), 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) pg[a] += proj[a * n + b] * grad[i][b];
    const double div_h = sp.divergence(sp.mean_curvature(qi));
    const double printed = -ni * lap[i] / u[i] - (ni * ni - ni) * sp.inner(pg, pg) / (u[i] * u[i]);
    double cross_sum = 0.0;
    for (int j = 1; j < k; ++j)
      if (j != i) cross_sum += dims[j] * cross(i, j);
    out.div_printed = std::max(out.div_printed, std::abs(div_h - printed));
    out.div_corrected = std::max(out.div_corrected, std::abs(div_h - (printed - ni * cross_sum)));
    out.max_term = std::max({out.max_term, std::abs(div_h), std::abs(printed), std::abs(ni * cross_sum)});

    smix_printed += ni * (-lap[i]) / u[i];
    for (int j = i + 1; j < k; ++j) {
      const double c = cross(i, j);
      smix_cross += ni * dims[j] * c;
      out.cross_gradients = std::max(out.cross_gradients, std::abs(c));
    }
  }
  const double smix = sp.smix();
  out.smix_printed = std::abs(smix - smix_printed);
  out.smix_corrected = std::abs(smix - (smix_printed - smix_cross));
  out.max_term = std::max({out.max_term, std::abs(smix), std::abs(smix_printed), std::abs(smix_cross)});
  out.base_geodesic = std::sqrt(sp.fundamental(Subset(std::vector<int>{0})).h_norm2);
  return out;
}

}  // namespace splitgeom
