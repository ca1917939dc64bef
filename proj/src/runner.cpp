#include "splitgeom/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>

#include "splitgeom/identities.hpp"
#include "splitgeom/parallel.hpp"

namespace splitgeom {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
// Residues below this relative level are treated as roundoff by the grid
// doubling test.
constexpr double kRoundoffFloor = 1e-13;
// Warping gradients count as orthogonal below this level.
constexpr double kOrthogonal = 1e-14;

bool needs_curvature(const std::string& name) {
  return name == "main" || name == "walczak" || name == "aux" || name == "aux_as_printed" || name == "companion" ||
         name == "companion_k3" || name == "smix_lemma" || name == "hypersurface_generic";
}

bool uses_split_point(const std::string& name) {
  return needs_curvature(name) || name == "frame" || name == "projection_identity" || name == "predicates" ||
         name == "propagation" || name == "umbilicity";
}

IdentityKind identity_kind(const std::string& name) {
  if (name == "main") return IdentityKind::Main;
  if (name == "walczak") return IdentityKind::Walczak;
  if (name == "aux") return IdentityKind::Aux;
  if (name == "aux_as_printed") return IdentityKind::AuxAsPrinted;
  if (name == "companion") return IdentityKind::Companion;
  if (name == "companion_k3") return IdentityKind::CompanionK3;
  return IdentityKind::SmixLemma;
}

std::string point_str(std::span<const double> p) {
  std::ostringstream os;
  os << std::setprecision(6) << '(';
  for (std::size_t i = 0; i < p.size(); ++i) os << (i ? ", " : "") << p[i];
  os << ')';
  return os.str();
}

std::vector<std::pair<int, int>> block_pairs(int k) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) out.emplace_back(i, j);
  return out;
}

// Per-point results of one pointwise check.
struct Pointwise {
  CheckRequest req;
  std::vector<std::string> extra_names;
  std::vector<double> abs, scale, seconds;
  std::vector<std::vector<double>> extras;
  std::vector<std::string> errors;

  void resize(std::size_t count) {
    abs.assign(count, 0.0);
    scale.assign(count, 0.0);
    seconds.assign(count, 0.0);
    extras.assign(count, std::vector<double>(extra_names.size(), 0.0));
    errors.assign(count, {});
  }
};

std::vector<std::string> extra_names(const CheckRequest& c, int k) {
  if (c.name == "warped")
    return {"mean_curvature", "div_printed", "div_corrected", "smix_printed", "smix_corrected", "base_geodesic",
            "cross_gradients"};
  if (c.name == "codazzi") return {"symmetry", "lemma_cross", "lemma_diag", "corollary"};
  if (c.name == "hypersurface") return {"residual_printed"};
  if (c.name == "propagation") return {"tg_hypothesis", "int_hypothesis"};
  if (c.name == "predicates") {
    std::vector<std::string> names;
    for (auto [i, j] : block_pairs(k)) {
      names.push_back("h_" + std::to_string(i + 1) + std::to_string(j + 1));
      names.push_back("T_" + std::to_string(i + 1) + std::to_string(j + 1));
    }
    return names;
  }
  return {};
}

double g_norm(const SplitPoint& sp, std::span<const double> v) { return std::sqrt(std::max(0.0, sp.inner(v, v))); }

std::vector<double> apply(const std::vector<double>& P, std::span<const double> v, int n) {
  std::vector<double> out(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i] += P[i * n + j] * v[j];
  return out;
}

// Orthonormality, projector algebra, h symmetric, T antisymmetric, H_q ⟂ D_q.
double frame_residual(const SplitPoint& sp, IdentityContext& ctx) {
  const int n = sp.dim(), k = sp.k();
  const auto af = sp.adapted_frame();
  const auto& g = sp.metric();
  double worst = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double s = 0.0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) s += g.metric(i, j).value() * af.frame[a * n + i] * af.frame[b * n + j];
      worst = std::max(worst, std::abs(s - (a == b ? 1.0 : 0.0)));
    }
  std::vector<double> sum(static_cast<std::size_t>(n * n), 0.0);
  for (int p = 0; p < k; ++p) {
    const auto& P = af.projectors[p];
    for (int q = 0; q < k; ++q) {
      const auto& Q = af.projectors[q];
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          double s = 0.0;
          for (int l = 0; l < n; ++l) s += P[i * n + l] * Q[l * n + j];
          worst = std::max(worst, std::abs(s - (p == q ? P[i * n + j] : 0.0)));
        }
    }
    for (int i = 0; i < n * n; ++i) sum[i] += P[i];
    // g-self-adjointness: g_il P^l_j symmetric in (i, j).
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double gij = 0.0, gji = 0.0;
        for (int l = 0; l < n; ++l) {
          gij += g.metric(i, l).value() * P[l * n + j];
          gji += g.metric(j, l).value() * P[l * n + i];
        }
        worst = std::max(worst, std::abs(gij - gji));
      }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) worst = std::max(worst, std::abs(sum[i * n + j] - (i == j ? 1.0 : 0.0)));
  for (int r = 1; r < k; ++r)
    for (const auto& q : subsets(r, k)) {
      const auto& fd = ctx.data(q);
      const int ni = static_cast<int>(fd.inside.size()), no = static_cast<int>(fd.outside.size());
      for (int a = 0; a < ni; ++a)
        for (int b = 0; b < ni; ++b)
          for (int c = 0; c < no; ++c) {
            worst = std::max(worst, std::abs(fd.h_at(a, b, c) - fd.h_at(b, a, c)));
            worst = std::max(worst, std::abs(fd.T_at(a, b, c) + fd.T_at(b, a, c)));
          }
      worst = std::max(worst, g_norm(sp, apply(sp.projector(q), fd.H, n)));
    }
  return worst;
}

// H_q = P_{q^c}(Σ_{i∈q} H_i) for every proper subset q.
std::pair<double, double> projection_residual(const SplitPoint& sp, IdentityContext& ctx) {
  const int n = sp.dim(), k = sp.k();
  double worst = 0.0, scale = 0.0;
  for (int r = 1; r < k; ++r)
    for (const auto& q : subsets(r, k)) {
      std::vector<double> sum(static_cast<std::size_t>(n), 0.0);
      for (int i : q.members()) {
        const auto& Hi = ctx.data(Subset({i})).H;
        for (int a = 0; a < n; ++a) sum[a] += Hi[a];
      }
      const auto projected = apply(sp.projector(q.complement(k)), sum, n);
      const auto& Hq = ctx.data(q).H;
      std::vector<double> diff(static_cast<std::size_t>(n));
      for (int a = 0; a < n; ++a) diff[a] = Hq[a] - projected[a];
      worst = std::max(worst, g_norm(sp, diff));
      scale = std::max({scale, g_norm(sp, Hq), g_norm(sp, sum)});
    }
  return {worst, scale};
}

// |h_q|² - |H_q|² = -Σ_{i∈q} (n_i - 1)/n_i |P̂_q H_i|² for every proper q.
std::pair<double, double> umbilicity_residual(const SplitPoint& sp, IdentityContext& ctx) {
  const int n = sp.dim(), k = sp.k();
  double worst = 0.0, scale = 0.0;
  for (int r = 1; r < k; ++r)
    for (const auto& q : subsets(r, k)) {
      const auto& fd = ctx.data(q);
      const auto proj = sp.projector(q.complement(k));
      double rhs = 0.0;
      for (int i : q.members()) {
        const double ni = sp.dims()[i];
        const auto v = apply(proj, ctx.data(Subset({i})).H, n);
        rhs -= (ni - 1.0) / ni * sp.inner(v, v);
      }
      const double lhs = fd.h_norm2 - fd.H_norm2;
      worst = std::max(worst, std::abs(lhs - rhs));
      scale = std::max({scale, fd.h_norm2, fd.H_norm2, std::abs(rhs)});
    }
  return {worst, scale};
}

// Cross-block components of h_q (T_q) for |q| >= 3 at points where every
// pair is mixed totally geodesic (mixed integrable).
void propagation_residual(const SplitPoint& sp, IdentityContext& ctx, double hypothesis_tol, Pointwise& out,
                          std::size_t idx) {
  const int k = sp.k();
  bool tg = true, integ = true;
  for (auto [i, j] : block_pairs(k)) {
    const auto& fd = ctx.data(Subset({i, j}));
    tg = tg && cross_block_norm(fd, sp, i, j, false) <= hypothesis_tol;
    integ = integ && cross_block_norm(fd, sp, i, j, true) <= hypothesis_tol;
  }
  double worst = 0.0;
  for (int r = 3; r < k; ++r)
    for (const auto& q : subsets(r, k)) {
      const auto& fd = ctx.data(q);
      for (int i : q.members())
        for (int j : q.members()) {
          if (i == j) continue;
          if (tg) worst = std::max(worst, cross_block_norm(fd, sp, i, j, false));
          if (integ) worst = std::max(worst, cross_block_norm(fd, sp, i, j, true));
        }
    }
  out.abs[idx] = worst;
  out.extras[idx] = {tg ? 1.0 : 0.0, integ ? 1.0 : 0.0};
}

void evaluate_split_check(Pointwise& c, std::size_t idx, const SplitPoint& sp, IdentityContext& ctx,
                          const Scenario& scenario) {
  const auto& name = c.req.name;
  if (name == "frame") {
    c.abs[idx] = frame_residual(sp, ctx);
  } else if (name == "projection_identity") {
    std::tie(c.abs[idx], c.scale[idx]) = projection_residual(sp, ctx);
  } else if (name == "umbilicity") {
    std::tie(c.abs[idx], c.scale[idx]) = umbilicity_residual(sp, ctx);
  } else if (name == "predicates") {
    std::size_t slot = 0;
    double worst_h = 0.0;
    for (auto [i, j] : block_pairs(sp.k())) {
      const auto& fd = ctx.data(Subset({i, j}));
      const double h = cross_block_norm(fd, sp, i, j, false);
      c.extras[idx][slot++] = h;
      c.extras[idx][slot++] = cross_block_norm(fd, sp, i, j, true);
      worst_h = std::max(worst_h, h);
    }
    // Warped products: every pair must be mixed totally geodesic.
    c.abs[idx] = scenario.warped() ? worst_h : 0.0;
  } else if (name == "propagation") {
    propagation_residual(sp, ctx, check_tolerance(scenario.config(), parse_check_id("predicates"), sp.k()), c, idx);
  } else if (name == "hypersurface_generic") {
    const auto hyp = scenario.hypersurface()->identity(sp.point());
    const auto gen = ctx.evaluate(IdentityKind::Walczak);
    c.abs[idx] = std::max(std::abs(hyp.lhs - gen.lhs), std::abs(hyp.rhs - gen.rhs));
    c.scale[idx] = std::max(hyp.max_term, gen.max_term);
  } else {
    const auto v = ctx.evaluate(identity_kind(name), c.req.r);
    c.abs[idx] = std::abs(v.residual);
    c.scale[idx] = v.max_term;
  }
}

void evaluate_model_check(Pointwise& c, std::size_t idx, std::span<const double> p, const Scenario& scenario) {
  const auto& name = c.req.name;
  if (name == "warped") {
    const auto w = scenario.warped()->residuals(p);
    c.extras[idx] = {w.mean_curvature, w.div_printed,   w.div_corrected,  w.smix_printed,
                     w.smix_corrected, w.base_geodesic, w.cross_gradients};
    double worst = std::max({w.mean_curvature, w.div_corrected, w.smix_corrected, w.base_geodesic});
    if (w.cross_gradients <= kOrthogonal) worst = std::max({worst, w.div_printed, w.smix_printed});
    c.abs[idx] = worst;
    c.scale[idx] = w.max_term;
  } else if (name == "kmix_ij") {
    c.abs[idx] = scenario.hypersurface()->mixed_curvature_residual(p);
  } else if (name == "codazzi") {
    const auto r = scenario.hypersurface()->codazzi(p);
    c.extras[idx] = {r.symmetry, r.lemma_cross, r.lemma_diag, r.corollary};
    c.abs[idx] = std::max({r.symmetry, r.lemma_cross, r.lemma_diag, r.corollary});
    c.scale[idx] = r.max_term;
  } else if (name == "hypersurface") {
    const auto r = scenario.hypersurface()->identity(p);
    c.extras[idx] = {std::abs(r.residual_printed)};
    c.abs[idx] = std::abs(r.residual);
    c.scale[idx] = r.max_term;
  }
}

CheckReport summarize(const Pointwise& c, const Scenario& scenario, const std::vector<std::vector<double>>& points) {
  CheckReport rep;
  rep.id = c.req.id;
  rep.scenario = scenario.config().name;
  rep.points = points.size();
  rep.tolerance = check_tolerance(scenario.config(), c.req, scenario.k());
  std::size_t worst = 0;
  std::string error;
  std::size_t error_point = 0;
  double worst_rel = -1.0;
  std::vector<double> extra_max(c.extra_names.size(), 0.0);
  for (std::size_t i = 0; i < points.size(); ++i) {
    rep.seconds += c.seconds[i];
    if (!c.errors[i].empty()) {
      if (error.empty()) {
        error = c.errors[i];
        error_point = i;
      }
      continue;
    }
    const double rel = c.abs[i] / (1.0 + c.scale[i]);
    rep.max_abs_residual = std::max(rep.max_abs_residual, c.abs[i]);
    if (rel > worst_rel || std::isnan(rel)) {
      worst_rel = std::isnan(rel) ? std::numeric_limits<double>::infinity() : rel;
      worst = i;
    }
    for (std::size_t e = 0; e < extra_max.size(); ++e) extra_max[e] = std::max(extra_max[e], c.extras[i][e]);
  }
  rep.max_rel_residual = std::max(worst_rel, 0.0);
  rep.worst_point = points.empty() ? std::vector<double>{} : points[worst];

  if (c.req.name == "predicates") {
    json pairs = json::array();
    std::size_t slot = 0;
    for (auto [i, j] : block_pairs(scenario.k())) {
      const double h = extra_max[slot++], t = extra_max[slot++];
      const double tol = rep.tolerance;
      pairs.push_back({{"pair", {i + 1, j + 1}},
                       {"mixed_totally_geodesic", h <= tol},
                       {"mixed_integrable", t <= tol},
                       {"sup_h", h},
                       {"sup_T", t}});
    }
    rep.details["pairs"] = pairs;
    rep.details["requires_mixed_totally_geodesic"] = scenario.warped() != nullptr;
  } else if (c.req.name == "propagation") {
    std::size_t tg = 0, integ = 0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (!c.errors[i].empty()) continue;
      tg += c.extras[i][0] > 0.5;
      integ += c.extras[i][1] > 0.5;
    }
    rep.details["points_mixed_totally_geodesic"] = tg;
    rep.details["points_mixed_integrable"] = integ;
    long long checked = 0;
    for (int r = 3; r < scenario.k(); ++r) checked += binomial(scenario.k(), r);
    rep.details["subsets_checked"] = checked;
  } else {
    for (std::size_t e = 0; e < extra_max.size(); ++e) rep.details["max_" + c.extra_names[e]] = extra_max[e];
  }
  if (c.req.name == "warped") {
    const bool orth = extra_max.back() <= kOrthogonal;
    rep.details["orthogonal_gradients"] = orth;
    rep.details["printed_forms_asserted"] = orth ? "everywhere" : "where gradients are orthogonal";
  }
  if (c.req.name == "codazzi") {
    bool simple = true;
    for (int m : scenario.dims()) simple = simple && m == 1;
    rep.details["simple_spectrum"] = simple;
  }

  if (!error.empty()) {
    rep.pass = false;
    rep.worst_point = points[error_point];
    rep.message = c.req.id + " failed on " + rep.scenario + " at " + point_str(points[error_point]) + ": " + error;
  } else {
    rep.pass = rep.max_rel_residual <= rep.tolerance;
    if (!rep.pass) {
      std::ostringstream os;
      os << c.req.id << " failed on " << rep.scenario << ": max relative residual " << std::setprecision(3)
         << rep.max_rel_residual << " > " << rep.tolerance << " at " << point_str(rep.worst_point);
      rep.message = os.str();
    }
  }
  return rep;
}

std::vector<CheckReport> run_integrals(const Scenario& scenario, const std::vector<CheckRequest>& reqs, int threads) {
  const auto& cfg = scenario.config();
  std::vector<IdentityKind> kinds;
  std::vector<int> rs;
  for (const auto& r : reqs) {
    kinds.push_back(identity_kind(r.target));
    rs.push_back(r.r);
  }
  const auto t0 = Clock::now();
  const auto grid = expand_grid(cfg.grid, scenario.dim());
  std::vector<IntegralResult> base;
  std::string error;
  try {
    base = integral_checks(*scenario.split(), scenario.manifold(), kinds, rs, grid, threads);
  } catch (const Error& e) {
    error = e.what();
  }
  const double elapsed = seconds_since(t0);

  std::vector<CheckReport> out;
  std::vector<std::size_t> redo;
  for (std::size_t i = 0; i < reqs.size(); ++i) {
    CheckReport rep;
    rep.id = reqs[i].id;
    rep.scenario = cfg.name;
    rep.grid = grid;
    rep.tolerance = check_tolerance(cfg, reqs[i], scenario.k());
    rep.seconds = elapsed / static_cast<double>(reqs.size());
    if (!error.empty()) {
      rep.message = rep.id + " failed on " + cfg.name + ": " + error;
      out.push_back(rep);
      continue;
    }
    const auto& r = base[i];
    rep.integral_value = r.integral;
    rep.normalizer = r.normalizer;
    rep.max_abs_residual = std::abs(r.integral);
    rep.max_rel_residual = r.ratio();
    rep.details = {{"ratio", r.ratio()},
                   {"stokes_integral", r.stokes},
                   {"stokes_ratio", r.stokes_ratio()}};
    rep.pass = r.ratio() <= rep.tolerance && r.stokes_ratio() <= rep.tolerance;
    if (cfg.grid_doubling) {
      if (std::max(r.ratio(), r.stokes_ratio()) > kRoundoffFloor) {
        redo.push_back(i);
      } else {
        rep.details["grid_doubling"] = "residue below roundoff floor";
      }
    }
    if (!rep.pass) {
      std::ostringstream os;
      os << rep.id << " failed on " << cfg.name << ": |integral|/normalizer " << std::setprecision(3) << r.ratio()
         << ", Stokes ratio " << r.stokes_ratio() << " > " << rep.tolerance;
      rep.message = os.str();
    }
    out.push_back(rep);
  }

  if (!redo.empty()) {
    std::vector<IdentityKind> k2;
    std::vector<int> r2;
    for (auto i : redo) {
      k2.push_back(kinds[i]);
      r2.push_back(rs[i]);
    }
    std::vector<int> fine(grid);
    for (int& g : fine) g *= 2;
    const auto t1 = Clock::now();
    const auto doubled = integral_checks(*scenario.split(), scenario.manifold(), k2, r2, fine, threads);
    const double extra = seconds_since(t1) / static_cast<double>(redo.size());
    for (std::size_t j = 0; j < redo.size(); ++j) {
      auto& rep = out[redo[j]];
      const auto& a = base[redo[j]];
      const auto& b = doubled[j];
      const double before = std::max(a.ratio(), a.stokes_ratio());
      const double after = std::max(b.ratio(), b.stokes_ratio());
      const bool reduced = after <= before / 100.0 || after <= kRoundoffFloor;
      rep.details["grid_doubling"] = {{"grid", fine}, {"ratio", b.ratio()}, {"stokes_ratio", b.stokes_ratio()},
                                      {"reduced_by_100", reduced}};
      rep.seconds += extra;
      if (!reduced) {
        rep.pass = false;
        std::ostringstream os;
        os << rep.id << " failed on " << cfg.name << ": doubling the grid reduced the residue from "
           << std::setprecision(3) << before << " only to " << after;
        rep.message = os.str();
      }
    }
  }
  return out;
}

CheckReport run_dperp(const Scenario& scenario, const CheckRequest& req, const std::vector<std::vector<double>>& points) {
  CheckReport rep;
  rep.id = req.id;
  rep.scenario = scenario.config().name;
  rep.points = points.size();
  rep.tolerance = check_tolerance(scenario.config(), req, scenario.k());
  const auto t0 = Clock::now();
  try {
    const auto d = scenario.hypersurface()->dperp_integrability(points, rep.tolerance);
    // The verdict is the agreement of the two integrability tests.
    rep.max_abs_residual = d.sup_A;
    rep.max_rel_residual = d.flags_agree_everywhere ? 0.0 : 1.0;
    rep.details = {{"forall_zero_A_cross", d.forall_zero_A_cross},
                   {"brackets_tangent", d.brackets_tangent},
                   {"sup_A", d.sup_A},
                   {"sup_bracket", d.sup_bracket},
                   {"flags_agree_everywhere", d.flags_agree_everywhere}};
    rep.pass = d.flags_agree_everywhere && d.forall_zero_A_cross == d.brackets_tangent;
    if (!rep.pass) rep.message = req.id + " failed on " + rep.scenario + ": the A-based and bracket-based flags disagree";
  } catch (const Error& e) {
    rep.message = req.id + " failed on " + rep.scenario + ": " + e.what();
  }
  rep.seconds = seconds_since(t0);
  return rep;
}

}  // namespace

bool ScenarioReport::pass() const {
  return std::all_of(checks.begin(), checks.end(), [](const CheckReport& c) { return c.pass; });
}

ScenarioReport run_scenario(const Scenario& scenario, int threads) {
  const auto t0 = Clock::now();
  const auto& cfg = scenario.config();
  if (threads <= 0) threads = cfg.threads;
  if (threads <= 0) threads = default_thread_count();

  ScenarioReport report;
  report.scenario = cfg.name;
  report.kind = scenario.kind();
  report.k = scenario.k();
  report.dims = scenario.dims();

  std::vector<CheckRequest> requests;
  for (const auto& id : cfg.identities) requests.push_back(parse_check_id(id));

  std::vector<Pointwise> pointwise;
  std::vector<CheckRequest> integrals;
  bool split_point = false, curvature = false;
  for (const auto& r : requests) {
    if (r.name == "integral") {
      integrals.push_back(r);
    } else if (r.name != "dperp_integrability") {
      Pointwise p;
      p.req = r;
      p.extra_names = extra_names(r, scenario.k());
      pointwise.push_back(std::move(p));
      split_point = split_point || uses_split_point(r.name);
      curvature = curvature || needs_curvature(r.name);
    }
  }

  const auto points = scenario.sample_points();
  std::string metric_error;
  try {
    scenario.manifold().validate(points);
  } catch (const Error& e) {
    metric_error = e.what();
  }

  for (auto& p : pointwise) p.resize(points.size());
  if (metric_error.empty() && !pointwise.empty()) {
    parallel_for(points.size(), threads, [&](std::size_t begin, std::size_t end) {
      for (std::size_t idx = begin; idx < end; ++idx) {
        const auto& x = points[idx];
        std::optional<SplitPoint> sp;
        std::optional<IdentityContext> ctx;
        std::string split_error;
        double shared = 0.0;
        if (split_point) {
          const auto ts = Clock::now();
          try {
            sp.emplace(scenario.manifold(), *scenario.split(), x, curvature);
            ctx.emplace(*sp);
          } catch (const Error& e) {
            split_error = e.what();
          }
          shared = seconds_since(ts);
        }
        for (auto& c : pointwise) {
          const auto tc = Clock::now();
          try {
            if (uses_split_point(c.req.name)) {
              if (!split_error.empty()) throw GeometryError(split_error);
              evaluate_split_check(c, idx, *sp, *ctx, scenario);
            } else {
              evaluate_model_check(c, idx, x, scenario);
            }
          } catch (const Error& e) {
            c.errors[idx] = e.what();
            c.abs[idx] = kNaN;
          }
          c.seconds[idx] = seconds_since(tc) + (uses_split_point(c.req.name) ? shared : 0.0);
        }
      }
    });
  }

  std::size_t next_integral = 0;
  std::vector<CheckReport> integral_reports;
  if (!integrals.empty()) {
    if (metric_error.empty()) {
      integral_reports = run_integrals(scenario, integrals, threads);
    } else {
      for (const auto& r : integrals) {
        CheckReport rep;
        rep.id = r.id;
        rep.scenario = cfg.name;
        rep.message = r.id + " failed on " + cfg.name + ": " + metric_error;
        integral_reports.push_back(rep);
      }
    }
  }
  std::size_t next_pointwise = 0;
  for (const auto& r : requests) {
    if (r.name == "integral") {
      report.checks.push_back(integral_reports[next_integral++]);
    } else if (r.name == "dperp_integrability") {
      report.checks.push_back(run_dperp(scenario, r, points));
    } else {
      const auto& c = pointwise[next_pointwise++];
      if (!metric_error.empty()) {
        CheckReport rep;
        rep.id = r.id;
        rep.scenario = cfg.name;
        rep.points = points.size();
        rep.tolerance = check_tolerance(cfg, r, scenario.k());
        rep.message = r.id + " failed on " + cfg.name + ": " + metric_error;
        report.checks.push_back(rep);
      } else {
        report.checks.push_back(summarize(c, scenario, points));
      }
    }
  }

  if (!pointwise.empty() && metric_error.empty()) {
    for (int a = 0; a < scenario.dim(); ++a) report.csv_columns.push_back("x" + std::to_string(a + 1));
    for (const auto& c : pointwise) report.csv_columns.push_back(c.req.id);
    report.csv_rows.reserve(points.size());
    for (std::size_t i = 0; i < points.size(); ++i) {
      std::vector<double> row(points[i]);
      for (const auto& c : pointwise) row.push_back(c.abs[i]);
      report.csv_rows.push_back(std::move(row));
    }
  }
  report.seconds = seconds_since(t0);
  return report;
}

json check_json(const CheckReport& c) {
  auto num = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json j{{"id", c.id},
         {"scenario", c.scenario},
         {"verdict", c.pass ? "pass" : "fail"},
         {"tolerance", c.tolerance},
         {"max_abs_residual", num(c.max_abs_residual)},
         {"max_rel_residual", num(c.max_rel_residual)}};
  if (!c.grid.empty()) j["grid"] = c.grid;
  if (c.points) j["points"] = c.points;
  if (c.integral_value) j["integral_value"] = num(*c.integral_value);
  if (c.normalizer) j["normalizer"] = num(*c.normalizer);
  if (!c.worst_point.empty()) j["worst_point"] = c.worst_point;
  if (!c.details.empty()) j["details"] = c.details;
  if (!c.message.empty()) j["message"] = c.message;
  return j;
}

json report_json(std::span<const ScenarioReport> reports, bool timing) {
  json scenarios = json::array();
  json times = json::object();
  bool all = true;
  double total = 0.0;
  for (const auto& r : reports) {
    json checks = json::array();
    json check_times = json::object();
    for (const auto& c : r.checks) {
      checks.push_back(check_json(c));
      check_times[c.id] = c.seconds;
    }
    scenarios.push_back({{"scenario", r.scenario},
                         {"kind", r.kind},
                         {"k", r.k},
                         {"dims", r.dims},
                         {"pass", r.pass()},
                         {"checks", checks}});
    times[r.scenario] = {{"wall_seconds", r.seconds}, {"check_seconds", check_times}};
    all = all && r.pass();
    total += r.seconds;
  }
  json out{{"scenarios", scenarios}, {"all_pass", all}};
  if (timing) out["timing"] = {{"total_seconds", total}, {"scenarios", times}};
  return out;
}

void write_csv(const ScenarioReport& report, std::ostream& out) {
  for (std::size_t i = 0; i < report.csv_columns.size(); ++i) out << (i ? "," : "") << report.csv_columns[i];
  out << '\n';
  out << std::setprecision(17);
  for (const auto& row : report.csv_rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << ',';
      if (std::isfinite(row[i])) out << row[i];
      else out << "nan";
    }
    out << '\n';
  }
}

std::vector<std::string> diff_reports(const json& a, const json& b) {
  json x = a, y = b;
  if (x.is_object()) x.erase("timing");
  if (y.is_object()) y.erase("timing");
  std::vector<std::string> lines;
  for (const auto& op : json::diff(x, y)) {
    const std::string kind = op.at("op").get<std::string>();
    const std::string path = op.at("path").get<std::string>();
    std::string line = kind + " " + path;
    if (kind == "replace") {
      line += ": " + x.at(json::json_pointer(path)).dump() + " -> " + op.at("value").dump();
    } else if (kind == "add") {
      line += ": " + op.at("value").dump();
    }
    lines.push_back(std::move(line));
  }
  return lines;
}

}  // namespace splitgeom
