// Acceptance run: one verdict line per criterion.
//
// Criteria 5-8 name formulas whose printed form does not hold numerically.
// For those the line shows the verdict of the printed form and of the form
// the engine implements; the run fails only if an implemented form fails or
// a criterion outside that set fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitgeom/identities.hpp"
#include "splitgeom/models.hpp"
#include "splitgeom/runner.hpp"
#include "splitgeom/scenario.hpp"

namespace {

using namespace splitgeom;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

const std::set<int> kFormulaConflicts{5, 6, 7, 8};

struct Verdict {
  bool pass = true;
  std::string text;

  void add(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!text.empty()) text += "; ";
    text += what;
  }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

std::string sci(double v) { return fmt("%.2e", v); }

double seconds_since(Clock::time_point t) { return std::chrono::duration<double>(Clock::now() - t).count(); }

ScenarioReport run(const std::string& name, const std::vector<std::string>& checks,
                   const std::function<void(ScenarioConfig&)>& tweak = {}) {
  ScenarioConfig c = catalog_config(name);
  c.identities = checks;
  if (tweak) tweak(c);
  return run_scenario(Scenario::build(c));
}

const CheckReport& find(const ScenarioReport& r, const std::string& id) {
  for (const auto& c : r.checks)
    if (c.id == id) return c;
  throw std::runtime_error("check " + id + " missing from " + r.scenario);
}

double detail(const CheckReport& c, const std::string& key) { return c.details.at(key).get<double>(); }

int failures = 0;

void print(int id, const std::string& title, const Verdict& v) {
  std::printf("[%s] criterion %2d  %s: %s\n", v.pass ? "PASS" : "FAIL", id, title.c_str(), v.text.c_str());
  std::fflush(stdout);
  if (!v.pass) ++failures;
}

void print_conflict(int id, const std::string& title, const Verdict& printed, const Verdict& implemented) {
  std::printf("[%s] criterion %2d  %s: as printed %s (%s) | implemented form %s (%s)\n",
              printed.pass ? "PASS" : "FAIL", id, title.c_str(), printed.pass ? "PASS" : "FAIL", printed.text.c_str(),
              implemented.pass ? "PASS" : "FAIL", implemented.text.c_str());
  std::fflush(stdout);
  if (!implemented.pass) ++failures;
  if (!kFormulaConflicts.count(id) && !printed.pass) ++failures;
}

void criterion1() {
  const auto t0 = Clock::now();
  const auto r = run("twisted_torus_k2", {"main"}, [](ScenarioConfig& c) {
    c.sampling = SamplingMode::Grid;
    c.grid = {32};
  });
  const double secs = seconds_since(t0);
  const auto& m = find(r, "main");
  Verdict v;
  v.add(m.max_abs_residual <= 1e-8, "max |residual_main| " + sci(m.max_abs_residual) + " <= 1e-8 over " +
                                        std::to_string(m.points) + " grid points");
  v.add(m.points == 32 * 32 * 32, "32^3 samples");
  v.add(secs <= 10.0, fmt("%.2f s", secs) + " <= 10 s");
  print(1, "k=2 regression on the twisted T^3", v);
}

void criterion2() {
  Verdict v;
  for (const char* name : {"twisted_torus_k3", "warped_t4"}) {
    const auto r = run(name, {"main"}, [](ScenarioConfig& c) {
      c.sampling = SamplingMode::Random;
      c.samples = 500;
    });
    const auto& m = find(r, "main");
    v.add(m.max_abs_residual <= 1e-8 && m.points == 500,
          std::string(name) + " max |residual| " + sci(m.max_abs_residual) + " at " + std::to_string(m.points) +
              " points");
  }
  print(2, "main identity, k=3 twisted and k=4 warped", v);
}

void criterion3() {
  Verdict v;
  double worst = 0.0;
  int count = 0;
  std::vector<std::string> skipped;
  for (const auto& name : catalog_names()) {
    ScenarioConfig c = catalog_config(name);
    c.identities.clear();
    const Scenario probe = Scenario::build(c);
    if (!probe.split()) {
      skipped.push_back(name);
      continue;
    }
    const auto r = run(name, {"smix_lemma"});
    const auto& s = find(r, "smix_lemma");
    worst = std::max(worst, s.max_abs_residual);
    if (s.max_abs_residual > 1e-10) v.add(false, name + " " + sci(s.max_abs_residual));
    ++count;
  }
  std::string note = "max |2 S_mix - sum_i S_mix(D_i, D_i^perp)| " + sci(worst) + " <= 1e-10 over " +
                     std::to_string(count) + " split scenarios";
  if (!skipped.empty()) note += " (" + std::to_string(skipped.size()) + " hypersurfaces without a frame skipped)";
  v.add(worst <= 1e-10, note);
  print(3, "mixed scalar curvature lemma", v);
}

void criterion4() {
  Verdict v;
  const auto r = run("twisted_torus_k3", {"integral:main"}, [](ScenarioConfig& c) {
    c.grid = {64};
    c.grid_doubling = true;
  });
  const auto& m = find(r, "integral:main");
  v.add(m.pass && m.max_rel_residual <= 1e-10, "twisted T^3 at 64^3: |integral|/normalizer " +
                                                   sci(m.max_rel_residual) + ", Stokes " +
                                                   sci(detail(m, "stokes_ratio")));
  for (const char* name : {"twisted_torus_k3_mixed", "general_torus_k3"}) {
    const auto d = run(name, {"integral:main"}, [](ScenarioConfig& c) { c.grid_doubling = true; });
    const auto& dm = find(d, "integral:main");
    std::string note = std::string(name) + " " + sci(dm.max_rel_residual);
    const auto& gd = dm.details.at("grid_doubling");
    if (gd.is_object())
      note += " -> " + sci(std::max(gd.at("ratio").get<double>(), gd.at("stokes_ratio").get<double>())) +
              " on the doubled grid";
    else
      note += " (" + gd.get<std::string>() + ")";
    v.add(dm.pass, note);
  }
  print(4, "integral formula and grid doubling", v);
}

struct AuxCase {
  const char* scenario;
  int r;
};
const AuxCase kAuxCases[] = {{"twisted_torus_k3_mixed", 2}, {"twisted_torus_k4", 2}, {"twisted_torus_k4", 3},
                             {"warped_t4", 2},              {"warped_t4", 3}};

void criterion5() {
  Verdict printed, implemented;
  for (const auto& a : kAuxCases) {
    const std::string r = std::to_string(a.r);
    const auto rep = run(a.scenario, {"aux:" + r, "integral:aux:" + r, "aux_as_printed:" + r,
                                      "integral:aux_as_printed:" + r});
    const std::string tag = std::string(a.scenario) + " (k=" + std::to_string(rep.k) + ",r=" + r + ")";
    const auto& pw = find(rep, "aux:" + r);
    const auto& in = find(rep, "integral:aux:" + r);
    implemented.add(pw.max_abs_residual <= 1e-8 && in.pass,
                    tag + " " + sci(pw.max_abs_residual) + ", integral " + sci(in.max_rel_residual));
    const auto& ppw = find(rep, "aux_as_printed:" + r);
    const auto& pin = find(rep, "integral:aux_as_printed:" + r);
    printed.add(ppw.max_abs_residual <= 1e-8 && pin.pass,
                tag + " " + sci(ppw.max_abs_residual) + ", integral " + sci(pin.max_rel_residual));
  }
  print_conflict(5, "auxiliary identities (3,2), (4,2), (4,3)", printed, implemented);
}

void criterion6() {
  Verdict printed, implemented;
  for (const char* name : {"twisted_torus_k3_mixed", "twisted_torus_k4", "warped_t4"}) {
    const Scenario sc = Scenario::build(catalog_config(name));
    const int k = sc.k();
    double comp = 0.0, combo = 0.0, lit = 0.0;
    for (const auto& p : sc.sample_points()) {
      const SplitPoint sp(sc.manifold(), *sc.split(), p);
      IdentityContext ctx(sp);
      const double main = ctx.evaluate(IdentityKind::Main).residual;
      const double c = ctx.evaluate(IdentityKind::Companion).residual;
      comp = std::max(comp, std::abs(c));
      combo = std::max(combo, std::abs(c - (main - ctx.evaluate(IdentityKind::Aux, k - 1).residual)));
      lit = std::max(lit, std::abs(main - ctx.evaluate(IdentityKind::AuxAsPrinted, k - 1).residual));
    }
    implemented.add(comp <= 1e-8 && combo <= 1e-9,
                    std::string(name) + " residual " + sci(comp) + ", |companion - (main - aux)| " + sci(combo));
    printed.add(lit <= 1e-8, std::string(name) + " residual " + sci(lit));
  }
  print_conflict(6, "companion identity", printed, implemented);
}

void criterion7() {
  Verdict printed, implemented;
  for (const char* name : {"warped_t2", "warped_t3_n12", "warped_t3"}) {
    const auto rep = run(name, {"warped"});
    const auto& w = find(rep, "warped");
    const double h = detail(w, "max_mean_curvature");
    const double dp = detail(w, "max_div_printed"), sp = detail(w, "max_smix_printed");
    const double dc = detail(w, "max_div_corrected"), sc = detail(w, "max_smix_corrected");
    printed.add(std::max({h, dp, sp}) <= 1e-9,
                std::string(name) + " H " + sci(h) + ", Div H " + sci(dp) + ", S_mix " + sci(sp));
    implemented.add(std::max({h, dc, sc}) <= 1e-9,
                    std::string(name) + " H " + sci(h) + ", Div H " + sci(dc) + ", S_mix " + sci(sc));
  }
  for (const char* name : {"warped_t3", "warped_t4"}) {
    const auto rep = run(name, {"predicates"});
    bool all = true;
    for (const auto& p : find(rep, "predicates").details.at("pairs")) all = all && p.at("mixed_totally_geodesic");
    const std::string note = std::string(name) + (all ? " all pairs mixed-TG" : " a pair is not mixed-TG");
    printed.add(all, note);
    implemented.add(all, note);
  }
  print_conflict(7, "warped products", printed, implemented);
}

void criterion8() {
  Verdict printed, implemented;
  const auto torus = run("torus_of_revolution", {"hypersurface"});
  const auto& t = find(torus, "hypersurface");
  const double tp = detail(t, "max_residual_printed");
  implemented.add(t.max_abs_residual <= 1e-6, "torus k=2 " + sci(t.max_abs_residual));
  printed.add(tp <= 1e-6, "torus k=2 " + sci(tp));

  const auto graph = run("graph_r4", {"codazzi", "hypersurface"}, [](ScenarioConfig& c) { c.samples = 20; });
  const auto& cz = find(graph, "codazzi");
  const double cmax =
      std::max({detail(cz, "max_symmetry"), detail(cz, "max_lemma_cross"), detail(cz, "max_lemma_diag")});
  const std::string cnote = "graph Codazzi " + sci(cmax);
  implemented.add(cmax <= 1e-5, cnote);
  printed.add(cmax <= 1e-5, cnote);

  const auto& g = find(graph, "hypersurface");
  const double gp = detail(g, "max_residual_printed");
  implemented.add(g.max_abs_residual <= 1e-4 && g.points == 20,
                  "graph k=3 " + sci(g.max_abs_residual) + " at " + std::to_string(g.points) + " points");
  printed.add(gp <= 1e-4, "graph k=3 " + sci(gp));

  const double r3 = std::sqrt(3.0);
  const double mu[] = {r3, 0.0, -r3};
  const int n[] = {1, 1, 1};
  const double grad[] = {0.0, 0.0, 0.0};
  const double full = std::abs(hypersurface_k3_rhs(mu, n, 1.0, grad, 1.0));
  const double half = std::abs(hypersurface_k3_rhs(mu, n, 1.0, grad, 0.5));
  implemented.add(full <= 1e-12, "constant triple " + sci(full));
  printed.add(half <= 1e-12, "constant triple " + sci(half));
  print_conflict(8, "hypersurfaces", printed, implemented);
}

void criterion9() {
  Verdict v;
  bool counts = true;
  for (int k = 1; k <= 8; ++k)
    for (int r = 1; r <= k; ++r) counts = counts && static_cast<long long>(subsets(r, k).size()) == binomial(k, r);
  v.add(counts, "|S(r,k)| = C(k,r) for k <= 8");

  double proj = 0.0;
  for (const char* name : {"twisted_torus_k3_mixed", "general_torus_k3", "twisted_torus_k4", "warped_t4"})
    proj = std::max(proj, find(run(name, {"projection_identity"}), "projection_identity").max_abs_residual);
  v.add(proj <= 1e-10, "projection identity " + sci(proj));

  const auto prop = find(run("warped_t4", {"propagation"}), "propagation");
  v.add(prop.max_abs_residual <= 1e-10 && prop.pass,
        "propagation on warped T^4 " + sci(prop.max_abs_residual) + " over " +
            std::to_string(prop.details.at("subsets_checked").get<long long>()) + " subsets");
  print(9, "combinatorics and algebra", v);
}

void criterion10() {
  const auto names = catalog_names();
  std::vector<ScenarioReport> first, second;
  const auto t0 = Clock::now();
  for (const auto& n : names) first.push_back(run_scenario(Scenario::build(catalog_config(n)), 1));
  const double secs = seconds_since(t0);
  for (const auto& n : names) second.push_back(run_scenario(Scenario::build(catalog_config(n)), 4));
  const json a = report_json(first, false), b = report_json(second, false);
  Verdict v;
  v.add(a.at("all_pass").get<bool>(), std::to_string(names.size()) + " scenarios " +
                                          (a.at("all_pass").get<bool>() ? "all pass" : "with failures"));
  v.add(secs <= 300.0, fmt("%.1f s", secs) + " <= 300 s on one thread");
  v.add(a.dump() == b.dump(), a.dump() == b.dump() ? "reports identical for 1 and 4 threads"
                                                   : "reports differ between 1 and 4 threads");
  print(10, "full catalog", v);
}

}  // namespace

int main() {
  try {
    criterion1();
    criterion2();
    criterion3();
    criterion4();
    criterion5();
    criterion6();
    criterion7();
    criterion8();
    criterion9();
    criterion10();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "acceptance run aborted: %s\n", e.what());
    return 2;
  }
  std::printf("%s\n", failures ? "acceptance: FAILED" : "acceptance: ok (printed-form failures are listed above)");
  return failures ? 1 : 0;
}
