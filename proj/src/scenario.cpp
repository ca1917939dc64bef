#include "splitgeom/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>

#include "splitgeom/identities.hpp"

namespace splitgeom {

using nlohmann::json;

namespace {

const std::set<std::string> kTopKeys{"name",      "description", "scenario",           "identities",    "grid",
                                     "samples",   "sampling",    "seed",               "tolerance",     "integral_tolerance",
                                     "grid_doubling", "tolerances", "threads",         "out",           "csv"};

// Checks that need a split structure (frame-defined geometry).
const std::set<std::string> kSplitChecks{"main",       "walczak",  "aux",        "aux_as_printed",      "companion",
                                         "companion_k3", "smix_lemma", "frame",   "projection_identity", "predicates",
                                         "propagation", "integral"};
const std::set<std::string> kWarpedChecks{"warped", "umbilicity"};
const std::set<std::string> kHypersurfaceChecks{"kmix_ij", "codazzi", "hypersurface", "hypersurface_generic",
                                                "dperp_integrability"};

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  if (!j.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : j.items())
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
}

template <class T>
T get(const json& j, const std::string& key, const std::string& where) {
  if (!j.contains(key)) throw ConfigError("missing key '" + key + "' in " + where);
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw ConfigError("key '" + key + "' in " + where + " has the wrong type");
  }
}

template <class T>
T get_or(const json& j, const std::string& key, const std::string& where, T fallback) {
  return j.contains(key) ? get<T>(j, key, where) : fallback;
}

// Numbers or constant expressions such as "2*pi".
double constant(const json& v, const std::string& where) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    try {
      return parse_expr(v.get<std::string>(), 0)(std::span<const double>{});
    } catch (const Error& e) {
      throw ConfigError(where + ": " + e.what());
    }
  }
  throw ConfigError(where + " must be a number or a constant expression");
}

std::vector<Axis> parse_axes(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) throw ConfigError(where + ".axes must be a non-empty array");
  std::vector<Axis> axes;
  for (std::size_t a = 0; a < j.size(); ++a) {
    const std::string here = where + ".axes[" + std::to_string(a) + "]";
    require_keys(j[a], {"lo", "hi", "periodic"}, here);
    Axis ax;
    ax.lo = constant(j[a].at("lo"), here + ".lo");
    ax.hi = constant(j[a].at("hi"), here + ".hi");
    ax.periodic = get_or<bool>(j[a], "periodic", here, false);
    if (!(ax.hi > ax.lo)) throw ConfigError(here + " needs hi > lo");
    axes.push_back(ax);
  }
  return axes;
}

std::vector<std::vector<Expr>> parse_frame(const json& j, int n, const std::string& where) {
  std::vector<std::vector<Expr>> frame;
  if (!j.is_array() || static_cast<int>(j.size()) != n) throw ConfigError(where + " must list " + std::to_string(n) + " vectors");
  for (const auto& v : j) {
    if (!v.is_array() || static_cast<int>(v.size()) != n)
      throw ConfigError(where + " vectors need " + std::to_string(n) + " components");
    std::vector<Expr> comps;
    for (const auto& s : v) comps.push_back(parse_expr(s.get<std::string>(), n));
    frame.push_back(std::move(comps));
  }
  return frame;
}

int total(const std::vector<int>& dims) {
  int n = 0;
  for (int d : dims) {
    if (d < 1) throw ConfigError("block dimensions must be positive");
    n += d;
  }
  return n;
}

WarpedSpec parse_warped(const json& j) {
  require_keys(j, {"kind", "base_dim", "fiber_dims", "warping"}, "scenario");
  WarpedSpec s;
  s.base_dim = get<int>(j, "base_dim", "scenario");
  s.fiber_dims = get<std::vector<int>>(j, "fiber_dims", "scenario");
  s.warping = get<std::vector<std::string>>(j, "warping", "scenario");
  return s;
}

HypersurfaceSpec parse_hypersurface(const json& j) {
  require_keys(j,
               {"kind", "dim", "curvature", "immersion", "axes", "multiplicities", "orientation", "gap_fraction",
                "principal_frame"},
               "scenario");
  HypersurfaceSpec s;
  s.dim = get<int>(j, "dim", "scenario");
  s.curvature = get_or<int>(j, "curvature", "scenario", 0);
  s.immersion = get<std::vector<std::string>>(j, "immersion", "scenario");
  s.axes = parse_axes(j.at("axes"), "scenario");
  s.multiplicities = get<std::vector<int>>(j, "multiplicities", "scenario");
  s.orientation = get_or<double>(j, "orientation", "scenario", 1.0);
  s.gap_fraction = get_or<double>(j, "gap_fraction", "scenario", 1e-3);
  s.principal_frame = get_or<std::vector<std::vector<std::string>>>(j, "principal_frame", "scenario", {});
  return s;
}

Geometry parse_chart(const json& j) {
  require_keys(j, {"kind", "axes", "metric", "dims", "frame"}, "scenario");
  auto axes = parse_axes(j.at("axes"), "scenario");
  const int n = static_cast<int>(axes.size());
  const auto rows = get<std::vector<std::vector<std::string>>>(j, "metric", "scenario");
  if (static_cast<int>(rows.size()) != n) throw ConfigError("scenario.metric must be " + std::to_string(n) + "x" + std::to_string(n));
  std::vector<Expr> metric;
  for (const auto& row : rows) {
    if (static_cast<int>(row.size()) != n)
      throw ConfigError("scenario.metric must be " + std::to_string(n) + "x" + std::to_string(n));
    for (const auto& s : row) metric.push_back(parse_expr(s, n));
  }
  auto dims = get<std::vector<int>>(j, "dims", "scenario");
  if (total(dims) != n) throw ConfigError("scenario.dims must sum to the chart dimension");
  ChartManifold m(std::move(axes), std::move(metric));
  if (!j.contains("frame")) return Geometry{std::move(m), SplitStructure::coordinate(std::move(dims))};
  return Geometry{std::move(m), SplitStructure(std::move(dims), parse_frame(j.at("frame"), n, "scenario.frame"))};
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

void validate_check(const CheckRequest& c, const Scenario& s) {
  const bool has_split = s.split() != nullptr;
  if (kSplitChecks.count(c.name) && !has_split)
    throw ConfigError("check '" + c.id + "' needs a split structure (give principal_frame for hypersurfaces)");
  if (kWarpedChecks.count(c.name) && !s.warped()) throw ConfigError("check '" + c.id + "' applies to warped scenarios only");
  if (kHypersurfaceChecks.count(c.name) && !s.hypersurface())
    throw ConfigError("check '" + c.id + "' applies to hypersurface scenarios only");
  const int k = s.k();
  try {
    if (c.name == "integral") {
      if (!s.closed()) throw ConfigError("check '" + c.id + "' needs a closed (fully periodic) chart");
      check_identity_range(identity_kind(c.target), k, c.r);
    } else if (c.name == "main" || c.name == "walczak" || c.name == "aux" || c.name == "aux_as_printed" ||
               c.name == "companion" || c.name == "companion_k3") {
      check_identity_range(identity_kind(c.name), k, c.r);
    } else if (c.name == "predicates" || c.name == "propagation" || c.name == "dperp_integrability") {
      if (k < 3) throw ConfigError("check '" + c.id + "' needs k >= 3");
    } else if (c.name == "hypersurface") {
      if (k != 2 && k != 3) throw ConfigError("check 'hypersurface' needs k in {2, 3}");
    } else if (c.name == "hypersurface_generic") {
      if (k != 2) throw ConfigError("check 'hypersurface_generic' needs k = 2");
      if (!has_split) throw ConfigError("check 'hypersurface_generic' needs principal_frame");
    }
  } catch (const ArgumentError& e) {
    throw ConfigError(std::string(e.what()) + " (check '" + c.id + "')");
  }
}

}  // namespace

CheckRequest parse_check_id(const std::string& id) {
  CheckRequest c;
  c.id = id;
  std::vector<std::string> parts;
  std::stringstream ss(id);
  for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
  if (parts.empty() || parts[0].empty()) throw ConfigError("empty check id");
  c.name = parts[0];
  auto parse_r = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const int r = std::stoi(s, &used);
      if (used != s.size()) throw ConfigError("bad r in check id '" + id + "'");
      return r;
    } catch (const std::logic_error&) {
      throw ConfigError("bad r in check id '" + id + "'");
    }
  };
  static const std::set<std::string> plain{"main",         "walczak",    "companion",     "companion_k3",
                                           "smix_lemma",   "frame",      "projection_identity", "predicates",
                                           "propagation",  "warped",     "umbilicity",    "kmix_ij",
                                           "codazzi",      "hypersurface", "hypersurface_generic", "dperp_integrability"};
  if (c.name == "aux" || c.name == "aux_as_printed") {
    if (parts.size() != 2) throw ConfigError("check '" + id + "' needs the form " + c.name + ":r");
    c.r = parse_r(parts[1]);
  } else if (c.name == "integral") {
    if (parts.size() < 2) throw ConfigError("check '" + id + "' needs a target: integral:main|aux:r|aux_as_printed:r|companion|walczak");
    c.target = parts[1];
    if (c.target == "aux" || c.target == "aux_as_printed") {
      if (parts.size() != 3) throw ConfigError("check '" + id + "' needs the form integral:" + c.target + ":r");
      c.r = parse_r(parts[2]);
    } else if ((c.target != "main" && c.target != "companion" && c.target != "walczak") || parts.size() != 2) {
      throw ConfigError("unknown integral target in '" + id + "'");
    }
  } else if (!plain.count(c.name) || parts.size() != 1) {
    throw ConfigError("unknown check '" + id + "'");
  }
  return c;
}

ScenarioConfig parse_config(const json& j) {
  require_keys(j, kTopKeys, "config");
  ScenarioConfig c;
  c.name = get<std::string>(j, "name", "config");
  c.description = get_or<std::string>(j, "description", "config", "");
  if (!j.contains("scenario")) throw ConfigError("missing key 'scenario' in config");
  c.scenario = j.at("scenario");
  if (!c.scenario.is_object() || !c.scenario.contains("kind") || !c.scenario.at("kind").is_string())
    throw ConfigError("scenario needs a string 'kind'");
  c.identities = get<std::vector<std::string>>(j, "identities", "config");
  if (c.identities.empty()) throw ConfigError("identities must not be empty");
  for (const auto& id : c.identities) parse_check_id(id);
  if (j.contains("grid")) {
    if (j.at("grid").is_number_integer()) {
      c.grid = {j.at("grid").get<int>()};
    } else {
      c.grid = get<std::vector<int>>(j, "grid", "config");
    }
  }
  if (c.grid.empty()) throw ConfigError("grid must not be empty");
  for (int g : c.grid)
    if (g < 2) throw ConfigError("grid resolution must be >= 2");
  const long long samples = get_or<long long>(j, "samples", "config", 200);
  if (samples < 1) throw ConfigError("samples must be positive");
  c.samples = static_cast<std::size_t>(samples);
  const std::string sampling = get_or<std::string>(j, "sampling", "config", "random");
  if (sampling == "random") {
    c.sampling = SamplingMode::Random;
  } else if (sampling == "grid") {
    c.sampling = SamplingMode::Grid;
  } else {
    throw ConfigError("sampling must be 'random' or 'grid'");
  }
  c.seed = get_or<std::uint64_t>(j, "seed", "config", 1);
  c.tolerance = get_or<double>(j, "tolerance", "config", 1e-8);
  c.integral_tolerance = get_or<double>(j, "integral_tolerance", "config", 1e-10);
  if (!(c.tolerance > 0.0) || !(c.integral_tolerance > 0.0)) throw ConfigError("tolerances must be positive");
  c.grid_doubling = get_or<bool>(j, "grid_doubling", "config", false);
  c.tolerances = get_or<std::map<std::string, double>>(j, "tolerances", "config", {});
  for (const auto& [key, value] : c.tolerances) {
    if (!(value > 0.0)) throw ConfigError("tolerance for '" + key + "' must be positive");
    bool used = false;
    for (const auto& id : c.identities) used = used || parse_check_id(id).name == key;
    if (!used) throw ConfigError("tolerances names '" + key + "', which is not a requested check");
  }
  c.threads = get_or<int>(j, "threads", "config", 0);
  if (c.threads < 0) throw ConfigError("threads must be >= 0");
  c.out = get_or<std::string>(j, "out", "config", "");
  c.csv = get_or<std::string>(j, "csv", "config", "");
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config '" + path + "'");
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("invalid JSON in '" + path + "': " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ScenarioConfig& c) {
  json j{{"name", c.name},
         {"scenario", c.scenario},
         {"identities", c.identities},
         {"grid", c.grid},
         {"samples", c.samples},
         {"sampling", c.sampling == SamplingMode::Grid ? "grid" : "random"},
         {"seed", c.seed},
         {"tolerance", c.tolerance},
         {"integral_tolerance", c.integral_tolerance}};
  if (!c.description.empty()) j["description"] = c.description;
  if (c.grid_doubling) j["grid_doubling"] = true;
  if (!c.tolerances.empty()) j["tolerances"] = c.tolerances;
  if (c.threads != 0) j["threads"] = c.threads;
  if (!c.out.empty()) j["out"] = c.out;
  if (!c.csv.empty()) j["csv"] = c.csv;
  return j;
}

double check_tolerance(const ScenarioConfig& c, const CheckRequest& check, int k) {
  if (auto it = c.tolerances.find(check.name); it != c.tolerances.end()) return it->second;
  const std::string& n = check.name;
  if (n == "integral") return c.integral_tolerance;
  if (n == "smix_lemma" || n == "projection_identity" || n == "propagation") return 1e-10;
  if (n == "frame") return 1e-12;
  if (n == "predicates" || n == "warped" || n == "umbilicity") return 1e-9;
  if (n == "codazzi") return 1e-5;
  if (n == "hypersurface") return k == 3 ? 1e-4 : 1e-6;
  if (n == "hypersurface_generic" || n == "dperp_integrability") return 1e-6;
  return c.tolerance;
}

Scenario Scenario::build(const ScenarioConfig& config) {
  Scenario s;
  s.config_ = config;
  s.kind_ = config.scenario.at("kind").get<std::string>();
  const json& j = config.scenario;
  try {
    if (s.kind_ == "twisted_torus") {
      require_keys(j, {"kind", "dims", "twist"}, "scenario");
      s.geometry_ = std::make_shared<Geometry>(
          build_twisted_torus(get<std::vector<int>>(j, "dims", "scenario"), get<std::string>(j, "twist", "scenario")));
    } else if (s.kind_ == "chart") {
      s.geometry_ = std::make_shared<Geometry>(parse_chart(j));
    } else if (s.kind_ == "warped") {
      s.warped_ = std::make_shared<WarpedModel>(parse_warped(j));
    } else if (s.kind_ == "hypersurface") {
      s.hypersurface_ = std::make_shared<HypersurfaceModel>(parse_hypersurface(j));
    } else {
      throw ConfigError("unknown scenario kind '" + s.kind_ + "'");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const Error& e) {
    throw ConfigError("scenario '" + config.name + "': " + e.what());
  }
  if (s.geometry_) {
    s.dims_ = s.geometry_->split.dims();
  } else if (s.warped_) {
    s.dims_ = s.warped_->geometry().split.dims();
  } else {
    s.dims_ = s.hypersurface_->spec().multiplicities;
  }
  s.k_ = static_cast<int>(s.dims_.size());
  s.dim_ = s.manifold().dim();
  if (s.split() && s.split()->dim() != s.dim_) throw ConfigError("split dimension does not match the chart");
  for (const auto& id : config.identities) validate_check(parse_check_id(id), s);
  return s;
}

bool Scenario::closed() const { return manifold().closed(); }

const ChartManifold& Scenario::manifold() const {
  if (geometry_) return geometry_->manifold;
  if (warped_) return warped_->geometry().manifold;
  return hypersurface_->manifold();
}

const SplitStructure* Scenario::split() const {
  if (geometry_) return &geometry_->split;
  if (warped_) return &warped_->geometry().split;
  const auto& s = hypersurface_->split();
  return s ? &*s : nullptr;
}

std::vector<std::vector<double>> random_points(const ChartManifold& m, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto& axes = m.axes();
  std::vector<std::vector<double>> out(count, std::vector<double>(axes.size()));
  for (auto& p : out)
    for (std::size_t a = 0; a < axes.size(); ++a) {
      const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
      const double inset = axes[a].periodic ? 0.0 : 0.1 * axes[a].length();
      p[a] = axes[a].lo + inset + u * (axes[a].length() - 2.0 * inset);
    }
  return out;
}

std::vector<std::vector<double>> Scenario::sample_points() const {
  if (config_.sampling == SamplingMode::Grid) {
    if (!closed()) {
      // Cell centres of the inset box.
      const auto& axes = manifold().axes();
      const auto g = expand_grid(config_.grid, dim_);
      std::vector<std::vector<double>> out;
      std::size_t count = 1;
      for (int v : g) count *= static_cast<std::size_t>(v);
      for (std::size_t idx = 0; idx < count; ++idx) {
        std::vector<double> p(axes.size());
        std::size_t rest = idx;
        for (int a = dim_ - 1; a >= 0; --a) {
          const double inset = 0.1 * axes[a].length();
          const double h = (axes[a].length() - 2.0 * inset) / g[a];
          p[a] = axes[a].lo + inset + (static_cast<double>(rest % g[a]) + 0.5) * h;
          rest /= g[a];
        }
        out.push_back(std::move(p));
      }
      return out;
    }
    return grid_points(manifold(), config_.grid);
  }
  return random_points(manifold(), config_.samples, config_.seed);
}

// ---------------------------------------------------------------------------
// Built-in catalog.

namespace {

json periodic_axes(int n) {
  json axes = json::array();
  for (int a = 0; a < n; ++a) axes.push_back({{"lo", 0}, {"hi", "2*pi"}, {"periodic", true}});
  return axes;
}

json box_axes(int n, double half) {
  json axes = json::array();
  for (int a = 0; a < n; ++a) axes.push_back({{"lo", -half}, {"hi", half}, {"periodic", false}});
  return axes;
}

struct CatalogEntry {
  const char* name;
  std::function<json()> make;
};

const std::vector<CatalogEntry>& catalog() {
  static const std::vector<CatalogEntry> entries{
      {"twisted_torus_k2",
       [] {
         return json{{"description", "flat T^3, blocks (1,2), frame rotated by sin(x3) + 0.5 cos(x1)"},
                     {"scenario", {{"kind", "twisted_torus"}, {"dims", {1, 2}}, {"twist", "sin(x3) + 0.5*cos(x1)"}}},
                     {"identities", {"main", "walczak", "smix_lemma", "frame", "projection_identity", "integral:main"}},
                     {"grid", 32},
                     {"sampling", "grid"}};
       }},
      {"twisted_torus_k3",
       [] {
         return json{{"description", "flat T^3, three line fields, frame rotated by sin(x3)"},
                     {"scenario", {{"kind", "twisted_torus"}, {"dims", {1, 1, 1}}, {"twist", "sin(x3)"}}},
                     {"identities",
                      {"main", "aux:2", "companion", "companion_k3", "smix_lemma", "frame", "projection_identity",
                       "predicates", "integral:main", "integral:aux:2", "integral:companion"}},
                     {"grid", 64},
                     {"samples", 500},
                     {"grid_doubling", true}};
       }},
      {"twisted_torus_k3_mixed",
       [] {
         return json{{"description", "flat T^3, three line fields, twist depending on every coordinate"},
                     {"scenario",
                      {{"kind", "twisted_torus"}, {"dims", {1, 1, 1}}, {"twist", "sin(x3) + 0.3*sin(x1 + x2)"}}},
                     {"identities",
                      {"main", "aux:2", "companion", "companion_k3", "smix_lemma", "projection_identity",
                       "integral:main", "integral:aux:2", "integral:companion"}},
                     {"grid", 24},
                     {"samples", 300},
                     {"grid_doubling", true}};
       }},
      {"twisted_torus_k4",
       [] {
         return json{{"description", "flat T^4, four line fields"},
                     {"scenario",
                      {{"kind", "twisted_torus"}, {"dims", {1, 1, 1, 1}}, {"twist", "sin(x4) + 0.3*cos(x1 + x3)"}}},
                     {"identities",
                      {"main", "aux:2", "aux:3", "companion", "smix_lemma", "projection_identity", "integral:main",
                       "integral:aux:2", "integral:aux:3", "integral:companion"}},
                     {"grid", 12},
                     {"samples", 200}};
       }},
      {"general_torus_k3",
       [] {
         return json{
             {"description", "curved metric on T^3 with a non-orthogonal periodic frame"},
             {"scenario",
              {{"kind", "chart"},
               {"axes", periodic_axes(3)},
               {"metric",
                {{"2 + sin(x2)", "0.3*cos(x3)", "0.2*sin(x1 + x2)"},
                 {"0.3*cos(x3)", "2 + 0.5*cos(x1)", "0"},
                 {"0.2*sin(x1 + x2)", "0", "1.5 + 0.5*sin(x1)"}}},
               {"dims", {1, 1, 1}},
               {"frame",
                {{"1", "0.2*sin(x3)", "0"}, {"0.3*cos(x1)", "1", "0.1"}, {"0", "0.2*sin(x2)", "1"}}}}},
             {"identities",
              {"main", "aux:2", "companion", "companion_k3", "smix_lemma", "frame", "projection_identity",
               "integral:main", "integral:aux:2", "integral:companion"}},
             {"grid", 24},
             {"samples", 300},
             {"grid_doubling", true}};
       }},
      {"general_chart_k3",
       [] {
         return json{
             {"description", "curved metric on a 4-dimensional box, blocks (2,1,1), generic frame"},
             {"scenario",
              {{"kind", "chart"},
               {"axes", box_axes(4, 1.0)},
               {"metric",
                {{"1 + 0.2*x2^2", "0.1*x3", "0", "0.05*x1*x4"},
                 {"0.1*x3", "1.5 + 0.3*sin(x1)", "0.1*x4", "0"},
                 {"0", "0.1*x4", "2 + 0.2*cos(x2)", "0.1*x1"},
                 {"0.05*x1*x4", "0", "0.1*x1", "1 + 0.1*exp(x3)"}}},
               {"dims", {2, 1, 1}},
               {"frame",
                {{"1", "0.2*x3", "0", "0.1*x2"},
                 {"0.1*x4", "1", "0.3*x1", "0"},
                 {"0", "0.2*sin(x1)", "1", "0.1"},
                 {"0.2*x2", "0", "0.1*x3", "1"}}}}},
             {"identities",
              {"main", "aux:2", "companion", "smix_lemma", "frame", "projection_identity", "predicates"}},
             {"samples", 200}};
       }},
      {"product_torus_k3",
       [] {
         return json{{"description", "flat T^3 with the coordinate split (product metric)"},
                     {"scenario",
                      {{"kind", "chart"},
                       {"axes", periodic_axes(3)},
                       {"metric", {{"1", "0", "0"}, {"0", "1", "0"}, {"0", "0", "1"}}},
                       {"dims", {1, 1, 1}}}},
                     {"identities",
                      {"main", "aux:2", "companion", "smix_lemma", "predicates", "propagation", "integral:main"}},
                     {"grid", 8},
                     {"samples", 50}};
       }},
      {"warped_t2",
       [] {
         return json{{"description", "warped T^2 with u = 2 + sin(t)"},
                     {"scenario",
                      {{"kind", "warped"}, {"base_dim", 1}, {"fiber_dims", {1}}, {"warping", {"2 + sin(x1)"}}}},
                     {"identities",
                      {"warped", "umbilicity", "main", "walczak", "smix_lemma", "frame", "projection_identity",
                       "integral:main"}},
                     {"grid", 32},
                     {"samples", 200}};
       }},
      {"warped_t3_n12",
       [] {
         return json{{"description", "warped T^3 = S^1 x_u T^2 with u = 2 + sin(t)"},
                     {"scenario",
                      {{"kind", "warped"}, {"base_dim", 1}, {"fiber_dims", {2}}, {"warping", {"2 + sin(x1)"}}}},
                     {"identities",
                      {"warped", "umbilicity", "main", "walczak", "smix_lemma", "projection_identity", "integral:main"}},
                     {"grid", 24},
                     {"samples", 200}};
       }},
      {"warped_t3",
       [] {
         return json{{"description", "doubly warped T^3 with u_2 = 2 + sin(t), u_3 = 2 + cos(t)"},
                     {"scenario",
                      {{"kind", "warped"},
                       {"base_dim", 1},
                       {"fiber_dims", {1, 1}},
                       {"warping", {"2 + sin(x1)", "2 + cos(x1)"}}}},
                     {"identities",
                      {"warped", "main", "aux:2", "companion", "companion_k3", "smix_lemma", "predicates",
                       "propagation", "projection_identity", "integral:main", "integral:aux:2", "integral:companion"}},
                     {"grid", 32},
                     {"samples", 200}};
       }},
      {"warped_t4",
       [] {
         return json{{"description", "triply warped T^4 over a circle"},
                     {"scenario",
                      {{"kind", "warped"},
                       {"base_dim", 1},
                       {"fiber_dims", {1, 1, 1}},
                       {"warping", {"2 + sin(x1)", "2 + cos(x1)", "2 + 0.5*sin(2*x1)"}}}},
                     {"identities",
                      {"warped", "main", "aux:2", "aux:3", "companion", "smix_lemma", "predicates", "propagation",
                       "projection_identity", "integral:main", "integral:aux:2", "integral:aux:3",
                       "integral:companion"}},
                     {"grid", 12},
                     {"samples", 500}};
       }},
      {"warped_t4_orth",
       [] {
         return json{{"description", "doubly warped T^4 over T^2 with orthogonal warping gradients"},
                     {"scenario",
                      {{"kind", "warped"},
                       {"base_dim", 2},
                       {"fiber_dims", {1, 1}},
                       {"warping", {"2 + sin(x1)", "2 + cos(x2)"}}}},
                     {"identities",
                      {"warped", "umbilicity", "main", "aux:2", "companion", "smix_lemma", "predicates", "propagation",
                       "projection_identity", "integral:main", "integral:aux:2", "integral:companion"}},
                     {"grid", 12},
                     {"samples", 200}};
       }},
      {"torus_of_revolution",
       [] {
         return json{{"description", "torus of revolution R = 2, r = 1 in R^3"},
                     {"scenario",
                      {{"kind", "hypersurface"},
                       {"dim", 2},
                       {"curvature", 0},
                       {"immersion", {"(2 + cos(x1))*cos(x2)", "(2 + cos(x1))*sin(x2)", "sin(x1)"}},
                       {"axes", periodic_axes(2)},
                       {"multiplicities", {1, 1}},
                       {"principal_frame", json::array({json::array({"0", "1"}), json::array({"1", "0"})})}}},
                     {"identities",
                      {"hypersurface", "hypersurface_generic", "kmix_ij", "codazzi", "main", "walczak", "smix_lemma",
                       "integral:main"}},
                     {"grid", 32},
                     {"samples", 100}};
       }},
      {"clifford_torus",
       [] {
         return json{{"description", "Clifford torus S^1(1/sqrt 2) x S^1(1/sqrt 2) in S^3"},
                     {"scenario",
                      {{"kind", "hypersurface"},
                       {"dim", 2},
                       {"curvature", 1},
                       {"immersion", {"cos(x1)/sqrt(2)", "sin(x1)/sqrt(2)", "cos(x2)/sqrt(2)", "sin(x2)/sqrt(2)"}},
                       {"axes", periodic_axes(2)},
                       {"multiplicities", {1, 1}}}},
                     {"identities", {"hypersurface", "kmix_ij", "codazzi"}},
                     {"samples", 50}};
       }},
      {"graph_r4",
       [] {
         return json{{"description", "graph w = 0.3x^2 + 0.2y^2 + 0.1z^2 + 0.05xyz in R^4 near the origin"},
                     {"scenario",
                      {{"kind", "hypersurface"},
                       {"dim", 3},
                       {"curvature", 0},
                       {"immersion", {"x1", "x2", "x3", "0.3*x1^2 + 0.2*x2^2 + 0.1*x3^2 + 0.05*x1*x2*x3"}},
                       {"axes", box_axes(3, 0.15)},
                       {"multiplicities", {1, 1, 1}}}},
                     {"identities", {"hypersurface", "kmix_ij", "codazzi", "dperp_integrability"}},
                     {"samples", 20}};
       }},
      {"rotated_torus_r4",
       [] {
         return json{{"description", "rotation of a torus of revolution about a plane in R^4"},
                     {"scenario",
                      {{"kind", "hypersurface"},
                       {"dim", 3},
                       {"curvature", 0},
                       {"immersion",
                        {"(10 + (2 + cos(x2))*cos(x3))*cos(x1)", "(10 + (2 + cos(x2))*cos(x3))*sin(x1)",
                         "(2 + cos(x2))*sin(x3)", "sin(x2)"}},
                       {"axes",
                        {{{"lo", 0}, {"hi", "2*pi"}, {"periodic", true}},
                         {{"lo", -0.5}, {"hi", 0.5}, {"periodic", false}},
                         {{"lo", -0.5}, {"hi", 0.5}, {"periodic", false}}}},
                       {"multiplicities", {1, 1, 1}}}},
                     {"identities", {"hypersurface", "kmix_ij", "codazzi", "dperp_integrability"}},
                     {"samples", 20}};
       }},
  };
  return entries;
}

}  // namespace

std::vector<std::string> catalog_names() {
  std::vector<std::string> names;
  for (const auto& e : catalog()) names.emplace_back(e.name);
  return names;
}

ScenarioConfig catalog_config(const std::string& name) {
  for (const auto& e : catalog())
    if (name == e.name) {
      json j = e.make();
      j["name"] = name;
      return parse_config(j);
    }
  throw ConfigError("unknown catalog scenario '" + name + "'");
}

json catalog_json() {
  json out = json::array();
  for (const auto& name : catalog_names()) {
    const auto cfg = catalog_config(name);
    const auto s = Scenario::build(cfg);
    out.push_back({{"name", name},
                   {"kind", s.kind()},
                   {"dim", s.dim()},
                   {"k", s.k()},
                   {"dims", s.dims()},
                   {"closed", s.closed()},
                   {"description", cfg.description},
                   {"identities", cfg.identities}});
  }
  return out;
}

}  // namespace splitgeom
