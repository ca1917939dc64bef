#include "splitgeom/splitgeom.h"

#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "splitgeom/identities.hpp"
#include "splitgeom/runner.hpp"
#include "splitgeom/scenario.hpp"

struct sg_scenario {
  splitgeom::Scenario scenario;
};

struct sg_report {
  splitgeom::ScenarioReport report;
};

namespace {

thread_local std::string last_error;

sg_status fail(sg_status code, const std::string& message) {
  last_error = message;
  return code;
}

template <class Fn>
sg_status guarded(Fn&& fn) {
  try {
    last_error.clear();
    fn();
    return SG_OK;
  } catch (const splitgeom::ConfigError& e) {
    return fail(SG_ERR_CONFIG, e.what());
  } catch (const splitgeom::ParseError& e) {
    return fail(SG_ERR_PARSE, e.what());
  } catch (const splitgeom::DomainError& e) {
    return fail(SG_ERR_DOMAIN, e.what());
  } catch (const splitgeom::GeometryError& e) {
    return fail(SG_ERR_GEOMETRY, e.what());
  } catch (const splitgeom::ArgumentError& e) {
    return fail(SG_ERR_ARGUMENT, e.what());
  } catch (const nlohmann::json::exception& e) {
    return fail(SG_ERR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(SG_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(SG_ERR_INTERNAL, "unknown error");
  }
}

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

void require(const void* p, const char* what) {
  if (!p) throw splitgeom::ArgumentError(std::string(what) + " must not be null");
}

splitgeom::IdentityKind pointwise_kind(const splitgeom::CheckRequest& c) {
  using splitgeom::IdentityKind;
  if (c.name == "main") return IdentityKind::Main;
  if (c.name == "walczak") return IdentityKind::Walczak;
  if (c.name == "aux") return IdentityKind::Aux;
  if (c.name == "aux_as_printed") return IdentityKind::AuxAsPrinted;
  if (c.name == "companion") return IdentityKind::Companion;
  if (c.name == "companion_k3") return IdentityKind::CompanionK3;
  if (c.name == "smix_lemma") return IdentityKind::SmixLemma;
  throw splitgeom::ArgumentError("'" + c.id + "' is not a pointwise identity");
}

}  // namespace

extern "C" {

const char* sg_last_error(void) { return last_error.c_str(); }

const char* sg_version(void) { return "1.0.0"; }

void sg_string_free(char* s) { std::free(s); }

sg_status sg_catalog_json(char** out) {
  return guarded([&] {
    require(out, "out");
    *out = dup(splitgeom::catalog_json().dump(2));
  });
}

sg_status sg_catalog_config(const char* name, char** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = dup(splitgeom::config_to_json(splitgeom::catalog_config(name)).dump(2));
  });
}

sg_status sg_scenario_from_json(const char* config_json, sg_scenario** out) {
  return guarded([&] {
    require(config_json, "config_json");
    require(out, "out");
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(config_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw splitgeom::ConfigError(std::string("invalid JSON: ") + e.what());
    }
    *out = new sg_scenario{splitgeom::Scenario::build(splitgeom::parse_config(j))};
  });
}

sg_status sg_scenario_from_file(const char* path, sg_scenario** out) {
  if (!path) return fail(SG_ERR_ARGUMENT, "path must not be null");
  std::ifstream in(path);
  if (!in) return fail(SG_ERR_IO, std::string("cannot read '") + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return sg_scenario_from_json(ss.str().c_str(), out);
}

sg_status sg_scenario_from_catalog(const char* name, sg_scenario** out) {
  return guarded([&] {
    require(name, "name");
    require(out, "out");
    *out = new sg_scenario{splitgeom::Scenario::build(splitgeom::catalog_config(name))};
  });
}

void sg_scenario_free(sg_scenario* s) { delete s; }

sg_status sg_scenario_info(const sg_scenario* s, int* dim, int* k, int* closed) {
  return guarded([&] {
    require(s, "scenario");
    if (dim) *dim = s->scenario.dim();
    if (k) *k = s->scenario.k();
    if (closed) *closed = s->scenario.closed() ? 1 : 0;
  });
}

sg_status sg_scenario_config(const sg_scenario* s, char** out) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    *out = dup(splitgeom::config_to_json(s->scenario.config()).dump(2));
  });
}

sg_status sg_residual(const sg_scenario* s, const char* identity, const double* point, size_t dim, double* residual) {
  return guarded([&] {
    require(s, "scenario");
    require(identity, "identity");
    require(point, "point");
    require(residual, "residual");
    const auto& sc = s->scenario;
    if (static_cast<int>(dim) != sc.dim()) throw splitgeom::ArgumentError("point has the wrong dimension");
    if (!sc.split()) throw splitgeom::ArgumentError("scenario has no split structure");
    const auto req = splitgeom::parse_check_id(identity);
    const auto kind = pointwise_kind(req);
    splitgeom::check_identity_range(kind, sc.k(), req.r);
    splitgeom::SplitPoint sp(sc.manifold(), *sc.split(), std::span<const double>(point, dim));
    splitgeom::IdentityContext ctx(sp);
    *residual = ctx.evaluate(kind, req.r).residual;
  });
}

sg_status sg_verify(const sg_scenario* s, int threads, sg_report** out) {
  return guarded([&] {
    require(s, "scenario");
    require(out, "out");
    *out = new sg_report{splitgeom::run_scenario(s->scenario, threads)};
  });
}

void sg_report_free(sg_report* r) { delete r; }

sg_status sg_report_pass(const sg_report* r, int* pass) {
  return guarded([&] {
    require(r, "report");
    require(pass, "pass");
    *pass = r->report.pass() ? 1 : 0;
  });
}

sg_status sg_reports_json(const sg_report* const* reports, size_t count, int timing, char** out) {
  return guarded([&] {
    require(out, "out");
    if (count) require(reports, "reports");
    std::vector<splitgeom::ScenarioReport> all;
    for (size_t i = 0; i < count; ++i) {
      require(reports[i], "report");
      all.push_back(reports[i]->report);
    }
    *out = dup(splitgeom::report_json(all, timing != 0).dump(2) + "\n");
  });
}

sg_status sg_report_csv(const sg_report* r, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    std::ostringstream os;
    splitgeom::write_csv(r->report, os);
    *out = dup(os.str());
  });
}

sg_status sg_report_failures(const sg_report* r, char** out) {
  return guarded([&] {
    require(r, "report");
    require(out, "out");
    std::string text;
    for (const auto& c : r->report.checks)
      if (!c.pass) text += c.message + "\n";
    *out = dup(text);
  });
}

sg_status sg_report_diff(const char* a_json, const char* b_json, int* identical, char** out) {
  return guarded([&] {
    require(a_json, "a_json");
    require(b_json, "b_json");
    require(identical, "identical");
    require(out, "out");
    nlohmann::json a, b;
    try {
      a = nlohmann::json::parse(a_json);
      b = nlohmann::json::parse(b_json);
    } catch (const nlohmann::json::parse_error& e) {
      throw splitgeom::ConfigError(std::string("invalid report JSON: ") + e.what());
    }
    const auto lines = splitgeom::diff_reports(a, b);
    std::string text;
    for (const auto& l : lines) text += l + "\n";
    *identical = lines.empty() ? 1 : 0;
    *out = dup(text);
  });
}

sg_status sg_eval_expr(const char* source, const double* point, size_t dim, double* value) {
  return guarded([&] {
    require(source, "source");
    require(value, "value");
    if (dim) require(point, "point");
    const auto e = splitgeom::parse_expr(source, static_cast<int>(dim));
    *value = e(std::span<const double>(point, dim));
  });
}

}  // extern "C"
