#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "splitgeom/errors.hpp"
#include "splitgeom/runner.hpp"
#include "splitgeom/scenario.hpp"

using namespace splitgeom;
using nlohmann::json;

namespace {

json twisted_k3(std::vector<std::string> checks) {
  return {{"name", "t"},
          {"scenario", {{"kind", "twisted_torus"}, {"dims", {1, 1, 1}}, {"twist", "sin(x3)"}}},
          {"identities", checks},
          {"grid", {8}},
          {"samples", 12}};
}

std::string config_error(const json& j) {
  try {
    Scenario::build(parse_config(j));
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("check ids") {
  const auto a = parse_check_id("aux:2");
  CHECK(a.name == "aux");
  CHECK(a.r == 2);
  const auto b = parse_check_id("integral:aux:3");
  CHECK(b.name == "integral");
  CHECK(b.target == "aux");
  CHECK(b.r == 3);
}

TEST_CASE("config validation") {
  auto j = twisted_k3({"main"});
  j["colour"] = "red";
  CHECK(config_error(j).find("colour") != std::string::npos);

  j = twisted_k3({"main"});
  j["scenario"]["extra"] = 1;
  CHECK(config_error(j).find("extra") != std::string::npos);

  CHECK(config_error(twisted_k3({"aux:3"})).find("r out of range") != std::string::npos);
  CHECK(config_error(twisted_k3({"aux:1"})).find("r out of range") != std::string::npos);
  CHECK_FALSE(config_error(twisted_k3({"walczak"})).empty());
  CHECK_FALSE(config_error(twisted_k3({"no_such_check"})).empty());
  CHECK_FALSE(config_error(twisted_k3({"codazzi"})).empty());

  j = twisted_k3({"main"});
  j["tolerances"] = {{"aux", 1e-3}};
  CHECK_FALSE(config_error(j).empty());

  j = twisted_k3({"main"});
  j["scenario"]["twist"] = "sin(x3";
  CHECK_FALSE(config_error(j).empty());

  CHECK(config_error(twisted_k3({"main", "aux:2", "integral:aux:2", "predicates"})).empty());
}

TEST_CASE("config round trip") {
  const auto c = parse_config(twisted_k3({"main", "integral:main"}));
  const auto again = parse_config(config_to_json(c));
  CHECK(config_to_json(again) == config_to_json(c));
  for (const auto& name : catalog_names()) {
    const auto cc = catalog_config(name);
    CHECK(config_to_json(parse_config(config_to_json(cc))) == config_to_json(cc));
  }
  CHECK_THROWS_AS(catalog_config("nope"), ConfigError);
}

TEST_CASE("random sampling is seeded") {
  const auto sc = Scenario::build(parse_config(twisted_k3({"main"})));
  CHECK(sc.sample_points() == sc.sample_points());
  auto j = twisted_k3({"main"});
  j["seed"] = 2;
  CHECK(Scenario::build(parse_config(j)).sample_points() != sc.sample_points());
}

TEST_CASE("reports are deterministic across thread counts") {
  const auto sc = Scenario::build(
      parse_config(twisted_k3({"main", "aux:2", "companion", "frame", "integral:main", "predicates"})));
  const ScenarioReport one = run_scenario(sc, 1);
  const ScenarioReport three = run_scenario(sc, 3);
  CHECK(one.pass());
  const ScenarioReport a[] = {one};
  const ScenarioReport b[] = {three};
  CHECK(report_json(a, false).dump() == report_json(b, false).dump());
  CHECK(diff_reports(report_json(a, true), report_json(b, true)).empty());
  CHECK(report_json(a, true).contains("timing"));
  CHECK_FALSE(report_json(a, false).contains("timing"));

  std::ostringstream csv;
  write_csv(one, csv);
  std::string header;
  std::getline(std::istringstream(csv.str()) >> std::ws, header);
  CHECK(header.rfind("x1,x2,x3,", 0) == 0);
  CHECK(header.find("main") != std::string::npos);
  std::size_t lines = 0;
  for (char ch : csv.str()) lines += ch == '\n';
  CHECK(lines == 1 + 12);
}

TEST_CASE("a failing tolerance fails the check and names it") {
  auto j = twisted_k3({"main"});
  j["scenario"]["twist"] = "sin(x3) + 0.3*sin(x1 + x2)";
  j["tolerances"] = {{"main", 1e-300}};
  const auto rep = run_scenario(Scenario::build(parse_config(j)), 1);
  // Roundoff is nonzero on this twist, so a vanishing tolerance must fail.
  CHECK_FALSE(rep.pass());
  CHECK(rep.checks.at(0).message.find("main") != std::string::npos);
}
