// Command line front end: verify, catalog, report --diff.
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "splitgeom/splitgeom.h"

namespace {

using nlohmann::json;

constexpr int kExitFail = 1;
constexpr int kExitConfig = 2;

struct CString {
  char* p = nullptr;
  ~CString() { sg_string_free(p); }
  std::string str() const { return p ? std::string(p) : std::string(); }
};

struct ScenarioHandle {
  sg_scenario* p = nullptr;
  ~ScenarioHandle() { sg_scenario_free(p); }
};

struct ReportHandle {
  sg_report* p = nullptr;
  ReportHandle() = default;
  ReportHandle(ReportHandle&& o) noexcept : p(o.p) { o.p = nullptr; }
  ReportHandle(const ReportHandle&) = delete;
  ~ReportHandle() { sg_report_free(p); }
};

class CliError : public std::runtime_error {
 public:
  CliError(int code, const std::string& what) : std::runtime_error(what), code_(code) {}
  int code() const { return code_; }

 private:
  int code_;
};

void check(sg_status s, const std::string& context) {
  if (s == SG_OK) return;
  const int code = (s == SG_ERR_INTERNAL) ? kExitFail : kExitConfig;
  throw CliError(code, context + ": " + sg_last_error());
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError(kExitConfig, "cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw CliError(kExitConfig, "cannot write '" + path + "'");
  out << text;
}

std::vector<std::string> catalog_names() {
  CString s;
  check(sg_catalog_json(&s.p), "catalog");
  std::vector<std::string> names;
  const json list = json::parse(s.str());
  for (const auto& e : list) names.push_back(e.at("name").get<std::string>());
  return names;
}

// A --scenario argument is a config path if such a file exists, otherwise a
// catalog name.
json load_config(const std::string& spec) {
  if (std::filesystem::exists(spec)) {
    try {
      return json::parse(read_file(spec));
    } catch (const json::parse_error& e) {
      throw CliError(kExitConfig, "invalid JSON in '" + spec + "': " + e.what());
    }
  }
  CString s;
  check(sg_catalog_config(spec.c_str(), &s.p), "scenario '" + spec + "'");
  return json::parse(s.str());
}

std::string csv_path_for(const std::string& base, const std::string& scenario, bool several) {
  if (!several) return base;
  const std::filesystem::path p(base);
  return (p.parent_path() / (p.stem().string() + "." + scenario + p.extension().string())).string();
}

struct VerifyOptions {
  std::vector<std::string> scenarios;
  bool all = false;
  std::vector<int> grid;
  std::optional<double> tol;
  std::optional<std::uint64_t> seed;
  std::optional<long long> samples;
  std::string out;
  std::string csv;
  int threads = 0;
  bool no_timing = false;
  bool print_json = false;
};

int run_verify(const VerifyOptions& o) {
  std::vector<std::string> specs = o.scenarios;
  if (o.all)
    for (const auto& n : catalog_names()) specs.push_back(n);
  if (specs.empty()) throw CliError(kExitConfig, "verify needs --scenario or --catalog");

  // Build every scenario first so that config errors surface before any run.
  std::vector<json> configs;
  std::vector<std::unique_ptr<ScenarioHandle>> handles;
  for (const auto& spec : specs) {
    json cfg = load_config(spec);
    if (!o.grid.empty()) cfg["grid"] = o.grid;
    if (o.tol) cfg["tolerance"] = *o.tol;
    if (o.seed) cfg["seed"] = *o.seed;
    if (o.samples) cfg["samples"] = *o.samples;
    auto h = std::make_unique<ScenarioHandle>();
    check(sg_scenario_from_json(cfg.dump().c_str(), &h->p), "config '" + spec + "'");
    configs.push_back(cfg);
    handles.push_back(std::move(h));
  }

  std::vector<ReportHandle> reports;
  bool all_pass = true;
  const bool several = specs.size() > 1;
  for (std::size_t i = 0; i < handles.size(); ++i) {
    ReportHandle r;
    check(sg_verify(handles[i]->p, o.threads, &r.p), "verify '" + specs[i] + "'");
    int pass = 0;
    check(sg_report_pass(r.p, &pass), "report");
    all_pass = all_pass && pass;

    const std::string name = configs[i].value("name", specs[i]);
    CString single;
    const sg_report* one[] = {r.p};
    check(sg_reports_json(one, 1, o.no_timing ? 0 : 1, &single.p), "report");
    if (!o.print_json) {
      const json parsed = json::parse(single.str());
      for (const auto& c : parsed.at("scenarios").at(0).at("checks")) {
        std::printf("%-4s %-24s %-22s max_rel %.3e  tol %.1e\n", c.at("verdict") == "pass" ? "PASS" : "FAIL",
                    name.c_str(), c.at("id").get<std::string>().c_str(),
                    c.at("max_rel_residual").is_number() ? c.at("max_rel_residual").get<double>() : -1.0,
                    c.at("tolerance").get<double>());
      }
      std::fflush(stdout);
    }
    if (!pass) {
      CString failures;
      check(sg_report_failures(r.p, &failures.p), "report");
      std::cerr << failures.str();
    }

    const std::string csv = !o.csv.empty() ? csv_path_for(o.csv, name, several) : configs[i].value("csv", "");
    if (!csv.empty()) {
      CString text;
      check(sg_report_csv(r.p, &text.p), "csv");
      write_file(csv, text.str());
    }
    if (o.out.empty() && configs[i].contains("out")) write_file(configs[i].at("out").get<std::string>(), single.str());
    reports.push_back(std::move(r));
  }

  std::vector<const sg_report*> ptrs;
  for (const auto& r : reports) ptrs.push_back(r.p);
  CString combined;
  check(sg_reports_json(ptrs.data(), ptrs.size(), o.no_timing ? 0 : 1, &combined.p), "report");
  if (!o.out.empty()) write_file(o.out, combined.str());
  if (o.print_json) std::cout << combined.str();
  if (!o.print_json) std::printf("%s\n", all_pass ? "all checks passed" : "some checks failed");
  return all_pass ? 0 : kExitFail;
}

int run_catalog(bool as_json, const std::string& export_dir) {
  CString s;
  check(sg_catalog_json(&s.p), "catalog");
  const json list = json::parse(s.str());
  if (!export_dir.empty()) {
    std::filesystem::create_directories(export_dir);
    for (const auto& e : list) {
      const std::string name = e.at("name").get<std::string>();
      CString cfg;
      check(sg_catalog_config(name.c_str(), &cfg.p), "catalog");
      write_file((std::filesystem::path(export_dir) / (name + ".json")).string(), cfg.str() + "\n");
    }
  }
  if (as_json) {
    std::cout << list.dump(2) << "\n";
    return 0;
  }
  std::printf("%-24s %-14s %3s %3s  %-12s %s\n", "name", "kind", "n", "k", "dims", "closed");
  for (const auto& e : list) {
    std::string dims;
    for (const auto& d : e.at("dims")) dims += (dims.empty() ? "" : ",") + std::to_string(d.get<int>());
    std::printf("%-24s %-14s %3d %3d  %-12s %s\n", e.at("name").get<std::string>().c_str(),
                e.at("kind").get<std::string>().c_str(), e.at("dim").get<int>(), e.at("k").get<int>(),
                ("(" + dims + ")").c_str(), e.at("closed").get<bool>() ? "closed" : "open");
  }
  return 0;
}

int run_diff(const std::vector<std::string>& files) {
  if (files.size() != 2) throw CliError(kExitConfig, "report --diff needs two files");
  const std::string a = read_file(files[0]), b = read_file(files[1]);
  int identical = 0;
  CString text;
  check(sg_report_diff(a.c_str(), b.c_str(), &identical, &text.p), "report --diff");
  if (identical) {
    std::printf("reports are identical (timing ignored)\n");
    return 0;
  }
  std::cout << text.str();
  return kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Divergence and integral identities on almost k-product manifolds"};
  app.require_subcommand(1);

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Run the checks of one or more scenarios");
  verify->add_option("--scenario,-s", vo.scenarios, "Config file or catalog name (repeatable)");
  verify->add_flag("--catalog,--all", vo.all, "Run every catalog scenario");
  verify->add_option("--grid", vo.grid, "Quadrature grid per axis (one value or one per axis)");
  verify->add_option("--tol", vo.tol, "Pointwise identity tolerance (relative)");
  verify->add_option("--seed", vo.seed, "Seed of the random sample points");
  verify->add_option("--samples", vo.samples, "Number of random sample points");
  verify->add_option("--out,-o", vo.out, "Write the JSON report here");
  verify->add_option("--csv", vo.csv, "Write per-point residuals here");
  verify->add_option("--threads,-j", vo.threads, "Worker threads (default: $SPLITGEOM_THREADS or all cores)");
  verify->add_flag("--no-timing", vo.no_timing, "Omit the timing block so reports are byte-identical");
  verify->add_flag("--json", vo.print_json, "Print the JSON report instead of the summary");

  bool catalog_json = false;
  std::string export_dir;
  auto* catalog = app.add_subcommand("catalog", "List the built-in scenarios");
  catalog->add_flag("--json", catalog_json, "Print the listing as JSON");
  catalog->add_option("--export", export_dir, "Write each scenario config into this directory");

  std::vector<std::string> diff_files;
  auto* report = app.add_subcommand("report", "Compare reports");
  report->add_option("--diff", diff_files, "Two report files")->expected(2)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  try {
    if (*verify) return run_verify(vo);
    if (*catalog) return run_catalog(catalog_json, export_dir);
    if (*report) return run_diff(diff_files);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return e.code();
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return 0;
}
