#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "splitgeom/models.hpp"

namespace splitgeom {

/// One requested check, e.g. "aux:2" -> {name "aux", r 2}, "integral:aux:2"
/// -> {name "integral", target "aux", r 2}.
struct CheckRequest {
  std::string id;
  std::string name;
  std::string target;
  int r = 0;
};

CheckRequest parse_check_id(const std::string& id);

enum class SamplingMode { Random, Grid };

/// A verification run: scenario parameters, checks and run settings.
/// Every field has a JSON key of the same name; unknown keys are rejected.
struct ScenarioConfig {
  std::string name;
  std::string description;
  nlohmann::json scenario;  // {"kind": ..., kind-specific parameters}
  std::vector<std::string> identities;
  std::vector<int> grid{32};
  std::size_t samples = 200;
  SamplingMode sampling = SamplingMode::Random;
  std::uint64_t seed = 1;
  double tolerance = 1e-8;
  double integral_tolerance = 1e-10;
  bool grid_doubling = false;
  std::map<std::string, double> tolerances;  // per check name
  int threads = 0;
  std::string out;
  std::string csv;
};

/// Schema validation; throws ConfigError naming the offending key.
ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
nlohmann::json config_to_json(const ScenarioConfig& c);

/// Tolerance used for a check: tolerances[name] if given, else the default
/// for that check family.
double check_tolerance(const ScenarioConfig& c, const CheckRequest& check, int k);

/// A constructed scenario.
class Scenario {
 public:
  /// Builds the geometry and validates every requested check against it
  /// (identity ranges, kind restrictions). Throws ConfigError.
  static Scenario build(const ScenarioConfig& config);

  const ScenarioConfig& config() const { return config_; }
  const std::string& kind() const { return kind_; }
  int dim() const { return dim_; }
  int k() const { return k_; }
  const std::vector<int>& dims() const { return dims_; }
  bool closed() const;

  /// Chart the checks run on (induced metric for hypersurfaces).
  const ChartManifold& manifold() const;
  /// Null for hypersurfaces without a principal frame.
  const SplitStructure* split() const;
  const WarpedModel* warped() const { return warped_.get(); }
  const HypersurfaceModel* hypersurface() const { return hypersurface_.get(); }

  /// Pointwise sample set: seeded uniform points (non-periodic axes inset
  /// by 10% of their length at both ends) or the quadrature grid nodes.
  std::vector<std::vector<double>> sample_points() const;

 private:
  Scenario() = default;

  ScenarioConfig config_;
  std::string kind_;
  int dim_ = 0;
  int k_ = 0;
  std::vector<int> dims_;
  std::shared_ptr<const Geometry> geometry_;
  std::shared_ptr<const WarpedModel> warped_;
  std::shared_ptr<const HypersurfaceModel> hypersurface_;
};

/// Uniform sample points in the chart box, reproducible from the seed.
std::vector<std::vector<double>> random_points(const ChartManifold& m, std::size_t count, std::uint64_t seed);

/// Names of the built-in scenarios, in catalog order.
std::vector<std::string> catalog_names();
/// Throws ConfigError for unknown names.
ScenarioConfig catalog_config(const std::string& name);

/// Catalog listing: name, kind, k, dims, closed.
nlohmann::json catalog_json();

}  // namespace splitgeom
