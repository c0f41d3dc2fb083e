#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "grw/ambient/spacetime.hpp"
#include "grw/catalog/catalog.hpp"
#include "grw/domain.hpp"
#include "grw/identities/identities.hpp"
#include "json.hpp"

namespace grw::cli {

struct FiberSpec {
  std::string kind = "euclidean";
  std::vector<std::vector<std::string>> metric;  // custom only
  std::optional<Box> domain;                     // custom only
};

struct SpacetimeSpec {
  std::string name;
  int m = 2;
  double a = 1.0;
  std::string rho;    // custom only
  Interval interval;  // custom only
  FiberSpec fiber;
};

struct HypersurfaceSpec {
  bool fixtures = false;
  std::uint64_t fixture_seed = 7;
  std::vector<std::string> graphs;
  double spacelike_margin = hypersurface::kDefaultSpacelikeMargin;
};

enum class SampleMode { grid, random };

struct SamplingSpec {
  SampleMode mode = SampleMode::grid;
  std::optional<Box> box;   // defaults to catalog::default_box of the fiber
  std::vector<int> counts;  // grid: per axis
  int count = 100;          // random
  std::optional<std::uint64_t> seed;
};

struct OutputSpec {
  std::string dir = "grwlab-out";
  std::string report = "report.json";
  std::string points = "points.csv";  // empty disables the CSV
};

struct RunConfig {
  SpacetimeSpec spacetime;
  HypersurfaceSpec hypersurfaces;
  SamplingSpec sampling;
  std::vector<std::string> checks;
  std::vector<std::string> theorems;
  identities::Tolerances tolerances;
  OutputSpec output;
  int jobs = 1;
};

/// Command-line overrides; they win over the file, and GRWLAB_SEED is used
/// only when neither provides a seed.
struct Overrides {
  std::optional<std::string> out_dir;
  std::optional<std::uint64_t> seed;
  std::vector<std::pair<std::string, double>> tolerances;
  std::optional<std::vector<std::string>> checks;
  std::optional<int> jobs;
};

/// Validates a parsed config document. Every failure is a ConfigError whose
/// message names the offending field; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& doc, const Overrides& overrides = {},
                           std::optional<std::uint64_t> env_seed = std::nullopt);

/// Reads the file and applies overrides, taking the fallback seed from the
/// GRWLAB_SEED environment variable.
RunConfig load_config(const std::string& path, const Overrides& overrides = {});

/// Parses "NAME=VALUE" for --tol; ConfigError on malformed text.
std::pair<std::string, double> parse_tolerance_override(const std::string& text);
/// Splits a comma-separated check list; "all" expands to the registry.
std::vector<std::string> parse_check_list(const std::string& text);

/// The hypersurface fleet a config describes, built against its spacetime.
struct Fleet {
  std::shared_ptr<const ambient::Spacetime> spacetime;
  Box box;
  struct Member {
    std::string label;
    std::string kind;  // slice, hyperplane, hyperboloid, cubic or graph
    hypersurface::GraphHypersurface graph;
  };
  std::vector<Member> members;
  std::vector<std::vector<double>> points;
  std::string sample_description;
};

/// Builds spacetime, hypersurfaces and sample points; failures here are
/// config errors too (bad expressions, boxes outside the chart).
Fleet build_fleet(const RunConfig& config);

/// Config echo with every default resolved.
nlohmann::json config_echo(const RunConfig& config);

}  // namespace grw::cli
