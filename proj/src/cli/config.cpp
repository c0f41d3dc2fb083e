#include "grw/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <set>

#include "grw/cli/toml.hpp"
#include "grw/error.hpp"
#include "grw/expr/expr.hpp"
#include "grw/fiber/fiber_metric.hpp"
#include "grw/sampling.hpp"
#include "grw/theorems/theorems.hpp"

namespace grw::cli {

using nlohmann::json;

namespace {

[[noreturn]] void bad(const std::string& field, const std::string& what) {
  throw ConfigError(field + ": " + what);
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ", ") + s;
  return out;
}

// A table with a fixed key set; reading a key marks it used.
class Table {
 public:
  Table(const json& node, std::string path, std::set<std::string> allowed) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) bad(path_, "expected a table");
    for (const auto& [k, v] : node_.items())
      if (!allowed.count(k)) bad(field(k), "unknown key (allowed: " + join({allowed.begin(), allowed.end()}) + ")");
  }

  std::string field(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
  bool has(const std::string& key) const { return node_.contains(key); }
  const json& at(const std::string& key) const { return node_.at(key); }

  std::string str(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_string()) bad(field(key), "expected a string");
    return v.get<std::string>();
  }
  double real(const std::string& key) const { return as_real(at(key), field(key)); }
  long long integer(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_number_integer()) bad(field(key), "expected an integer");
    return v.get<long long>();
  }
  bool boolean(const std::string& key) const {
    const auto& v = at(key);
    if (!v.is_boolean()) bad(field(key), "expected true or false");
    return v.get<bool>();
  }

  static double as_real(const json& v, const std::string& field) {
    if (!v.is_number()) bad(field, "expected a number");
    return v.get<double>();
  }

 private:
  const json& node_;
  std::string path_;
};

std::vector<std::string> string_list(const json& v, const std::string& field) {
  if (v.is_string()) return {v.get<std::string>()};
  if (!v.is_array()) bad(field, "expected a string or an array of strings");
  std::vector<std::string> out;
  for (const auto& e : v) {
    if (!e.is_string()) bad(field, "expected an array of strings");
    out.push_back(e.get<std::string>());
  }
  return out;
}

Box parse_box(const json& v, const std::string& field, int m) {
  if (!v.is_array() || static_cast<int>(v.size()) != m)
    bad(field, "expected " + std::to_string(m) + " [lo, hi] pairs, one per fiber coordinate");
  Box box{std::vector<double>(m), std::vector<double>(m)};
  for (int i = 0; i < m; ++i) {
    const auto& p = v[i];
    const std::string f = field + "[" + std::to_string(i) + "]";
    if (!p.is_array() || p.size() != 2) bad(f, "expected a [lo, hi] pair");
    box.lo[i] = Table::as_real(p[0], f);
    box.hi[i] = Table::as_real(p[1], f);
    if (!(std::isfinite(box.lo[i]) && std::isfinite(box.hi[i]) && box.lo[i] < box.hi[i]))
      bad(f, "needs finite lo < hi");
  }
  return box;
}

// Registry names, in registry order; "all" selects everything.
std::vector<std::string> select(const std::vector<std::string>& wanted, const std::vector<std::string>& registry,
                                const std::string& field, const std::string& registry_name) {
  if (wanted.size() == 1 && wanted[0] == "all") return registry;
  std::vector<std::string> out;
  for (const auto& w : wanted) {
    bool known = false;
    for (const auto& r : registry) known |= (r == w);
    if (!known) bad(field, "unknown name '" + w + "'; the " + registry_name + " registry is: " + join(registry));
    bool dup = false;
    for (const auto& o : out) dup |= (o == w);
    if (!dup) out.push_back(w);
  }
  return out;
}

std::uint64_t parse_seed(const std::string& text, const std::string& field) {
  std::uint64_t v = 0;
  const auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || p != text.data() + text.size())
    bad(field, "expected a nonnegative integer, got '" + text + "'");
  return v;
}

SpacetimeSpec read_spacetime(const json& doc) {
  if (!doc.contains("spacetime")) bad("spacetime", "missing table");
  const Table t(doc.at("spacetime"), "spacetime", {"name", "m", "a", "rho", "interval", "fiber"});
  SpacetimeSpec s;
  if (!t.has("name")) bad("spacetime.name", "missing");
  s.name = t.str("name");
  std::vector<std::string> names;
  for (const auto& e : catalog::entries()) names.push_back(e.name);
  names.push_back("custom");
  bool known = false;
  for (const auto& n : names) known |= (n == s.name);
  if (!known) bad("spacetime.name", "unknown spacetime '" + s.name + "' (known: " + join(names) + ")");
  if (t.has("m")) {
    const long long m = t.integer("m");
    if (m < 2 || m > 4) bad("spacetime.m", "fiber dimension must be 2, 3 or 4");
    s.m = static_cast<int>(m);
  }
  if (t.has("a")) {
    s.a = t.real("a");
    if (!(s.a > 0.0 && std::isfinite(s.a))) bad("spacetime.a", "must be positive and finite");
  }
  const bool custom = s.name == "custom";
  if (custom) {
    if (!t.has("rho")) bad("spacetime.rho", "custom spacetimes need a warping function rho(t)");
    s.rho = t.str("rho");
    if (t.has("interval")) {
      const auto& v = t.at("interval");
      if (!v.is_array() || v.size() != 2) bad("spacetime.interval", "expected [lo, hi]");
      s.interval.lo = Table::as_real(v[0], "spacetime.interval");
      s.interval.hi = Table::as_real(v[1], "spacetime.interval");
      if (!(s.interval.lo < s.interval.hi)) bad("spacetime.interval", "needs lo < hi");
    }
  } else {
    if (t.has("rho")) bad("spacetime.rho", "only custom spacetimes take a warping function");
    if (t.has("interval")) bad("spacetime.interval", "only custom spacetimes take an interval");
  }
  if (t.has("fiber")) {
    const Table f(t.at("fiber"), "spacetime.fiber", {"kind", "metric", "domain"});
    if (f.has("kind")) s.fiber.kind = f.str("kind");
    try {
      (void)fiber::parse_kind(s.fiber.kind);
    } catch (const InvalidArgument& e) {
      bad("spacetime.fiber.kind", e.what());
    }
    if (s.fiber.kind == "custom") {
      if (!f.has("metric")) bad("spacetime.fiber.metric", "custom fibers need an m x m matrix of expressions");
      const auto& mv = f.at("metric");
      if (!mv.is_array() || static_cast<int>(mv.size()) != s.m)
        bad("spacetime.fiber.metric", "expected " + std::to_string(s.m) + " rows");
      for (const auto& row : mv) {
        auto r = string_list(row, "spacetime.fiber.metric");
        if (static_cast<int>(r.size()) != s.m)
          bad("spacetime.fiber.metric", "expected " + std::to_string(s.m) + " entries per row");
        s.fiber.metric.push_back(std::move(r));
      }
      if (!f.has("domain")) bad("spacetime.fiber.domain", "custom fibers need a chart box");
      s.fiber.domain = parse_box(f.at("domain"), "spacetime.fiber.domain", s.m);
    } else {
      if (f.has("metric")) bad("spacetime.fiber.metric", "only custom fibers take a metric");
      if (f.has("domain")) bad("spacetime.fiber.domain", "only custom fibers take a domain");
    }
  }
  return s;
}

HypersurfaceSpec read_hypersurfaces(const json& doc) {
  if (!doc.contains("hypersurfaces")) bad("hypersurfaces", "missing table");
  const Table t(doc.at("hypersurfaces"), "hypersurfaces", {"fixtures", "fixture_seed", "graphs", "spacelike_margin"});
  HypersurfaceSpec h;
  if (t.has("fixtures")) h.fixtures = t.boolean("fixtures");
  if (t.has("fixture_seed")) {
    const long long v = t.integer("fixture_seed");
    if (v < 0) bad("hypersurfaces.fixture_seed", "must be nonnegative");
    h.fixture_seed = static_cast<std::uint64_t>(v);
  }
  if (t.has("graphs")) h.graphs = string_list(t.at("graphs"), "hypersurfaces.graphs");
  if (t.has("spacelike_margin")) {
    h.spacelike_margin = t.real("spacelike_margin");
    if (!(h.spacelike_margin > 0.0 && h.spacelike_margin < 1.0))
      bad("hypersurfaces.spacelike_margin", "must lie in (0, 1)");
  }
  if (!h.fixtures && h.graphs.empty()) bad("hypersurfaces", "set fixtures = true or list graphs");
  return h;
}

SamplingSpec read_sampling(const json& doc, int m) {
  SamplingSpec s;
  if (!doc.contains("sampling")) return s;
  const Table t(doc.at("sampling"), "sampling", {"mode", "box", "counts", "count", "seed"});
  if (t.has("mode")) {
    const auto mode = t.str("mode");
    if (mode == "grid") {
      s.mode = SampleMode::grid;
    } else if (mode == "random") {
      s.mode = SampleMode::random;
    } else {
      bad("sampling.mode", "expected grid or random, got '" + mode + "'");
    }
  }
  if (t.has("box")) s.box = parse_box(t.at("box"), "sampling.box", m);
  if (t.has("counts")) {
    if (s.mode != SampleMode::grid) bad("sampling.counts", "only grid sampling takes per-axis counts");
    const auto& v = t.at("counts");
    if (v.is_number_integer()) {
      s.counts.assign(m, v.get<int>());
    } else if (v.is_array() && static_cast<int>(v.size()) == m) {
      for (const auto& c : v) {
        if (!c.is_number_integer()) bad("sampling.counts", "expected integers");
        s.counts.push_back(c.get<int>());
      }
    } else {
      bad("sampling.counts", "expected an integer or " + std::to_string(m) + " integers");
    }
    for (int c : s.counts)
      if (c < 1 || c > 1000) bad("sampling.counts", "each count must lie in [1, 1000]");
  }
  if (t.has("count")) {
    if (s.mode != SampleMode::random) bad("sampling.count", "only random sampling takes a point count");
    const long long c = t.integer("count");
    if (c < 1 || c > 1000000) bad("sampling.count", "must lie in [1, 1000000]");
    s.count = static_cast<int>(c);
  }
  if (t.has("seed")) {
    const long long v = t.integer("seed");
    if (v < 0) bad("sampling.seed", "must be nonnegative");
    s.seed = static_cast<std::uint64_t>(v);
  }
  return s;
}

void read_checks(const json& doc, RunConfig& c) {
  if (!doc.contains("checks")) bad("checks", "missing table");
  const Table t(doc.at("checks"), "checks", {"names", "theorems"});
  if (t.has("names"))
    c.checks = select(string_list(t.at("names"), "checks.names"), identities::check_names(), "checks.names",
                      "check");
  if (t.has("theorems"))
    c.theorems = select(string_list(t.at("theorems"), "checks.theorems"), theorems::theorem_ids(),
                        "checks.theorems", "theorem");
}

void read_tolerances(const json& doc, identities::Tolerances& tol) {
  if (!doc.contains("tolerances")) return;
  const auto& node = doc.at("tolerances");
  if (!node.is_object()) bad("tolerances", "expected a table");
  for (const auto& [name, v] : node.items()) {
    const double value = Table::as_real(v, "tolerances." + name);
    try {
      tol.set(name, value);
    } catch (const ConfigError& e) {
      bad("tolerances." + name, e.what());
    }
  }
}

OutputSpec read_output(const json& doc) {
  OutputSpec o;
  if (!doc.contains("output")) return o;
  const Table t(doc.at("output"), "output", {"dir", "report", "points"});
  if (t.has("dir")) o.dir = t.str("dir");
  if (t.has("report")) o.report = t.str("report");
  if (t.has("points")) o.points = t.str("points");
  if (o.dir.empty()) bad("output.dir", "must not be empty");
  if (o.report.empty()) bad("output.report", "must not be empty");
  return o;
}

json box_json(const Box& b) {
  json out = json::array();
  for (int i = 0; i < b.dim(); ++i) out.push_back({b.lo[i], b.hi[i]});
  return out;
}

}  // namespace

std::pair<std::string, double> parse_tolerance_override(const std::string& text) {
  const auto eq = text.find('=');
  if (eq == std::string::npos || eq == 0) bad("--tol", "expected NAME=VALUE, got '" + text + "'");
  const std::string name = text.substr(0, eq);
  const std::string value = text.substr(eq + 1);
  double v = 0;
  const auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || ec != std::errc() || p != value.data() + value.size())
    bad("--tol " + name, "expected a number, got '" + value + "'");
  return {name, v};
}

std::vector<std::string> parse_check_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto end = comma == std::string::npos ? text.size() : comma;
    std::string item = text.substr(start, end - start);
    while (!item.empty() && item.front() == ' ') item.erase(0, 1);
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (item.empty()) bad("--checks", "empty name in list '" + text + "'");
    out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return select(out, identities::check_names(), "--checks", "check");
}

RunConfig config_from_json(const json& doc, const Overrides& overrides, std::optional<std::uint64_t> env_seed) {
  if (!doc.is_object()) bad("config", "expected a table at top level");
  const Table top(doc, "", {"spacetime", "hypersurfaces", "sampling", "checks", "tolerances", "output", "jobs"});
  RunConfig c;
  c.spacetime = read_spacetime(doc);
  c.hypersurfaces = read_hypersurfaces(doc);
  c.sampling = read_sampling(doc, c.spacetime.m);
  read_checks(doc, c);
  read_tolerances(doc, c.tolerances);
  c.output = read_output(doc);
  if (top.has("jobs")) {
    const long long j = top.integer("jobs");
    if (j < 1 || j > 256) bad("jobs", "must lie in [1, 256]");
    c.jobs = static_cast<int>(j);
  }

  if (overrides.out_dir) {
    if (overrides.out_dir->empty()) bad("--out", "must not be empty");
    c.output.dir = *overrides.out_dir;
  }
  if (overrides.seed) c.sampling.seed = overrides.seed;
  if (!c.sampling.seed && env_seed) c.sampling.seed = env_seed;
  for (const auto& [name, value] : overrides.tolerances) {
    try {
      c.tolerances.set(name, value);
    } catch (const ConfigError& e) {
      bad("--tol " + name, e.what());
    }
  }
  if (overrides.checks) c.checks = *overrides.checks;
  if (overrides.jobs) {
    if (*overrides.jobs < 1 || *overrides.jobs > 256) bad("--jobs", "must lie in [1, 256]");
    c.jobs = *overrides.jobs;
  }

  if (c.sampling.mode == SampleMode::random && !c.sampling.seed)
    bad("sampling.seed", "random sampling needs a seed (config, --seed or GRWLAB_SEED)");
  if (c.sampling.mode == SampleMode::grid && c.sampling.counts.empty()) c.sampling.counts.assign(c.spacetime.m, 10);
  if (c.checks.empty() && c.theorems.empty()) bad("checks", "nothing to run: list check names or theorems");
  return c;
}

RunConfig load_config(const std::string& path, const Overrides& overrides) {
  std::optional<std::uint64_t> env_seed;
  if (const char* s = std::getenv("GRWLAB_SEED"); s && *s) env_seed = parse_seed(s, "GRWLAB_SEED");
  return config_from_json(parse_toml_file(path), overrides, env_seed);
}

Fleet build_fleet(const RunConfig& config) {
  const auto& st = config.spacetime;
  catalog::Params params;
  params.m = st.m;
  params.a = st.a;
  params.rho = st.rho;
  params.interval = st.interval;
  try {
    const auto kind = fiber::parse_kind(st.fiber.kind);
    switch (kind) {
      case fiber::FiberKind::euclidean: params.fiber = fiber::FiberMetric::euclidean(st.m); break;
      case fiber::FiberKind::sphere: params.fiber = fiber::FiberMetric::sphere(st.m); break;
      case fiber::FiberKind::hyperbolic: params.fiber = fiber::FiberMetric::hyperbolic(st.m); break;
      case fiber::FiberKind::custom: params.fiber = fiber::FiberMetric::custom(st.fiber.metric, *st.fiber.domain); break;
    }
  } catch (const Error& e) {
    bad("spacetime.fiber", e.what());
  }

  Fleet fleet;
  try {
    fleet.spacetime = catalog::make_named(st.name, params);
  } catch (const Error& e) {
    bad(st.name == "custom" ? "spacetime.rho" : "spacetime", e.what());
  }
  const auto& S = fleet.spacetime;

  fleet.box = config.sampling.box ? *config.sampling.box : catalog::default_box(S->fiber());
  if (!fleet.box.within(S->fiber().domain(), kChartMargin))
    bad("sampling.box", "must lie inside the fiber chart with margin " + std::to_string(kChartMargin));

  const double eps = config.hypersurfaces.spacelike_margin;
  if (config.hypersurfaces.fixtures) {
    const bool minkowski = st.name == "minkowski";
    try {
      for (auto& f : catalog::fixture_hypersurfaces(S, fleet.box, config.hypersurfaces.fixture_seed, minkowski))
        fleet.members.push_back(
            {f.graph.label(), f.kind, hypersurface::GraphHypersurface(f.graph.label(), f.graph.u(), S, eps)});
    } catch (const Error& e) {
      bad("hypersurfaces.fixtures", e.what());
    }
  }
  for (std::size_t k = 0; k < config.hypersurfaces.graphs.size(); ++k) {
    const auto& src = config.hypersurfaces.graphs[k];
    const std::string field = "hypersurfaces.graphs[" + std::to_string(k) + "]";
    try {
      fleet.members.push_back({src, "graph", hypersurface::GraphHypersurface(src, expr::parse(src), S, eps)});
    } catch (const Error& e) {
      bad(field, e.what());
    }
  }

  const auto& smp = config.sampling;
  if (smp.mode == SampleMode::grid) {
    fleet.points = sampling::grid(fleet.box, smp.counts);
    std::string dims;
    for (int c : smp.counts) dims += (dims.empty() ? "" : "x") + std::to_string(c);
    fleet.sample_description = "grid " + dims + " on the sampling box";
  } else {
    fleet.points = sampling::random(fleet.box, smp.count, *smp.seed);
    fleet.sample_description =
        std::to_string(smp.count) + " random points (seed " + std::to_string(*smp.seed) + ") in the sampling box";
  }
  return fleet;
}

json config_echo(const RunConfig& c) {
  json st = {{"name", c.spacetime.name}, {"m", c.spacetime.m}, {"a", c.spacetime.a}};
  if (c.spacetime.name == "custom") {
    st["rho"] = c.spacetime.rho;
    st["interval"] = {c.spacetime.interval.lo, c.spacetime.interval.hi};
  }
  json fib = {{"kind", c.spacetime.fiber.kind}};
  if (c.spacetime.fiber.kind == "custom") {
    fib["metric"] = c.spacetime.fiber.metric;
    fib["domain"] = box_json(*c.spacetime.fiber.domain);
  }
  st["fiber"] = fib;

  json hs = {{"fixtures", c.hypersurfaces.fixtures},
             {"fixture_seed", c.hypersurfaces.fixture_seed},
             {"graphs", c.hypersurfaces.graphs},
             {"spacelike_margin", c.hypersurfaces.spacelike_margin}};

  json smp = {{"mode", c.sampling.mode == SampleMode::grid ? "grid" : "random"}};
  if (c.sampling.box) smp["box"] = box_json(*c.sampling.box);
  if (c.sampling.mode == SampleMode::grid) {
    smp["counts"] = c.sampling.counts;
  } else {
    smp["count"] = c.sampling.count;
  }
  smp["seed"] = c.sampling.seed ? json(*c.sampling.seed) : json(nullptr);

  json tol = json::object();
  for (const auto& [name, v] : c.tolerances.table()) tol[name] = v;

  return {{"spacetime", st},
          {"hypersurfaces", hs},
          {"sampling", smp},
          {"checks", {{"names", c.checks}, {"theorems", c.theorems}}},
          {"tolerances", tol},
          {"output", {{"dir", c.output.dir}, {"report", c.output.report}, {"points", c.output.points}}},
          {"jobs", c.jobs}};
}

}  // namespace grw::cli
