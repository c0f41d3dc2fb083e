#include "grw/cli/runner.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <optional>
#include <thread>

#include "grw/error.hpp"
#include "grw/theorems/theorems.hpp"

namespace grw::cli {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

std::string point_coords(const std::string& label, double tau, const std::vector<double>& x) {
  std::string out = label + "@(" + format_double(tau);
  for (double v : x) out += ";" + format_double(v);
  return out + ")";
}

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) out += c == '"' ? std::string("\"\"") : std::string(1, c);
  return out + "\"";
}

// Reports never carry a non-finite number into JSON as anything but null.
json num(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json witness_json(const theorems::Witness& w) {
  return {{"x", w.x}, {"tau", num(w.tau)}, {"value", num(w.value)}};
}

json hypothesis_json(const theorems::HypothesisReport& r) {
  json conditions = json::array();
  for (const auto& c : r.conditions) {
    json ws = json::array();
    for (const auto& w : c.witnesses) ws.push_back(witness_json(w));
    conditions.push_back({{"name", c.name},
                          {"role", c.role},
                          {"status", theorems::status_name(c.status)},
                          {"violations", c.violations},
                          {"value", c.value ? num(*c.value) : json(nullptr)},
                          {"witnesses", ws},
                          {"detail", c.detail}});
  }
  return {{"theorem", r.theorem},
          {"hypersurface", r.hypersurface},
          {"sample", r.sample},
          {"conditions", conditions},
          {"verdict", r.verdict}};
}

json record_json(const identities::IdentityReport& r) {
  json out = {{"check", r.check},     {"x", r.x},
              {"tau", num(r.tau)},    {"lhs", num(r.lhs)},
              {"rhs", num(r.rhs)},    {"residual", num(r.residual)},
              {"margin", r.margin ? num(*r.margin) : json(nullptr)},
              {"scale", num(r.scale)}, {"pass", r.pass},
              {"asserted", r.asserted}};
  // Failures and notes carry their evidence.
  if (!r.pass || !r.note.empty()) {
    json terms = json::object();
    for (const auto& t : r.breakdown) terms[t.name] = num(t.value);
    out["breakdown"] = terms;
    if (!r.note.empty()) out["note"] = r.note;
  }
  return out;
}

struct Aggregate {
  int count = 0;
  int failures = 0;
  int informational = 0;
  double max_abs_residual = 0;
  double max_relative_residual = 0;
  std::optional<double> min_margin;
  const identities::IdentityReport* worst = nullptr;  // largest relative residual or lowest margin
  std::string worst_label;

  void add(const identities::IdentityReport& r, const std::string& label) {
    ++count;
    if (!r.asserted) ++informational;
    if (r.asserted && !r.pass) ++failures;
    max_abs_residual = std::max(max_abs_residual, std::abs(r.residual));
    max_relative_residual = std::max(max_relative_residual, r.relative());
    bool worse = worst == nullptr;
    if (r.margin) {
      if (!min_margin || *r.margin < *min_margin) {
        min_margin = r.margin;
        worse = true;
      }
    } else if (worst && r.relative() > worst->relative()) {
      worse = true;
    }
    if (worse) {
      worst = &r;
      worst_label = label;
    }
  }

  json to_json() const {
    json out = {{"count", count},
                {"failures", failures},
                {"informational", informational},
                {"max_abs_residual", num(max_abs_residual)},
                {"max_relative_residual", num(max_relative_residual)},
                {"min_margin", min_margin ? num(*min_margin) : json(nullptr)},
                {"pass", failures == 0}};
    if (worst) {
      json w = record_json(*worst);
      w["hypersurface"] = worst_label;
      out["worst"] = w;
    }
    return out;
  }
};

PointResult evaluate_point(const RunConfig& config, const Fleet& fleet, std::size_t member, std::size_t point) {
  const auto& M = fleet.members[member].graph;
  const auto& x = fleet.points[point];
  PointResult out;
  out.member = member;
  out.point = point;
  out.tau = std::numeric_limits<double>::quiet_NaN();
  try {
    out.tau = M.tau_at(x);
  } catch (const DomainError& e) {
    out.rejection = e.what();
    return out;
  }
  if (auto why = M.admission(x)) {
    out.rejection = *why;
    return out;
  }
  // Two independent Christoffel computations; disagreement is an engine fault.
  (void)M.host().christoffel(out.tau, x, config.tolerances.get("christoffel"));
  try {
    out.reports = identities::evaluate(M, x, config.checks, config.tolerances);
  } catch (const ConsistencyFault&) {
    throw;
  } catch (const DomainError& e) {
    out.rejection = e.what();
  } catch (const DegenerateHypersurface& e) {
    out.rejection = e.what();
  } catch (const MetricDegeneracy& e) {
    out.rejection = e.what();
  } catch (const SingularJet& e) {
    out.rejection = e.what();
  }
  return out;
}

std::vector<PointResult> evaluate_all(const RunConfig& config, const Fleet& fleet) {
  const std::size_t n_points = fleet.points.size();
  const std::size_t total = fleet.members.size() * n_points;
  std::vector<PointResult> results(total);
  std::vector<std::exception_ptr> errors(total);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      try {
        results[k] = evaluate_point(config, fleet, k / n_points, k % n_points);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int jobs = std::max(1, std::min<int>(config.jobs, static_cast<int>(std::max<std::size_t>(total, 1))));
  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int j = 0; j < jobs; ++j) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  // The first fault in sample order wins, so the diagnostic is reproducible.
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
  return results;
}

}  // namespace

RunResult run(const RunConfig& config, const Fleet& fleet) {
  const auto start = std::chrono::steady_clock::now();
  const auto results = evaluate_all(config, fleet);
  const std::size_t n_points = fleet.points.size();

  std::string csv = "check,point_coords,lhs,rhs,residual,margin,pass\n";
  std::map<std::string, Aggregate> aggregates;
  for (const auto& name : config.checks) aggregates[name];
  json records = json::array();
  json members = json::array();
  std::size_t admitted_total = 0, rejected_total = 0, check_records = 0;

  for (std::size_t h = 0; h < fleet.members.size(); ++h) {
    const auto& mem = fleet.members[h];
    theorems::Sample sample;
    sample.description = fleet.sample_description;
    json rejections = json::array();
    for (std::size_t p = 0; p < n_points; ++p) {
      const auto& r = results[h * n_points + p];
      const auto& x = fleet.points[p];
      const std::string coords = csv_field(point_coords(mem.label, r.tau, x));
      if (!r.rejection.empty()) {
        ++rejected_total;
        csv += "admission," + coords + ",,,,,rejected\n";
        rejections.push_back({{"x", x}, {"tau", num(r.tau)}, {"reason", r.rejection}});
        continue;
      }
      ++admitted_total;
      sample.points.push_back(x);
      for (const auto& rep : r.reports) {
        ++check_records;
        aggregates[rep.check].add(rep, mem.label);
        csv += rep.check + "," + coords + "," + format_double(rep.lhs) + "," + format_double(rep.rhs) + "," +
               format_double(rep.residual) + "," + (rep.margin ? format_double(*rep.margin) : "") + "," +
               (rep.asserted ? (rep.pass ? "true" : "false") : "info") + "\n";
        json rec = record_json(rep);
        rec["hypersurface"] = mem.label;
        records.push_back(std::move(rec));
      }
    }

    json entry = {{"label", mem.label},
                  {"kind", mem.kind},
                  {"expression", mem.graph.u().to_string()},
                  {"points", n_points},
                  {"admitted", sample.points.size()},
                  {"rejected", rejections}};
    if (!sample.points.empty()) {
      const auto sv = theorems::slice_classifier(mem.graph, sample);
      entry["slice"] = {{"is_slice", sv.is_slice},
                        {"max_sinh", num(sv.max_sinh)},
                        {"tau_spread", num(sv.tau_spread)},
                        {"detail", sv.detail}};
      json th = json::array();
      for (const auto& id : config.theorems)
        th.push_back(hypothesis_json(theorems::check_theorem(id, mem.graph, sample, config.tolerances)));
      entry["theorems"] = th;
    } else {
      entry["slice"] = nullptr;
      entry["theorems"] = json::array();
      entry["note"] = "no admitted points; theorem reports skipped";
    }
    members.push_back(std::move(entry));
  }

  bool pass = true;
  json checks = json::object();
  for (const auto& name : config.checks) {
    const auto& a = aggregates[name];
    pass = pass && a.failures == 0;
    checks[name] = a.to_json();
  }

  RunResult out;
  out.exit_code = pass ? exit_pass : exit_check_failure;
  json echo = config_echo(config);
  json resolved_box = json::array();
  for (int i = 0; i < fleet.box.dim(); ++i) resolved_box.push_back({fleet.box.lo[i], fleet.box.hi[i]});
  echo["sampling"]["box"] = resolved_box;
  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  out.report = {{"engine", {{"name", kEngineName}, {"version", kEngineVersion}}},
                {"config", echo},
                {"sample", fleet.sample_description},
                {"totals",
                 {{"hypersurfaces", fleet.members.size()},
                  {"points_per_hypersurface", n_points},
                  {"admitted", admitted_total},
                  {"rejected", rejected_total},
                  {"check_records", check_records},
                  {"records", check_records + rejected_total}}},
                {"checks", checks},
                {"hypersurfaces", members},
                {"records", records},
                {"pass", pass},
                {"exit_code", out.exit_code},
                {"wall_clock_seconds", wall}};
  out.csv = std::move(csv);
  return out;
}

RunResult run_and_write(const RunConfig& config) {
  const Fleet fleet = build_fleet(config);
  RunResult result = run(config, fleet);
  namespace fs = std::filesystem;
  const fs::path dir(config.output.dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("output.dir: cannot create '" + dir.string() + "': " + ec.message());
  auto write = [](const fs::path& p, const std::string& text, const std::string& field) {
    std::ofstream f(p, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError(field + ": cannot write '" + p.string() + "'");
    f << text;
  };
  write(dir / config.output.report, result.report.dump(2) + "\n", "output.report");
  if (!config.output.points.empty()) write(dir / config.output.points, result.csv, "output.points");
  return result;
}

}  // namespace grw::cli
