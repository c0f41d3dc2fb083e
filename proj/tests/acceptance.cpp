// Acceptance run: one PASS/FAIL line per criterion, tolerances and time
// limits pinned below. Exit status is nonzero when any criterion fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "grw/catalog/catalog.hpp"
#include "grw/cli/config.hpp"
#include "grw/cli/runner.hpp"
#include "grw/cli/toml.hpp"
#include "grw/identities/identities.hpp"
#include "grw/random.hpp"
#include "grw/sampling.hpp"
#include "grw/theorems/theorems.hpp"
#include "support/corpus.hpp"
#include "support/oracles.hpp"

using namespace grw;
using hypersurface::GraphHypersurface;

namespace {

const std::vector<std::string> kSpacetimes{"minkowski", "steady_state", "einstein_de_sitter", "radiation"};

struct Outcome {
  bool pass = true;
  std::string detail;
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

GraphHypersurface graph(const std::shared_ptr<const ambient::Spacetime>& S, const std::string& u) {
  return GraphHypersurface(u, expr::parse(u), S);
}

// Times for ambient sampling: a window inside I.
Interval time_window(const ambient::Spacetime& S) {
  const auto& I = S.warp().interval();
  if (std::isfinite(I.lo)) return {I.lo + 0.5, I.lo + 4.0};
  return {-2.0, 2.0};
}

struct AmbientPoint {
  double t;
  std::vector<double> x;
};

std::vector<AmbientPoint> ambient_points(const ambient::Spacetime& S, int count, std::uint64_t seed) {
  const auto w = time_window(S);
  Rng rng(seed);
  std::vector<AmbientPoint> out;
  const auto xs = sampling::random(catalog::default_box(S.fiber()), count, seed + 1);
  for (const auto& x : xs) out.push_back({rng.uniform(w.lo, w.hi), x});
  return out;
}

// Fiber vector of unit g_F length.
std::vector<double> unit_fiber_vector(const ambient::Spacetime& S, std::span<const double> x, Rng& rng) {
  std::vector<double> v(S.m());
  for (auto& c : v) c = rng.uniform(-1.0, 1.0);
  const auto g = S.fiber().metric_at(x);
  double n2 = 0;
  for (int i = 0; i < S.m(); ++i)
    for (int j = 0; j < S.m(); ++j) n2 += g(i, j) * v[i] * v[j];
  for (auto& c : v) c /= std::sqrt(n2);
  return v;
}

// Criterion 5-7 fleet: slices, the Minkowski hyperboloid (and hyperplane),
// five seeded cubics per spacetime.
struct FleetEntry {
  std::string spacetime;
  catalog::Fixture fixture;
};

std::vector<FleetEntry> acceptance_fleet() {
  std::vector<FleetEntry> out;
  for (const auto& name : kSpacetimes) {
    const auto S = catalog::make_named(name);
    for (auto& f : catalog::fixture_hypersurfaces(S, catalog::default_box(S->fiber()), 7, name == "minkowski"))
      out.push_back({name, std::move(f)});
  }
  return out;
}

constexpr int kPointsPerFixture = 100;
constexpr std::uint64_t kPointSeed = 11;

Outcome slice_exactness() {
  constexpr double kTol = 1e-12;
  double worst_H = 0, worst_A = 0;
  bool phi_zero = true;
  int n = 0;
  for (const auto& name : kSpacetimes) {
    const auto S = catalog::make_named(name);
    const auto times = catalog::slice_times(*S);
    if (times.size() != 3) return {false, name + " has " + std::to_string(times.size()) + " slice times"};
    for (double t0 : times) {
      const auto M = graph(S, cli::format_double(t0));
      for (const auto& x : sampling::random(catalog::default_box(S->fiber()), 10, 3)) {
        const auto p = M.frame_at(x);
        const double r = p.rho[1] / p.rho[0];
        worst_H = std::max(worst_H, std::abs(p.H - r));
        for (int i = 0; i < p.m; ++i)
          for (int j = 0; j < p.m; ++j) worst_A = std::max(worst_A, std::abs(p.A(i, j) + (i == j ? r : 0.0)));
        phi_zero = phi_zero && p.sinh2_phi == 0.0 && p.cosh_phi == 1.0;
        ++n;
      }
    }
  }
  return {worst_H <= kTol && worst_A <= kTol && phi_zero,
          std::to_string(n) + " points; max|H - rho'/rho| " + fmt(worst_H) + ", max|A + (rho'/rho) I| " +
              fmt(worst_A) + ", phi = 0 exactly: " + (phi_zero ? "yes" : "no") + " (tol 1e-12)"};
}

Outcome slice_anchors() {
  constexpr double kTol = 1e-12;
  const std::vector<double> x{0.2, -0.3};
  double worst = 0;
  std::string where;
  auto check = [&](const std::shared_ptr<const ambient::Spacetime>& S, double t0, double expected,
                   const std::string& label) {
    const double err = std::abs(graph(S, cli::format_double(t0)).frame_at(x).H - expected);
    if (err > worst) {
      worst = err;
      where = label;
    }
  };
  const auto ss = catalog::make_named("steady_state");
  for (double t0 : {-2.0, -0.5, 0.0, 0.7, 1.0, 3.0}) check(ss, t0, 1.0, "steady state");
  check(catalog::make_named("einstein_de_sitter"), 1.0, 2.0 / 3.0, "EdS");
  for (double a : {0.5, 1.0, 3.0}) {
    catalog::Params p;
    p.a = a;
    check(catalog::make_named("radiation", p), 1.0, 0.5, "radiation a=" + fmt(a));
  }
  return {worst <= kTol, "steady state H = 1 at 6 times, EdS t=1 H = 2/3, radiation t=1 H = 1/2 for a in {0.5,1,3}; "
                         "max error " + fmt(worst) + (where.empty() ? "" : " (" + where + ")") + " (tol 1e-12)"};
}

Outcome christoffel_ricci() {
  constexpr double kTol = 1e-8;
  double worst_gamma = 0, worst_ricci = 0;
  int n = 0;
  for (const auto& name : kSpacetimes) {
    const auto S = catalog::make_named(name);
    Rng rng(31);
    for (const auto& [t, x] : ambient_points(*S, 100, 29)) {
      worst_gamma = std::max(worst_gamma, S->christoffel_discrepancy(t, x));
      const auto v = unit_fiber_vector(*S, x, rng);
      const auto r = S->oneill_ricci_check(t, x, v);
      worst_ricci = std::max(worst_ricci, std::abs(r.time_time) / std::max(1.0, r.time_scale));
      worst_ricci = std::max(worst_ricci, std::abs(r.fiber) / std::max(1.0, r.fiber_scale));
      ++n;
    }
  }
  return {worst_gamma <= kTol && worst_ricci <= kTol,
          std::to_string(n) + " points; Christoffel generic vs closed form " + fmt(worst_gamma) +
              ", O'Neill Ricci forms " + fmt(worst_ricci) + " (relative tol 1e-8)"};
}

Outcome conformal_field() {
  constexpr double kTol = 1e-9;
  double worst = 0;
  int n = 0;
  for (const auto& name : kSpacetimes) {
    const auto S = catalog::make_named(name);
    for (const auto& [t, x] : ambient_points(*S, 100, 37)) {
      for (int a = 0; a <= S->m(); ++a) {
        std::vector<double> X(S->dim(), 0.0);
        X[a] = 1.0;
        worst = std::max(worst, S->conformal_K_residual(t, x, X));
      }
      ++n;
    }
  }
  return {worst < kTol, std::to_string(n) + " points x all coordinate directions; max residual " + fmt(worst) +
                            " (tol 1e-9)"};
}

Outcome master_identity(const std::vector<FleetEntry>& fleet) {
  constexpr double kTol = 1e-6, kFdTol = 1e-3;
  double worst = 0, worst_fd = 0;
  int n = 0, fd_n = 0;
  for (const auto& e : fleet) {
    const auto& M = e.fixture.graph;
    const auto box = catalog::default_box(M.host().fiber());
    for (const auto& x : sampling::random(box, kPointsPerFixture, kPointSeed)) {
      worst = std::max(worst, identities::master_identity(M, x).relative());
      ++n;
    }
    for (const auto& x : sampling::random(box, 10, 23)) {
      const double lhs = identities::master_identity(M, x).lhs;
      const double fd = oracle::fd_cosh(M, x) * oracle::fd_laplacian_cosh(M, x);
      worst_fd = std::max(worst_fd, std::abs(lhs - fd) / std::max(1.0, std::abs(fd)));
      ++fd_n;
    }
  }
  return {worst < kTol && worst_fd <= kFdTol,
          std::to_string(fleet.size()) + " fixtures, " + std::to_string(n) + " points; max relative residual " +
              fmt(worst) + " (tol 1e-6); FD Laplacian spot-check on " + std::to_string(fd_n) + " points " +
              fmt(worst_fd) + " (tol 1e-3)"};
}

Outcome inequality_decomposition(const std::vector<FleetEntry>& fleet) {
  constexpr double kDecompTol = 1e-8, kMarginTol = 1e-6;
  double worst_decomp = 0, min_margin = 1e300;
  int n = 0;
  for (const auto& e : fleet) {
    const auto& M = e.fixture.graph;
    for (const auto& x : sampling::random(catalog::default_box(M.host().fiber()), kPointsPerFixture, kPointSeed)) {
      const auto p = M.frame_at(x);
      const auto c1 = identities::master_identity(M, p);
      const auto c2 = identities::inequality_chain(M, p);
      // margin = clap1 residual + |Hess tau|^2 + rearrangement, absolute.
      const double d = *c2.margin - c1.residual - p.hess_tau_norm2 - identities::kDocumentedRearrangement;
      worst_decomp = std::max(worst_decomp, std::abs(d));
      min_margin = std::min(min_margin, *c2.margin);
      ++n;
    }
  }
  return {worst_decomp <= kDecompTol && min_margin >= -kMarginTol,
          std::to_string(n) + " points; max |margin - (clap1 residual + |Hess tau|^2 + 0)| " + fmt(worst_decomp) +
              " (tol 1e-8), min margin " + fmt(min_margin) + " (>= -1e-6), both absolute"};
}

Outcome laps_cmc(const std::vector<FleetEntry>& fleet) {
  constexpr double kMarginTol = 1e-6, kHTol = 1e-8;
  double min_margin = 1e300, worst_H_spread = 0;
  int n = 0, fixtures = 0;
  bool all_asserted = true;
  for (const auto& e : fleet) {
    const auto& kind = e.fixture.kind;
    if (kind != "slice" && kind != "hyperboloid") continue;
    ++fixtures;
    const auto& M = e.fixture.graph;
    double H_lo = 1e300, H_hi = -1e300;
    for (const auto& x : sampling::random(catalog::default_box(M.host().fiber()), kPointsPerFixture, kPointSeed)) {
      const auto p = M.frame_at(x);
      const auto l = identities::lemma1_margin(M, p);
      all_asserted = all_asserted && l.asserted;
      min_margin = std::min(min_margin, *l.margin);
      H_lo = std::min(H_lo, p.H);
      H_hi = std::max(H_hi, p.H);
      if (kind == "hyperboloid") worst_H_spread = std::max(worst_H_spread, std::abs(p.H - 1.0));
      ++n;
    }
    worst_H_spread = std::max(worst_H_spread, H_hi - H_lo);
  }
  return {min_margin >= -kMarginTol && worst_H_spread <= kHTol && all_asserted,
          std::to_string(fixtures) + " CMC fixtures, " + std::to_string(n) + " points; min margin " + fmt(min_margin) +
              " (>= -1e-6), max H variation " + fmt(worst_H_spread) + " (hyperboloid H = 1, tol 1e-8), asserted: " +
              (all_asserted ? "all" : "NOT all")};
}

Outcome ncc_ledger() {
  Rng rng(43);
  const std::vector<double> x0{0.1, -0.2};
  // Steady state: flat fiber and (log rho)'' = 0.
  const auto ss = catalog::make_named("steady_state");
  double ss_worst = 0;
  for (const auto& [t, x] : ambient_points(*ss, 100, 41))
    ss_worst = std::max(ss_worst, std::abs(ss->ncc_margin(t, x, unit_fiber_vector(*ss, x, rng))));
  // EdS and radiation on [0.5, 4].
  double pos_min = 1e300;
  for (const std::string name : {"einstein_de_sitter", "radiation"}) {
    const auto S = catalog::make_named(name);
    for (int k = 0; k <= 70; ++k) {
      const double t = 0.5 + 3.5 * k / 70.0;
      pos_min = std::min(pos_min, S->ncc_margin(t, x0, unit_fiber_vector(*S, x0, rng)));
    }
  }
  catalog::Params p;
  p.rho = "cosh(t)";
  const auto ch = catalog::make_named("custom", p);
  const double cosh_value = ch->ncc_margin(0.0, x0, unit_fiber_vector(*ch, x0, rng));
  const std::vector<double> dt{1.0, 0.0, 0.0};
  const double tcc = ss->tcc_check(0.3, x0, dt);
  const bool ok = ss_worst <= 1e-12 && pos_min > 0.0 && std::abs(cosh_value + 2.0) <= 1e-9 &&
                  std::abs(tcc + 2.0) <= 1e-12 && ss->ncc_margin(0.3, x0, unit_fiber_vector(*ss, x0, rng)) >= -1e-12;
  return {ok, "steady state max|ncc| " + fmt(ss_worst) + " (tol 1e-12); EdS/radiation min on [0.5,4] " +
                  fmt(pos_min) + " (> 0); cosh t at t=0 " + cli::format_double(cosh_value) +
                  " (-2 +- 1e-9); steady-state Ric(d_t,d_t) " + cli::format_double(tcc) +
                  " (-m: TCC fails while NCC holds)"};
}

Outcome angle_bound(const std::vector<FleetEntry>& fleet) {
  const bool table = theorems::thm2_bound(2) == 0 && theorems::thm2_bound(3) == 3 && theorems::thm2_bound(4) == 8;
  int reports = 0, false_violations = 0, vacuous = 0, gated = 0;
  bool vacuous_ok = true;
  for (const auto& e : fleet) {
    const auto& M = e.fixture.graph;
    theorems::Sample s{sampling::grid(catalog::default_box(M.host().fiber()), 7), "grid 7x7"};
    const auto r = theorems::check_angle_bound(M, s, M.m());
    ++reports;
    for (const auto& [gate, bound] : {std::pair<std::string, std::string>{"gate 0 < H <= rho'/rho",
                                                                          "angle bound (positive case)"},
                                      {"gate rho'/rho <= H < 0", "angle bound (reversed case)"}}) {
      const auto& g = r.condition(gate);
      const auto& b = r.condition(bound);
      false_violations += b.violations;
      const bool is_vacuous = b.detail.rfind("vacuous", 0) == 0;
      if (is_vacuous) {
        ++vacuous;
        vacuous_ok = vacuous_ok && b.status == theorems::Status::holds_on_sample && b.violations == 0;
      } else {
        ++gated;
        vacuous_ok = vacuous_ok && g.status == theorems::Status::holds_on_sample;
      }
    }
  }
  return {table && false_violations == 0 && vacuous_ok && gated > 0,
          std::string("m(m-2) for m=2,3,4: ") + std::to_string(theorems::thm2_bound(2)) + "," +
              std::to_string(theorems::thm2_bound(3)) + "," + std::to_string(theorems::thm2_bound(4)) + "; " +
              std::to_string(reports) + " fixtures: " + std::to_string(gated) + " gated bounds, " +
              std::to_string(vacuous) + " vacuous, " + std::to_string(false_violations) + " violations"};
}

Outcome support_conclusion(const std::vector<FleetEntry>& fleet) {
  constexpr double kZeroTol = 1e-12;
  double worst_zero = 0;
  int fixtures = 0;
  for (const auto& e : fleet) {
    if (e.fixture.kind != "slice" && e.fixture.kind != "hyperboloid") continue;
    const auto& M = e.fixture.graph;
    theorems::Sample s{sampling::random(catalog::default_box(M.host().fiber()), kPointsPerFixture, kPointSeed), ""};
    const auto r = theorems::support_conclusion(M, s);
    worst_zero = std::max(worst_zero, *r.condition("rho'(tau) sinh^2(phi) = 0").value);
    ++fixtures;
  }
  const auto ss = catalog::make_named("steady_state");
  const auto tilted = graph(ss, "0.3*x1");
  theorems::Sample band{sampling::grid(Box::cube(2, 0.05), 5), "grid 5x5 on [-0.05,0.05]^2"};
  const auto& c = theorems::support_conclusion(tilted, band).condition("rho'(tau) sinh^2(phi) = 0");
  double witness_min = 1e300;
  for (const auto& w : c.witnesses) witness_min = std::min(witness_min, w.value);
  const bool tilted_ok = c.status == theorems::Status::fails_at_point && !c.witnesses.empty() &&
                         c.violations == 25 && witness_min >= 0.09 - 1e-6;
  return {worst_zero <= kZeroTol && tilted_ok,
          std::to_string(fixtures) + " slice/hyperboloid fixtures max " + fmt(worst_zero) + " (tol 1e-12); u = 0.3 x1: " +
              std::to_string(c.violations) + "/25 points positive, witness value " + fmt(witness_min) +
              " (>= 0.09 - 1e-6)"};
}

Outcome jet_coherence() {
  const auto cases = corpus::build(200, 20240611);
  const auto bad = corpus::check_against_fd(cases, 1e-4);
  return {bad.empty(), "200 random expressions, all coefficients of degree <= 3; " + std::to_string(bad.size()) +
                           " mismatches (relative tol 1e-4)" + (bad.empty() ? "" : "; first: " + bad[0].source)};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome determinism() {
  namespace fs = std::filesystem;
  const auto root = fs::temp_directory_path() / "grwlab_acceptance_determinism";
  fs::remove_all(root);
  const auto doc = cli::parse_toml(R"(
[spacetime]
name = "steady_state"
[hypersurfaces]
fixtures = true
graphs = ["0.3*x1 + 0.2*x1*x2^2"]
[sampling]
mode = "random"
count = 25
seed = 12
[checks]
names = "all"
)");
  std::string text[2];
  for (int k = 0; k < 2; ++k) {
    cli::Overrides ov;
    ov.out_dir = (root / std::to_string(k)).string();
    ov.jobs = k == 0 ? 1 : 3;
    cli::run_and_write(cli::config_from_json(doc, ov));
    text[k] = slurp(root / std::to_string(k) / "points.csv");
  }
  fs::remove_all(root);
  return {!text[0].empty() && text[0] == text[1],
          "two runs (jobs 1 and 3), " + std::to_string(text[0].size()) + " bytes of points.csv, identical: " +
              (text[0] == text[1] ? "yes" : "no")};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;  // 0: no runtime limit
    std::function<Outcome()> run;
  };
  std::vector<FleetEntry> fleet;
  const std::vector<Criterion> criteria{
      {1, "slice exactness", 1.0, slice_exactness},
      {2, "steady-state, EdS and radiation slice anchors", 0.0, slice_anchors},
      {3, "Christoffel and Ricci consistency", 10.0, christoffel_ricci},
      {4, "conformal field", 0.0, conformal_field},
      {5, "master identity", 60.0, [&] { return master_identity(fleet); }},
      {6, "inequality decomposition", 0.0, [&] { return inequality_decomposition(fleet); }},
      {7, "laps on exact CMC fixtures", 0.0, [&] { return laps_cmc(fleet); }},
      {8, "NCC ledger", 0.0, ncc_ledger},
      {9, "teo2 angle-bound table", 0.0, [&] { return angle_bound(fleet); }},
      {10, "support conclusion", 0.0, [&] { return support_conclusion(fleet); }},
      {11, "jet/oracle coherence", 0.0, jet_coherence},
      {12, "determinism", 0.0, determinism},
  };
  fleet = acceptance_fleet();

  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::string timing = fmt(secs) + " s";
    if (c.limit_s > 0) {
      timing += " < " + fmt(c.limit_s) + " s";
      if (secs >= c.limit_s) {
        o.pass = false;
        timing += " EXCEEDED";
      }
    }
    if (!o.pass) ++failed;
    std::printf("[%s] %2d %s: %s [%s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), timing.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria pass\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
