#include <cmath>

#include "doctest.h"
#include "grw/catalog/catalog.hpp"
#include "grw/error.hpp"
#include "grw/sampling.hpp"
#include "grw/theorems/theorems.hpp"

using namespace grw;
using hypersurface::GraphHypersurface;
using theorems::Status;

namespace {

GraphHypersurface graph(const std::shared_ptr<const ambient::Spacetime>& S, const std::string& u) {
  return GraphHypersurface(u, expr::parse(u), S);
}

theorems::Sample grid_sample(const Box& box, int n) { return {sampling::grid(box, n), "grid"}; }

std::shared_ptr<const ambient::Spacetime> custom(const std::string& rho, int m = 2) {
  catalog::Params p;
  p.rho = rho;
  p.m = m;
  return catalog::make_named("custom", p);
}

void check_witness_invariant(const theorems::HypothesisReport& r) {
  for (const auto& c : r.conditions) {
    if (c.status == Status::fails_at_point) {
      CHECK_MESSAGE(!c.witnesses.empty(), r.theorem << ": " << c.name);
      CHECK(c.violations >= static_cast<int>(c.witnesses.size()));
    }
    if (c.name == "volume growth" || c.name == "complete") CHECK(c.status == Status::not_checkable);
  }
}

}  // namespace

TEST_CASE("angle bound table") {
  CHECK(theorems::thm2_bound(2) == 0);
  CHECK(theorems::thm2_bound(3) == 3);
  CHECK(theorems::thm2_bound(4) == 8);
  for (int m = 2; m <= 16; ++m) CHECK(theorems::thm2_bound(m) == m * (m - 2));
  CHECK_THROWS_AS(theorems::thm2_bound(1), InvalidArgument);
}

TEST_CASE("teo1 hypotheses") {
  const auto sample = grid_sample(Box::cube(2, 0.8), 5);
  for (double t0 : {0.5, 1.0, 2.0, 4.0}) {
    const auto r = theorems::thm1_hypotheses(graph(catalog::make_named("einstein_de_sitter"), std::to_string(t0)), sample);
    const auto& c = r.condition("H rho'(tau) <= 0");
    CHECK(c.status == Status::fails_at_point);
    CHECK(c.violations == 25);
    CHECK(c.witnesses.size() == theorems::kMaxWitnesses);
    // H = rho'/rho = 2/(3 t0) and rho' = (2/3) t0^(-1/3).
    CHECK(*c.value == doctest::Approx(2.0 / (3.0 * t0) * (2.0 / 3.0) * std::pow(t0, -1.0 / 3.0)).epsilon(1e-12));
    CHECK(r.condition("volume growth").status == Status::not_checkable);
    CHECK(r.verdict.rfind("hypotheses fail", 0) == 0);
    check_witness_invariant(r);
  }

  const auto hyp = theorems::thm1_hypotheses(graph(catalog::make_named("minkowski"), "sqrt(1 + x1^2 + x2^2)"), sample);
  CHECK(hyp.condition("H rho'(tau) <= 0").status == Status::holds_on_sample);
  CHECK(hyp.condition("constant mean curvature").status == Status::holds_on_sample);
  CHECK(hyp.condition("NCC").status == Status::holds_on_sample);
  const auto& inf = hyp.condition("inf rho'^2/rho^2 > 0");
  CHECK(inf.status == Status::fails_at_point);
  CHECK(*inf.value == 0.0);
  CHECK(inf.detail.find("estimate") != std::string::npos);

  // Mixed-sign mean curvature in steady state: witnesses are exactly the points with H > 0.
  const auto M = graph(catalog::make_named("steady_state"), "0.3*x1^3 + 0.5*x2^2");
  const auto s = grid_sample(Box::cube(2, 0.9), 9);
  const auto r = theorems::thm1_hypotheses(M, s);
  int positive = 0;
  for (const auto& x : s.points) positive += M.frame_at(x).H > 1e-9 / std::exp(M.tau_at(x));
  const auto& c = r.condition("H rho'(tau) <= 0");
  CHECK(positive > 0);
  CHECK(positive < static_cast<int>(s.points.size()));
  CHECK(c.violations == positive);
  for (const auto& w : c.witnesses) CHECK(M.frame_at(w.x).H > 0.0);
  check_witness_invariant(r);
}

TEST_CASE("angle bound gates") {
  const auto sample = grid_sample(Box::cube(2, 0.8), 4);
  // Expanding slices: H = rho'/rho > 0, positive gate holds, sinh^2 = 0 <= 0.
  for (const char* name : {"steady_state", "einstein_de_sitter", "radiation"}) {
    const auto S = catalog::make_named(name);
    const auto r = theorems::check_angle_bound(graph(S, "1"), sample, 2);
    CHECK(r.condition("gate 0 < H <= rho'/rho").status == Status::holds_on_sample);
    CHECK(r.condition("angle bound (positive case)").status == Status::holds_on_sample);
    CHECK(r.condition("angle bound (positive case)").detail.find("vacuous") == std::string::npos);
    CHECK(r.condition("gate rho'/rho <= H < 0").status == Status::fails_at_point);
    CHECK(r.condition("angle bound (reversed case)").detail.find("vacuous") != std::string::npos);
    CHECK(r.verdict.rfind("consistent", 0) == 0);
  }
  // Contracting steady state: the reversed gate is the live one.
  const auto r = theorems::check_angle_bound(graph(custom("exp(-t)"), "0.2"), sample, 2);
  CHECK(r.condition("gate rho'/rho <= H < 0").status == Status::holds_on_sample);
  CHECK(r.condition("angle bound (reversed case)").status == Status::holds_on_sample);
  CHECK(r.condition("angle bound (reversed case)").detail.find("vacuous") == std::string::npos);
  CHECK_THROWS_AS(theorems::check_angle_bound(graph(custom("exp(-t)"), "0.2"), sample, 3), InvalidArgument);

  // No false violations anywhere in the fixture fleet.
  for (const char* name : {"minkowski", "steady_state", "einstein_de_sitter", "radiation"}) {
    for (int m : {2, 3}) {
      catalog::Params p;
      p.m = m;
      const auto S = catalog::make_named(name, p);
      const auto box = catalog::default_box(S->fiber());
      const theorems::Sample s{sampling::random(box, 30, 2), "random"};
      for (const auto& f : catalog::fixture_hypersurfaces(S, box, 7, std::string(name) == "minkowski")) {
        const auto rep = theorems::check_angle_bound(f.graph, s, m);
        CHECK(rep.condition("angle bound (positive case)").violations == 0);
        CHECK(rep.condition("angle bound (reversed case)").violations == 0);
        check_witness_invariant(rep);
      }
    }
  }
}

TEST_CASE("teoale hypotheses") {
  const std::vector<double> times{0.5, 1.0, 2.0, 3.0};
  const auto xs = sampling::grid(Box::cube(2, 0.5), 3);
  const auto ss = theorems::teoale_hypotheses(*catalog::make_named("steady_state"), times, xs);
  CHECK(ss.condition("(log rho)'' <= 0").status == Status::holds_on_sample);
  CHECK(std::abs(*ss.condition("(log rho)'' <= 0").value) < 1e-12);
  CHECK(ss.condition("fiber sectional curvature >= 0").status == Status::holds_on_sample);

  const auto eds = theorems::teoale_hypotheses(*catalog::make_named("einstein_de_sitter"), times, xs);
  CHECK(eds.condition("(log rho)'' <= 0").status == Status::holds_on_sample);
  // max over the times of -(2/3)/t^2 is at t = 3.
  CHECK(*eds.condition("(log rho)'' <= 0").value == doctest::Approx(-2.0 / 27.0).epsilon(1e-12));

  const std::vector<double> around{-1.0, 0.0, 1.0};
  const auto ch = theorems::teoale_hypotheses(*custom("cosh(t)"), around, xs);
  const auto& c = ch.condition("(log rho)'' <= 0");
  CHECK(c.status == Status::fails_at_point);
  CHECK(*c.value == doctest::Approx(1.0).epsilon(1e-12));
  bool has_zero = false;
  for (const auto& w : c.witnesses) has_zero = has_zero || w.tau == 0.0;
  CHECK(has_zero);

  catalog::Params p;
  p.rho = "exp(t)";
  p.fiber = fiber::FiberMetric::hyperbolic(2);
  const auto hyp = theorems::teoale_hypotheses(*catalog::make_named("custom", p), times, sampling::grid(Box::cube(2, 0.3), 3));
  CHECK(hyp.condition("fiber sectional curvature >= 0").status == Status::fails_at_point);
  CHECK(*hyp.condition("fiber sectional curvature >= 0").value == doctest::Approx(-1.0).epsilon(1e-9));

  const auto S = catalog::make_named("steady_state");
  const auto M = graph(S, "-0.5");
  const auto withM = theorems::teoale_hypotheses(*S, times, xs, &M);
  CHECK(withM.condition("H rho'(tau) <= 0").status == Status::fails_at_point);
  CHECK(withM.condition("inf rho'^2/rho^2 > 0").status == Status::holds_on_sample);
}

TEST_CASE("slice classifier") {
  const auto sample = grid_sample(Box::cube(2, 0.8), 5);
  CHECK(theorems::slice_classifier(graph(catalog::make_named("radiation"), "1.5"), sample).is_slice);
  const auto tilt = theorems::slice_classifier(graph(catalog::make_named("minkowski"), "0.5*x1"), sample);
  CHECK_FALSE(tilt.is_slice);
  REQUIRE(tilt.witness.has_value());
  CHECK(tilt.witness->value == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK_FALSE(theorems::slice_classifier(graph(catalog::make_named("minkowski"), "sqrt(1 + x1^2 + x2^2)"), sample).is_slice);
  // A tilt below the resolution of both criteria is classified as a slice.
  CHECK(theorems::slice_classifier(graph(catalog::make_named("minkowski"), "1 + 1e-12*x1"), sample).is_slice);
  // Both criteria agree on every fixture.
  for (const char* name : {"minkowski", "steady_state", "einstein_de_sitter", "radiation"}) {
    const auto S = catalog::make_named(name);
    const auto box = catalog::default_box(S->fiber());
    for (const auto& f : catalog::fixture_hypersurfaces(S, box, 7, std::string(name) == "minkowski")) {
      const auto v = theorems::slice_classifier(f.graph, {sampling::random(box, 20, 9), "random"});
      CHECK(v.is_slice == (f.kind == "slice" || f.kind == "hyperplane"));
      CHECK(v.detail.find("band") == std::string::npos);
    }
  }
  CHECK_THROWS_AS(theorems::slice_classifier(graph(catalog::make_named("radiation"), "1.5"), {}), InvalidArgument);
}

TEST_CASE("support conclusion") {
  const auto sample = grid_sample(Box::cube(2, 0.8), 5);
  for (const char* name : {"minkowski", "steady_state", "einstein_de_sitter", "radiation"}) {
    const auto S = catalog::make_named(name);
    for (double t0 : catalog::slice_times(*S)) {
      const auto r = theorems::support_conclusion(graph(S, std::to_string(t0)), sample);
      CHECK(*r.conditions[0].value == 0.0);
      CHECK(r.conditions[0].status == Status::holds_on_sample);
    }
  }
  const auto h = theorems::support_conclusion(graph(catalog::make_named("minkowski"), "sqrt(1 + x1^2 + x2^2)"), sample);
  CHECK(*h.conditions[0].value == 0.0);

  const theorems::Sample origin{sampling::grid(Box::cube(2, 0.01), 3), "origin band"};
  const auto s = theorems::support_conclusion(graph(catalog::make_named("steady_state"), "0.3*x1"), origin);
  CHECK(s.conditions[0].status == Status::fails_at_point);
  CHECK(*s.conditions[0].value >= 0.09 - 1e-6);
  CHECK_FALSE(s.conditions[0].witnesses.empty());
  CHECK(s.verdict.rfind("conclusion fails", 0) == 0);
}

TEST_CASE("bounded future") {
  const auto sample = grid_sample(Box::cube(2, 1.0), 11);
  const auto S = catalog::make_named("minkowski");
  const auto flat = theorems::bounded_future_check(graph(S, "0.75"), sample);
  CHECK(*flat.conditions[0].value == 0.75);
  CHECK(flat.conditions[0].status == Status::not_checkable);
  const auto wave = theorems::bounded_future_check(graph(S, "2 + sin(x1)"), sample);
  CHECK(*wave.conditions[0].value <= 3.0);
  CHECK(*wave.conditions[0].value == doctest::Approx(2.0 + std::sin(1.0)));

  const std::vector<double> scales{1.0, 2.0, 4.0};
  const auto trend = theorems::bounded_future_trend(graph(S, "x1^2"), Box::cube(2, 1.0), scales);
  CHECK(trend.unbounded_trend);
  CHECK(trend.maxima == std::vector<double>{1.0, 4.0, 16.0});
  CHECK_FALSE(theorems::bounded_future_trend(graph(S, "0.75"), Box::cube(2, 1.0), scales).unbounded_trend);
}

TEST_CASE("theorem dispatch") {
  CHECK(theorems::theorem_ids().size() == 10);
  CHECK_FALSE(theorems::is_theorem("teo9"));
  const auto sample = grid_sample(Box::cube(2, 0.6), 3);
  const auto S = catalog::make_named("steady_state");
  const auto slice = graph(S, "0");
  for (const auto& id : theorems::theorem_ids()) {
    const auto r = theorems::check_theorem(id, slice, sample);
    CHECK(r.theorem == id);
    CHECK_FALSE(r.verdict.empty());
    check_witness_invariant(r);
  }
  CHECK(theorems::check_theorem("teodiv", slice, sample).condition("zeta exists").status == Status::not_checkable);
  CHECK(theorems::check_theorem("teo3", slice, sample).condition("sinh^2(phi) in L^q(M), q > 2").status ==
        Status::not_checkable);
  // Steady-state slices have H = 1 > 0, outside the corollary's non-positive range.
  const auto ste = theorems::check_theorem("ste", slice, sample);
  CHECK(ste.condition("H <= 0").status == Status::fails_at_point);
  CHECK(ste.condition("warping function e^t").status == Status::holds_on_sample);
  CHECK(ste.condition("flat fiber").status == Status::holds_on_sample);
  // cordim2 on a 3-dimensional spacetime: the slice conclusion holds.
  const auto cd = theorems::check_theorem("cordim2", slice, sample);
  CHECK(cd.condition("spacetime dimension 3").status == Status::holds_on_sample);
  CHECK(cd.condition("M is a spacelike slice").status == Status::holds_on_sample);
  const auto eds = theorems::check_theorem("eds", graph(catalog::make_named("einstein_de_sitter"), "1"), sample);
  CHECK(eds.condition("warping function t^(2/3)").status == Status::holds_on_sample);
  CHECK(*eds.condition("bounded away from future infinity").value == 1.0);
  catalog::Params r;
  r.a = 2.0;
  const auto rad = theorems::check_theorem("rad", graph(catalog::make_named("radiation", r), "1"), sample);
  CHECK(rad.condition("warping function (2at)^(1/2)").status == Status::holds_on_sample);
}
