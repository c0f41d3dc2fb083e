#include <cmath>

#include "doctest.h"
#include "grw/catalog/catalog.hpp"
#include "grw/error.hpp"
#include "grw/hypersurface/graph.hpp"
#include "grw/random.hpp"
#include "support/oracles.hpp"

using namespace grw;
using hypersurface::GraphHypersurface;

namespace {

GraphHypersurface graph(const std::shared_ptr<const ambient::Spacetime>& S, const char* u) {
  return GraphHypersurface(u, expr::parse(u), S);
}

std::vector<double> random_point(Rng& rng, const Box& box) {
  std::vector<double> x(box.dim());
  for (int i = 0; i < box.dim(); ++i) x[i] = rng.uniform(box.lo[i], box.hi[i]);
  return x;
}

}  // namespace

TEST_CASE("slice anchors") {
  const auto ss = catalog::make_named("steady_state");
  const std::vector<double> x{0.3, -0.4};
  const auto p = graph(ss, "0.7").frame_at(x);
  CHECK(p.cosh_phi == 1.0);
  CHECK(p.sinh2_phi == 0.0);
  CHECK(p.H == doctest::Approx(1.0).epsilon(1e-13));
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) CHECK(std::abs(p.A(i, j) + (i == j ? 1.0 : 0.0)) < 1e-12);
  CHECK_THROWS_AS(graph(catalog::make_named("einstein_de_sitter"), "-1").frame_at(x), DomainError);
}

TEST_CASE("tilted graphs") {
  const std::vector<double> x{0.2, 0.1}, o{0.0, 0.0};
  const auto mk = graph(catalog::make_named("minkowski"), "0.5*x1").frame_at(x);
  CHECK(mk.cosh_phi == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(mk.sinh2_phi == doctest::Approx(1.0 / 3.0).epsilon(1e-13));
  CHECK(hypersurface::part_sinh_residual(mk).abs < 1e-10);
  const auto ss = graph(catalog::make_named("steady_state"), "0.3*x1").frame_at(o);
  CHECK(ss.sinh2_phi == doctest::Approx(0.09 / 0.91).epsilon(1e-13));
  CHECK(hypersurface::part_sinh_residual(ss).abs < 1e-10);
  CHECK_THROWS_AS(graph(catalog::make_named("minkowski"), "1.2*x1").frame_at(o), DegenerateHypersurface);
  CHECK(graph(catalog::make_named("minkowski"), "1.2*x1").admission(o).has_value());
}

TEST_CASE("hyperboloid is umbilical with H = 1") {
  const auto S = catalog::make_named("minkowski");
  const auto M = graph(S, "sqrt(1 + x1^2 + x2^2)");
  Rng rng(3);
  for (int k = 0; k < 50; ++k) {
    const auto x = random_point(rng, Box::cube(2, 1.0));
    const auto p = M.frame_at(x);
    CHECK(p.H == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(p.sinh2_phi == doctest::Approx(x[0] * x[0] + x[1] * x[1]).epsilon(1e-12));
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(std::abs(p.A(i, j) + (i == j ? 1.0 : 0.0)) < 1e-12);
    CHECK(p.hess_tau_norm2 == doctest::Approx(2.0 * p.cosh_phi * p.cosh_phi).epsilon(1e-10));
    const auto A = oracle::fd_shape_operator(M, x);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(A(i, j) == doctest::Approx(p.A(i, j)).epsilon(1e-6));
  }
}

TEST_CASE("laplacian anchors") {
  const auto S = catalog::make_named("minkowski");
  const std::vector<double> x{0.4, -0.3}, x1{1.0, 0.0};
  CHECK(hypersurface::laplacian_on_M(graph(S, "0"), expr::parse("3"), x) == 0.0);
  CHECK(hypersurface::laplacian_on_M(graph(S, "0"), expr::parse("x1^2"), x) == doctest::Approx(2.0));
  const auto M = graph(S, "sqrt(1 + x1^2 + x2^2)");
  const double jet = hypersurface::laplacian_on_M(M, expr::parse("sqrt(1 + x1^2 + x2^2)"), x1);
  CHECK(jet == doctest::Approx(M.frame_at(x1).lap_cosh).epsilon(1e-12));
  CHECK(jet == doctest::Approx(oracle::fd_laplacian_cosh(M, x1)).epsilon(1e-4));
}

TEST_CASE("pointwise identities on every catalog fixture") {
  for (const char* name : {"minkowski", "steady_state", "einstein_de_sitter", "radiation"}) {
    for (int m : {2, 3}) {
      catalog::Params params;
      params.m = m;
      const auto S = catalog::make_named(name, params);
      const Box box = catalog::default_box(S->fiber());
      const auto fixtures = catalog::fixture_hypersurfaces(S, box, 1, std::string(name) == "minkowski");
      Rng rng(m * 100 + name[0]);
      for (const auto& f : fixtures) {
        for (int k = 0; k < 30; ++k) {
          const auto x = random_point(rng, box);
          REQUIRE(!f.graph.admission(x));
          const auto p = f.graph.frame_at(x);
          INFO(name << " m=" << m << " " << f.graph.label() << " x0=" << x[0]);
          CHECK(p.cosh_phi >= 1.0);
          CHECK(hypersurface::part_sinh_residual(p).rel() < 1e-9);
          CHECK(hypersurface::grad_cosh_residual(p).rel() < 1e-8);
          CHECK(hypersurface::grad_KN_residual(p).rel() < 1e-8);
          CHECK(hypersurface::nabla_KT_residual(p).rel() < 1e-8);
          CHECK(hypersurface::nabla_dtT_residual(p).rel() < 1e-8);
          CHECK(hypersurface::hess_norm_residual(p).rel() < 1e-8);
          CHECK(hypersurface::codazzi_residual(p).rel() < 1e-8);
          CHECK(hypersurface::gauss_formula_residual(p).rel() < 1e-8);
          CHECK(hypersurface::shape_operator_asymmetry(p) < 1e-9);
          CHECK(std::abs(p.hess_tau_norm2 - p.hess_direct_norm2) <= 1e-9 * std::max(1.0, p.hess_tau_norm2));
          if (f.kind == "slice") {
            const double r = p.rho[1] / p.rho[0];
            CHECK(std::abs(p.H - r) < 1e-12);
            CHECK(p.sinh2_phi == 0.0);
          }
        }
      }
    }
  }
}

TEST_CASE("frame independence of the Hessian trace") {
  const auto S = catalog::make_named("radiation");
  const auto M = graph(S, "1 + 0.2*x1 - 0.1*x1*x2 + 0.05*x2^3");
  const std::vector<double> x{0.3, -0.6};
  const std::vector<int> swapped{1, 0};
  CHECK(M.frame_at(x).hess_tau_norm2 == doctest::Approx(M.frame_at(x, swapped).hess_tau_norm2).epsilon(1e-13));
}

TEST_CASE("jet path agrees with finite differences on a spot check") {
  for (const char* name : {"steady_state", "einstein_de_sitter"}) {
    const auto S = catalog::make_named(name);
    const Box box = catalog::default_box(S->fiber());
    const auto fixtures = catalog::fixture_hypersurfaces(S, box, 4);
    Rng rng(8);
    for (const auto& f : fixtures) {
      if (f.kind != "cubic") continue;
      for (int k = 0; k < 10; ++k) {
        const auto x = random_point(rng, Box::cube(2, 0.9));
        const auto p = f.graph.frame_at(x);
        const auto A = oracle::fd_shape_operator(f.graph, x);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) CHECK(std::abs(A(i, j) - p.A(i, j)) <= 1e-3 * std::max(1.0, std::abs(p.A(i, j))));
        const double lap = oracle::fd_laplacian_cosh(f.graph, x);
        CHECK(std::abs(lap - p.lap_cosh) <= 1e-3 * std::max(1.0, std::abs(p.lap_cosh)));
      }
    }
  }
}

TEST_CASE("catalog generator is deterministic") {
  const auto S = catalog::make_named("steady_state");
  const Box box = catalog::default_box(S->fiber());
  CHECK(catalog::random_cubic(*S, box, 0.0, 42) == catalog::random_cubic(*S, box, 0.0, 42));
  CHECK(catalog::random_cubic(*S, box, 0.0, 42) != catalog::random_cubic(*S, box, 0.0, 43));
  CHECK(catalog::fixture_hypersurfaces(catalog::make_named("minkowski"), box, 1, true).size() == 10);
}
