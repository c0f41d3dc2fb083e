#include <cmath>

#include "doctest.h"
#include "grw/error.hpp"
#include "grw/jets/fd.hpp"
#include "grw/jets/jet.hpp"
#include "support/corpus.hpp"

using grw::jets::Jet;
using grw::jets::MultiIndex;

TEST_CASE("coordinate lifts") {
  const Jet x = Jet::variable(0, 2.0, 2, 2);
  CHECK(x.size() == 6);
  CHECK(x.value() == 2.0);
  CHECK(x.coeff(MultiIndex{1, 0}) == 1.0);
  CHECK(x.coeff(MultiIndex{0, 1}) == 0.0);
  CHECK(x.coeff(MultiIndex{2, 0}) == 0.0);

  const Jet y = Jet::variable(1, -1.0, 2, 1);
  CHECK(y.size() == 3);
  CHECK(y.value() == -1.0);
  CHECK(y.coeff(MultiIndex{0, 1}) == 1.0);

  const Jet z = Jet::variable(0, 0.0, 3, 3);
  CHECK(z.size() == 20);
  int nonzero = 0;
  for (double c : z.coeffs()) nonzero += (c != 0.0);
  CHECK(nonzero == 1);
  CHECK(z.coeff(MultiIndex{1, 0, 0}) == 1.0);

  CHECK_THROWS_AS(Jet::variable(0, 0.0, 2, 4), grw::InvalidArgument);
  CHECK_THROWS_AS(Jet::variable(2, 0.0, 2, 1), grw::InvalidArgument);
}

TEST_CASE("coefficient counts follow C(m + k, k)") {
  CHECK(grw::jets::coefficient_count(1, 3) == 4);
  CHECK(grw::jets::coefficient_count(2, 2) == 6);
  CHECK(grw::jets::coefficient_count(4, 3) == 35);
  CHECK(grw::jets::coefficient_count(5, 3) == 56);
}

TEST_CASE("elementary arithmetic") {
  const Jet x = Jet::variable(0, 3.0, 1, 2);
  const Jet sq = x * x;
  CHECK(sq.value() == 9.0);
  CHECK(sq.derivative({1}) == 6.0);
  CHECK(sq.derivative({2}) == 2.0);

  const Jet e = grw::jets::exp(Jet::variable(0, 0.0, 1, 3));
  for (int k = 0; k <= 3; ++k) CHECK(e.derivative({k}) == doctest::Approx(1.0).epsilon(1e-15));

  const Jet t = Jet::variable(0, 1.0, 1, 2);
  const Jet r = grw::jets::pow(2.0 * 1.0 * t, 0.5);
  CHECK(r.value() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
  CHECK(r.derivative({1}) == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
}

TEST_CASE("domain and singularity errors") {
  const Jet z = Jet::variable(0, 0.0, 1, 2);
  CHECK_THROWS_AS(1.0 / z, grw::SingularJet);
  CHECK_THROWS_AS(grw::jets::log(z), grw::DomainError);
  CHECK_THROWS_AS(grw::jets::sqrt(z - 1.0), grw::DomainError);
  CHECK_THROWS_AS(grw::jets::pow(z - 1.0, 0.5), grw::DomainError);
  CHECK(grw::jets::ipow(z - 1.0, 3).value() == -1.0);
}

TEST_CASE("constant lifts carry no derivatives") {
  const Jet c = Jet::constant(4.5, 3, 3);
  CHECK(c.value() == 4.5);
  for (int k = 1; k < c.size(); ++k) CHECK(c.coeff(k) == 0.0);
}

TEST_CASE("add and mul are commutative and associative") {
  grw::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> p{rng.uniform(-1, 1), rng.uniform(-1, 1)};
    const auto v = Jet::lift_point(p, 3);
    const Jet a = grw::jets::exp(v[0] * v[1]);
    const Jet b = grw::jets::sin(v[0] - v[1]) + 2.0;
    const Jet c = v[0] * v[0] * v[1] + 0.5;
    const Jet ab = a * b, ba = b * a;
    const Jet l = (a * b) * c, r = a * (b * c);
    const Jet s1 = (a + b) + c, s2 = a + (b + c);
    for (int k = 0; k < a.size(); ++k) {
      CHECK(std::abs(ab.coeff(k) - ba.coeff(k)) <= 1e-12 * std::max(1.0, std::abs(ab.coeff(k))));
      CHECK(std::abs(l.coeff(k) - r.coeff(k)) <= 1e-12 * std::max(1.0, std::abs(l.coeff(k))));
      CHECK(std::abs(s1.coeff(k) - s2.coeff(k)) <= 1e-12 * std::max(1.0, std::abs(s1.coeff(k))));
    }
  }
}

TEST_CASE("value slot is bit-identical to scalar arithmetic") {
  const Jet t = Jet::variable(0, 8.0, 1, 3);
  CHECK(grw::jets::pow(t, 2.0 / 3.0).value() == grw::jets::checked_pow(8.0, 2.0 / 3.0));
  CHECK((1.0 / (t + 0.1)).value() == 1.0 / (8.0 + 0.1));
}

TEST_CASE("partials and truncation") {
  const auto v = Jet::lift_point(std::vector<double>{0.3, -0.7}, 3);
  const Jet f = grw::jets::exp(v[0]) * grw::jets::sin(v[1]);
  const Jet fx = f.partial(0);
  CHECK(fx.order() == 2);
  CHECK(fx.value() == doctest::Approx(std::exp(0.3) * std::sin(-0.7)));
  CHECK(fx.derivative({0, 1}) == doctest::Approx(f.derivative({1, 1})));
  CHECK(f.truncate(1).size() == 3);
  CHECK(f.truncate(1).gradient(1) == f.gradient(1));
}

TEST_CASE("composer matches direct evaluation") {
  // outer(t, x) = exp(t) * x^2, composed with t = u(x) = 0.2 + x + x^2 / 2.
  const auto outer_vars = Jet::lift_point(std::vector<double>{0.2, 0.5}, 3);
  const Jet outer = grw::jets::exp(outer_vars[0]) * outer_vars[1] * outer_vars[1];
  const Jet x = Jet::variable(0, 0.5, 1, 3);
  const Jet u = 0.2 + (x - 0.5) + (x - 0.5) * (x - 0.5) * 0.5;
  const std::vector<Jet> disp{u - 0.2, x - 0.5};
  const Jet composed = grw::jets::Composer(disp, 3)(outer);
  const Jet direct = grw::jets::exp(u) * x * x;
  for (int k = 0; k < direct.size(); ++k) CHECK(composed.coeff(k) == doctest::Approx(direct.coeff(k)).epsilon(1e-13));
}

TEST_CASE("finite-difference oracle anchors") {
  const double one = 1.0, zero = 0.0;
  std::vector<double> o{0.0, 0.0};
  CHECK(grw::jets::fd_derivative([](std::span<const double> x) { return x[0] * x[0]; }, std::span(&one, 1),
                                 MultiIndex{2}, 1e-3) == doctest::Approx(2.0).epsilon(1e-6));
  CHECK(grw::jets::fd_derivative([](std::span<const double> x) { return std::sin(x[0]); }, std::span(&zero, 1),
                                 MultiIndex{1}, 1e-4) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(grw::jets::fd_derivative([](std::span<const double> x) { return std::exp(x[0] + x[1]); }, o,
                                 MultiIndex{1, 1}, 1e-3) == doctest::Approx(1.0).epsilon(1e-5));
  CHECK_THROWS_AS(grw::jets::fd_derivative([](std::span<const double> x) { return std::sqrt(x[0]); }
                                           , std::span(&zero, 1), MultiIndex{1}, 1e-3),
                  grw::DomainError);
}

TEST_CASE("every jet coefficient matches the finite-difference oracle") {
  const auto cases = corpus::build(200, 20240611);
  const auto bad = corpus::check_against_fd(cases, 1e-4);
  for (const auto& m : bad) MESSAGE(m.source << " " << m.detail);
  CHECK(bad.empty());
}

TEST_CASE("coefficients survive a full-amplitude corpus under Richardson extrapolation") {
  const auto cases = corpus::build(200, 20240612, 0.3, 1.0);
  const auto bad = corpus::check_against_fd(cases, 1e-6, true);
  for (const auto& m : bad) MESSAGE(m.source << " " << m.detail);
  CHECK(bad.empty());
}
