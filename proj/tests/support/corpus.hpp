#pragma once

// Seeded random-expression corpus shared by the jet unit tests and the
// acceptance binary: elementary functions of random polynomials of degree
// <= 4 in up to three variables, each paired with an evaluation point.

#include <algorithm>
#include <charconv>
#include <cmath>
#include <string>
#include <vector>

#include "grw/jets/fd.hpp"
#include "grw/jets/jet.hpp"
#include "grw/expr/expr.hpp"
#include "grw/random.hpp"

namespace corpus {

struct Case {
  std::string source;
  int vars;
  std::vector<double> point;
};

inline std::string num(double v) {
  char buf[32];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

inline std::string var(int k) { return "x" + std::to_string(k + 1); }

inline std::string polynomial(grw::Rng& rng, int vars, double amp) {
  std::string s = num(rng.uniform(-amp, amp));
  const int terms = 2 + static_cast<int>(rng.unit() * 4);
  for (int t = 0; t < terms; ++t) {
    s += " + " + num(rng.uniform(-amp, amp));
    const int degree = 1 + static_cast<int>(rng.unit() * 4);
    for (int d = 0; d < degree; ++d) s += " * " + var(static_cast<int>(rng.unit() * vars));
  }
  return s;
}

/// `amp` bounds the polynomial coefficients and points lie in [-box, box]^n.
/// The defaults keep fifth derivatives small enough that the O(h^2) error of
/// the h = 1e-2 third-order stencil stays under a 1e-4 relative gate.
inline std::vector<Case> build(int count, std::uint64_t seed, double amp = 0.1, double box = 0.75) {
  static const char* const outer[] = {"exp(P)", "sin(P)",       "cos(P)",        "sinh(P)",       "cosh(P)",
                                      "log(3 + P)", "sqrt(3 + P)", "1 / (3 + P)", "pow(3 + P, 1.5)", "P",
                                      "(P)^3",  "exp(P) * cos(P)"};
  grw::Rng rng(seed);
  std::vector<Case> out;
  for (int i = 0; i < count; ++i) {
    const int vars = 1 + i % 3;
    std::string shape = outer[i % (sizeof outer / sizeof *outer)];
    const std::string p = "(" + polynomial(rng, vars, amp) + ")";
    std::string src;
    for (char c : shape) src += (c == 'P') ? p : std::string(1, c);
    std::vector<double> point(vars);
    for (auto& x : point) x = rng.uniform(-box, box);
    out.push_back({src, vars, point});
  }
  return out;
}

struct Mismatch {
  std::string source;
  std::string detail;
};

/// Compares every coefficient of degree <= 3 against central differences
/// (h = 1e-3 up to degree 2, 1e-2 for degree 3) with |a - b| <= rel * max(1, |a|).
/// With `richardson` every estimate is extrapolated from h and h/2,
/// cancelling the h^2 error term.
inline std::vector<Mismatch> check_against_fd(const std::vector<Case>& cases, double rel, bool richardson = false) {
  std::vector<Mismatch> bad;
  for (const auto& c : cases) {
    const auto e = grw::expr::parse(c.source);
    grw::expr::Env<grw::jets::Jet> jenv;
    const auto lifted = grw::jets::Jet::lift_point(c.point, 3);
    for (int k = 0; k < c.vars; ++k) jenv[var(k)] = lifted[k];
    const grw::jets::Jet jet = e.eval(jenv);
    const grw::jets::ScalarField f = [&](std::span<const double> x) {
      grw::expr::Env<double> env;
      for (int k = 0; k < c.vars; ++k) env[var(k)] = x[k];
      return e.eval(env);
    };
    const auto& layout = jet.layout();
    for (int k = 1; k < layout.size(); ++k) {
      const auto& alpha = layout.index(k);
      const double h = alpha.degree() == 3 ? 1e-2 : 1e-3;
      const double a = jet.derivative(alpha);
      double b = grw::jets::fd_derivative(f, c.point, alpha, h);
      if (richardson)
        b = (4.0 * grw::jets::fd_derivative(f, c.point, alpha, h / 2) - b) / 3.0;
      if (!(std::abs(a - b) <= rel * std::max(1.0, std::abs(a))))
        bad.push_back({c.source, "slot " + std::to_string(k) + ": jet " + num(a) + " fd " + num(b)});
    }
  }
  return bad;
}

}  // namespace corpus
