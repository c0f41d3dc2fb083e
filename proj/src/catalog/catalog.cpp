#include "grw/catalog/catalog.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

#include "grw/random.hpp"
#include "grw/sampling.hpp"

namespace grw::catalog {

namespace {

std::string num(double v) {
  char buf[32];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

// Monomials of degree 1..3 in m variables, as exponent vectors.
std::vector<std::vector<int>> cubic_monomials(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> e(m, 0);
  for (int d = 1; d <= 3; ++d) {
    // Enumerate non-decreasing variable sequences of length d.
    std::vector<int> seq(d, 0);
    while (true) {
      std::fill(e.begin(), e.end(), 0);
      for (int v : seq) ++e[v];
      out.push_back(e);
      int k = d - 1;
      while (k >= 0 && seq[k] == m - 1) --k;
      if (k < 0) break;
      ++seq[k];
      for (int j = k + 1; j < d; ++j) seq[j] = seq[k];
    }
  }
  return out;
}

}  // namespace

const std::vector<CatalogEntry>& entries() {
  static const std::vector<CatalogEntry> list = {
      {"minkowski", "1", {-kInf, kInf}, "Lorentz-Minkowski spacetime", {-0.5, 0.5, 1.0}},
      {"steady_state", "exp(t)", {-kInf, kInf}, "steady state spacetime", {-0.5, 0.0, 0.5}},
      {"einstein_de_sitter", "t^(2/3)", {0.0, kInf}, "Einstein-de Sitter spacetime", {0.5, 1.0, 2.0}},
      {"radiation", "sqrt(2*a*t)", {0.0, kInf}, "Robertson-Walker radiation model", {0.5, 1.0, 2.0}},
  };
  return list;
}

const CatalogEntry& entry(const std::string& name) {
  for (const auto& e : entries())
    if (e.name == name) return e;
  throw InvalidArgument("unknown spacetime '" + name +
                        "' (expected minkowski, steady_state, einstein_de_sitter, radiation, custom)");
}

std::shared_ptr<const ambient::Spacetime> make_named(const std::string& name, const Params& params) {
  if (name == "custom") {
    if (params.rho.empty()) throw InvalidArgument("custom spacetime needs a warping function");
    auto f = params.fiber ? *params.fiber : fiber::FiberMetric::euclidean(params.m);
    expr::Env<double> env;
    if (expr::parse(params.rho).free_vars().count("a")) env["a"] = params.a;
    return std::make_shared<const ambient::Spacetime>(
        ambient::WarpFunction(expr::parse(params.rho), params.interval, env), std::move(f));
  }
  const auto& e = entry(name);
  expr::Env<double> env;
  if (name == "radiation") {
    if (!(params.a > 0.0)) throw InvalidArgument("radiation model needs a > 0");
    env["a"] = params.a;
  }
  auto f = params.fiber ? *params.fiber : fiber::FiberMetric::euclidean(params.m);
  return std::make_shared<const ambient::Spacetime>(ambient::WarpFunction(expr::parse(e.rho), e.interval, env),
                                                    std::move(f));
}

Box default_box(const fiber::FiberMetric& fiber) {
  Box box = Box::cube(fiber.dim(), 1.0);
  const auto& d = fiber.domain();
  for (int i = 0; i < fiber.dim(); ++i) {
    box.lo[i] = std::max(box.lo[i], d.lo[i] + 10 * kChartMargin);
    box.hi[i] = std::min(box.hi[i], d.hi[i] - 10 * kChartMargin);
  }
  return box;
}

std::vector<double> slice_times(const ambient::Spacetime& S) {
  for (const auto& e : entries())
    if (S.warp().expression().source() == e.rho && S.warp().interval().lo == e.interval.lo &&
        S.warp().interval().hi == e.interval.hi)
      return e.slice_times;
  const auto& I = S.warp().interval();
  const bool lo = std::isfinite(I.lo), hi = std::isfinite(I.hi);
  if (lo && hi) return {I.lo + 0.25 * (I.hi - I.lo), I.lo + 0.5 * (I.hi - I.lo), I.lo + 0.75 * (I.hi - I.lo)};
  if (lo) return {I.lo + 0.5, I.lo + 1.0, I.lo + 2.0};
  if (hi) return {I.hi - 2.0, I.hi - 1.0, I.hi - 0.5};
  return {-0.5, 0.0, 0.5};
}

std::string random_cubic(const ambient::Spacetime& S, const Box& box, double t_center, std::uint64_t seed) {
  const int m = S.m();
  const auto monos = cubic_monomials(m);
  Rng rng(seed);
  std::vector<double> c(monos.size());
  for (auto& v : c) v = rng.uniform(-1.0, 1.0);

  const auto pts = sampling::grid(box, m <= 2 ? 21 : (m == 3 ? 9 : 6));
  auto feasible = [&](double s) {
    double max_grad = 0.0, min_rho = kInf;
    for (const auto& x : pts) {
      double p = 0.0;
      std::vector<double> dp(m, 0.0);
      for (std::size_t k = 0; k < monos.size(); ++k) {
        double mono = 1.0;
        for (int i = 0; i < m; ++i) mono *= std::pow(x[i], monos[k][i]);
        p += c[k] * mono;
        for (int i = 0; i < m; ++i) {
          if (monos[k][i] == 0) continue;
          double d = monos[k][i] * std::pow(x[i], monos[k][i] - 1);
          for (int j = 0; j < m; ++j)
            if (j != i) d *= std::pow(x[j], monos[k][j]);
          dp[i] += c[k] * d;
        }
      }
      const double u = t_center + s * p;
      if (!S.warp().interval().interior(u, 2 * ambient::kTimeMargin)) return false;
      double r;
      try {
        r = S.warp().derivs(u)[0];
      } catch (const Error&) {
        return false;
      }
      const auto gi = inverse(S.fiber().metric_at(x));
      for (auto& d : dp) d *= s;
      max_grad = std::max(max_grad, std::sqrt(quadratic_form(gi, dp, dp)));
      min_rho = std::min(min_rho, r);
    }
    return max_grad <= 0.9 * min_rho;
  };
  double s = 1.0;
  for (int iter = 0; iter < 200 && !feasible(s); ++iter) s *= 0.8;
  if (!feasible(s)) throw InvalidArgument("could not scale a random cubic graph into the spacelike band");

  std::string out = num(t_center);
  for (std::size_t k = 0; k < monos.size(); ++k) {
    out += " + " + num(s * c[k]);
    for (int i = 0; i < m; ++i)
      for (int e = 0; e < monos[k][i]; ++e) out += " * " + fiber::coordinate_name(i);
  }
  return out;
}

std::vector<Fixture> fixture_hypersurfaces(std::shared_ptr<const ambient::Spacetime> S, const Box& box,
                                           std::uint64_t seed, bool minkowski) {
  std::vector<Fixture> out;
  const auto times = slice_times(*S);
  for (double t : times)
    out.push_back({"slice", hypersurface::GraphHypersurface("slice[" + num(t) + "]", expr::parse(num(t)), S)});
  if (minkowski) {
    out.push_back({"hyperplane", hypersurface::GraphHypersurface("hyperplane", expr::parse("0"), S)});
    std::string r = "1";
    for (int i = 0; i < S->m(); ++i) r += " + " + fiber::coordinate_name(i) + "^2";
    out.push_back({"hyperboloid", hypersurface::GraphHypersurface("hyperboloid", expr::parse("sqrt(" + r + ")"), S)});
  }
  const double tc = times[1];
  for (int k = 0; k < 5; ++k) {
    const std::string src = random_cubic(*S, box, tc, seed * 1000003ULL + 17 * k + 1);
    out.push_back({"cubic", hypersurface::GraphHypersurface("cubic[" + std::to_string(k + 1) + "]", expr::parse(src), S)});
  }
  return out;
}

}  // namespace grw::catalog
