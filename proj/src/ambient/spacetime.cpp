#include "grw/ambient/spacetime.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace grw::ambient {

using jets::Jet;

WarpFunction::WarpFunction(expr::Expr rho, Interval interval, expr::Env<double> params)
    : rho_(std::move(rho)), interval_(interval), params_(std::move(params)) {
  if (!(interval_.lo < interval_.hi)) throw InvalidArgument("warp interval must satisfy t_min < t_max");
  for (const auto& v : rho_.free_vars())
    if (v != "t" && !params_.count(v)) throw InvalidArgument("warping function uses unknown variable '" + v + "'");
}

void WarpFunction::check_time(double t) const {
  if (!interval_.interior(t, kTimeMargin)) {
    std::ostringstream os;
    os << "time " << t << " is not interior to (" << interval_.lo << ", " << interval_.hi << ") with margin "
       << kTimeMargin;
    throw DomainError(os.str());
  }
}

double WarpFunction::operator()(double t) const {
  expr::Env<double> env = params_;
  env["t"] = t;
  return rho_.eval(env);
}

Jet WarpFunction::of(const Jet& t) const {
  expr::Env<Jet> env;
  env["t"] = t;
  for (const auto& [name, value] : params_) env[name] = t.constant_like(value);
  return rho_.eval(env);
}

std::array<double, 4> WarpFunction::derivs(double t) const {
  const Jet r = of(Jet::variable(0, t, 1, 3));
  if (!(r.value() > 0.0)) {
    std::ostringstream os;
    os << "warping function is not positive at t = " << t;
    throw DomainError(os.str());
  }
  return {r.value(), r.derivative({1}), r.derivative({2}), r.derivative({3})};
}

double WarpFunction::log_second(double t) const {
  const auto d = derivs(t);
  const double q = d[1] / d[0];
  return d[2] / d[0] - q * q;
}

Spacetime::Spacetime(WarpFunction warp, fiber::FiberMetric fiber) : warp_(std::move(warp)), fiber_(std::move(fiber)) {
  if (fiber_.dim() + 1 > jets::kMaxVars) throw InvalidArgument("spacetime dimension exceeds the jet capacity");
}

void Spacetime::check_point(double t, std::span<const double> x) const {
  warp_.check_time(t);
  fiber_.check_point(x);
}

Matrix<double> Spacetime::metric(double t, std::span<const double> x) const {
  check_point(t, x);
  const double r = warp_.derivs(t)[0];
  const auto gf = fiber_.metric_at(x);
  Matrix<double> g(dim(), 0.0);
  g(0, 0) = -1.0;
  for (int i = 0; i < m(); ++i)
    for (int j = 0; j < m(); ++j) g(i + 1, j + 1) = r * r * gf(i, j);
  return g;
}

Matrix<Jet> Spacetime::metric_jets(std::span<const Jet> coords) const {
  if (static_cast<int>(coords.size()) != dim()) throw InvalidArgument("ambient coordinate jets have the wrong count");
  const Jet r = warp_.of(coords[0]);
  const Jet r2 = r * r;
  const auto gf = fiber_.metric_jets(coords.subspan(1));
  Matrix<Jet> g(dim(), coords[0].constant_like(0.0));
  g(0, 0) = coords[0].constant_like(-1.0);
  for (int i = 0; i < m(); ++i)
    for (int j = i; j < m(); ++j) g(i + 1, j + 1) = g(j + 1, i + 1) = r2 * gf(i, j);
  return g;
}

Matrix<Jet> Spacetime::metric_jets_at(double t, std::span<const double> x, int order) const {
  metric(t, x);  // domain, positivity and definiteness checks
  std::vector<double> p{t};
  p.insert(p.end(), x.begin(), x.end());
  return metric_jets(Jet::lift_point(p, order));
}

Rank3<double> Spacetime::christoffel_generic(double t, std::span<const double> x) const {
  const auto g = metric_jets_at(t, x, 1);
  return values(grw::christoffel(g, inverse(g)));
}

Rank3<double> Spacetime::christoffel_warped(double t, std::span<const double> x) const {
  check_point(t, x);
  const auto d = warp_.derivs(t);
  const auto gf = fiber_.metric_at(x);
  const auto gam = fiber_.christoffel(x);
  Rank3<double> out(dim(), 0.0);
  for (int i = 0; i < m(); ++i) {
    out(i + 1, 0, i + 1) = out(i + 1, i + 1, 0) = d[1] / d[0];
    for (int j = 0; j < m(); ++j) {
      out(0, i + 1, j + 1) = d[0] * d[1] * gf(i, j);
      for (int k = 0; k < m(); ++k) out(k + 1, i + 1, j + 1) = gam(k, i, j);
    }
  }
  return out;
}

double Spacetime::christoffel_discrepancy(double t, std::span<const double> x) const {
  const auto a = christoffel_generic(t, x);
  const auto b = christoffel_warped(t, x);
  double diff = 0.0, scale = 1.0;
  for (int p = 0; p < dim(); ++p)
    for (int q = 0; q < dim(); ++q)
      for (int r = 0; r < dim(); ++r) {
        diff = std::max(diff, std::abs(a(p, q, r) - b(p, q, r)));
        scale = std::max(scale, std::abs(b(p, q, r)));
      }
  return diff / scale;
}

Rank3<double> Spacetime::christoffel(double t, std::span<const double> x, double tol) const {
  const double d = christoffel_discrepancy(t, x);
  if (!(d <= tol)) {
    std::ostringstream os;
    os << "generic and warped-product Christoffel symbols disagree by " << d << " at t = " << t;
    throw ConsistencyFault(os.str());
  }
  return christoffel_generic(t, x);
}

Rank4<double> Spacetime::riemann(double t, std::span<const double> x) const {
  const auto g = metric_jets_at(t, x, 2);
  return values(grw::riemann(grw::christoffel(g, inverse(g))));
}

Matrix<double> Spacetime::ricci(double t, std::span<const double> x) const { return grw::ricci(riemann(t, x)); }

bool Spacetime::is_lorentzian(double t, std::span<const double> x) const {
  // Block structure: one negative direction d_t, and the spatial block must
  // be positive definite.
  const auto g = metric(t, x);
  Matrix<double> s(m(), 0.0);
  for (int i = 0; i < m(); ++i)
    for (int j = 0; j < m(); ++j) s(i, j) = g(i + 1, j + 1);
  for (int i = 0; i < m(); ++i)
    if (g(0, i + 1) != 0.0) return false;
  return g(0, 0) < 0.0 && is_positive_definite(s);
}

double Spacetime::conformal_K_residual(double t, std::span<const double> x, std::span<const double> X) const {
  if (static_cast<int>(X.size()) != dim()) throw InvalidArgument("ambient vector has the wrong dimension");
  const auto gam = christoffel_generic(t, x);
  const auto d = warp_.derivs(t);
  // K = rho(t) d_t, so d_b K^a = delta^a_0 rho' delta^0_b.
  double worst = 0.0;
  for (int a = 0; a < dim(); ++a) {
    double v = (a == 0 ? d[1] * X[0] : 0.0);
    for (int b = 0; b < dim(); ++b) v += gam(a, b, 0) * X[b] * d[0];
    worst = std::max(worst, std::abs(v - d[1] * X[a]));
  }
  return worst;
}

OneillResidual Spacetime::oneill_ricci_check(double t, std::span<const double> x, std::span<const double> v) const {
  if (static_cast<int>(v.size()) != m()) throw InvalidArgument("fiber vector has the wrong dimension");
  const auto ric = ricci(t, x);
  const auto d = warp_.derivs(t);
  const double q1 = d[1] / d[0], q2 = d[2] / d[0];
  OneillResidual out{};
  out.time_time = ric(0, 0) + m() * q2;
  out.time_scale = std::max(std::abs(ric(0, 0)), std::abs(m() * q2));

  std::vector<double> w(dim(), 0.0);
  for (int i = 0; i < m(); ++i) w[i + 1] = v[i];
  const double lhs = quadratic_form(ric, w, w);
  const double s2 = d[0] * d[0] * quadratic_form(fiber_.metric_at(x), v, v);
  const double ricf = fiber_.ricci_contract(x, v);
  const double rhs = ricf + s2 * (q2 + (m() - 1) * q1 * q1);
  out.fiber = lhs - rhs;
  out.fiber_scale = std::max({std::abs(lhs), std::abs(ricf), std::abs(s2 * q2), std::abs(s2 * (m() - 1) * q1 * q1)});
  return out;
}

double Spacetime::ncc_margin(double t, std::span<const double> x, std::span<const double> v) const {
  if (static_cast<int>(v.size()) != m()) throw InvalidArgument("fiber vector has the wrong dimension");
  if (std::all_of(v.begin(), v.end(), [](double c) { return c == 0.0; }))
    throw InvalidArgument("NCC margin needs a nonzero fiber vector");
  check_point(t, x);
  const auto d = warp_.derivs(t);
  return fiber_.ricci_contract(x, v) - m() * (d[0] * d[2] - d[1] * d[1]) * quadratic_form(fiber_.metric_at(x), v, v);
}

double Spacetime::div_comoving(double t) const {
  warp_.check_time(t);
  const auto d = warp_.derivs(t);
  return m() * d[1] / d[0];
}

double Spacetime::tcc_check(double t, std::span<const double> x, std::span<const double> z) const {
  if (static_cast<int>(z.size()) != dim()) throw InvalidArgument("ambient vector has the wrong dimension");
  if (!(quadratic_form(metric(t, x), z, z) < 0.0)) throw InvalidArgument("TCC probe vector is not timelike");
  return quadratic_form(ricci(t, x), z, z);
}

}  // namespace grw::ambient
