#include "grw/fiber/fiber_metric.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "grw/random.hpp"

namespace grw::fiber {

using jets::Jet;

std::string_view kind_name(FiberKind kind) {
  switch (kind) {
    case FiberKind::euclidean: return "euclidean";
    case FiberKind::sphere: return "sphere";
    case FiberKind::hyperbolic: return "hyperbolic";
    case FiberKind::custom: return "custom";
  }
  return "?";
}

FiberKind parse_kind(std::string_view name) {
  for (FiberKind k : {FiberKind::euclidean, FiberKind::sphere, FiberKind::hyperbolic, FiberKind::custom})
    if (kind_name(k) == name) return k;
  throw InvalidArgument("unknown fiber kind '" + std::string(name) + "' (expected euclidean, sphere, hyperbolic, custom)");
}

std::string coordinate_name(int i) { return "x" + std::to_string(i + 1); }

namespace {

std::string squared_norm_text(int m) {
  std::string s;
  for (int i = 0; i < m; ++i) {
    if (i) s += " + ";
    s += coordinate_name(i) + "^2";
  }
  return s;
}

std::vector<expr::Expr> conformal(int m, const std::string& factor) {
  const expr::Expr f = expr::parse(factor);
  const expr::Expr zero = expr::parse("0");
  std::vector<expr::Expr> c;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) c.push_back(i == j ? f : zero);
  return c;
}

void check_dim(int m) {
  if (m < 2 || m > jets::kMaxVars - 1) throw InvalidArgument("fiber dimension must be in 2..4");
}

}  // namespace

FiberMetric::FiberMetric(int m, FiberKind kind, std::vector<expr::Expr> components, Box domain)
    : m_(m), kind_(kind), components_(std::move(components)), domain_(std::move(domain)) {}

FiberMetric FiberMetric::euclidean(int m) {
  check_dim(m);
  return FiberMetric(m, FiberKind::euclidean, conformal(m, "1"), Box::cube(m, kInf));
}

FiberMetric FiberMetric::sphere(int m) {
  check_dim(m);
  return FiberMetric(m, FiberKind::sphere, conformal(m, "4 / (1 + " + squared_norm_text(m) + ")^2"), Box::cube(m, 2.0));
}

FiberMetric FiberMetric::hyperbolic(int m) {
  check_dim(m);
  // Largest cube strictly inside the unit ball, keeping a 10% safety gap.
  const double half = 0.9 / std::sqrt(static_cast<double>(m));
  return FiberMetric(m, FiberKind::hyperbolic, conformal(m, "4 / (1 - (" + squared_norm_text(m) + "))^2"),
                     Box::cube(m, half));
}

FiberMetric FiberMetric::custom(const std::vector<std::vector<std::string>>& entries, Box domain) {
  const int m = static_cast<int>(entries.size());
  check_dim(m);
  if (domain.dim() != m) throw InvalidArgument("custom fiber domain dimension does not match the metric");
  std::vector<expr::Expr> comps;
  for (int i = 0; i < m; ++i) {
    if (static_cast<int>(entries[i].size()) != m) throw InvalidArgument("custom fiber metric must be square");
    for (int j = 0; j < m; ++j) comps.push_back(expr::parse(entries[i][j]));
  }
  std::set<std::string> allowed;
  for (int i = 0; i < m; ++i) allowed.insert(coordinate_name(i));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      for (const auto& v : comps[i * m + j].free_vars())
        if (!allowed.count(v)) throw InvalidArgument("fiber metric entry uses unknown variable '" + v + "'");
      if (!comps[i * m + j].structurally_equal(comps[j * m + i]))
        throw InvalidArgument("custom fiber metric is not symmetric at (" + std::to_string(i + 1) + "," +
                              std::to_string(j + 1) + ")");
    }
  return FiberMetric(m, FiberKind::custom, std::move(comps), std::move(domain));
}

void FiberMetric::check_point(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != m_) throw InvalidArgument("fiber point has the wrong dimension");
  if (!domain_.contains(x, kChartMargin)) {
    std::ostringstream os;
    os << "fiber point (";
    for (int i = 0; i < m_; ++i) os << (i ? ", " : "") << x[i];
    os << ") is outside the chart domain margin";
    throw DomainError(os.str());
  }
}

Matrix<double> FiberMetric::metric_at(std::span<const double> x) const {
  check_point(x);
  expr::Env<double> env;
  for (int i = 0; i < m_; ++i) env[coordinate_name(i)] = x[i];
  Matrix<double> g(m_, 0.0);
  for (int i = 0; i < m_; ++i)
    for (int j = i; j < m_; ++j) g(i, j) = g(j, i) = component(i, j).eval(env);
  if (!is_positive_definite(g)) {
    std::ostringstream os;
    os << "fiber metric is not positive definite at (";
    for (int i = 0; i < m_; ++i) os << (i ? ", " : "") << x[i];
    os << ")";
    throw MetricDegeneracy(os.str());
  }
  return g;
}

Matrix<Jet> FiberMetric::metric_jets(std::span<const Jet> coords) const {
  if (static_cast<int>(coords.size()) != m_) throw InvalidArgument("fiber coordinate jets have the wrong count");
  expr::Env<Jet> env;
  for (int i = 0; i < m_; ++i) env[coordinate_name(i)] = coords[i];
  Matrix<Jet> g(m_, Jet());
  for (int i = 0; i < m_; ++i)
    for (int j = i; j < m_; ++j) g(i, j) = g(j, i) = component(i, j).eval(env);
  return g;
}

Matrix<Jet> FiberMetric::metric_jets_at(std::span<const double> x, int order) const {
  metric_at(x);  // domain and definiteness checks
  const auto coords = Jet::lift_point(x, order);
  return metric_jets(coords);
}

Rank3<double> FiberMetric::christoffel(std::span<const double> x) const {
  const auto g = metric_jets_at(x, 1);
  return values(grw::christoffel(g, inverse(g)));
}

Rank4<double> FiberMetric::riemann(std::span<const double> x) const {
  const auto g = metric_jets_at(x, 2);
  return values(grw::riemann(grw::christoffel(g, inverse(g))));
}

Matrix<double> FiberMetric::ricci(std::span<const double> x) const {
  const auto g = metric_jets_at(x, 2);
  const Rank3<Jet> gamma = grw::christoffel(g, inverse(g));
  const int n = m_;
  Matrix<double> ric(n, 0.0);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) {
        s += gamma(a, d, b).gradient(a) - gamma(a, a, b).gradient(d);
        for (int e = 0; e < n; ++e)
          s += gamma(a, a, e).value() * gamma(e, d, b).value() - gamma(a, d, e).value() * gamma(e, a, b).value();
      }
      ric(b, d) = s;
    }
  return ric;
}

double FiberMetric::ricci_contract(std::span<const double> x, std::span<const double> v) const {
  return quadratic_form(ricci(x), v, v);
}

double sectional_curvature(const Rank4<double>& riem, const Matrix<double>& g, std::span<const double> u,
                           std::span<const double> v) {
  const int n = riem.dim();
  double num = 0.0;
  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e) {
      if (g(a, e) == 0.0) continue;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) num += u[a] * g(a, e) * riem(e, b, c, d) * v[b] * u[c] * v[d];
    }
  const double uu = quadratic_form(g, u, u), vv = quadratic_form(g, v, v), uv = quadratic_form(g, u, v);
  const double den = uu * vv - uv * uv;
  if (!(den > 1e-12 * uu * vv)) throw InvalidArgument("sectional curvature of a degenerate plane");
  return num / den;
}

double FiberMetric::sectional(std::span<const double> x, std::span<const double> u, std::span<const double> v) const {
  return sectional_curvature(riemann(x), metric_at(x), u, v);
}

double FiberMetric::sectional_min_sample(std::span<const double> x, int n_planes, std::uint64_t seed) const {
  if (n_planes < 1) throw InvalidArgument("need at least one sample plane");
  const auto riem = riemann(x);
  const auto g = metric_at(x);
  Rng rng(seed);
  double worst = kInf;
  std::vector<double> u(m_), v(m_);
  for (int k = 0; k < n_planes;) {
    for (int i = 0; i < m_; ++i) {
      u[i] = rng.uniform(-1.0, 1.0);
      v[i] = rng.uniform(-1.0, 1.0);
    }
    const double uu = quadratic_form(g, u, u), vv = quadratic_form(g, v, v), uv = quadratic_form(g, u, v);
    if (uu * vv - uv * uv < 1e-6 * uu * vv) continue;  // nearly collinear draw
    worst = std::min(worst, sectional_curvature(riem, g, u, v));
    ++k;
  }
  return worst;
}

}  // namespace grw::fiber
