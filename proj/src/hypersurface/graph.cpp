#include "grw/hypersurface/graph.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "grw/fiber/fiber_metric.hpp"

namespace grw::hypersurface {

using jets::Jet;

namespace {

std::string point_text(std::span<const double> x) {
  std::ostringstream os;
  os.precision(17);
  os << "(";
  for (std::size_t i = 0; i < x.size(); ++i) os << (i ? ", " : "") << x[i];
  os << ")";
  return os.str();
}

Residual worst(std::initializer_list<Residual> rs) {
  Residual out;
  for (const auto& r : rs)
    if (r.rel() >= out.rel()) out = r;
  return out;
}

}  // namespace

double PointGeometry::inner(std::span<const double> a, std::span<const double> b) const {
  return quadratic_form(g, a, b);
}

double PointGeometry::norm(std::span<const double> v) const { return std::sqrt(std::max(0.0, inner(v, v))); }

GraphHypersurface::GraphHypersurface(std::string label, expr::Expr u, std::shared_ptr<const ambient::Spacetime> host,
                                     double spacelike_margin)
    : label_(std::move(label)), u_(std::move(u)), host_(std::move(host)), eps_(spacelike_margin) {
  if (!host_) throw InvalidArgument("graph hypersurface needs a host spacetime");
  if (!(eps_ > 0.0 && eps_ < 1.0)) throw InvalidArgument("spacelike margin must lie in (0, 1)");
  for (const auto& v : u_.free_vars()) {
    bool ok = false;
    for (int i = 0; i < m(); ++i) ok |= (v == fiber::coordinate_name(i));
    if (!ok) throw InvalidArgument("graph '" + label_ + "' uses unknown variable '" + v + "'");
  }
}

Jet GraphHypersurface::u_jet(std::span<const double> x, int order) const {
  if (static_cast<int>(x.size()) != m()) throw InvalidArgument("graph point has the wrong dimension");
  const auto coords = Jet::lift_point(x, order);
  expr::Env<Jet> env;
  for (int i = 0; i < m(); ++i) env[fiber::coordinate_name(i)] = coords[i];
  if (u_.is_constant()) return coords[0].constant_like(u_.eval(env).value());
  return u_.eval(env);
}

double GraphHypersurface::tau_at(std::span<const double> x) const {
  expr::Env<double> env;
  for (int i = 0; i < m(); ++i) env[fiber::coordinate_name(i)] = x[i];
  return u_.eval(env);
}

double GraphHypersurface::spacelike_slack(std::span<const double> x) const {
  host_->fiber().check_point(x);
  const Jet u = u_jet(x, 1);
  host_->warp().check_time(u.value());
  const double r = host_->warp().derivs(u.value())[0];
  const auto gf = host_->fiber().metric_at(x);
  const auto gfi = inverse(gf);
  std::vector<double> du(m());
  for (int i = 0; i < m(); ++i) du[i] = u.gradient(i);
  return 1.0 - quadratic_form(gfi, du, du) / (r * r);
}

std::optional<std::string> GraphHypersurface::admission(std::span<const double> x) const {
  try {
    const double slack = spacelike_slack(x);
    if (!(slack >= eps_)) {
      std::ostringstream os;
      os << "spacelike margin violated at x = " << point_text(x) << " (slack " << slack << " < " << eps_ << ")";
      return os.str();
    }
  } catch (const Error& e) {
    return std::string(e.what());
  }
  return std::nullopt;
}

PointGeometry GraphHypersurface::frame_at(std::span<const double> x, std::span<const int> frame_order) const {
  const int n = m();
  const auto& S = *host_;
  S.fiber().check_point(x);

  PointGeometry p;
  p.m = n;
  p.x.assign(x.begin(), x.end());

  const auto coords = Jet::lift_point(x, 3);
  const Jet u = u_jet(x, 3);
  p.tau = u.value();
  S.warp().check_time(p.tau);
  p.rho = S.warp().derivs(p.tau);

  // Ambient metric along psi(x) = (u(x), x), as chart jets.
  std::vector<Jet> along{u};
  along.insert(along.end(), coords.begin(), coords.end());
  const auto G = truncate(S.metric_jets(along), 2);
  const auto Gi = inverse(G);

  std::vector<Jet> du(n);
  for (int i = 0; i < n; ++i) du[i] = u.partial(i);
  const Jet one = du[0].constant_like(1.0), zero = du[0].constant_like(0.0);

  // Normal covector (1, -du) annihilates every X_i; raise it and normalize.
  std::vector<Jet> nlow{one};
  for (int i = 0; i < n; ++i) nlow.push_back(-du[i]);
  std::vector<Jet> Nt(n + 1, zero);
  Jet q = zero;
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b) {
      Nt[a] -= Gi(a, b) * nlow[b];
      q -= Gi(a, b) * nlow[a] * nlow[b];
    }
  if (!(q.value() >= eps_)) {
    std::ostringstream os;
    os << "graph '" << label_ << "' is not spacelike with margin " << eps_ << " at x = " << point_text(x);
    throw DegenerateHypersurface(os.str());
  }
  const Jet inv_len = 1.0 / jets::sqrt(q);
  std::vector<Jet> N(n + 1, zero);
  for (int a = 0; a <= n; ++a) N[a] = Nt[a] * inv_len;

  Jet cosh_j = zero;
  for (int a = 0; a <= n; ++a) cosh_j -= G(a, 0) * N[a];
  if (cosh_j.value() < 1.0 - 1e-12) {
    throw ConsistencyFault("unit normal is not future pointing at x = " + point_text(x));
  }
  const Jet sinh2_j = cosh_j * cosh_j - 1.0;

  // Tangent frame X_i = u_i d_t + d_i and the induced metric.
  std::vector<std::vector<Jet>> Xj(n, std::vector<Jet>(n + 1, zero));
  for (int i = 0; i < n; ++i) {
    Xj[i][0] = du[i];
    Xj[i][i + 1] = one;
  }
  Matrix<Jet> g(n, zero);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Jet s = zero;
      for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) s += G(a, b) * Xj[i][a] * Xj[j][b];
      g(i, j) = g(j, i) = s;
    }
  const auto gi_j = inverse(g);
  const auto gam_j = christoffel(g, gi_j);
  p.g = values(g);
  p.g_inv = values(gi_j);
  p.gamma = values(gam_j);
  if (!is_positive_definite(p.g)) {
    throw DegenerateHypersurface("induced metric is not positive definite at x = " + point_text(x));
  }

  // Ambient Christoffels along the graph (order 1) by composing (t, x) jets.
  const auto Gamb = S.metric_jets_at(p.tau, x, 2);
  const auto gam_amb = christoffel(Gamb, inverse(Gamb));
  p.ambient_metric = values(Gamb);
  p.ambient_christoffel = values(gam_amb);
  p.ambient_riemann = values(riemann(gam_amb));
  p.ambient_ricci = ricci(p.ambient_riemann);
  p.fiber_metric = S.fiber().metric_at(x);
  p.fiber_ricci = S.fiber().ricci(x);

  std::vector<Jet> disp{(u - p.tau).truncate(1)};
  for (int i = 0; i < n; ++i) disp.push_back((coords[i] - x[i]).truncate(1));
  const jets::Composer compose(disp, 1);
  Rank3<Jet> gbar(n + 1, Jet());
  for (int a = 0; a <= n; ++a)
    for (int b = 0; b <= n; ++b)
      for (int c = 0; c <= n; ++c) gbar(a, b, c) = compose(gam_amb(a, b, c));

  // Shape operator A X_i = -nabla_{X_i} N, spatial components give A^j_i.
  Matrix<Jet> A(n, Jet());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = N[j + 1].partial(i);
      for (int b = 0; b <= n; ++b)
        for (int c = 0; c <= n; ++c) s += gbar(j + 1, b, c) * Xj[i][b].truncate(1) * N[c].truncate(1);
      A(j, i) = -s;
    }
  Jet Hj = A(0, 0);
  for (int i = 1; i < n; ++i) Hj += A(i, i);
  Hj = Hj * (-1.0 / n);

  p.A = values(A);
  p.H = Hj.value();
  p.nabla_A = Rank3<double>(n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        double s = A(j, i).gradient(k);
        for (int l = 0; l < n; ++l) s += p.gamma(j, k, l) * p.A(l, i) - p.gamma(l, k, i) * p.A(j, l);
        p.nabla_A(k, j, i) = s;
      }

  auto raise = [&](auto grad_of) {
    std::vector<double> v(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) v[i] += p.g_inv(i, j) * grad_of(j);
    return v;
  };
  p.grad_H = raise([&](int j) { return Hj.gradient(j); });
  p.grad_cosh = raise([&](int j) { return cosh_j.gradient(j); });
  p.grad_tau = raise([&](int j) { return u.gradient(j); });

  p.X.assign(n, std::vector<double>(n + 1, 0.0));
  for (int i = 0; i < n; ++i)
    for (int a = 0; a <= n; ++a) p.X[i][a] = Xj[i][a].value();
  p.N.resize(n + 1);
  for (int a = 0; a <= n; ++a) p.N[a] = N[a].value();
  p.N_F.assign(p.N.begin() + 1, p.N.end());
  p.cosh_phi = cosh_j.value();
  p.sinh2_phi = sinh2_j.value();

  // d_t^T = d_t - cosh(phi) N and K^T = rho(tau) d_t^T; spatial parts give X_i coefficients.
  const Jet rho_u = S.warp().of(u).truncate(2);
  const Jet gKN = rho_u * (-cosh_j);
  p.gKN = gKN.value();
  p.grad_gKN = raise([&](int j) { return gKN.gradient(j); });
  std::vector<Jet> dtT(n, zero), KT(n, zero);
  for (int j = 0; j < n; ++j) {
    dtT[j] = -cosh_j * N[j + 1];
    KT[j] = rho_u * dtT[j];
  }
  p.dtT.resize(n);
  p.KT.resize(n);
  for (int j = 0; j < n; ++j) {
    p.dtT[j] = dtT[j].value();
    p.KT[j] = KT[j].value();
  }
  auto covariant = [&](const std::vector<Jet>& V) {
    Matrix<double> D(n, 0.0);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = V[j].gradient(i);
        for (int k = 0; k < n; ++k) s += p.gamma(j, i, k) * V[k].value();
        D(j, i) = s;
      }
    return D;
  };
  p.nabla_dtT = covariant(dtT);
  p.nabla_KT = covariant(KT);

  // |Hess tau|^2 as the he1 trace over a Gram-Schmidt frame.
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  if (!frame_order.empty()) order.assign(frame_order.begin(), frame_order.end());
  const auto E = gram_schmidt(p.g, order);
  p.hess_tau_norm2 = 0.0;
  for (const auto& e : E) {
    std::vector<double> De(n, 0.0);
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) De[j] += p.nabla_dtT(j, i) * e[i];
    p.hess_tau_norm2 += p.inner(De, De);
  }

  p.d2u = Matrix<double>(n, 0.0);
  p.hess_tau = Matrix<double>(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      p.d2u(i, j) = du[j].gradient(i);
      double s = p.d2u(i, j);
      for (int k = 0; k < n; ++k) s -= p.gamma(k, i, j) * u.gradient(k);
      p.hess_tau(i, j) = s;
    }
  p.hess_direct_norm2 = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) p.hess_direct_norm2 += p.g_inv(i, a) * p.g_inv(j, b) * p.hess_tau(i, j) * p.hess_tau(a, b);

  p.lap_cosh = laplacian(g, cosh_j);
  p.lap_sinh2 = laplacian(g, sinh2_j);
  return p;
}

double laplacian(const Matrix<Jet>& g, const Jet& f) {
  const int n = g.dim();
  const auto g1 = truncate(g, 1);
  const auto gi = inverse(g1);
  const Jet sq = jets::sqrt(determinant(g1));
  double div = 0.0;
  for (int i = 0; i < n; ++i) {
    Jet flux = sq.constant_like(0.0);
    for (int j = 0; j < n; ++j) flux += gi(i, j) * f.partial(j).truncate(1);
    div += (flux * sq).gradient(i);
  }
  return div / sq.value();
}

double laplacian_on_M(const GraphHypersurface& M, const expr::Expr& f, std::span<const double> x) {
  const int n = M.m();
  M.host().fiber().check_point(x);
  const auto coords = Jet::lift_point(x, 2);
  const Jet u = M.u_jet(x, 3);
  M.host().warp().check_time(u.value());
  std::vector<Jet> along{u.truncate(2)};
  along.insert(along.end(), coords.begin(), coords.end());
  const auto G = M.host().metric_jets(along);
  std::vector<Jet> du(n);
  for (int i = 0; i < n; ++i) du[i] = u.partial(i);
  // g_ij = G(X_i, X_j) with X_i = u_i d_t + d_i.
  Matrix<Jet> g(n, Jet());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Jet s = G(i + 1, j + 1) + G(0, 0) * du[i] * du[j] + G(0, j + 1) * du[i] + G(i + 1, 0) * du[j];
      g(i, j) = s;
    }
  expr::Env<Jet> env;
  for (int i = 0; i < n; ++i) env[fiber::coordinate_name(i)] = coords[i];
  const Jet fj = f.is_constant() ? coords[0].constant_like(f.eval(env).value()) : f.eval(env);
  return laplacian(g, fj);
}

std::vector<std::vector<double>> gram_schmidt(const Matrix<double>& g, std::span<const int> order) {
  const int n = g.dim();
  if (static_cast<int>(order.size()) != n) throw InvalidArgument("frame order must list every tangent once");
  std::vector<int> seen(n, 0);
  for (int k : order) {
    if (k < 0 || k >= n || seen[k]++) throw InvalidArgument("frame order must be a permutation");
  }
  std::vector<std::vector<double>> E;
  for (int k : order) {
    std::vector<double> v(n, 0.0);
    v[k] = 1.0;
    for (const auto& e : E) {
      const double c = quadratic_form(g, v, e);
      for (int i = 0; i < n; ++i) v[i] -= c * e[i];
    }
    const double len = std::sqrt(quadratic_form(g, v, v));
    if (!(len > 0.0)) throw MetricDegeneracy("Gram-Schmidt met a null vector");
    for (auto& c : v) c /= len;
    E.push_back(std::move(v));
  }
  return E;
}

Residual part_sinh_residual(const PointGeometry& p) {
  std::vector<double> s(p.m);
  for (int i = 0; i < p.m; ++i) s[i] = p.grad_tau[i] + p.dtT[i];
  const double g2 = p.inner(p.grad_tau, p.grad_tau);
  Residual a{p.norm(s), std::max(p.norm(p.grad_tau), p.norm(p.dtT))};
  Residual b{std::abs(g2 - p.sinh2_phi), std::max(g2, p.sinh2_phi)};
  return worst({a, b});
}

Residual grad_cosh_residual(const PointGeometry& p) {
  const double r = p.rho[1] / p.rho[0];
  std::vector<double> Ad(p.m, 0.0), d(p.m);
  for (int j = 0; j < p.m; ++j)
    for (int i = 0; i < p.m; ++i) Ad[j] += p.A(j, i) * p.dtT[i];
  for (int j = 0; j < p.m; ++j) d[j] = p.grad_cosh[j] - Ad[j] - r * p.cosh_phi * p.dtT[j];
  return {p.norm(d), std::max({p.norm(p.grad_cosh), p.norm(Ad), std::abs(r * p.cosh_phi) * p.norm(p.dtT)})};
}

Residual grad_KN_residual(const PointGeometry& p) {
  std::vector<double> AK(p.m, 0.0), d(p.m);
  for (int j = 0; j < p.m; ++j)
    for (int i = 0; i < p.m; ++i) AK[j] += p.A(j, i) * p.KT[i];
  for (int j = 0; j < p.m; ++j) d[j] = p.grad_gKN[j] + AK[j];
  return {p.norm(d), std::max(p.norm(p.grad_gKN), p.norm(AK))};
}

Residual nabla_KT_residual(const PointGeometry& p, int i) {
  // nabla_X K^T = -rho gbar(N, d_t) A X + rho' X, with gbar(N, d_t) = -cosh(phi).
  std::vector<double> d(p.m), lhs(p.m), ax(p.m);
  double scale = 0.0;
  for (int j = 0; j < p.m; ++j) {
    lhs[j] = p.nabla_KT(j, i);
    ax[j] = p.rho[0] * p.cosh_phi * p.A(j, i);
    d[j] = lhs[j] - ax[j] - (j == i ? p.rho[1] : 0.0);
  }
  std::vector<double> Xi(p.m, 0.0);
  Xi[i] = 1.0;
  scale = std::max({p.norm(lhs), p.norm(ax), std::abs(p.rho[1]) * p.norm(Xi)});
  return {p.norm(d), scale};
}

Residual nabla_dtT_residual(const PointGeometry& p, int i) {
  const double r = p.rho[1] / p.rho[0];
  std::vector<double> Xi(p.m, 0.0), lhs(p.m), t1(p.m), t2(p.m), d(p.m);
  Xi[i] = 1.0;
  const double gx = p.inner(Xi, p.dtT);
  for (int j = 0; j < p.m; ++j) {
    lhs[j] = p.nabla_dtT(j, i);
    t1[j] = r * gx * p.dtT[j];
    t2[j] = p.cosh_phi * p.A(j, i);
    d[j] = lhs[j] - t1[j] - t2[j] - r * Xi[j];
  }
  return {p.norm(d), std::max({p.norm(lhs), p.norm(t1), p.norm(t2), std::abs(r) * p.norm(Xi)})};
}

Residual nabla_KT_residual(const PointGeometry& p) {
  Residual w;
  for (int i = 0; i < p.m; ++i) {
    const auto r = nabla_KT_residual(p, i);
    if (r.rel() >= w.rel()) w = r;
  }
  return w;
}

Residual nabla_dtT_residual(const PointGeometry& p) {
  Residual w;
  for (int i = 0; i < p.m; ++i) {
    const auto r = nabla_dtT_residual(p, i);
    if (r.rel() >= w.rel()) w = r;
  }
  return w;
}

double hess_norm_closed_form(const PointGeometry& p) {
  const double r = p.rho[1] / p.rho[0];
  const double c = p.cosh_phi;
  double trA2 = 0.0;
  for (int i = 0; i < p.m; ++i)
    for (int j = 0; j < p.m; ++j) trA2 += p.A(i, j) * p.A(j, i);
  std::vector<double> Ad(p.m, 0.0);
  for (int j = 0; j < p.m; ++j)
    for (int i = 0; i < p.m; ++i) Ad[j] += p.A(j, i) * p.dtT[i];
  return r * r * (p.m - 1 + c * c * c * c) + c * c * trA2 + 2.0 * r * c * p.inner(Ad, p.dtT) - 2.0 * p.m * r * p.H * c;
}

Residual hess_norm_residual(const PointGeometry& p) {
  const double rhs = hess_norm_closed_form(p);
  const double r = p.rho[1] / p.rho[0];
  const double c = p.cosh_phi;
  const double scale = std::max({p.hess_tau_norm2, std::abs(rhs), r * r * (p.m - 1 + c * c * c * c),
                                 std::abs(2.0 * p.m * r * p.H * c)});
  return {std::abs(p.hess_tau_norm2 - rhs), scale};
}

Residual codazzi_residual(const PointGeometry& p, int i, int j, int k) {
  const int n = p.m + 1;
  double lhs = 0.0;
  for (int a = 0; a < n; ++a)
    for (int e = 0; e < n; ++e) {
      if (p.ambient_metric(a, e) == 0.0) continue;
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d)
            lhs += p.X[k][a] * p.ambient_metric(a, e) * p.ambient_riemann(e, b, c, d) * p.N[b] * p.X[i][c] * p.X[j][d];
    }
  double r1 = 0.0, r2 = 0.0;
  for (int l = 0; l < p.m; ++l) {
    r1 += p.g(k, l) * p.nabla_A(j, l, i);
    r2 += p.g(k, l) * p.nabla_A(i, l, j);
  }
  return {std::abs(lhs - (r1 - r2)), std::max({std::abs(lhs), std::abs(r1), std::abs(r2)})};
}

Residual codazzi_residual(const PointGeometry& p) {
  Residual w;
  for (int i = 0; i < p.m; ++i)
    for (int j = 0; j < p.m; ++j)
      for (int k = 0; k < p.m; ++k) {
        const auto r = codazzi_residual(p, i, j, k);
        if (r.rel() >= w.rel()) w = r;
      }
  return w;
}

Residual gauss_formula_residual(const PointGeometry& p) {
  const int n = p.m + 1;
  Residual w;
  for (int i = 0; i < p.m; ++i)
    for (int j = 0; j < p.m; ++j) {
      double gAX = 0.0;
      for (int l = 0; l < p.m; ++l) gAX += p.g(j, l) * p.A(l, i);
      double diff = 0.0, scale = 0.0;
      for (int a = 0; a < n; ++a) {
        double amb = a == 0 ? p.d2u(i, j) : 0.0;
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) amb += p.ambient_christoffel(a, b, c) * p.X[i][b] * p.X[j][c];
        double tang = 0.0;
        for (int k = 0; k < p.m; ++k) tang += p.gamma(k, i, j) * p.X[k][a];
        const double normal = -gAX * p.N[a];
        diff = std::max(diff, std::abs(amb - tang - normal));
        scale = std::max({scale, std::abs(amb), std::abs(tang), std::abs(normal)});
      }
      const Residual r{diff, scale};
      if (r.rel() >= w.rel()) w = r;
    }
  return w;
}

double shape_operator_asymmetry(const PointGeometry& p) {
  double worst_value = 0.0;
  for (int i = 0; i < p.m; ++i)
    for (int k = 0; k < p.m; ++k) {
      double a = 0.0, b = 0.0;
      for (int l = 0; l < p.m; ++l) {
        a += p.g(k, l) * p.A(l, i);
        b += p.g(i, l) * p.A(l, k);
      }
      worst_value = std::max(worst_value, std::abs(a - b));
    }
  return worst_value;
}

}  // namespace grw::hypersurface
