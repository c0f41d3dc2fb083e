#pragma once

// Independent finite-difference oracles for graph hypersurfaces. They use
// the closed-form normal N = a (d_t + rho^-2 g_F^{jk} u_k d_j) with
// a = rho / sqrt(rho^2 - |du|^2), the warped-product Christoffels, and the
// Hessian form of the Laplacian, none of which the jet engine uses.

#include <cmath>
#include <vector>

#include "grw/fiber/fiber_metric.hpp"
#include "grw/hypersurface/graph.hpp"
#include "grw/jets/fd.hpp"

namespace oracle {

struct Frame {
  double u;
  std::vector<double> du;
  std::vector<double> N;  // ambient components
};

inline Frame closed_form_frame(const grw::hypersurface::GraphHypersurface& M, std::span<const double> x) {
  const int m = M.m();
  const auto uj = M.u_jet(x, 1);
  Frame f{uj.value(), std::vector<double>(m), std::vector<double>(m + 1)};
  for (int i = 0; i < m; ++i) f.du[i] = uj.gradient(i);
  const double r = M.host().warp()(f.u);
  const auto gi = grw::inverse(M.host().fiber().metric_at(x));
  const double grad2 = grw::quadratic_form(gi, f.du, f.du);
  const double a = r / std::sqrt(r * r - grad2);
  f.N[0] = a;
  for (int j = 0; j < m; ++j) {
    double s = 0.0;
    for (int k = 0; k < m; ++k) s += gi(j, k) * f.du[k];
    f.N[j + 1] = a * s / (r * r);
  }
  return f;
}

inline double fd_cosh(const grw::hypersurface::GraphHypersurface& M, std::span<const double> x) {
  return closed_form_frame(M, x).N[0];
}

/// A^j_i = -(d_i N^{j+1} + Gbar^{j+1}_{bc} X_i^b N^c) with d_i N by central differences.
inline grw::Matrix<double> fd_shape_operator(const grw::hypersurface::GraphHypersurface& M,
                                             std::span<const double> x, double h = 1e-5) {
  const int m = M.m();
  const Frame f = closed_form_frame(M, x);
  const auto gam = M.host().christoffel_warped(f.u, x);
  grw::Matrix<double> A(m, 0.0);
  for (int i = 0; i < m; ++i) {
    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    xp[i] += h;
    xm[i] -= h;
    const auto Np = closed_form_frame(M, xp).N, Nm = closed_form_frame(M, xm).N;
    std::vector<double> Xi(m + 1, 0.0);
    Xi[0] = f.du[i];
    Xi[i + 1] = 1.0;
    for (int j = 0; j < m; ++j) {
      double s = (Np[j + 1] - Nm[j + 1]) / (2 * h);
      for (int b = 0; b <= m; ++b)
        for (int c = 0; c <= m; ++c) s += gam(j + 1, b, c) * Xi[b] * f.N[c];
      A(j, i) = -s;
    }
  }
  return A;
}

inline grw::Matrix<double> induced_metric(const grw::hypersurface::GraphHypersurface& M, std::span<const double> x) {
  const int m = M.m();
  const Frame f = closed_form_frame(M, x);
  const double r = M.host().warp()(f.u);
  const auto gf = M.host().fiber().metric_at(x);
  grw::Matrix<double> g(m, 0.0);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) g(i, j) = -f.du[i] * f.du[j] + r * r * gf(i, j);
  return g;
}

/// Delta cosh(phi) = g^{ij} (d_i d_j f - G^k_{ij} d_k f), all derivatives by central differences.
inline double fd_laplacian_cosh(const grw::hypersurface::GraphHypersurface& M, std::span<const double> x,
                                double h = 1e-3) {
  const int m = M.m();
  const grw::jets::ScalarField f = [&](std::span<const double> y) { return fd_cosh(M, y); };
  const auto g = induced_metric(M, x);
  const auto gi = grw::inverse(g);
  // dg(k, i, j) = d_k g_ij
  std::vector<grw::Matrix<double>> dg(m, grw::Matrix<double>(m, 0.0));
  for (int k = 0; k < m; ++k) {
    std::vector<double> xp(x.begin(), x.end()), xm(x.begin(), x.end());
    xp[k] += h;
    xm[k] -= h;
    const auto gp = induced_metric(M, xp), gm = induced_metric(M, xm);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) dg[k](i, j) = (gp(i, j) - gm(i, j)) / (2 * h);
  }
  std::vector<double> df(m);
  for (int k = 0; k < m; ++k) {
    grw::jets::MultiIndex e;
    e.vars = m;
    e.exponents[k] = 1;
    df[k] = grw::jets::fd_derivative(f, x, e, h);
  }
  double lap = 0.0;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      grw::jets::MultiIndex e;
      e.vars = m;
      ++e.exponents[i];
      ++e.exponents[j];
      double s = grw::jets::fd_derivative(f, x, e, h);
      for (int k = 0; k < m; ++k) {
        double gamma = 0.0;
        for (int l = 0; l < m; ++l) gamma += 0.5 * gi(k, l) * (dg[i](l, j) + dg[j](l, i) - dg[l](i, j));
        s -= gamma * df[k];
      }
      lap += gi(i, j) * s;
    }
  return lap;
}

}  // namespace oracle
