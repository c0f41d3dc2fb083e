#pragma once

#include <array>
#include <span>
#include <string>

#include "grw/domain.hpp"
#include "grw/expr/expr.hpp"
#include "grw/fiber/fiber_metric.hpp"
#include "grw/tensor.hpp"

namespace grw::ambient {

/// Finite-difference step the oracles use, and the resulting distance every
/// sampled time keeps from the ends of I.
inline constexpr double kFdStep = 1e-3;
inline constexpr double kTimeMargin = 10 * kFdStep > 1e-3 ? 10 * kFdStep : 1e-3;

/// The warping function rho(t) on an open interval. Expressions may use
/// named constants (e.g. `a` for the radiation model) besides `t`.
class WarpFunction {
 public:
  WarpFunction(expr::Expr rho, Interval interval, expr::Env<double> params = {});

  const expr::Expr& expression() const { return rho_; }
  const Interval& interval() const { return interval_; }
  const expr::Env<double>& params() const { return params_; }

  /// Throws DomainError unless t keeps kTimeMargin from both ends of I.
  void check_time(double t) const;

  double operator()(double t) const;
  /// {rho, rho', rho'', rho'''} at t; throws DomainError if rho(t) <= 0.
  std::array<double, 4> derivs(double t) const;
  /// (log rho)'' = rho''/rho - (rho'/rho)^2.
  double log_second(double t) const;
  /// rho composed with an arbitrary jet (t := the jet).
  jets::Jet of(const jets::Jet& t) const;

 private:
  expr::Expr rho_;
  Interval interval_;
  expr::Env<double> params_;
};

struct OneillResidual {
  double time_time;   // Ric(d_t, d_t) + m rho''/rho
  double fiber;       // Ric(w, w) - [Ric^F(v, v) + s^2 (rho''/rho + (m-1) rho'^2/rho^2)]
  double time_scale;  // magnitudes for relative comparisons
  double fiber_scale;
};

/// The GRW spacetime I x_rho F with metric -dt^2 + rho(t)^2 g_F in
/// coordinates (t, x1..xm).
class Spacetime {
 public:
  Spacetime(WarpFunction warp, fiber::FiberMetric fiber);

  const WarpFunction& warp() const { return warp_; }
  const fiber::FiberMetric& fiber() const { return fiber_; }
  int m() const { return fiber_.dim(); }
  int dim() const { return fiber_.dim() + 1; }

  void check_point(double t, std::span<const double> x) const;

  Matrix<double> metric(double t, std::span<const double> x) const;
  /// Metric on arbitrary coordinate jets {t, x1..xm} sharing a layout.
  Matrix<jets::Jet> metric_jets(std::span<const jets::Jet> coords) const;
  /// Metric jets in the ambient coordinates (t, x) at a point.
  Matrix<jets::Jet> metric_jets_at(double t, std::span<const double> x, int order) const;

  /// Levi-Civita symbols from metric jets.
  Rank3<double> christoffel_generic(double t, std::span<const double> x) const;
  /// Warped-product closed form.
  Rank3<double> christoffel_warped(double t, std::span<const double> x) const;
  /// Largest discrepancy between the two, relative to max(1, |closed form|).
  double christoffel_discrepancy(double t, std::span<const double> x) const;
  /// Generic symbols, after asserting agreement; throws ConsistencyFault.
  Rank3<double> christoffel(double t, std::span<const double> x, double tol = 1e-9) const;

  Rank4<double> riemann(double t, std::span<const double> x) const;
  Matrix<double> ricci(double t, std::span<const double> x) const;

  bool is_lorentzian(double t, std::span<const double> x) const;

  /// Max-abs component of nabla_X K - rho'(t) X for K = rho d_t.
  double conformal_K_residual(double t, std::span<const double> x, std::span<const double> X) const;

  OneillResidual oneill_ricci_check(double t, std::span<const double> x, std::span<const double> v) const;

  /// Ric^F(v, v) - m (rho rho'' - rho'^2) g_F(v, v).
  double ncc_margin(double t, std::span<const double> x, std::span<const double> v) const;

  /// Divergence of the comoving field d_t: m rho'/rho.
  double div_comoving(double t) const;

  /// Ric(z, z) for timelike z; throws InvalidArgument otherwise.
  double tcc_check(double t, std::span<const double> x, std::span<const double> z) const;

 private:
  WarpFunction warp_;
  fiber::FiberMetric fiber_;
};

}  // namespace grw::ambient
