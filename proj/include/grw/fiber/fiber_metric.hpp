#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grw/domain.hpp"
#include "grw/expr/expr.hpp"
#include "grw/tensor.hpp"

namespace grw::fiber {

enum class FiberKind { euclidean, sphere, hyperbolic, custom };

std::string_view kind_name(FiberKind kind);
FiberKind parse_kind(std::string_view name);

/// Name of the i-th fiber chart coordinate ("x1", "x2", ...).
std::string coordinate_name(int i);

/// Riemannian metric g_F on an m-dimensional box chart. Components are
/// expressions in x1..xm; built-in curved fibers use conformal charts.
class FiberMetric {
 public:
  /// Flat R^m with the identity metric on an unbounded chart.
  static FiberMetric euclidean(int m);
  /// Unit round sphere in stereographic coordinates: 4 / (1 + |x|^2)^2 delta.
  static FiberMetric sphere(int m);
  /// Hyperbolic space of curvature -1 in the Poincare ball: 4 / (1 - |x|^2)^2 delta.
  static FiberMetric hyperbolic(int m);
  /// Metric from an m x m matrix of expression strings; must be symmetric.
  static FiberMetric custom(const std::vector<std::vector<std::string>>& entries, Box domain);

  int dim() const { return m_; }
  FiberKind kind() const { return kind_; }
  const Box& domain() const { return domain_; }
  const expr::Expr& component(int i, int j) const { return components_[i * m_ + j]; }

  /// Throws DomainError unless x lies inside the chart with the chart margin.
  void check_point(std::span<const double> x) const;

  /// g_F(x); throws MetricDegeneracy if not positive definite.
  Matrix<double> metric_at(std::span<const double> x) const;

  /// g_F evaluated on arbitrary jets of the fiber coordinates (the jets may
  /// live in a larger variable space, e.g. ambient (t, x) coordinates).
  Matrix<jets::Jet> metric_jets(std::span<const jets::Jet> coords) const;
  /// g_F as jets in the chart coordinates at x.
  Matrix<jets::Jet> metric_jets_at(std::span<const double> x, int order) const;

  Rank3<double> christoffel(std::span<const double> x) const;
  /// R^a_{bcd} of g_F.
  Rank4<double> riemann(std::span<const double> x) const;
  /// Ricci tensor from the contracted Christoffel formula
  /// Ric_{bd} = d_a G^a_{bd} - d_d G^a_{ab} + G^a_{ae} G^e_{bd} - G^a_{de} G^e_{ab}.
  Matrix<double> ricci(std::span<const double> x) const;
  double ricci_contract(std::span<const double> x, std::span<const double> v) const;

  /// Sectional curvature of the plane spanned by u, v.
  double sectional(std::span<const double> x, std::span<const double> u, std::span<const double> v) const;
  /// Minimum sectional curvature over n_planes seeded random 2-planes.
  double sectional_min_sample(std::span<const double> x, int n_planes, std::uint64_t seed) const;

 private:
  FiberMetric(int m, FiberKind kind, std::vector<expr::Expr> components, Box domain);

  int m_;
  FiberKind kind_;
  std::vector<expr::Expr> components_;
  Box domain_;
};

/// Sectional curvature from a Riemann tensor and metric at one point.
double sectional_curvature(const Rank4<double>& riem, const Matrix<double>& g, std::span<const double> u,
                           std::span<const double> v);

}  // namespace grw::fiber
