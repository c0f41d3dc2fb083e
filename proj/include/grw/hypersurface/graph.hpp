#pragma once

#include <array>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "grw/ambient/spacetime.hpp"
#include "grw/expr/expr.hpp"
#include "grw/tensor.hpp"

namespace grw::hypersurface {

inline constexpr double kDefaultSpacelikeMargin = 1e-6;

/// Everything the identity checks need at one point of a graph t = u(x).
/// Tangential vectors are stored in the coordinate basis X_i = u_i d_t + d_i;
/// mixed tensors as M(j, i) = M^j_i. Ambient quantities are components in
/// (t, x1..xm) at psi(x) = (u(x), x).
struct PointGeometry {
  int m = 0;
  std::vector<double> x;
  double tau = 0;
  std::array<double, 4> rho{};  // rho, rho', rho'', rho''' at tau

  Matrix<double> g, g_inv;
  Rank3<double> gamma;                   // induced Christoffels G^k_{ij}
  std::vector<std::vector<double>> X;    // ambient components of X_i
  std::vector<double> N;                 // future unit normal, ambient components
  std::vector<double> N_F;               // fiber part of N (spatial components)
  double cosh_phi = 1, sinh2_phi = 0;
  std::vector<double> grad_cosh;

  std::vector<double> dtT;               // d_t^T
  std::vector<double> KT;                // K^T
  Matrix<double> nabla_dtT;              // (nabla_{X_i} d_t^T)^j
  Matrix<double> nabla_KT;               // (nabla_{X_i} K^T)^j
  double gKN = 0;                        // gbar(K, N)
  std::vector<double> grad_gKN;

  Matrix<double> A;
  Rank3<double> nabla_A;                 // (k, j, i) -> (nabla_k A)^j_i
  double H = 0;
  std::vector<double> grad_H;

  std::vector<double> grad_tau;
  Matrix<double> d2u;                    // coordinate second derivatives of u
  Matrix<double> hess_tau;               // covariant Hessian, lower indices
  double hess_tau_norm2 = 0;             // sum_k g(nabla_{E_k} d_t^T, nabla_{E_k} d_t^T)
  double hess_direct_norm2 = 0;          // |Hess tau|^2 from the covariant Hessian

  double lap_cosh = 0;                   // Laplacian of cosh(phi)
  double lap_sinh2 = 0;                  // Laplacian of sinh^2(phi)

  Matrix<double> ambient_metric;
  Rank3<double> ambient_christoffel;
  Rank4<double> ambient_riemann;
  Matrix<double> ambient_ricci;
  Matrix<double> fiber_metric;
  Matrix<double> fiber_ricci;

  double norm(std::span<const double> v) const;  // |v|_g
  double inner(std::span<const double> a, std::span<const double> b) const;
};

/// A residual with the magnitude it should be compared against; checks pass
/// when abs / max(1, scale) is below tolerance.
struct Residual {
  double abs = 0;
  double scale = 0;
  double rel() const { return abs / (scale > 1.0 ? scale : 1.0); }
};

/// Graph hypersurface t = u(x) over the fiber chart, with tau = u.
class GraphHypersurface {
 public:
  GraphHypersurface(std::string label, expr::Expr u, std::shared_ptr<const ambient::Spacetime> host,
                    double spacelike_margin = kDefaultSpacelikeMargin);

  const std::string& label() const { return label_; }
  const expr::Expr& u() const { return u_; }
  const ambient::Spacetime& host() const { return *host_; }
  std::shared_ptr<const ambient::Spacetime> host_ptr() const { return host_; }
  double spacelike_margin() const { return eps_; }
  int m() const { return host_->m(); }

  double tau_at(std::span<const double> x) const;
  /// 1 - |du|^2_{g_F} / rho(u)^2; spacelike with margin iff >= epsilon.
  double spacelike_slack(std::span<const double> x) const;
  /// Reason the point is refused (domain or spacelike margin), if any.
  std::optional<std::string> admission(std::span<const double> x) const;

  /// Full geometry at x. `frame_order` permutes the coordinate tangents fed
  /// to Gram-Schmidt (identity when empty).
  PointGeometry frame_at(std::span<const double> x, std::span<const int> frame_order = {}) const;

  /// u(x) and jets of the coordinates at x to the given order.
  jets::Jet u_jet(std::span<const double> x, int order) const;

 private:
  std::string label_;
  expr::Expr u_;
  std::shared_ptr<const ambient::Spacetime> host_;
  double eps_;
};

/// Laplace-Beltrami (1/sqrt det g) d_i (sqrt det g g^{ij} d_j f) at the jets'
/// center. g needs order >= 1, f order >= 2, in the chart variables.
double laplacian(const Matrix<jets::Jet>& g, const jets::Jet& f);

/// Laplacian of a scalar expression in x1..xm on (M, g).
double laplacian_on_M(const GraphHypersurface& M, const expr::Expr& f, std::span<const double> x);

/// Coefficients (in the X_i basis) of a g-orthonormal frame by Gram-Schmidt
/// on the coordinate tangents taken in `order`.
std::vector<std::vector<double>> gram_schmidt(const Matrix<double>& g, std::span<const int> order);

// Pointwise identity residuals.
Residual part_sinh_residual(const PointGeometry& p);
Residual grad_cosh_residual(const PointGeometry& p);
Residual grad_KN_residual(const PointGeometry& p);
Residual nabla_KT_residual(const PointGeometry& p, int i);
Residual nabla_dtT_residual(const PointGeometry& p, int i);
Residual hess_norm_residual(const PointGeometry& p);
Residual codazzi_residual(const PointGeometry& p, int i, int j, int k);
/// Worst over all directions / index triples.
Residual nabla_KT_residual(const PointGeometry& p);
Residual nabla_dtT_residual(const PointGeometry& p);
Residual codazzi_residual(const PointGeometry& p);

/// Closed form of the he2 right-hand side.
double hess_norm_closed_form(const PointGeometry& p);

/// nabla_{X_i} X_j = ambient derivative minus its normal part -g(AX_i, X_j) N.
Residual gauss_formula_residual(const PointGeometry& p);
/// Largest |g(AX_i, X_j) - g(X_i, AX_j)|.
double shape_operator_asymmetry(const PointGeometry& p);

}  // namespace grw::hypersurface
