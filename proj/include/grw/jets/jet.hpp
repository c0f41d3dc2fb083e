#pragma once

// Truncated multivariate Taylor expansions ("jets") up to order 3.
//
// A jet stores the Taylor coefficients c_alpha = d^alpha f / alpha! of a scalar
// field at a center point, for every multi-index alpha of total degree at
// most the jet's order. Coefficients are kept densely in graded
// lexicographic order; the layout tables (index lookup, product pairs,
// partial-derivative shifts) are built once per (vars, order).

#include <array>
#include <cstdint>
#include <span>
#include <vector>

namespace grw::jets {

inline constexpr int kMaxVars = 5;
inline constexpr int kMaxOrder = 3;
inline constexpr int kMaxCoeffs = 56;  // C(kMaxVars + kMaxOrder, kMaxOrder)

struct MultiIndex {
  std::array<std::uint8_t, kMaxVars> exponents{};
  int vars = 0;

  MultiIndex() = default;
  MultiIndex(std::initializer_list<int> exps);

  int degree() const;
  /// alpha! = prod_k alpha_k!
  double factorial() const;
  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

/// Index tables for jets with a fixed number of variables and order.
class Layout {
 public:
  struct Product {
    std::uint8_t lhs, rhs, out;
  };
  struct Shift {
    std::uint8_t src, dst;
    double factor;
  };

  /// Shared, immutable layout; valid for the whole program lifetime.
  static const Layout& get(int vars, int order);

  int vars() const { return vars_; }
  int order() const { return order_; }
  int size() const { return static_cast<int>(indices_.size()); }
  const MultiIndex& index(int k) const { return indices_[k]; }
  /// Position of alpha in this layout, or -1 if its degree exceeds the order.
  int find(const MultiIndex& alpha) const;

  /// All (i, j, k) with index(i) + index(j) == index(k).
  std::span<const Product> products() const { return products_; }
  /// Coefficient map of d/dx_var into the layout of order - 1.
  std::span<const Shift> partial(int var) const { return partials_[var]; }
  /// For degree >= 1: index(k) == index(parent(k)) + unit(parent_var(k)).
  int parent(int k) const { return parents_[k]; }
  int parent_var(int k) const { return parent_vars_[k]; }

 private:
  Layout(int vars, int order);

  int vars_;
  int order_;
  std::vector<MultiIndex> indices_;
  std::vector<Product> products_;
  std::vector<std::vector<Shift>> partials_;
  std::vector<int> parents_;
  std::vector<int> parent_vars_;
};

/// Number of multi-indices of degree <= order in `vars` variables.
int coefficient_count(int vars, int order);

class Jet {
 public:
  /// An empty jet; only assignable. Every arithmetic operation requires a
  /// jet built through one of the factories below.
  Jet() = default;

  static Jet constant(double value, int vars, int order);
  /// The coordinate function x_var at `value`.
  static Jet variable(int var, double value, int vars, int order);
  /// Coordinate jets of every variable at `center`.
  static std::vector<Jet> lift_point(std::span<const double> center, int order);

  bool empty() const { return layout_ == nullptr; }
  const Layout& layout() const { return *layout_; }
  int vars() const { return layout_->vars(); }
  int order() const { return layout_->order(); }
  int size() const { return layout_->size(); }

  /// Center of expansion. Coordinates never fixed by a lift are NaN.
  std::span<const double> center() const { return {center_.data(), static_cast<std::size_t>(vars())}; }

  double value() const { return coeffs_[0]; }
  double coeff(int k) const { return coeffs_[k]; }
  double& coeff(int k) { return coeffs_[k]; }
  double coeff(const MultiIndex& alpha) const;
  /// d^alpha f at the center (coefficient times alpha!).
  double derivative(const MultiIndex& alpha) const;
  /// First partial d f / d x_var at the center.
  double gradient(int var) const;
  std::span<const double> coeffs() const { return {coeffs_.data(), static_cast<std::size_t>(size())}; }

  /// Jet of d f / d x_var; its order is one less.
  Jet partial(int var) const;
  Jet truncate(int order) const;
  /// A constant jet sharing this jet's layout and center.
  Jet constant_like(double value) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator+=(double rhs);
  Jet& operator-=(double rhs);
  Jet& operator*=(double rhs);
  Jet& operator/=(double rhs);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator+(Jet a, double b) { return a += b; }
  friend Jet operator-(Jet a, double b) { return a -= b; }
  friend Jet operator*(Jet a, double b) { return a *= b; }
  friend Jet operator/(Jet a, double b) { return a /= b; }
  friend Jet operator+(double a, Jet b) { return b += a; }
  friend Jet operator-(double a, const Jet& b);
  friend Jet operator*(double a, Jet b) { return b *= a; }
  friend Jet operator/(double a, const Jet& b);

  /// Substitute a univariate Taylor series: returns sum_k taylor[k] * (f - f0)^k.
  /// `taylor[k]` is g^(k)(f0) / k!; entries beyond the jet's order are ignored.
  Jet compose(std::span<const double> taylor) const;

 private:
  void check_compatible(const Jet& other) const;
  void merge_center(const Jet& other);

  const Layout* layout_ = nullptr;
  std::array<double, kMaxVars> center_{};
  std::array<double, kMaxCoeffs> coeffs_{};
};

Jet exp(const Jet& a);
Jet log(const Jet& a);
Jet sqrt(const Jet& a);
Jet sin(const Jet& a);
Jet cos(const Jet& a);
Jet sinh(const Jet& a);
Jet cosh(const Jet& a);
/// a^n by repeated multiplication (negative n through one reciprocal).
Jet ipow(const Jet& a, int n);
/// a^p for a real exponent; requires a positive value unless p is integral.
Jet pow(const Jet& a, double p);
/// a^b; constant integral exponents reduce to ipow, otherwise exp(b log a).
Jet pow(const Jet& a, const Jet& b);

/// Scalar counterparts with the same domain policy and, for the value slot,
/// the same floating-point operation sequence as the jet versions.
double ipow(double a, int n);
double checked_pow(double a, double p);
bool is_small_integer(double p);

/// Evaluate a jet (a truncated polynomial) composed with inner jets:
/// returns sum_alpha outer.coeff(alpha) * prod_k inner[k]^alpha_k, where the
/// inner jets are displacements (zero value) in a common layout.
class Composer {
 public:
  explicit Composer(std::span<const Jet> displacements, int outer_order);
  Jet operator()(const Jet& outer) const;

 private:
  std::vector<Jet> monomials_;
  int outer_vars_;
  int outer_order_;
};

}  // namespace grw::jets
