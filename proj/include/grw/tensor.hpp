#pragma once

// Dense square tensors over double or jets::Jet, and the Levi-Civita
// pipeline (Christoffel symbols, Riemann and Ricci tensors) shared by the
// fiber, ambient and induced metrics.
//
// Curvature convention: R(X,Y) = [nabla_X, nabla_Y] - nabla_[X,Y],
//   R(d_c, d_d) d_b = R^a_{bcd} d_a,
//   R^a_{bcd} = d_c G^a_{db} - d_d G^a_{cb} + G^a_{ce} G^e_{db} - G^a_{de} G^e_{cb},
//   Ric_{bd} = R^a_{bad}.
// With this choice the unit sphere has Ric = (m-1) g and a warped product
// -dt^2 + rho^2 g_F has Ric(d_t, d_t) = -m rho''/rho.

#include <cmath>
#include <span>
#include <vector>

#include "grw/error.hpp"
#include "grw/jets/jet.hpp"

namespace grw {

inline double value_of(double x) { return x; }
inline double value_of(const jets::Jet& x) { return x.value(); }

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(int n, const T& fill) : n_(n), data_(static_cast<std::size_t>(n) * n, fill) {}

  int dim() const { return n_; }
  T& operator()(int i, int j) { return data_[i * n_ + j]; }
  const T& operator()(int i, int j) const { return data_[i * n_ + j]; }

 private:
  int n_ = 0;
  std::vector<T> data_;
};

/// T^a_{bc} style rank-3 array, every index ranging over [0, n).
template <class T>
class Rank3 {
 public:
  Rank3() = default;
  Rank3(int n, const T& fill) : n_(n), data_(static_cast<std::size_t>(n) * n * n, fill) {}

  int dim() const { return n_; }
  T& operator()(int a, int b, int c) { return data_[(a * n_ + b) * n_ + c]; }
  const T& operator()(int a, int b, int c) const { return data_[(a * n_ + b) * n_ + c]; }

 private:
  int n_ = 0;
  std::vector<T> data_;
};

template <class T>
class Rank4 {
 public:
  Rank4() = default;
  Rank4(int n, const T& fill) : n_(n), data_(static_cast<std::size_t>(n) * n * n * n, fill) {}

  int dim() const { return n_; }
  T& operator()(int a, int b, int c, int d) { return data_[((a * n_ + b) * n_ + c) * n_ + d]; }
  const T& operator()(int a, int b, int c, int d) const { return data_[((a * n_ + b) * n_ + c) * n_ + d]; }

 private:
  int n_ = 0;
  std::vector<T> data_;
};

using JetMatrix = Matrix<jets::Jet>;

/// Gauss-Jordan inverse with partial pivoting on the values. Throws
/// MetricDegeneracy if a pivot value vanishes.
template <class T>
Matrix<T> inverse(const Matrix<T>& m);

template <class T>
T determinant(const Matrix<T>& m);

/// True when the symmetric matrix admits a Cholesky factorization.
bool is_positive_definite(const Matrix<double>& m);

/// Largest absolute asymmetry |m_ij - m_ji|.
double asymmetry(const Matrix<double>& m);

Matrix<double> values(const Matrix<jets::Jet>& m);
Rank3<double> values(const Rank3<jets::Jet>& t);
Matrix<jets::Jet> truncate(const Matrix<jets::Jet>& m, int order);

/// Christoffel symbols G^a_{bc} = 1/2 g^{ad} (d_b g_{dc} + d_c g_{db} - d_d g_{bc})
/// from metric jets of order k >= 1 whose variables are the metric's own
/// coordinates. The result has order k - 1.
Rank3<jets::Jet> christoffel(const Matrix<jets::Jet>& g, const Matrix<jets::Jet>& g_inv);

/// R^a_{bcd} from Christoffel jets of order k >= 1; result has order k - 1.
Rank4<jets::Jet> riemann(const Rank3<jets::Jet>& gamma);

Matrix<double> ricci(const Rank4<double>& riem);
Rank4<double> values(const Rank4<jets::Jet>& t);

/// R_{abcd} = g_{ae} R^e_{bcd}.
Rank4<double> lower_first(const Rank4<double>& riem, const Matrix<double>& g);

double quadratic_form(const Matrix<double>& m, std::span<const double> u, std::span<const double> v);
std::vector<double> mat_vec(const Matrix<double>& m, std::span<const double> v);

}  // namespace grw
