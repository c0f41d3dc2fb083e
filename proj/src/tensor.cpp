#include "grw/tensor.hpp"

#include <algorithm>
#include <utility>

namespace grw {

using jets::Jet;

template <class T>
Matrix<T> inverse(const Matrix<T>& m) {
  const int n = m.dim();
  Matrix<T> a = m;
  Matrix<T> inv = m;
  const T zero = a(0, 0) - a(0, 0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) inv(i, j) = zero + (i == j ? 1.0 : 0.0);

  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(value_of(a(r, col))) > std::abs(value_of(a(pivot, col)))) pivot = r;
    if (value_of(a(pivot, col)) == 0.0) throw MetricDegeneracy("singular matrix in inverse");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) {
        std::swap(a(col, j), a(pivot, j));
        std::swap(inv(col, j), inv(pivot, j));
      }
    }
    const T p = a(col, col);
    for (int j = 0; j < n; ++j) {
      a(col, j) = a(col, j) / p;
      inv(col, j) = inv(col, j) / p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col) continue;
      const T f = a(r, col);
      if (value_of(f) == 0.0 && std::is_same_v<T, double>) continue;
      for (int j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(col, j);
        inv(r, j) = inv(r, j) - f * inv(col, j);
      }
    }
  }
  return inv;
}

template <class T>
T determinant(const Matrix<T>& m) {
  const int n = m.dim();
  Matrix<T> a = m;
  T det = a(0, 0) - a(0, 0) + 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(value_of(a(r, col))) > std::abs(value_of(a(pivot, col)))) pivot = r;
    if (value_of(a(pivot, col)) == 0.0) return det * 0.0;
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(col, j), a(pivot, j));
      det = -det;
    }
    det = det * a(col, col);
    for (int r = col + 1; r < n; ++r) {
      const T f = a(r, col) / a(col, col);
      for (int j = col; j < n; ++j) a(r, j) = a(r, j) - f * a(col, j);
    }
  }
  return det;
}

template Matrix<double> inverse(const Matrix<double>&);
template Matrix<Jet> inverse(const Matrix<Jet>&);
template double determinant(const Matrix<double>&);
template Jet determinant(const Matrix<Jet>&);

bool is_positive_definite(const Matrix<double>& m) {
  const int n = m.dim();
  std::vector<double> l(static_cast<std::size_t>(n) * n, 0.0);
  for (int j = 0; j < n; ++j) {
    double d = m(j, j);
    for (int k = 0; k < j; ++k) d -= l[j * n + k] * l[j * n + k];
    if (!(d > 0.0)) return false;
    l[j * n + j] = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = m(i, j);
      for (int k = 0; k < j; ++k) s -= l[i * n + k] * l[j * n + k];
      l[i * n + j] = s / l[j * n + j];
    }
  }
  return true;
}

double asymmetry(const Matrix<double>& m) {
  double worst = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = i + 1; j < m.dim(); ++j) worst = std::max(worst, std::abs(m(i, j) - m(j, i)));
  return worst;
}

Matrix<double> values(const Matrix<Jet>& m) {
  Matrix<double> out(m.dim(), 0.0);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = m(i, j).value();
  return out;
}

Rank3<double> values(const Rank3<Jet>& t) {
  const int n = t.dim();
  Rank3<double> out(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) out(a, b, c) = t(a, b, c).value();
  return out;
}

Rank4<double> values(const Rank4<Jet>& t) {
  const int n = t.dim();
  Rank4<double> out(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) out(a, b, c, d) = t(a, b, c, d).value();
  return out;
}

Matrix<Jet> truncate(const Matrix<Jet>& m, int order) {
  Matrix<Jet> out = m;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out(i, j) = m(i, j).truncate(order);
  return out;
}

Rank3<Jet> christoffel(const Matrix<Jet>& g, const Matrix<Jet>& g_inv) {
  const int n = g.dim();
  if (g(0, 0).vars() != n) throw InvalidArgument("metric jets must use the metric's own coordinates");
  const int order = g(0, 0).order();
  if (order < 1) throw InvalidArgument("Christoffel symbols need metric jets of order >= 1");

  // dg(c, a, b) = d_c g_{ab}
  Rank3<Jet> dg(n, Jet());
  for (int c = 0; c < n; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) dg(c, a, b) = dg(c, b, a) = g(a, b).partial(c);

  const Matrix<Jet> ginv = truncate(g_inv, order - 1);
  Rank3<Jet> first(n, Jet());  // Gamma_{d b c}
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) first(d, b, c) = first(d, c, b) = (dg(b, d, c) + dg(c, d, b) - dg(d, b, c)) * 0.5;

  Rank3<Jet> gamma(n, Jet());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        Jet s = ginv(a, 0) * first(0, b, c);
        for (int d = 1; d < n; ++d) s += ginv(a, d) * first(d, b, c);
        gamma(a, b, c) = gamma(a, c, b) = s;
      }
  return gamma;
}

Rank4<Jet> riemann(const Rank3<Jet>& gamma) {
  const int n = gamma.dim();
  const int order = gamma(0, 0, 0).order();
  if (order < 1) throw InvalidArgument("Riemann tensor needs Christoffel jets of order >= 1");

  Rank4<Jet> dgam(n, Jet());  // dgam(c, a, b, d) = d_c Gamma^a_{bd}
  Rank3<Jet> low(n, Jet());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int d = 0; d < n; ++d) {
        low(a, b, d) = gamma(a, b, d).truncate(order - 1);
        for (int c = 0; c < n; ++c) dgam(c, a, b, d) = gamma(a, b, d).partial(c);
      }

  Rank4<Jet> r(n, Jet());
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          if (c == d) {
            r(a, b, c, d) = low(0, 0, 0).constant_like(0.0);
            continue;
          }
          if (d < c) {
            r(a, b, c, d) = -r(a, b, d, c);
            continue;
          }
          Jet s = dgam(c, a, d, b) - dgam(d, a, c, b);
          for (int e = 0; e < n; ++e) s += low(a, c, e) * low(e, d, b) - low(a, d, e) * low(e, c, b);
          r(a, b, c, d) = s;
        }
  return r;
}

Matrix<double> ricci(const Rank4<double>& riem) {
  const int n = riem.dim();
  Matrix<double> out(n, 0.0);
  for (int b = 0; b < n; ++b)
    for (int d = 0; d < n; ++d) {
      double s = 0.0;
      for (int a = 0; a < n; ++a) s += riem(a, b, a, d);
      out(b, d) = s;
    }
  return out;
}

Rank4<double> lower_first(const Rank4<double>& riem, const Matrix<double>& g) {
  const int n = riem.dim();
  Rank4<double> out(n, 0.0);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          double s = 0.0;
          for (int e = 0; e < n; ++e) s += g(a, e) * riem(e, b, c, d);
          out(a, b, c, d) = s;
        }
  return out;
}

double quadratic_form(const Matrix<double>& m, std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) s += m(i, j) * u[i] * v[j];
  return s;
}

std::vector<double> mat_vec(const Matrix<double>& m, std::span<const double> v) {
  std::vector<double> out(m.dim(), 0.0);
  for (int i = 0; i < m.dim(); ++i)
    for (int j = 0; j < m.dim(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

}  // namespace grw
