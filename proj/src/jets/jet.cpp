#include "grw/jets/jet.hpp"

#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "grw/error.hpp"

namespace grw::jets {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Base-4 key: exponents never exceed kMaxOrder = 3.
int key_of(const MultiIndex& alpha) {
  int key = 0;
  for (int k = alpha.vars - 1; k >= 0; --k) key = key * 4 + alpha.exponents[k];
  return key;
}

void enumerate_degree(int vars, int degree, int pos, MultiIndex& cur, std::vector<MultiIndex>& out) {
  if (pos == vars - 1) {
    cur.exponents[pos] = static_cast<std::uint8_t>(degree);
    out.push_back(cur);
    return;
  }
  for (int e = degree; e >= 0; --e) {
    cur.exponents[pos] = static_cast<std::uint8_t>(e);
    enumerate_degree(vars, degree - e, pos + 1, cur, out);
  }
  cur.exponents[pos] = 0;
}

}  // namespace

MultiIndex::MultiIndex(std::initializer_list<int> exps) : vars(static_cast<int>(exps.size())) {
  if (vars > kMaxVars) throw InvalidArgument("multi-index has more than 5 variables");
  int k = 0;
  for (int e : exps) {
    if (e < 0 || e > kMaxOrder) throw InvalidArgument("multi-index exponent out of range");
    exponents[k++] = static_cast<std::uint8_t>(e);
  }
}

int MultiIndex::degree() const {
  int d = 0;
  for (int k = 0; k < vars; ++k) d += exponents[k];
  return d;
}

double MultiIndex::factorial() const {
  static constexpr double kFact[] = {1.0, 1.0, 2.0, 6.0};
  double f = 1.0;
  for (int k = 0; k < vars; ++k) f *= kFact[exponents[k]];
  return f;
}

int coefficient_count(int vars, int order) {
  // C(vars + order, order)
  long num = 1, den = 1;
  for (int k = 1; k <= order; ++k) {
    num *= vars + k;
    den *= k;
  }
  return static_cast<int>(num / den);
}

Layout::Layout(int vars, int order) : vars_(vars), order_(order) {
  for (int d = 0; d <= order; ++d) {
    MultiIndex cur;
    cur.vars = vars;
    enumerate_degree(vars, d, 0, cur, indices_);
  }

  const int n = size();
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (indices_[i].degree() + indices_[j].degree() > order) continue;
      MultiIndex sum;
      sum.vars = vars;
      for (int k = 0; k < vars; ++k) sum.exponents[k] = indices_[i].exponents[k] + indices_[j].exponents[k];
      products_.push_back({static_cast<std::uint8_t>(i), static_cast<std::uint8_t>(j),
                           static_cast<std::uint8_t>(find(sum))});
    }
  }

  parents_.assign(n, -1);
  parent_vars_.assign(n, -1);
  for (int k = 1; k < n; ++k) {
    MultiIndex alpha = indices_[k];
    int var = 0;
    while (alpha.exponents[var] == 0) ++var;
    alpha.exponents[var] -= 1;
    parents_[k] = find(alpha);
    parent_vars_[k] = var;
  }

  partials_.resize(vars);
  if (order > 0) {
    // Lower layout is the graded prefix of this one, so find() serves both.
    for (int var = 0; var < vars; ++var) {
      for (int k = 0; k < n; ++k) {
        const MultiIndex& alpha = indices_[k];
        if (alpha.exponents[var] == 0) continue;
        MultiIndex lower = alpha;
        lower.exponents[var] -= 1;
        partials_[var].push_back({static_cast<std::uint8_t>(k), static_cast<std::uint8_t>(find(lower)),
                                  static_cast<double>(alpha.exponents[var])});
      }
    }
  }
}

int Layout::find(const MultiIndex& alpha) const {
  if (alpha.vars != vars_ || alpha.degree() > order_) return -1;
  const int key = key_of(alpha);
  for (int k = 0; k < size(); ++k) {
    if (key_of(indices_[k]) == key) return k;
  }
  return -1;
}

const Layout& Layout::get(int vars, int order) {
  if (vars < 1 || vars > kMaxVars) throw InvalidArgument("jet variable count must be in 1..5");
  if (order < 0 || order > kMaxOrder) throw InvalidArgument("jet order must be in 0..3");
  static const auto table = [] {
    std::vector<std::unique_ptr<Layout>> t;
    for (int v = 1; v <= kMaxVars; ++v)
      for (int o = 0; o <= kMaxOrder; ++o) t.emplace_back(new Layout(v, o));
    return t;
  }();
  return *table[(vars - 1) * (kMaxOrder + 1) + order];
}

Jet Jet::constant(double value, int vars, int order) {
  Jet j;
  j.layout_ = &Layout::get(vars, order);
  j.center_.fill(kNaN);
  j.coeffs_[0] = value;
  return j;
}

Jet Jet::variable(int var, double value, int vars, int order) {
  if (var < 0 || var >= vars) throw InvalidArgument("jet variable index out of range");
  Jet j = constant(value, vars, order);
  j.center_[var] = value;
  if (order >= 1) j.coeffs_[1 + var] = 1.0;
  return j;
}

std::vector<Jet> Jet::lift_point(std::span<const double> center, int order) {
  const int vars = static_cast<int>(center.size());
  std::vector<Jet> out;
  out.reserve(vars);
  for (int k = 0; k < vars; ++k) {
    Jet j = variable(k, center[k], vars, order);
    for (int i = 0; i < vars; ++i) j.center_[i] = center[i];
    out.push_back(j);
  }
  return out;
}

double Jet::coeff(const MultiIndex& alpha) const {
  const int k = layout_->find(alpha);
  return k < 0 ? 0.0 : coeffs_[k];
}

double Jet::derivative(const MultiIndex& alpha) const { return coeff(alpha) * alpha.factorial(); }

double Jet::gradient(int var) const {
  if (order() < 1) throw InvalidArgument("gradient of an order-0 jet");
  return coeffs_[1 + var];
}

Jet Jet::partial(int var) const {
  if (order() < 1) throw InvalidArgument("partial derivative of an order-0 jet");
  if (var < 0 || var >= vars()) throw InvalidArgument("partial derivative variable out of range");
  Jet out;
  out.layout_ = &Layout::get(vars(), order() - 1);
  out.center_ = center_;
  for (const auto& s : layout_->partial(var)) out.coeffs_[s.dst] = s.factor * coeffs_[s.src];
  return out;
}

Jet Jet::truncate(int new_order) const {
  if (new_order > order()) throw InvalidArgument("cannot raise the order of a jet");
  Jet out;
  out.layout_ = &Layout::get(vars(), new_order);
  out.center_ = center_;
  for (int k = 0; k < out.size(); ++k) out.coeffs_[k] = coeffs_[k];
  return out;
}

Jet Jet::constant_like(double value) const {
  Jet out;
  out.layout_ = layout_;
  out.center_ = center_;
  out.coeffs_[0] = value;
  return out;
}

void Jet::check_compatible(const Jet& other) const {
  if (layout_ == nullptr || other.layout_ == nullptr) throw InvalidArgument("arithmetic on an empty jet");
  if (layout_ != other.layout_)
    throw InvalidArgument("jet operands differ in dimension or order (" + std::to_string(vars()) + "/" +
                          std::to_string(order()) + " vs " + std::to_string(other.vars()) + "/" +
                          std::to_string(other.order()) + ")");
}

void Jet::merge_center(const Jet& other) {
  for (int k = 0; k < vars(); ++k) {
    const double a = center_[k], b = other.center_[k];
    if (std::isnan(a)) {
      center_[k] = b;
    } else if (!std::isnan(b) && a != b) {
      throw InvalidArgument("jet operands are expanded about different centers");
    }
  }
}

Jet& Jet::operator+=(const Jet& rhs) {
  check_compatible(rhs);
  merge_center(rhs);
  for (int k = 0; k < size(); ++k) coeffs_[k] += rhs.coeffs_[k];
  return *this;
}

Jet& Jet::operator-=(const Jet& rhs) {
  check_compatible(rhs);
  merge_center(rhs);
  for (int k = 0; k < size(); ++k) coeffs_[k] -= rhs.coeffs_[k];
  return *this;
}

Jet operator*(const Jet& a, const Jet& b) {
  a.check_compatible(b);
  Jet out;
  out.layout_ = a.layout_;
  out.center_ = a.center_;
  out.merge_center(b);
  for (const auto& p : a.layout_->products()) out.coeffs_[p.out] += a.coeffs_[p.lhs] * b.coeffs_[p.rhs];
  return out;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }

Jet operator/(const Jet& a, const Jet& b) {
  a.check_compatible(b);
  const double b0 = b.value();
  if (b0 == 0.0) throw SingularJet("division by a jet with zero value");
  const double r = 1.0 / b0;
  const std::array<double, 4> taylor = {r, -r * r, r * r * r, -r * r * r * r};
  Jet out = a * b.compose(taylor);
  out.coeffs_[0] = a.value() / b0;
  return out;
}

Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet& Jet::operator+=(double rhs) {
  coeffs_[0] += rhs;
  return *this;
}

Jet& Jet::operator-=(double rhs) {
  coeffs_[0] -= rhs;
  return *this;
}

Jet& Jet::operator*=(double rhs) {
  for (int k = 0; k < size(); ++k) coeffs_[k] *= rhs;
  return *this;
}

Jet& Jet::operator/=(double rhs) {
  if (rhs == 0.0) throw SingularJet("division of a jet by zero");
  const double r = 1.0 / rhs;
  const double v0 = coeffs_[0] / rhs;
  for (int k = 0; k < size(); ++k) coeffs_[k] *= r;
  coeffs_[0] = v0;
  return *this;
}

Jet operator-(const Jet& a) {
  Jet out = a;
  for (int k = 0; k < out.size(); ++k) out.coeffs_[k] = -out.coeffs_[k];
  return out;
}

Jet operator-(double a, const Jet& b) {
  Jet out = -b;
  out.coeffs_[0] = a - b.value();
  return out;
}

Jet operator/(double a, const Jet& b) { return b.constant_like(a) / b; }

Jet Jet::compose(std::span<const double> taylor) const {
  Jet out = constant_like(taylor[0]);
  if (order() == 0) return out;
  Jet delta = *this;
  delta.coeffs_[0] = 0.0;
  Jet power = delta;
  const int top = std::min<int>(order(), static_cast<int>(taylor.size()) - 1);
  for (int k = 1; k <= top; ++k) {
    for (int i = 1; i < size(); ++i) out.coeffs_[i] += taylor[k] * power.coeffs_[i];
    if (k < top) power = power * delta;
  }
  return out;
}

Jet exp(const Jet& a) {
  const double e = std::exp(a.value());
  const std::array<double, 4> t = {e, e, e / 2.0, e / 6.0};
  return a.compose(t);
}

Jet log(const Jet& a) {
  const double x = a.value();
  if (!(x > 0.0)) throw DomainError("log of a non-positive value");
  const double r = 1.0 / x;
  const std::array<double, 4> t = {std::log(x), r, -r * r / 2.0, r * r * r / 3.0};
  return a.compose(t);
}

Jet sqrt(const Jet& a) {
  const double x = a.value();
  if (x < 0.0 || (x == 0.0 && a.order() > 0)) throw DomainError("sqrt of a non-positive value");
  const double s = std::sqrt(x);
  if (a.order() == 0) return a.constant_like(s);
  const double s3 = s * x, s5 = s3 * x;
  const std::array<double, 4> t = {s, 0.5 / s, -1.0 / (8.0 * s3), 1.0 / (16.0 * s5)};
  return a.compose(t);
}

Jet sin(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> t = {s, c, -s / 2.0, -c / 6.0};
  return a.compose(t);
}

Jet cos(const Jet& a) {
  const double s = std::sin(a.value()), c = std::cos(a.value());
  const std::array<double, 4> t = {c, -s, -c / 2.0, s / 6.0};
  return a.compose(t);
}

Jet sinh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  const std::array<double, 4> t = {s, c, s / 2.0, c / 6.0};
  return a.compose(t);
}

Jet cosh(const Jet& a) {
  const double s = std::sinh(a.value()), c = std::cosh(a.value());
  const std::array<double, 4> t = {c, s, c / 2.0, s / 6.0};
  return a.compose(t);
}

bool is_small_integer(double p) { return std::floor(p) == p && std::abs(p) <= 64.0; }

double ipow(double a, int n) {
  if (n == 0) return 1.0;
  if (n < 0) {
    const double d = ipow(a, -n);
    if (d == 0.0) throw DomainError("negative power of zero");
    return 1.0 / d;
  }
  double r = a;
  for (int i = 1; i < n; ++i) r *= a;
  return r;
}

double checked_pow(double a, double p) {
  if (is_small_integer(p)) return ipow(a, static_cast<int>(p));
  if (a < 0.0) throw DomainError("non-integer power of a negative value");
  if (a == 0.0 && p < 0.0) throw DomainError("negative power of zero");
  return std::pow(a, p);
}

Jet ipow(const Jet& a, int n) {
  if (n == 0) return a.constant_like(1.0);
  if (n < 0) {
    const Jet d = ipow(a, -n);
    if (d.value() == 0.0) throw DomainError("negative power of zero");
    return 1.0 / d;
  }
  Jet r = a;
  for (int i = 1; i < n; ++i) r = r * a;
  return r;
}

Jet pow(const Jet& a, double p) {
  if (is_small_integer(p)) return ipow(a, static_cast<int>(p));
  const double x = a.value();
  if (x < 0.0) throw DomainError("non-integer power of a negative value");
  if (x == 0.0 && (p < 0.0 || a.order() > 0)) throw DomainError("non-integer power at zero");
  const double v = checked_pow(x, p);
  if (a.order() == 0) return a.constant_like(v);
  const double r = 1.0 / x;
  const std::array<double, 4> t = {v, p * v * r, p * (p - 1.0) / 2.0 * v * r * r,
                                   p * (p - 1.0) * (p - 2.0) / 6.0 * v * r * r * r};
  return a.compose(t);
}

Jet pow(const Jet& a, const Jet& b) {
  bool constant_exponent = true;
  for (int k = 1; k < b.size(); ++k) constant_exponent = constant_exponent && b.coeff(k) == 0.0;
  if (constant_exponent) return pow(a, b.value());
  if (!(a.value() > 0.0)) throw DomainError("variable power of a non-positive value");
  Jet out = exp(b * log(a));
  out.coeff(0) = checked_pow(a.value(), b.value());
  return out;
}

Composer::Composer(std::span<const Jet> displacements, int outer_order)
    : outer_vars_(static_cast<int>(displacements.size())), outer_order_(outer_order) {
  if (displacements.empty()) throw InvalidArgument("composition needs at least one inner jet");
  for (const Jet& d : displacements) {
    if (d.value() != 0.0) throw InvalidArgument("inner jets of a composition must have zero value");
  }
  const Layout& outer = Layout::get(outer_vars_, outer_order_);
  monomials_.resize(outer.size());
  monomials_[0] = displacements[0].constant_like(1.0);
  for (int k = 1; k < outer.size(); ++k)
    monomials_[k] = monomials_[outer.parent(k)] * displacements[outer.parent_var(k)];
}

Jet Composer::operator()(const Jet& outer) const {
  if (outer.vars() != outer_vars_ || outer.order() > outer_order_)
    throw InvalidArgument("composition layout mismatch");
  Jet out = monomials_[0].constant_like(0.0);
  for (int k = 0; k < outer.size(); ++k) {
    const double c = outer.coeff(k);
    if (c != 0.0) out += monomials_[k] * c;
  }
  return out;
}

}  // namespace grw::jets
