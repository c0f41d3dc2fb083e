#include <charconv>
#include <cmath>

#include "grw/expr/expr.hpp"

namespace grw::expr {

namespace {

using jets::Jet;

double apply(Function fn, double a) {
  switch (fn) {
    case Function::exp: return std::exp(a);
    case Function::log:
      if (!(a > 0.0)) throw DomainError("log of a non-positive value");
      return std::log(a);
    case Function::sqrt:
      if (a < 0.0) throw DomainError("sqrt of a negative value");
      return std::sqrt(a);
    case Function::sin: return std::sin(a);
    case Function::cos: return std::cos(a);
    case Function::sinh: return std::sinh(a);
    case Function::cosh: return std::cosh(a);
    case Function::pow: break;
  }
  throw InvalidArgument("function arity mismatch");
}

Jet apply(Function fn, const Jet& a) {
  switch (fn) {
    case Function::exp: return jets::exp(a);
    case Function::log: return jets::log(a);
    case Function::sqrt: return jets::sqrt(a);
    case Function::sin: return jets::sin(a);
    case Function::cos: return jets::cos(a);
    case Function::sinh: return jets::sinh(a);
    case Function::cosh: return jets::cosh(a);
    case Function::pow: break;
  }
  throw InvalidArgument("function arity mismatch");
}

double power(double a, double b) { return jets::checked_pow(a, b); }
Jet power(const Jet& a, const Jet& b) { return jets::pow(a, b); }

double divide(double a, double b) {
  if (b == 0.0) throw SingularJet("division by zero");
  return a / b;
}
Jet divide(const Jet& a, const Jet& b) { return a / b; }

template <class T>
struct Evaluator {
  const Env<T>& env;
  const T* prototype = nullptr;

  T literal(double v) const {
    if constexpr (std::is_same_v<T, double>) {
      return v;
    } else {
      if (prototype == nullptr) throw InvalidArgument("jet evaluation needs at least one bound jet to fix the layout");
      return prototype->constant_like(v);
    }
  }

  T operator()(const NodePtr& n) const {
    return std::visit([this](const auto& node) { return (*this)(node); }, n->v);
  }

  T operator()(const Number& n) const { return literal(n.value); }

  T operator()(const Variable& v) const {
    const auto it = env.find(v.name);
    if (it == env.end()) throw UnboundVariable("unbound variable '" + v.name + "'");
    return it->second;
  }

  T operator()(const Negate& n) const { return -(*this)(n.operand); }

  T operator()(const Binary& b) const {
    T lhs = (*this)(b.lhs);
    T rhs = (*this)(b.rhs);
    switch (b.op) {
      case BinaryOp::add: return lhs + rhs;
      case BinaryOp::sub: return lhs - rhs;
      case BinaryOp::mul: return lhs * rhs;
      case BinaryOp::div: return divide(lhs, rhs);
      case BinaryOp::pow: return power(lhs, rhs);
    }
    throw InvalidArgument("unknown operator");
  }

  T operator()(const Call& c) const {
    if (c.fn == Function::pow) return power((*this)(c.args[0]), (*this)(c.args[1]));
    return apply(c.fn, (*this)(c.args[0]));
  }
};

void collect_vars(const NodePtr& n, std::set<std::string>& out) {
  std::visit(
      [&](const auto& node) {
        using N = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<N, Variable>) {
          out.insert(node.name);
        } else if constexpr (std::is_same_v<N, Negate>) {
          collect_vars(node.operand, out);
        } else if constexpr (std::is_same_v<N, Binary>) {
          collect_vars(node.lhs, out);
          collect_vars(node.rhs, out);
        } else if constexpr (std::is_same_v<N, Call>) {
          for (const auto& a : node.args) collect_vars(a, out);
        }
      },
      n->v);
}

std::string format_number(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

std::string print(const NodePtr& n) {
  return std::visit(
      [](const auto& node) -> std::string {
        using N = std::decay_t<decltype(node)>;
        if constexpr (std::is_same_v<N, Number>) {
          return format_number(node.value);
        } else if constexpr (std::is_same_v<N, Variable>) {
          return node.name;
        } else if constexpr (std::is_same_v<N, Negate>) {
          return "(-" + print(node.operand) + ")";
        } else if constexpr (std::is_same_v<N, Binary>) {
          static constexpr const char* kOps[] = {" + ", " - ", " * ", " / ", " ^ "};
          return "(" + print(node.lhs) + kOps[static_cast<int>(node.op)] + print(node.rhs) + ")";
        } else {
          std::string s(function_name(node.fn));
          s += "(";
          for (std::size_t i = 0; i < node.args.size(); ++i) {
            if (i) s += ", ";
            s += print(node.args[i]);
          }
          return s + ")";
        }
      },
      n->v);
}

bool same(const NodePtr& a, const NodePtr& b) {
  if (a->v.index() != b->v.index()) return false;
  return std::visit(
      [&](const auto& x) -> bool {
        using N = std::decay_t<decltype(x)>;
        const N& y = std::get<N>(b->v);
        if constexpr (std::is_same_v<N, Number>) {
          return x.value == y.value;
        } else if constexpr (std::is_same_v<N, Variable>) {
          return x.name == y.name;
        } else if constexpr (std::is_same_v<N, Negate>) {
          return same(x.operand, y.operand);
        } else if constexpr (std::is_same_v<N, Binary>) {
          return x.op == y.op && same(x.lhs, y.lhs) && same(x.rhs, y.rhs);
        } else {
          if (x.fn != y.fn || x.args.size() != y.args.size()) return false;
          for (std::size_t i = 0; i < x.args.size(); ++i)
            if (!same(x.args[i], y.args[i])) return false;
          return true;
        }
      },
      a->v);
}

}  // namespace

Expr Expr::constant(double value) { return Expr(std::make_shared<const Node>(Node{Number{value}}), format_number(value)); }

std::set<std::string> Expr::free_vars() const {
  std::set<std::string> out;
  if (root_) collect_vars(root_, out);
  return out;
}

std::string Expr::to_string() const { return root_ ? print(root_) : std::string(); }

bool Expr::structurally_equal(const Expr& other) const {
  if (!root_ || !other.root_) return root_ == other.root_;
  return same(root_, other.root_);
}

bool Expr::is_constant() const { return root_ && std::holds_alternative<Number>(root_->v); }

template <class T>
T Expr::eval(const Env<T>& env) const {
  if (!root_) throw InvalidArgument("evaluating an empty expression");
  Evaluator<T> ev{env};
  if constexpr (!std::is_same_v<T, double>) {
    for (const auto& [name, value] : env) {
      if (!value.empty()) {
        ev.prototype = &value;
        break;
      }
    }
  }
  return ev(root_);
}

template double Expr::eval<double>(const Env<double>&) const;
template jets::Jet Expr::eval<jets::Jet>(const Env<jets::Jet>&) const;

}  // namespace grw::expr
