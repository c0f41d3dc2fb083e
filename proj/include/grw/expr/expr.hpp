#pragma once

// Scalar expressions for warping functions, fiber metric entries and graph
// functions. One grammar, evaluated over any carrier that provides the
// arithmetic and elementary-function set (double or jets::Jet).
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | power
//   power   := primary ('^' unary)?          right-associative
//   primary := number | identifier | identifier '(' args ')' | '(' expr ')'
//
// Numbers accept decimal and scientific notation (1e-3). Functions: exp, log,
// sqrt, sin, cos, sinh, cosh (one argument) and pow (two arguments).

#include <map>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "grw/error.hpp"
#include "grw/jets/jet.hpp"

namespace grw::expr {

class ParseError : public Error {
 public:
  ParseError(std::size_t offset, std::string message, std::set<std::string> expected);

  std::size_t offset() const { return offset_; }
  const std::string& message() const { return message_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::string message_;
  std::set<std::string> expected_;
};

/// A free variable had no binding in the evaluation environment.
class UnboundVariable : public Error {
 public:
  using Error::Error;
};

enum class BinaryOp { add, sub, mul, div, pow };
enum class Function { exp, log, sqrt, sin, cos, sinh, cosh, pow };

struct Node;
using NodePtr = std::shared_ptr<const Node>;

struct Number {
  double value;
};
struct Variable {
  std::string name;
};
struct Negate {
  NodePtr operand;
};
struct Binary {
  BinaryOp op;
  NodePtr lhs, rhs;
};
struct Call {
  Function fn;
  std::vector<NodePtr> args;
};

struct Node {
  std::variant<Number, Variable, Negate, Binary, Call> v;
};

template <class T>
using Env = std::map<std::string, T, std::less<>>;

class Expr {
 public:
  Expr() = default;
  explicit Expr(NodePtr root, std::string source = {}) : root_(std::move(root)), source_(std::move(source)) {}

  static Expr constant(double value);

  const NodePtr& root() const { return root_; }
  /// Source text this expression was parsed from (empty if built in code).
  const std::string& source() const { return source_; }

  std::set<std::string> free_vars() const;
  /// Fully parenthesized form; parses back to a structurally identical tree.
  std::string to_string() const;
  bool structurally_equal(const Expr& other) const;
  /// True when the tree is a single numeric literal.
  bool is_constant() const;

  template <class T>
  T eval(const Env<T>& env) const;

 private:
  NodePtr root_;
  std::string source_;
};

Expr parse(std::string_view source);

std::string_view function_name(Function fn);

}  // namespace grw::expr
