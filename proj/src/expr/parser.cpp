#include <cctype>
#include <charconv>
#include <optional>

#include "grw/expr/expr.hpp"

namespace grw::expr {

ParseError::ParseError(std::size_t offset, std::string message, std::set<std::string> expected)
    : Error("parse error at offset " + std::to_string(offset) + ": " + message),
      offset_(offset),
      message_(std::move(message)),
      expected_(std::move(expected)) {}

std::string_view function_name(Function fn) {
  switch (fn) {
    case Function::exp: return "exp";
    case Function::log: return "log";
    case Function::sqrt: return "sqrt";
    case Function::sin: return "sin";
    case Function::cos: return "cos";
    case Function::sinh: return "sinh";
    case Function::cosh: return "cosh";
    case Function::pow: return "pow";
  }
  return "?";
}

namespace {

std::optional<Function> lookup_function(std::string_view name) {
  for (Function fn : {Function::exp, Function::log, Function::sqrt, Function::sin, Function::cos, Function::sinh,
                      Function::cosh, Function::pow}) {
    if (function_name(fn) == name) return fn;
  }
  return std::nullopt;
}

NodePtr make(Node n) { return std::make_shared<const Node>(std::move(n)); }

const std::set<std::string> kOperandStart = {"number", "identifier", "(", "-"};

class Parser {
 public:
  explicit Parser(std::string_view src) : src_(src) {}

  NodePtr parse_all() {
    NodePtr e = parse_expr();
    skip_ws();
    if (pos_ != src_.size()) throw ParseError(pos_, "unexpected trailing input", {"+", "-", "*", "/", "^", "end"});
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    while (true) {
      if (accept('+')) {
        lhs = make({Binary{BinaryOp::add, lhs, parse_term()}});
      } else if (accept('-')) {
        lhs = make({Binary{BinaryOp::sub, lhs, parse_term()}});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    while (true) {
      if (accept('*')) {
        lhs = make({Binary{BinaryOp::mul, lhs, parse_unary()}});
      } else if (accept('/')) {
        lhs = make({Binary{BinaryOp::div, lhs, parse_unary()}});
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (accept('-')) return make({Negate{parse_unary()}});
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (accept('^')) return make({Binary{BinaryOp::pow, base, parse_unary()}});
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= src_.size()) throw ParseError(pos_, "unexpected end of input", kOperandStart);
    const char c = src_[pos_];
    if (c == '(') {
      ++pos_;
      NodePtr inner = parse_expr();
      if (!accept(')')) throw ParseError(pos_, "expected ')'", {")"});
      return inner;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_identifier();
    throw ParseError(pos_, std::string("unexpected character '") + c + "'", kOperandStart);
  }

  NodePtr parse_number() {
    const std::size_t start = pos_;
    auto digits = [&] {
      while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    };
    digits();
    if (pos_ < src_.size() && src_[pos_] == '.') {
      ++pos_;
      digits();
    }
    if (pos_ < src_.size() && (src_[pos_] == 'e' || src_[pos_] == 'E')) {
      std::size_t save = pos_++;
      if (pos_ < src_.size() && (src_[pos_] == '+' || src_[pos_] == '-')) ++pos_;
      if (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_]))) {
        digits();
      } else {
        pos_ = save;  // 'e' belongs to something else; let the caller complain
      }
    }
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(src_.data() + start, src_.data() + pos_, value);
    if (ec != std::errc() || ptr != src_.data() + pos_) throw ParseError(start, "malformed number", {"number"});
    return make({Number{value}});
  }

  NodePtr parse_identifier() {
    const std::size_t start = pos_;
    while (pos_ < src_.size() && (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_')) ++pos_;
    std::string name(src_.substr(start, pos_ - start));
    skip_ws();
    if (pos_ < src_.size() && src_[pos_] == '(') {
      const auto fn = lookup_function(name);
      if (!fn) {
        throw ParseError(start, "unknown function '" + name + "'",
                         {"exp", "log", "sqrt", "sin", "cos", "sinh", "cosh", "pow"});
      }
      ++pos_;
      std::vector<NodePtr> args;
      args.push_back(parse_expr());
      while (accept(',')) args.push_back(parse_expr());
      if (!accept(')')) throw ParseError(pos_, "expected ')' or ','", {")", ","});
      const std::size_t arity = *fn == Function::pow ? 2 : 1;
      if (args.size() != arity) {
        throw ParseError(start, "function '" + name + "' takes " + std::to_string(arity) + " argument(s)",
                         {std::to_string(arity) + " argument(s)"});
      }
      return make({Call{*fn, std::move(args)}});
    }
    return make({Variable{std::move(name)}});
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view source) {
  Parser p(source);
  return Expr(p.parse_all(), std::string(source));
}

}  // namespace grw::expr
