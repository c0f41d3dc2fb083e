#include <cmath>

#include "doctest.h"
#include "grw/error.hpp"
#include "grw/expr/expr.hpp"
#include "grw/jets/jet.hpp"
#include "support/corpus.hpp"

using grw::expr::Env;
using grw::expr::parse;
using grw::jets::Jet;

namespace {

double eval(const char* src, Env<double> env = {}) { return parse(src).eval(env); }

}  // namespace

TEST_CASE("parse shapes") {
  const auto e = parse("t^(2/3)");
  const auto& b = std::get<grw::expr::Binary>(e.root()->v);
  CHECK(b.op == grw::expr::BinaryOp::pow);
  CHECK(std::get<grw::expr::Variable>(b.lhs->v).name == "t");
  const auto& div = std::get<grw::expr::Binary>(b.rhs->v);
  CHECK(div.op == grw::expr::BinaryOp::div);

  const auto c = parse("exp(t)");
  const auto& call = std::get<grw::expr::Call>(c.root()->v);
  CHECK(call.fn == grw::expr::Function::exp);
  CHECK(call.args.size() == 1);
}

TEST_CASE("parse errors carry offsets") {
  try {
    parse("1 + * 2");
    FAIL("expected a parse error");
  } catch (const grw::expr::ParseError& err) {
    CHECK(err.offset() == 4);
    CHECK(!err.expected().empty());
  }
  CHECK_THROWS_AS(parse("(1 + 2"), grw::expr::ParseError);
  CHECK_THROWS_AS(parse("tan(1)"), grw::expr::ParseError);
  CHECK_THROWS_AS(parse("1 2"), grw::expr::ParseError);
  CHECK_THROWS_AS(parse("pow(1)"), grw::expr::ParseError);
  CHECK_THROWS_AS(parse(""), grw::expr::ParseError);
  try {
    parse("2 +");
  } catch (const grw::expr::ParseError& err) {
    CHECK(err.offset() <= 3);
  }
}

TEST_CASE("evaluation") {
  CHECK(eval("t^(2/3)", {{"t", 8.0}}) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(eval("sqrt(2*a*t)", {{"a", 1.0}, {"t", 2.0}}) == 2.0);
  CHECK(eval("2+3*4") == 14.0);
  CHECK(eval("2^3^2") == 512.0);
  CHECK(eval("-2^2") == -4.0);
  CHECK(eval("1e-3 * 2") == 0.002);
  CHECK(eval("pow(2, 10)") == 1024.0);
  CHECK(eval("8 - 2 - 1") == 5.0);
  CHECK(eval("8 / 2 / 2") == 2.0);
  CHECK_THROWS_AS(eval("t + 1"), grw::expr::UnboundVariable);
  CHECK_THROWS_AS(eval("log(0)"), grw::DomainError);
  CHECK_THROWS_AS(eval("1 / (t - t)", {{"t", 1.0}}), grw::SingularJet);

  Env<Jet> jenv{{"t", Jet::variable(0, 0.0, 1, 2)}};
  const Jet j = parse("exp(t)").eval(jenv);
  for (int k = 0; k <= 2; ++k) CHECK(j.derivative({k}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("free variables") {
  CHECK(parse("2*a*t").free_vars() == std::set<std::string>{"a", "t"});
  CHECK(parse("3.5").free_vars().empty());
  CHECK(parse("x1^2 + x2^2").free_vars() == std::set<std::string>{"x1", "x2"});
}

TEST_CASE("round trip and carrier coherence on the corpus") {
  const auto cases = corpus::build(200, 7);
  const char* extra[] = {"t^(2/3)", "exp(t)", "sqrt(2*a*t)", "-x1^2 - -x2", "cosh(t) / (1 + sinh(t)^2)", "1"};
  for (const char* s : extra) {
    const auto e = parse(s);
    CHECK(parse(e.to_string()).structurally_equal(e));
  }
  for (const auto& c : cases) {
    const auto e = parse(c.source);
    const auto again = parse(e.to_string());
    CHECK(again.structurally_equal(e));

    Env<double> denv;
    Env<Jet> jenv;
    const auto lifted = Jet::lift_point(c.point, 3);
    for (int k = 0; k < c.vars; ++k) {
      denv[corpus::var(k)] = c.point[k];
      jenv[corpus::var(k)] = lifted[k];
    }
    CHECK(e.eval(jenv).value() == e.eval(denv));
  }
}
