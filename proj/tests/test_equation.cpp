#include <set>
#include <string>

#include "cwave/equation.hpp"
#include "doctest.h"

using namespace cwave;

namespace {

bool ast_equal(const EquationAST& a, const EquationAST& b) {
  if (a.terms.size() != b.terms.size()) return false;
  for (std::size_t i = 0; i < a.terms.size(); ++i) {
    const Term& x = a.terms[i];
    const Term& y = b.terms[i];
    if (!(x.coeff == y.coeff) || x.symbol != y.symbol || x.outer_x_order != y.outer_x_order ||
        x.trans != y.trans || x.atoms != y.atoms)
      return false;
  }
  return true;
}

}  // namespace

TEST_CASE("K(2,2) parses into three terms with the grouped dispersion") {
  const auto ast = parse_equation("u_t + (u^2)_x + (u^2)_xxx = 0");
  REQUIRE(ast.terms.size() == 3);

  CHECK(ast.terms[0].atoms.size() == 1);
  CHECK(ast.terms[0].atoms[0].t_order == 1);
  CHECK(ast.terms[0].atoms[0].x_order == 0);

  CHECK(ast.terms[1].outer_x_order == 1);
  CHECK(ast.terms[1].atoms.size() == 1);
  CHECK(ast.terms[1].atoms[0].power == 2);

  CHECK(ast.terms[2].outer_x_order == 3);
  CHECK(ast.terms[2].atoms[0].power == 2);
}

TEST_CASE("degenerate single-term equation parses") {
  const auto ast = parse_equation("u_t = 0");
  CHECK(ast.terms.size() == 1);
  CHECK(ast.terms[0].atoms[0].t_order == 1);
}

TEST_CASE("sine-Gordon parses with the mixed derivative and a sin term") {
  const auto ast = parse_equation("u_xt - sin(u) = 0");
  REQUIRE(ast.terms.size() == 2);
  CHECK(ast.terms[0].atoms[0].x_order == 1);
  CHECK(ast.terms[0].atoms[0].t_order == 1);
  CHECK(ast.terms[1].trans == TransKind::Sin);
  CHECK(ast.terms[1].coeff.negative());
}

TEST_CASE("print-parse round trip is structural identity across the grammar") {
  const std::vector<std::string> sources = {
      "u_t + 6*u*u_x + u_xxx = 0",
      "u_t + u^2*u_x + u_xxx = 0",
      "u_t + (u^2)_x + (u^2)_xxx = 0",
      "u_t + (u^3)_x + (u^3)_xxx = 0",
      "u_t + (u^3)_x + (u^2)_xxx = 0",
      "u_xt - sin(u) = 0",
      "u_t + u_xx + u^3 = 0",
      "u_t + (u^2)_x + u_xxx + eps*(u^2)_xxx = 0",
      "u_t + u*u_x + u_xxx + eps*(u_xx^2)_x = 0",
      "u_xx - csq*u_tt = 0",
      "u_t - 0.5*u_xx + 2*cos(u) = 0",
      "u_t = 0",
  };
  for (const auto& src : sources) {
    CAPTURE(src);
    const auto ast = parse_equation(src);
    const auto reparsed = parse_equation(ast.print());
    CHECK(ast_equal(ast, reparsed));
    // idempotence of the canonical printing
    CHECK(ast.print() == reparsed.print());
  }
}

TEST_CASE("every published-table family string parses") {
  const std::vector<std::string> aliases = {"LinWave", "KdV",   "MKdV", "K22",
                                            "Knn:3",   "Knm:2,3", "SG",   "NLS:3"};
  for (const auto& alias : aliases) {
    CAPTURE(alias);
    const auto dsl = alias_to_dsl(alias);
    REQUIRE(dsl.has_value());
    CHECK_NOTHROW(parse_equation(*dsl));
  }
}

TEST_CASE("parser rejects a second dependent variable with an offset") {
  try {
    parse_equation("u_t + v*v_x = 0", {std::set<std::string>{}, 6});
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.offset() == 6);  // the 'v' coefficient position
  }
}

TEST_CASE("parser rejects derivative orders above the configured maximum") {
  CHECK_THROWS_AS(parse_equation("u_t + u_xxxxxxx = 0"), ParseError);
  try {
    parse_equation("u_t + u_xxxxxxx = 0");
  } catch (const ParseError& e) {
    CHECK(e.offset() > 0);
  }
  // configurable maximum
  ParseOptions opts;
  opts.max_derivative_order = 2;
  CHECK_THROWS_AS(parse_equation("u_t + u_xxx = 0", opts), ParseError);
}

TEST_CASE("undeclared parameters are rejected when a declaration set is given") {
  ParseOptions opts;
  opts.declared_parameters = std::set<std::string>{"eps"};
  CHECK_NOTHROW(parse_equation("u_t + eps*(u^2)_xxx = 0", opts));
  CHECK_THROWS_AS(parse_equation("u_t + mu*(u^2)_xxx = 0", opts), ParseError);
}

TEST_CASE("structural rejects: two time terms, trans with powers, rhs != 0") {
  CHECK_THROWS_AS(parse_equation("u_t + u_t = 0"), ParseError);
  CHECK_THROWS_AS(parse_equation("u_t + sin(u^2) = 0"), ParseError);
  CHECK_THROWS_AS(parse_equation("u_t + u = 1"), ParseError);
  CHECK_THROWS_AS(parse_equation("u_t + (u^2)_t = 0"), ParseError);
  CHECK_THROWS_AS(parse_equation("u_t + (u^2)_x^2 = 0"), ParseError);
}

TEST_CASE("validate reports capabilities per family") {
  const auto k22 = validate(parse_equation(*alias_to_dsl("K22")));
  CHECK(k22.similarity);
  CHECK(k22.simulate);
  CHECK(k22.closed_form == "K(2,2)");

  const auto sg = validate(parse_equation(*alias_to_dsl("SG")));
  CHECK(sg.similarity);
  CHECK_FALSE(sg.simulate);
  CHECK(sg.closed_form == "sine-Gordon");

  const auto curv = validate(parse_equation("u_t + eps*(u_xx^2)_x = 0"));
  CHECK(curv.similarity);
  CHECK_FALSE(curv.simulate);
}

TEST_CASE("conservation-form extraction handles grouped, bare and product terms") {
  const auto kdv = to_conservation_form(parse_equation(*alias_to_dsl("KdV")));
  REQUIRE(kdv.has_value());
  REQUIRE(kdv->convective.size() == 1);
  CHECK(kdv->convective[0].first == doctest::Approx(3.0));  // 6*u*u_x == 3*(u^2)_x
  CHECK(kdv->convective[0].second == 2);
  REQUIRE(kdv->dispersive.size() == 1);
  CHECK(kdv->dispersive[0].second == 1);

  const auto k22 = to_conservation_form(parse_equation(*alias_to_dsl("K22")));
  REQUIRE(k22.has_value());
  CHECK(k22->convective[0].second == 2);
  CHECK(k22->dispersive[0].second == 2);

  // symbolic dispersion binds through
  const auto k212 = to_conservation_form(parse_equation(*alias_to_dsl("K212")), {{"eps", 0.25}});
  REQUIRE(k212.has_value());
  CHECK(k212->dispersive.size() == 2);
}

TEST_CASE("family recognition") {
  CHECK(match_family(parse_equation(*alias_to_dsl("KdV"))).family == Family::KdV);
  CHECK(match_family(parse_equation(*alias_to_dsl("MKdV"))).family == Family::MKdV);
  CHECK(match_family(parse_equation(*alias_to_dsl("K22"))).family == Family::K22);
  CHECK(match_family(parse_equation(*alias_to_dsl("Knn:3"))).family == Family::Knn);
  CHECK(match_family(parse_equation(*alias_to_dsl("Knm:2,3"))).family == Family::Knm);
  CHECK(match_family(parse_equation(*alias_to_dsl("NLS:4"))).family == Family::NLS);
  CHECK(match_family(parse_equation(*alias_to_dsl("NLS:4"))).n == 4);
  CHECK(match_family(parse_equation(*alias_to_dsl("SG"))).family == Family::SineGordon);
  CHECK(match_family(parse_equation(*alias_to_dsl("K212"))).family == Family::K212);
  CHECK(match_family(parse_equation(*alias_to_dsl("CurvKdV"))).family == Family::CurvatureKdV);
  CHECK(match_family(parse_equation(*alias_to_dsl("LinWave"))).family == Family::LinearWave);
}
