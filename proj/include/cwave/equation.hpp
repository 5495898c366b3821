#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "cwave/rational.hpp"

namespace cwave {

// ---------------------------------------------------------------------------
// AST for the 1-D evolution equation mini-language.
//
// An equation is a signed sum of terms equal to zero. Each term is an
// optional coefficient (rational literal and/or one named parameter) times a
// product of derivative-power atoms, optionally wrapped in a parenthesized
// group that carries outer x-derivatives, e.g. (u^2)_xxx. sin(u)/cos(u) are
// supported as sole factors.
// ---------------------------------------------------------------------------

enum class TransKind { None, Sin, Cos };

// One (d^k_x d^j_t u)^power factor.
struct Atom {
  int x_order = 0;
  int t_order = 0;
  int power = 1;

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Term {
  Rational coeff{1};                   // sign included
  std::optional<std::string> symbol;   // declared parameter multiplying coeff
  std::vector<Atom> atoms;             // inner product (empty for trans terms)
  int outer_x_order = 0;               // x-derivatives applied to the product
  TransKind trans = TransKind::None;   // sin(u) / cos(u), sole factor

  int total_u_power() const;       // sum of atom powers (1 for trans)
  int x_derivative_order() const;  // outer + sum p*(atom x_order)
  int t_derivative_order() const;  // sum p*(atom t_order)
  int total_derivative_order() const { return x_derivative_order() + t_derivative_order(); }
  std::string print() const;       // without leading sign
};

struct EquationAST {
  std::vector<Term> terms;
  std::set<std::string> parameters;  // symbols referenced by the terms
  std::string source_text;

  std::string print() const;  // canonical homogeneous form "... = 0"
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " (at offset " + std::to_string(offset) + ")"),
        offset_(offset) {}
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct ParseOptions {
  // When set, identifiers outside this set are rejected; when unset,
  // identifiers are collected as symbolic parameters.
  std::optional<std::set<std::string>> declared_parameters;
  int max_derivative_order = 6;
};

EquationAST parse_equation(std::string_view text, const ParseOptions& opts = {});

// ---------------------------------------------------------------------------
// Capability validation and family recognition
// ---------------------------------------------------------------------------

enum class Family {
  LinearWave,
  KdV,
  MKdV,
  K22,
  Knn,
  Knm,
  NLS,
  SineGordon,
  K212,
  CurvatureKdV,
  Unknown,
};

std::string family_name(Family f);

struct FamilyMatch {
  Family family = Family::Unknown;
  int n = 0;  // convection power (NLS order for NLS)
  int m = 0;  // dispersion power
  // True when the equation matches the family shape up to coefficient values
  // (e.g. KdV with convection coefficient != 6).
  bool canonical_coefficients = true;
};

FamilyMatch match_family(const EquationAST& ast);

struct ValidationReport {
  bool similarity = true;  // the scaling substitution applies to any parsed AST
  bool simulate = false;   // conservation-form K(n,m)-like equations only
  std::optional<std::string> closed_form;  // recognized family, if any
  std::vector<std::string> warnings;
};

ValidationReport validate(const EquationAST& ast);

// Conservation form u_t = -d/dx[ F(u) + d^2/dx^2 G(u) ] with polynomial
// F, G. Present only when every non-time term can be brought to that shape.
struct FluxForm {
  std::vector<std::pair<double, int>> convective;  // (coefficient, power)
  std::vector<std::pair<double, int>> dispersive;
};

std::optional<FluxForm> to_conservation_form(const EquationAST& ast,
                                             const std::map<std::string, double>& bindings = {});

// Multiplies each term's coefficient by s^(-x_derivative_order). Under the
// scaling algebra this sends width roots at velocity V to (1/s) times the
// roots of the original relation at velocity s*V.
EquationAST scale_x(const EquationAST& ast, const Rational& s);

// Built-in equation aliases (KdV, MKdV, MKdV6, K22, Knn:n, Knm:n,m, NLS:n,
// SG, K212, CurvKdV, LinWave). Returns the DSL string, or nullopt when the
// name is not an alias (callers then treat it as a raw DSL string).
std::optional<std::string> alias_to_dsl(const std::string& alias);

}  // namespace cwave
