#include "cwave/equation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdint>
#include <sstream>

namespace cwave {

namespace {

// ---------------------------------------------------------------------------
// Lexer
// ---------------------------------------------------------------------------

enum class Tok {
  Number,
  Ident,       // identifier other than the reserved ones below
  U,
  Sin,
  Cos,
  Subscript,   // _xxt...
  Caret,
  Star,
  Plus,
  Minus,
  LParen,
  RParen,
  Equals,
  End,
};

struct Token {
  Tok kind = Tok::End;
  std::string text;
  Rational number{0};
  std::size_t offset = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  Token next() {
    while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) ++pos_;
    Token t;
    t.offset = pos_;
    if (pos_ >= src_.size()) return t;

    const char c = src_[pos_];
    auto single = [&](Tok k) {
      ++pos_;
      t.kind = k;
      t.text = std::string(1, c);
      return t;
    };
    switch (c) {
      case '^': return single(Tok::Caret);
      case '*': return single(Tok::Star);
      case '+': return single(Tok::Plus);
      case '-': return single(Tok::Minus);
      case '(': return single(Tok::LParen);
      case ')': return single(Tok::RParen);
      case '=': return single(Tok::Equals);
      default: break;
    }

    if (c == '_') {
      ++pos_;
      std::string sub;
      while (pos_ < src_.size() && (src_[pos_] == 'x' || src_[pos_] == 't')) sub += src_[pos_++];
      if (sub.empty()) throw ParseError("expected subscript letters x/t after '_'", t.offset);
      t.kind = Tok::Subscript;
      t.text = sub;
      return t;
    }

    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isdigit(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '.'))
        ++pos_;
      t.kind = Tok::Number;
      t.text = std::string(src_.substr(start, pos_ - start));
      t.number = parse_number(t.text, t.offset);
      return t;
    }

    if (std::isalpha(static_cast<unsigned char>(c))) {
      std::size_t start = pos_;
      while (pos_ < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '\''))
        ++pos_;
      // A trailing subscript belongs to the token only for 'u'; identifiers
      // like "eps" never take subscripts, so '_' simply ends the name.
      t.text = std::string(src_.substr(start, pos_ - start));
      if (t.text == "u")
        t.kind = Tok::U;
      else if (t.text == "sin")
        t.kind = Tok::Sin;
      else if (t.text == "cos")
        t.kind = Tok::Cos;
      else
        t.kind = Tok::Ident;
      return t;
    }

    throw ParseError(std::string("unexpected character '") + c + "'", t.offset);
  }

 private:
  static Rational parse_number(const std::string& s, std::size_t off) {
    const auto dot = s.find('.');
    if (s.find('.', dot + 1) != std::string::npos)
      throw ParseError("malformed number '" + s + "'", off);
    if (dot == std::string::npos) {
      try {
        return Rational(std::stoll(s));
      } catch (const std::exception&) {
        throw ParseError("integer literal out of range", off);
      }
    }
    const std::string whole = s.substr(0, dot);
    const std::string frac = s.substr(dot + 1);
    if (frac.size() > 15) throw ParseError("too many decimal digits", off);
    std::int64_t den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    const std::int64_t w = whole.empty() ? 0 : std::stoll(whole);
    const std::int64_t f = frac.empty() ? 0 : std::stoll(frac);
    return Rational(w * den + f, den);
  }

  std::string_view src_;
  std::size_t pos_ = 0;
};

// ---------------------------------------------------------------------------
// Parser (recursive descent over the term/factor grammar)
// ---------------------------------------------------------------------------

struct PowFactor {
  Atom atom;  // power applied
};

class Parser {
 public:
  Parser(std::string_view src, const ParseOptions& opts) : lex_(src), opts_(opts), src_(src) {
    advance();
  }

  EquationAST parse() {
    EquationAST ast;
    ast.source_text = std::string(src_);

    int sign = +1;
    if (cur_.kind == Tok::Plus) advance();
    else if (cur_.kind == Tok::Minus) { sign = -1; advance(); }
    ast.terms.push_back(parse_term(sign, ast));
    while (cur_.kind == Tok::Plus || cur_.kind == Tok::Minus) {
      sign = cur_.kind == Tok::Plus ? +1 : -1;
      advance();
      ast.terms.push_back(parse_term(sign, ast));
    }
    expect(Tok::Equals, "expected '=' after the term list");
    if (cur_.kind != Tok::Number || !cur_.number.is_zero())
      throw ParseError("right-hand side must be 0", cur_.offset);
    advance();
    expect(Tok::End, "trailing input after '= 0'");

    check_semantics(ast);
    return ast;
  }

 private:
  void advance() { cur_ = lex_.next(); }

  void expect(Tok k, const char* msg) {
    if (cur_.kind != k) throw ParseError(msg, cur_.offset);
    advance();
  }

  int parse_exponent() {
    if (cur_.kind != Tok::Number || !cur_.number.is_integer() || cur_.number.num() < 1)
      throw ParseError("exponent must be a positive integer", cur_.offset);
    const int p = static_cast<int>(cur_.number.num());
    advance();
    return p;
  }

  Atom parse_subscript(std::size_t off, const std::string& sub) {
    Atom a;
    for (char c : sub) (c == 'x' ? a.x_order : a.t_order)++;
    if (a.x_order + a.t_order > opts_.max_derivative_order)
      throw ParseError("derivative order exceeds the configured maximum (" +
                           std::to_string(opts_.max_derivative_order) + ")",
                       off);
    return a;
  }

  // pow := base ["^" integer], base := "u" ["_" sub] — the bare-u production.
  PowFactor parse_u_pow() {
    const std::size_t off = cur_.offset;
    expect(Tok::U, "expected 'u'");
    Atom a;
    if (cur_.kind == Tok::Subscript) {
      a = parse_subscript(cur_.offset, cur_.text);
      advance();
    }
    if (cur_.kind == Tok::Caret) {
      advance();
      a.power = parse_exponent();
    }
    (void)off;
    return PowFactor{a};
  }

  // Parses one factor into the term under construction. Returns false when
  // the factor was a transcendental (which must remain the sole factor).
  void parse_factor(Term& term, bool& saw_group, bool& saw_trans) {
    if (cur_.kind == Tok::Sin || cur_.kind == Tok::Cos) {
      const TransKind k = cur_.kind == Tok::Sin ? TransKind::Sin : TransKind::Cos;
      const std::size_t off = cur_.offset;
      advance();
      expect(Tok::LParen, "expected '(' after sin/cos");
      if (cur_.kind != Tok::U)
        throw ParseError("transcendental factors take a bare 'u'", cur_.offset);
      advance();
      if (cur_.kind == Tok::Subscript || cur_.kind == Tok::Caret)
        throw ParseError("transcendental factors take a bare 'u'", cur_.offset);
      expect(Tok::RParen, "expected ')'");
      if (!term.atoms.empty() || saw_trans)
        throw ParseError("sin/cos must be the sole factor of a term", off);
      term.trans = k;
      saw_trans = true;
      return;
    }

    if (cur_.kind == Tok::LParen) {
      const std::size_t off = cur_.offset;
      advance();
      std::vector<Atom> inner;
      inner.push_back(parse_u_pow().atom);
      while (cur_.kind == Tok::Star) {
        advance();
        inner.push_back(parse_u_pow().atom);
      }
      expect(Tok::RParen, "expected ')'");
      int outer = 0;
      if (cur_.kind == Tok::Subscript) {
        const Atom sub = parse_subscript(cur_.offset, cur_.text);
        if (sub.t_order > 0)
          throw ParseError("time derivatives of a product are not supported", cur_.offset);
        outer = sub.x_order;
        advance();
      }
      if (outer > 0) {
        if (cur_.kind == Tok::Caret)
          throw ParseError("powers of a derived product are not supported", cur_.offset);
        if (!term.atoms.empty() || saw_trans || saw_group)
          throw ParseError("a derived product must be the sole factor of its term", off);
        term.atoms = inner;
        term.outer_x_order = outer;
        saw_group = true;
        return;
      }
      int p = 1;
      if (cur_.kind == Tok::Caret) {
        advance();
        p = parse_exponent();
      }
      for (Atom a : inner) {
        a.power *= p;
        term.atoms.push_back(a);
      }
      return;
    }

    if (cur_.kind == Tok::U) {
      term.atoms.push_back(parse_u_pow().atom);
      return;
    }

    if (cur_.kind == Tok::Ident)
      throw ParseError("unexpected identifier '" + cur_.text +
                           "' (only the dependent variable 'u' may appear in factors)",
                       cur_.offset);
    throw ParseError("expected a factor", cur_.offset);
  }

  Term parse_term(int sign, EquationAST& ast) {
    Term term;
    term.coeff = Rational(sign);

    // Optional coefficient: number and/or one named parameter, '*'-joined.
    bool more = true;
    while (more) {
      more = false;
      if (cur_.kind == Tok::Number) {
        const Token num = cur_;
        advance();
        if (cur_.kind != Tok::Star)
          throw ParseError("a numeric literal must multiply a factor", num.offset);
        advance();
        term.coeff = term.coeff * num.number;
        more = true;
      } else if (cur_.kind == Tok::Ident) {
        const Token id = cur_;
        advance();
        if (cur_.kind != Tok::Star)
          throw ParseError("unexpected identifier '" + id.text + "'", id.offset);
        advance();
        if (term.symbol)
          throw ParseError("at most one parameter symbol per term", id.offset);
        if (opts_.declared_parameters &&
            opts_.declared_parameters->find(id.text) == opts_.declared_parameters->end())
          throw ParseError("undeclared parameter symbol '" + id.text + "'", id.offset);
        term.symbol = id.text;
        ast.parameters.insert(id.text);
        more = true;
      }
    }

    bool saw_group = false;
    bool saw_trans = false;
    parse_factor(term, saw_group, saw_trans);
    while (cur_.kind == Tok::Star) {
      if (saw_group)
        throw ParseError("a derived product must be the sole factor of its term", cur_.offset);
      advance();
      parse_factor(term, saw_group, saw_trans);
    }
    if (term.coeff.is_zero()) throw ParseError("zero coefficient", 0);
    return term;
  }

  void check_semantics(const EquationAST& ast) {
    int time_terms = 0;
    for (const auto& term : ast.terms) {
      const bool has_t =
          std::any_of(term.atoms.begin(), term.atoms.end(), [](const Atom& a) { return a.t_order > 0; });
      if (!has_t) continue;
      ++time_terms;
      if (term.atoms.size() != 1 || term.trans != TransKind::None)
        throw ParseError("the time-derivative term must be a single factor", 0);
      const Atom& a = term.atoms.front();
      if (a.power != 1 || term.outer_x_order != 0)
        throw ParseError("the time-derivative term must be a plain u_t/u_xt/u_tt", 0);
      if (a.t_order > 2 || a.x_order > 1 || a.t_order + a.x_order > 2)
        throw ParseError("unsupported time-derivative shape", 0);
    }
    if (time_terms != 1)
      throw ParseError("the equation must contain exactly one time-derivative term", 0);
  }

  Lexer lex_;
  Token cur_;
  ParseOptions opts_;
  std::string_view src_;
};

// Grammar-compatible coefficient rendering: integers as-is, dyadic/decimal
// denominators as exact decimals.
std::string coeff_str(const Rational& c) {
  if (c.is_integer()) return std::to_string(c.num());
  std::int64_t den = c.den();
  int twos = 0, fives = 0;
  while (den % 2 == 0) { den /= 2; ++twos; }
  while (den % 5 == 0) { den /= 5; ++fives; }
  if (den == 1) {
    const int k = std::max(twos, fives);
    unsigned long long scaled = static_cast<unsigned long long>(std::llabs(c.num()));
    for (int i = 0; i < k; ++i) scaled *= 10ull;
    scaled /= static_cast<unsigned long long>(c.den());
    std::string digits = std::to_string(scaled);
    if (static_cast<int>(digits.size()) <= k)
      digits.insert(0, k + 1 - digits.size(), '0');
    digits.insert(digits.size() - k, ".");
    return (c.num() < 0 ? "-" : "") + digits;
  }
  return c.str();
}

std::string atom_str(const Atom& a) {
  std::string s = "u";
  if (a.x_order + a.t_order > 0) {
    s += "_";
    s += std::string(a.x_order, 'x');
    s += std::string(a.t_order, 't');
  }
  if (a.power != 1) s += "^" + std::to_string(a.power);
  return s;
}

}  // namespace

int Term::total_u_power() const {
  if (trans != TransKind::None) return 1;
  int m = 0;
  for (const auto& a : atoms) m += a.power;
  return m;
}

int Term::x_derivative_order() const {
  int d = outer_x_order;
  for (const auto& a : atoms) d += a.power * a.x_order;
  return d;
}

int Term::t_derivative_order() const {
  int d = 0;
  for (const auto& a : atoms) d += a.power * a.t_order;
  return d;
}

std::string Term::print() const {
  std::string s;
  const Rational c = coeff.abs();
  const bool explicit_coeff = !c.is_one() || (atoms.empty() && trans == TransKind::None);
  if (explicit_coeff) s += coeff_str(c);
  if (symbol) {
    if (!s.empty()) s += "*";
    s += *symbol;
  }
  std::string body;
  if (trans == TransKind::Sin) body = "sin(u)";
  else if (trans == TransKind::Cos) body = "cos(u)";
  else if (outer_x_order > 0) {
    body = "(";
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i) body += "*";
      body += atom_str(atoms[i]);
    }
    body += ")_" + std::string(outer_x_order, 'x');
  } else {
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (i) body += "*";
      body += atom_str(atoms[i]);
    }
  }
  if (!body.empty()) {
    if (!s.empty()) s += "*";
    s += body;
  }
  return s;
}

std::string EquationAST::print() const {
  std::string s;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const bool neg = terms[i].coeff.negative();
    if (i == 0) s += neg ? "-" : "";
    else s += neg ? " - " : " + ";
    s += terms[i].print();
  }
  s += " = 0";
  return s;
}

EquationAST parse_equation(std::string_view text, const ParseOptions& opts) {
  return Parser(text, opts).parse();
}

// ---------------------------------------------------------------------------
// Family recognition
// ---------------------------------------------------------------------------

namespace {

struct TermShape {
  const Term* term;
  bool is_time = false;
};

// The non-time term is c*(u^p)_x / c*(u^p)_xxx in either grouped or bare
// form; bare u_x / u_xxx count as p = 1.
struct PowerDeriv {
  int power = 0;
  int order = 0;     // total x-derivative order
  Rational coeff{0};
  bool symbolic = false;  // carries a parameter
  std::string symbol;
};

std::optional<PowerDeriv> as_power_derivative(const Term& t) {
  if (t.trans != TransKind::None) return std::nullopt;
  PowerDeriv pd;
  pd.coeff = t.coeff;
  if (t.symbol) { pd.symbolic = true; pd.symbol = *t.symbol; }
  if (t.atoms.size() == 1 && t.outer_x_order == 0 && t.atoms[0].t_order == 0) {
    // bare u^p (order 0) or u_x.. with power 1
    const Atom& a = t.atoms[0];
    if (a.x_order > 0 && a.power != 1) return std::nullopt;
    pd.power = a.power;
    pd.order = a.x_order;
    return pd;
  }
  if (t.atoms.size() == 1 && t.outer_x_order > 0 && t.atoms[0].x_order == 0 &&
      t.atoms[0].t_order == 0) {
    pd.power = t.atoms[0].power;
    pd.order = t.outer_x_order;
    return pd;
  }
  // c * u^k * u_x  ==  c/(k+1) * (u^{k+1})_x
  if (t.outer_x_order == 0 && t.atoms.size() == 2) {
    const Atom *plain = nullptr, *deriv = nullptr;
    for (const Atom& a : t.atoms) {
      if (a.x_order == 0 && a.t_order == 0) plain = &a;
      else if (a.x_order == 1 && a.t_order == 0 && a.power == 1) deriv = &a;
    }
    if (plain && deriv) {
      pd.power = plain->power + 1;
      pd.order = 1;
      pd.coeff = t.coeff / Rational(plain->power + 1);
      return pd;
    }
  }
  return std::nullopt;
}

bool is_time_term(const Term& t, int x_order, int t_order) {
  return t.trans == TransKind::None && t.outer_x_order == 0 && t.atoms.size() == 1 &&
         t.atoms[0].power == 1 && t.atoms[0].x_order == x_order && t.atoms[0].t_order == t_order;
}

}  // namespace

std::string family_name(Family f) {
  switch (f) {
    case Family::LinearWave: return "linear-wave";
    case Family::KdV: return "KdV";
    case Family::MKdV: return "MKdV";
    case Family::K22: return "K(2,2)";
    case Family::Knn: return "K(n,n)";
    case Family::Knm: return "K(n,m)";
    case Family::NLS: return "NLS";
    case Family::SineGordon: return "sine-Gordon";
    case Family::K212: return "K(2,1,2)";
    case Family::CurvatureKdV: return "curvature-KdV";
    case Family::Unknown: return "unknown";
  }
  return "unknown";
}

FamilyMatch match_family(const EquationAST& ast) {
  FamilyMatch fm;
  const auto& terms = ast.terms;

  // sine-Gordon: u_xt - sin(u) (any signs/coefficients)
  if (terms.size() == 2) {
    const Term *time = nullptr, *trans = nullptr;
    for (const auto& t : terms) {
      if (is_time_term(t, 1, 1)) time = &t;
      if (t.trans == TransKind::Sin) trans = &t;
    }
    if (time && trans) {
      fm.family = Family::SineGordon;
      fm.canonical_coefficients = time->coeff.is_one() && trans->coeff == Rational(-1);
      return fm;
    }
  }

  // linear wave: u_xx + c*u_tt
  if (terms.size() == 2) {
    const Term *xx = nullptr, *tt = nullptr;
    for (const auto& t : terms) {
      if (is_time_term(t, 0, 2)) tt = &t;
      if (t.trans == TransKind::None && t.outer_x_order == 0 && t.atoms.size() == 1 &&
          t.atoms[0].power == 1 && t.atoms[0].x_order == 2 && t.atoms[0].t_order == 0)
        xx = &t;
    }
    if (xx && tt) {
      fm.family = Family::LinearWave;
      return fm;
    }
  }

  // Everything else starts with a plain u_t term.
  const Term* time = nullptr;
  std::vector<const Term*> rest;
  for (const auto& t : terms) {
    if (is_time_term(t, 0, 1) && !time) time = &t;
    else rest.push_back(&t);
  }
  if (!time) return fm;

  // NLS(n): u_t + u_xx + u^n
  if (rest.size() == 2) {
    const Term *xx = nullptr, *pw = nullptr;
    for (const Term* t : rest) {
      auto pd = as_power_derivative(*t);
      if (!pd || pd->symbolic) continue;
      if (pd->order == 2 && pd->power == 1) xx = t;
      else if (pd->order == 0 && pd->power >= 2) pw = t;
    }
    if (xx && pw) {
      fm.family = Family::NLS;
      fm.n = pw->atoms[0].power;
      fm.canonical_coefficients = time->coeff.is_one() && xx->coeff.is_one() && pw->coeff.is_one();
      return fm;
    }
  }

  // Convection + dispersion families.
  std::optional<PowerDeriv> conv, disp, disp2, curv;
  bool unmatched = false;
  for (const Term* t : rest) {
    // curvature term eps*(u_xx^2)_x
    if (t->outer_x_order == 1 && t->atoms.size() == 1 && t->atoms[0].x_order == 2 &&
        t->atoms[0].t_order == 0 && t->atoms[0].power == 2) {
      curv = PowerDeriv{2, 5, t->coeff, t->symbol.has_value(), t->symbol.value_or("")};
      continue;
    }
    auto pd = as_power_derivative(*t);
    if (!pd) { unmatched = true; continue; }
    if (pd->order == 1) conv = pd;
    else if (pd->order == 3 && !disp) disp = pd;
    else if (pd->order == 3) disp2 = pd;
    else unmatched = true;
  }
  if (unmatched || !conv) return fm;

  if (curv && disp && !disp2 && conv->power == 2 && disp->power == 1) {
    // u_t + u*u_x + u_xxx + eps*(u_xx^2)_x; conv->power==2 because u*u_x
    // rewrites to (u^2)_x/2.
    fm.family = Family::CurvatureKdV;
    return fm;
  }
  if (curv) return fm;

  if (disp && disp2) {
    const PowerDeriv& lin = disp->power == 1 ? *disp : *disp2;
    const PowerDeriv& quad = disp->power == 1 ? *disp2 : *disp;
    if (lin.power == 1 && quad.power == 2 && conv->power == 2) {
      fm.family = Family::K212;
      return fm;
    }
    return fm;
  }
  if (!disp) return fm;

  const int n = conv->power;
  const int m = disp->power;
  fm.n = n;
  fm.m = m;
  if (m == 1) {
    if (n == 2) {
      fm.family = Family::KdV;
      fm.canonical_coefficients = conv->coeff == Rational(3) && disp->coeff.is_one() &&
                                  time->coeff.is_one() && !conv->symbolic;
      // canonical KdV convection 6*u*u_x rewrites to 3*(u^2)_x
      return fm;
    }
    if (n == 3) {
      fm.family = Family::MKdV;
      return fm;
    }
  }
  if (n == 2 && m == 2) { fm.family = Family::K22; return fm; }
  if (n == m) { fm.family = Family::Knn; return fm; }
  fm.family = Family::Knm;
  return fm;
}

ValidationReport validate(const EquationAST& ast) {
  ValidationReport rep;
  const FamilyMatch fm = match_family(ast);
  if (fm.family != Family::Unknown) rep.closed_form = family_name(fm.family);

  rep.simulate = to_conservation_form(ast).has_value();
  if (!rep.simulate)
    rep.warnings.push_back("not a conservation-form K(n,m)-type equation; simulation disabled");
  for (const auto& t : ast.terms) {
    if (t.trans != TransKind::None)
      rep.warnings.push_back("transcendental term present; closed-form evaluation limited");
  }
  return rep;
}

std::optional<FluxForm> to_conservation_form(const EquationAST& ast,
                                             const std::map<std::string, double>& bindings) {
  FluxForm ff;
  const Term* time = nullptr;
  for (const auto& t : ast.terms) {
    if (is_time_term(t, 0, 1)) { time = &t; break; }
  }
  if (!time || !time->coeff.is_one() || time->symbol) return std::nullopt;

  for (const auto& t : ast.terms) {
    if (&t == time) continue;
    auto pd = as_power_derivative(t);
    if (!pd) return std::nullopt;
    double c = pd->coeff.value();
    if (pd->symbolic) {
      auto it = bindings.find(pd->symbol);
      if (it == bindings.end()) return std::nullopt;
      c *= it->second;
    }
    if (pd->order == 1) ff.convective.emplace_back(c, pd->power);
    else if (pd->order == 3) ff.dispersive.emplace_back(c, pd->power);
    else return std::nullopt;
  }
  if (ff.convective.empty() && ff.dispersive.empty()) return std::nullopt;
  return ff;
}

EquationAST scale_x(const EquationAST& ast, const Rational& s) {
  EquationAST out = ast;
  for (auto& t : out.terms) t.coeff = t.coeff * s.pow(-t.x_derivative_order());
  out.source_text = out.print();
  return out;
}

std::optional<std::string> alias_to_dsl(const std::string& alias) {
  auto starts = [&](const char* p) { return alias.rfind(p, 0) == 0; };
  if (alias == "KdV" || alias == "kdv") return "u_t + 6*u*u_x + u_xxx = 0";
  if (alias == "MKdV" || alias == "mkdv") return "u_t + u^2*u_x + u_xxx = 0";
  if (alias == "MKdV6" || alias == "mkdv6") return "u_t + 6*u^2*u_x + u_xxx = 0";
  if (alias == "K22" || alias == "k22") return "u_t + (u^2)_x + (u^2)_xxx = 0";
  if (alias == "SG" || alias == "sg") return "u_xt - sin(u) = 0";
  if (alias == "K212" || alias == "k212") return "u_t + (u^2)_x + u_xxx + eps*(u^2)_xxx = 0";
  if (alias == "CurvKdV" || alias == "curvkdv") return "u_t + u*u_x + u_xxx + eps*(u_xx^2)_x = 0";
  if (alias == "LinWave" || alias == "linwave") return "u_xx - csq*u_tt = 0";
  if (starts("NLS:") || starts("nls:")) {
    const int n = std::stoi(alias.substr(4));
    return "u_t + u_xx + u^" + std::to_string(n) + " = 0";
  }
  if (starts("Knn:") || starts("knn:")) {
    const int n = std::stoi(alias.substr(4));
    const std::string p = std::to_string(n);
    return "u_t + (u^" + p + ")_x + (u^" + p + ")_xxx = 0";
  }
  if (starts("Knm:") || starts("knm:")) {
    const auto comma = alias.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("Knm:n,m expects two integers");
    const int n = std::stoi(alias.substr(4, comma - 4));
    const int m = std::stoi(alias.substr(comma + 1));
    return "u_t + (u^" + std::to_string(n) + ")_x + (u^" + std::to_string(m) + ")_xxx = 0";
  }
  return std::nullopt;
}

}  // namespace cwave
