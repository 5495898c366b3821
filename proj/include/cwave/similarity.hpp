#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "cwave/equation.hpp"
#include "cwave/rational.hpp"

namespace cwave {

using Bindings = std::map<std::string, double>;
using Branch = std::vector<int>;  // +1 / -1 per sign slot

// One signed monomial coeff * params * A^a * V^v * L^l (l may be negative
// before normalization), optionally times sin(A)/cos(A).
struct ScalingMonomial {
  Rational coeff{1};
  std::map<std::string, int> params;  // parameter -> power
  int a_power = 0;
  int v_power = 0;
  int l_power = 0;
  TransKind trans = TransKind::None;
  int sign_slot = -1;  // -1: fixed sign (cos terms)

  double eval(double A, double V, double L, const Branch& branch, const Bindings& b) const;
  double magnitude(double A, double V, double L, const Bindings& b) const;  // |eval|
};

struct SimilarityRelation {
  std::vector<ScalingMonomial> monomials;  // sum over branch signs == 0
  std::set<std::string> parameters;
  int slot_count = 0;
  std::string source;  // printed equation text

  double eval(double A, double V, double L, const Branch& branch, const Bindings& b = {}) const;
};

// The formal exponential substitution u -> A*exp((x - V*t)/L): a term with
// inner u-power m, t-derivative count j and total derivative count d maps to
// coeff * m^outer_x * A^m * V^j / L^d; sin(u)/cos(u) map to sin(A)/cos(A).
ScalingMonomial scale_term(const Term& term, int slot);

// One monomial per term, then normalized: multiplied through by the highest
// power of L and divided by the smallest common power of A.
SimilarityRelation build_relation(const EquationAST& ast);

std::vector<Branch> enumerate_branches(const SimilarityRelation& rel);
// Representatives modulo global sign flip (first slot pinned to +).
std::vector<Branch> dedupe_branches(const SimilarityRelation& rel);
std::string branch_string(const Branch& b);
Branch parse_branch(const std::string& s, int slot_count);

struct WidthSolution {
  Branch branch;
  std::optional<std::string> closed_form;  // rendered expression for L
  std::vector<double> roots;               // positive, ascending, residual-verified
  bool l_independent = false;  // relation has no L dependence (degenerate)
  bool satisfied = false;      // for l_independent: relation holds for any L
};

// All parameters must be bound. Closed form is emitted when the bound
// relation is polynomial of degree <= 2 in L or in L^2; otherwise roots come
// from bracketing + bisection at 1e-12 relative tolerance.
WidthSolution solve_width(const SimilarityRelation& rel, double A, double V,
                          const Branch& branch, const Bindings& b = {});

// Dense-scan + bisection positive-root finder over the bound relation;
// shared by solve_width's fallback path.
std::vector<double> scan_positive_roots(const SimilarityRelation& rel, double A, double V,
                                        const Branch& branch, const Bindings& b,
                                        int samples = 16384);

struct CurvePoint {
  double A = 0.0;
  double V = 0.0;
  Branch branch;
  std::vector<double> roots;
};

struct CurveTable {
  std::vector<CurvePoint> points;
  std::string to_csv() const;  // header A,V,branch,L1,L2,...; "NA" marks no root
};

CurveTable sweep(const SimilarityRelation& rel, const std::vector<double>& A_list,
                 double V_lo, double V_hi, int samples, const Bindings& b = {},
                 const std::optional<Branch>& only_branch = std::nullopt);

// ---------------------------------------------------------------------------
// Qualitative classification
// ---------------------------------------------------------------------------

struct ConstantWidthLaw {
  int p = 1;              // exponent in V = alpha*A^p + beta
  bool alpha_free = true; // any alpha gives a constant width
  double beta = 0.0;      // 0 for pure power laws
  // For affine laws beta depends linearly on alpha: beta = c0 + c1*alpha,
  // sampled at two generic alphas.
  double beta_c0 = 0.0, beta_c1 = 0.0;
  Branch branch;
  double width_at_alpha1 = 0.0;  // L obtained with alpha = 1 (reference)
};

struct BifurcationRecord {
  double critical_A = 0.0;
  int multiplicity = 2;
  Branch branch;
  double probe_alpha = 1.0;  // bifurcation located along V = alpha*A^p
  int probe_p = 1;
};

struct QualitativeReport {
  std::optional<ConstantWidthLaw> constant_width_law;
  // Amplitudes with V = 0 at the reference width L0 (rest states).
  std::vector<double> rest_amplitudes;
  std::optional<BifurcationRecord> bifurcation;
  // V = alpha*A^p from the constant-width analysis (alpha free when
  // alpha_free).
  std::optional<ConstantWidthLaw> velocity_law;
  double L0 = 0.0;
};

struct ClassifyOptions {
  double L0 = 0.70710678118654752;  // reference half-width
  double A_max = 3.0;               // scan range for rest/bifurcation probes
};

QualitativeReport classify(const SimilarityRelation& rel, const Bindings& b = {},
                           const ClassifyOptions& opts = {});

// ---------------------------------------------------------------------------
// Printing and the printed-table compatibility report
// ---------------------------------------------------------------------------

// Normalized implicit form, e.g. "±V*L^2 ± 6*A*L^2 ± 1 = 0".
std::string relation_string(const SimilarityRelation& rel);

// Wavelet-column presentation: "L = 1/sqrt(|±V ± 6*A|)",
// "L = (±V ± sqrt(|V^2 - 4*A^2|))/(2*A^2)", "±V*A/L^2 = sin(A)", ...
std::string paper_form(const SimilarityRelation& rel);

struct CompatRow {
  std::string family;
  std::string engine_relation;   // Leibniz-consistent normalized relation
  std::string engine_solved;     // paper_form of the engine relation
  std::string paper_printed;     // the published table entry, instantiated
  std::string note;
};

// Families whose published table rows disagree with the Leibniz-consistent
// substitution. Empty when the equation has no recorded discrepancy.
std::optional<CompatRow> paper_compat_row(const EquationAST& ast);

// The published K(2,1,2) relation (V ± A)*L^2 - (±A + eps) = 0 as a relation
// object, for side-by-side classification.
SimilarityRelation published_k212_relation();

}  // namespace cwave
