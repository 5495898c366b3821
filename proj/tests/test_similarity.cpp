#include <cmath>
#include <random>
#include <set>

#include "cwave/similarity.hpp"
#include "doctest.h"

using namespace cwave;

namespace {

SimilarityRelation rel_for(const std::string& alias) {
  return build_relation(parse_equation(*alias_to_dsl(alias)));
}

// Independent dense-scan oracle, deliberately separate from the library's
// scan: uniform grid over [lo, hi], sign changes bisected to 1e-13.
std::vector<double> oracle_roots(const SimilarityRelation& rel, double A, double V,
                                 const Branch& br, const Bindings& b, double hi) {
  const int n = 200000;
  std::vector<double> roots;
  double xp = hi / n, fp = rel.eval(A, V, xp, br, b);
  for (int i = 2; i <= n; ++i) {
    const double x = hi * double(i) / n;
    const double f = rel.eval(A, V, x, br, b);
    if (f == 0.0) {
      roots.push_back(x);
    } else if ((f > 0) != (fp > 0) && fp != 0.0) {
      double lo = xp, h = x, flo = fp;
      while (h - lo > 1e-13 * h) {
        const double mid = 0.5 * (lo + h);
        const double fm = rel.eval(A, V, mid, br, b);
        if ((fm > 0) == (flo > 0)) { lo = mid; flo = fm; }
        else h = mid;
      }
      roots.push_back(0.5 * (lo + h));
    }
    xp = x;
    fp = f;
  }
  return roots;
}

}  // namespace

TEST_CASE("scaling substitution of single terms") {
  // (u^2)_xxx -> 8 A^2 / L^3
  const auto k22 = parse_equation("u_t + (u^2)_x + (u^2)_xxx = 0");
  const auto m = scale_term(k22.terms[2], 0);
  CHECK(m.coeff == Rational(8));
  CHECK(m.a_power == 2);
  CHECK(m.v_power == 0);
  CHECK(m.l_power == -3);

  // u_t -> V A / L
  const auto mt = scale_term(k22.terms[0], 0);
  CHECK(mt.coeff == Rational(1));
  CHECK(mt.a_power == 1);
  CHECK(mt.v_power == 1);
  CHECK(mt.l_power == -1);

  // 6*u*u_x -> 6 A^2 / L
  const auto kdv = parse_equation("u_t + 6*u*u_x + u_xxx = 0");
  const auto mc = scale_term(kdv.terms[1], 1);
  CHECK(mc.coeff == Rational(6));
  CHECK(mc.a_power == 2);
  CHECK(mc.l_power == -1);

  // sin(u) -> sin(A), no L factor
  const auto sg = parse_equation("u_xt - sin(u) = 0");
  const auto ms = scale_term(sg.terms[1], 1);
  CHECK(ms.trans == TransKind::Sin);
  CHECK(ms.a_power == 0);
  CHECK(ms.l_power == 0);
}

TEST_CASE("normalized relations match the published wavelet column") {
  CHECK(relation_string(rel_for("KdV")) == "±V*L^2 ± 6*A*L^2 ± 1 = 0");
  CHECK(paper_form(rel_for("KdV")) == "L = 1/sqrt(|±V ± 6*A|)");

  CHECK(relation_string(rel_for("K22")) == "±V*L^2 ± 2*A*L^2 ± 8*A = 0");
  CHECK(paper_form(rel_for("K22")) == "L = sqrt(8*A/|±V ± 2*A|)");

  CHECK(relation_string(rel_for("NLS:3")) == "±A^2*L^2 ± V*L ± 1 = 0");
  CHECK(paper_form(rel_for("NLS:3")) == "L = (±V ± sqrt(|V^2 - 4*A^2|))/(2*A^2)");

  CHECK(paper_form(rel_for("SG")) == "±V*A/L^2 = sin(A)");
}

TEST_CASE("KdV width at A=1, V=2 on the all-plus branch") {
  const auto rel = rel_for("KdV");
  const auto sol = solve_width(rel, 1.0, 2.0, parse_branch("++-", 3));
  REQUIRE(sol.roots.size() == 1);
  CHECK(sol.roots[0] == doctest::Approx(1.0 / std::sqrt(8.0)).epsilon(1e-12));
  CHECK(sol.closed_form.has_value());
}

TEST_CASE("K(2,2) published branch: V = -3A/2 gives L = 4") {
  const auto rel = rel_for("K22");
  const auto sol = solve_width(rel, 1.0, -1.5, parse_branch("++-", 3));
  REQUIRE(sol.roots.size() == 1);
  CHECK(sol.roots[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("NLS(3) discriminant-zero branch has a double root at L = 1") {
  // slots follow term order (u_t, u_xx, u^3); branch -++ realizes
  // A^2 L^2 - V L + 1 = 0, which at V = 2, A = 1 is (L - 1)^2
  const auto rel = rel_for("NLS:3");
  const auto sol = solve_width(rel, 1.0, 2.0, parse_branch("-++", 3));
  REQUIRE(sol.roots.size() == 2);
  CHECK(sol.roots[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(sol.roots[1] == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("sine-Gordon relation solves for L once A and V are bound") {
  const auto rel = rel_for("SG");
  // V A / L^2 = sin A with A = 1, V = 2: L = sqrt(2/sin(1))
  const auto branches = dedupe_branches(rel);
  bool found = false;
  for (const auto& br : branches) {
    const auto sol = solve_width(rel, 1.0, 2.0, br);
    for (double r : sol.roots)
      if (std::abs(r - std::sqrt(2.0 / std::sin(1.0))) < 1e-10) found = true;
  }
  CHECK(found);
}

TEST_CASE("root verification: every returned root satisfies the relation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> amp(0.05, 3.0), vel(-4.0, 4.0);
  for (const char* alias : {"KdV", "K22", "MKdV", "NLS:3", "NLS:4", "Knm:2,3"}) {
    const auto rel = rel_for(alias);
    const auto branches = dedupe_branches(rel);
    for (int i = 0; i < 25; ++i) {
      const double A = amp(rng), V = vel(rng);
      for (const auto& br : branches) {
        const auto sol = solve_width(rel, A, V, br);
        for (double L : sol.roots) {
          double mx = 0.0;
          for (const auto& m : rel.monomials) mx = std::max(mx, m.magnitude(A, V, L, {}));
          CHECK(std::abs(rel.eval(A, V, L, br)) < 1e-10 * mx);
        }
      }
    }
  }
}

TEST_CASE("oracle equivalence: closed forms match the brute-force scan") {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> amp(0.1, 2.5), vel(-3.0, 3.0);
  for (const char* alias : {"KdV", "K22", "NLS:3"}) {
    const auto rel = rel_for(alias);
    const auto branches = dedupe_branches(rel);
    for (int i = 0; i < 100; ++i) {
      const double A = amp(rng), V = vel(rng);
      for (const auto& br : branches) {
        const auto sol = solve_width(rel, A, V, br);
        const auto ora = oracle_roots(rel, A, V, br, {}, 1000.0);
        REQUIRE(sol.roots.size() == ora.size());
        for (std::size_t r = 0; r < ora.size(); ++r)
          CHECK(sol.roots[r] == doctest::Approx(ora[r]).epsilon(1e-9));
      }
    }
  }
}

TEST_CASE("scale covariance of the width roots") {
  // Multiplying each coefficient by s^(-x-order) maps the relation so that
  // solving at velocity V equals 1/s times the original roots at s*V.
  const auto ast = parse_equation(*alias_to_dsl("KdV"));
  const auto orig = build_relation(ast);
  const std::vector<Rational> factors = {Rational(2), Rational(4), Rational(1, 2)};
  for (const auto& sr : factors) {
    const double s = sr.value();
    const auto scaled = build_relation(scale_x(ast, sr));
    for (const auto& br : dedupe_branches(orig)) {
      const auto a = solve_width(scaled, 1.3, 0.7, br);
      const auto b = solve_width(orig, 1.3, s * 0.7, br);
      REQUIRE(a.roots.size() == b.roots.size());
      for (std::size_t i = 0; i < a.roots.size(); ++i)
        CHECK(a.roots[i] == doctest::Approx(b.roots[i] / s).epsilon(1e-12));
    }
  }
}

TEST_CASE("branch enumeration is closed under global sign flip") {
  const auto rel = rel_for("K212");
  const auto all = enumerate_branches(rel);
  CHECK(all.size() == 16);
  std::set<std::string> seen;
  for (const auto& b : all) seen.insert(branch_string(b));
  for (const auto& b : all) {
    Branch flipped = b;
    for (int& v : flipped) v = -v;
    CHECK(seen.count(branch_string(flipped)) == 1);
  }
  CHECK(dedupe_branches(rel).size() == 8);
}

TEST_CASE("classify: K(2,2) has a linear constant-width law and no rest state") {
  const auto rep = classify(rel_for("K22"));
  REQUIRE(rep.constant_width_law.has_value());
  CHECK(rep.constant_width_law->p == 1);
  CHECK(rep.constant_width_law->alpha_free);
  CHECK(rep.rest_amplitudes.empty());
  CHECK_FALSE(rep.bifurcation.has_value());
}

TEST_CASE("classify: KdV and NLS(3) carry no constant-width signature") {
  // Solitons: V proportional to A leaves L varying with A (1/sqrt(A) for
  // KdV), so no amplitude-independent width exists. The constant-width law
  // is the compacton marker and must stay absent here.
  const auto kdv = classify(rel_for("KdV"));
  CHECK_FALSE(kdv.constant_width_law.has_value());
  CHECK_FALSE(kdv.bifurcation.has_value());
  const auto nls = classify(rel_for("NLS:3"));
  CHECK_FALSE(nls.constant_width_law.has_value());
}

TEST_CASE("classify: K(n,n) at n=3 needs V proportional to A^2") {
  const auto rep = classify(rel_for("Knn:3"));
  REQUIRE(rep.constant_width_law.has_value());
  CHECK(rep.constant_width_law->p == 2);
}

TEST_CASE("classify: published K(2,1,2) row rests at A = 2|eps| at the reference width") {
  const auto rel = published_k212_relation();
  const auto rep = classify(rel, {{"eps", 0.1}});
  bool has_2eps = false;
  for (double a : rep.rest_amplitudes)
    if (std::abs(a - 0.2) < 1e-6) has_2eps = true;
  CHECK(has_2eps);
}

TEST_CASE("classify: Leibniz-consistent K(2,1,2) has nonzero rest amplitudes") {
  const auto rep = classify(rel_for("K212"), {{"eps", 0.1}});
  CHECK_FALSE(rep.rest_amplitudes.empty());
}

TEST_CASE("classify: NLS(4) bifurcates at A = 1/4 along V = A") {
  const auto rep = classify(rel_for("NLS:4"));
  REQUIRE(rep.bifurcation.has_value());
  CHECK(rep.bifurcation->critical_A == doctest::Approx(0.25).epsilon(1e-5));
  CHECK(rep.bifurcation->multiplicity == 2);
}

TEST_CASE("classify: curvature equation bifurcates with an amplitude bound") {
  const auto rep = classify(rel_for("CurvKdV"), {{"eps", 1.0}});
  REQUIRE(rep.bifurcation.has_value());
  CHECK(rep.bifurcation->critical_A == doctest::Approx(0.25).epsilon(1e-4));
}

TEST_CASE("published-table compatibility rows") {
  const auto k22 = paper_compat_row(parse_equation(*alias_to_dsl("K22")));
  REQUIRE(k22.has_value());
  CHECK(k22->paper_printed.find("10") != std::string::npos);

  // K(n,n) at n=2 must coincide with the K(2,2) output
  const auto knn2 = paper_compat_row(parse_equation(*alias_to_dsl("Knn:2")));
  REQUIRE(knn2.has_value());
  CHECK(knn2->engine_relation == k22->engine_relation);
  CHECK(knn2->engine_solved == k22->engine_solved);

  const auto nls = paper_compat_row(parse_equation(*alias_to_dsl("NLS:4")));
  REQUIRE(nls.has_value());
  CHECK(nls->engine_solved == "L = (±V ± sqrt(|V^2 - 4*A^3|))/(2*A^3)");
  CHECK(nls->paper_printed == "L = (±V ± sqrt(|V^2 - 4*A^4|))/(2*A^4)");

  const auto mkdv = paper_compat_row(parse_equation(*alias_to_dsl("MKdV")));
  REQUIRE(mkdv.has_value());
  CHECK(mkdv->engine_solved == "L = 1/sqrt(|±V ± A^2|)");
  CHECK(mkdv->paper_printed == "L = 1/sqrt(|±V ± 6*A^2|)");
  // the published value corresponds to the 6*u^2*u_x normalization
  const auto mkdv6 = build_relation(parse_equation(*alias_to_dsl("MKdV6")));
  CHECK(paper_form(mkdv6) == "L = 1/sqrt(|±V ± 6*A^2|)");

  const auto k212 = paper_compat_row(parse_equation(*alias_to_dsl("K212")));
  REQUIRE(k212.has_value());
  CHECK(k212->paper_printed == "L = sqrt((±A + eps)/(V ± A))");

  // no discrepancy recorded for KdV or sine-Gordon
  CHECK_FALSE(paper_compat_row(parse_equation(*alias_to_dsl("KdV"))).has_value());
  CHECK_FALSE(paper_compat_row(parse_equation(*alias_to_dsl("SG"))).has_value());
}

TEST_CASE("degenerate relation: u_t = 0 is L-independent") {
  const auto rel = build_relation(parse_equation("u_t = 0"));
  const auto sol0 = solve_width(rel, 1.0, 0.0, parse_branch("+", 1));
  CHECK(sol0.l_independent);
  CHECK(sol0.satisfied);  // V = 0 satisfies it for any L
  const auto sol2 = solve_width(rel, 1.0, 2.0, parse_branch("+", 1));
  CHECK(sol2.l_independent);
  CHECK_FALSE(sol2.satisfied);
}

TEST_CASE("sweep emits CSV with the no-root marker") {
  const auto rel = rel_for("K22");
  const auto table = sweep(rel, {0.5}, 0.0, 2.0, 5);
  const auto csv = table.to_csv();
  CHECK(csv.rfind("A,V,branch", 0) == 0);
  CHECK(csv.find("NA") != std::string::npos);  // some branch has no root
}

TEST_CASE("linear wave: any A and L, V pinned to c") {
  ParseOptions opts;
  const auto ast = parse_equation("u_xx - csq*u_tt = 0", opts);
  const auto rel = build_relation(ast);
  // +1 - csq V^2 = 0 with csq = 1/4 -> V = 2; relation is L-independent.
  // The literal minus sign is folded into the coefficient, so the all-plus
  // branch is the satisfied one.
  const auto sol = solve_width(rel, 1.0, 2.0, parse_branch("++", 2), {{"csq", 0.25}});
  CHECK(sol.l_independent);
  CHECK(sol.satisfied);
  const auto sol2 = solve_width(rel, 1.0, 2.0, parse_branch("+-", 2), {{"csq", 0.25}});
  CHECK(sol2.l_independent);
  CHECK_FALSE(sol2.satisfied);
}
