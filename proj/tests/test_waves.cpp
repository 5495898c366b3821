#include <cmath>
#include <random>

#include "cwave/equation.hpp"
#include "cwave/waves.hpp"
#include "doctest.h"

using namespace cwave;

namespace {
constexpr double kPi = 3.14159265358979323846;

EquationAST eq(const char* alias) { return parse_equation(*alias_to_dsl(alias)); }
}  // namespace

TEST_CASE("compacton evaluates to the amplitude law at the crest and 0 at the edges") {
  const auto w = TravelingWave::k22_compacton(0.75);
  CHECK(w.amplitude == doctest::Approx(1.0));
  CHECK(w.eval(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(w.eval(2.0 * kPi, 0.0) == 0.0);
  CHECK(w.eval(-2.0 * kPi, 0.0) == 0.0);
  // traveling: crest at x = V t
  CHECK(w.eval(0.75 * 8.0, 8.0) == doctest::Approx(1.0));
}

TEST_CASE("KAK has the 4V/3 plateau across [0, lambda]") {
  const auto w = TravelingWave::k22_kak(0.75, 5.0);
  CHECK(w.eval(2.5, 0.0) == doctest::Approx(1.0));
  CHECK(w.eval(0.0, 0.0) == doctest::Approx(1.0));
  CHECK(w.eval(5.0, 0.0) == doctest::Approx(1.0));
  CHECK(w.eval(-kPi, 0.0) == doctest::Approx(0.5));  // cos^2(-pi/4)
  CHECK(w.eval(-2.0 * kPi, 0.0) == 0.0);
  CHECK(w.eval(5.0 + 2.0 * kPi, 0.0) == 0.0);
  // KAK with lambda = 0 degenerates to the compacton
  const auto c = TravelingWave::k22_compacton(0.75);
  const auto k0 = TravelingWave::k22_kak(0.75, 0.0);
  for (double x = -7.0; x <= 7.0; x += 0.137)
    CHECK(k0.eval(x, 0.0) == doctest::Approx(c.eval(x, 0.0)).epsilon(1e-15));
}

TEST_CASE("KdV soliton carries V = 2A and L = sqrt(2/A)") {
  const auto w = TravelingWave::kdv_soliton(2.0);
  CHECK(w.velocity == doctest::Approx(4.0));
  CHECK(w.eval(0.0, 0.0) == doctest::Approx(2.0));
  // L = sqrt(2/A) = 1: u(L) = A sech^2(1)
  CHECK(w.eval(1.0, 0.0) == doctest::Approx(2.0 / std::pow(std::cosh(1.0), 2)));
}

TEST_CASE("offset compacton: A = -2*delta rests in place") {
  const auto w = TravelingWave::k22_offset_compacton(-0.6, 0.3);
  CHECK(w.velocity == doctest::Approx(0.0));
  CHECK(w.eval(0.0, 0.0) == doctest::Approx(0.3 - 0.6));
  CHECK(w.eval(2.0 * kPi + 0.1, 0.0) == doctest::Approx(0.3));  // baseline outside
}

TEST_CASE("compact support: exactly zero at 10^4 random exterior points") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> far(0.0, 500.0);
  std::uniform_real_distribution<double> time(0.0, 3.0);
  const std::vector<TravelingWave> compact = {
      TravelingWave::k22_compacton(0.75),
      TravelingWave::k22_kak(0.6, 4.0),
      TravelingWave::knn_compacton(3, 0.9),
      compose_compound(TravelingWave::k22_kak(0.75, 20.0), 2.2, 0.0),
  };
  for (const auto& w : compact) {
    const auto s = w.support();
    REQUIRE(s.has_value());
    for (int i = 0; i < 10000; ++i) {
      const double t = time(rng);
      const double d = far(rng) + 1e-9;
      const double lo = s->first + w.velocity * t, hi = s->second + w.velocity * t;
      CHECK(w.eval(lo - d, t) == 0.0);
      CHECK(w.eval(hi + d, t) == 0.0);
    }
  }
}

TEST_CASE("translation covariance along the characteristic") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> shift(-20.0, 20.0);
  std::uniform_real_distribution<double> pos(-10.0, 10.0);
  for (const auto& w : {TravelingWave::k22_compacton(0.9), TravelingWave::kdv_soliton(1.4),
                        TravelingWave::mkdv_soliton(0.8)}) {
    for (int i = 0; i < 200; ++i) {
      const double s = shift(rng), x = pos(rng), t = 1.7;
      CHECK(w.eval(x, t) ==
            doctest::Approx(w.eval(x - w.velocity * s, t - s)).epsilon(1e-12));
    }
  }
}

TEST_CASE("exotic profile matches its formula and has width ~ 1/A") {
  for (double k : {0.5, 1.0, 2.0}) {
    const auto w = TravelingWave::mkdv_exotic(k);
    CHECK(w.velocity == doctest::Approx(4.0 * k * k));
    for (double x = -3.0; x <= 3.0; x += 0.21) {
      const double c2 = std::pow(std::cos(k * (x - 4.0 * k * k * 0.4)), 2);
      const double expected = std::sqrt(32.0) * k * c2 / (3.0 * (1.0 - (2.0 / 3.0) * c2));
      CHECK(w.eval(x, 0.4) == doctest::Approx(expected).epsilon(1e-12));
    }
    // both reported half-width candidates scale as 1/k, so A*L is constant
    const auto ls = w.half_width_candidates();
    REQUIRE(ls.size() == 2);
    CHECK(w.amplitude * ls[0] == doctest::Approx(std::sqrt(32.0) * 5.0 * kPi / 6.0));
    CHECK(w.amplitude * ls[1] == doctest::Approx(std::sqrt(32.0) * kPi / 6.0));
  }
}

TEST_CASE("recognized wave/equation pairs have tiny interior residuals") {
  struct Pair {
    TravelingWave w;
    const char* alias;
    double tol;
  };
  const std::vector<Pair> pairs = {
      {TravelingWave::k22_compacton(0.75), "K22", 1e-6},
      {TravelingWave::k22_kak(0.75, 5.0), "K22", 1e-6},
      {TravelingWave::k22_offset_compacton(1.0, 0.3), "K22", 1e-6},
      {TravelingWave::kdv_soliton(2.0), "KdV", 1e-6},
      {TravelingWave::mkdv_soliton(1.3), "MKdV6", 1e-6},
      {TravelingWave::mkdv_exotic(1.0), "MKdV", 1e-6},
      {TravelingWave::knn_compacton(3, 0.9), "Knn:3", 1e-6},
      // the n=4 profile has a cusp-limited edge neighborhood
      {TravelingWave::knn_compacton(4, 0.9), "Knn:4", 1e-4},
  };
  for (const auto& p : pairs) {
    CAPTURE(p.alias);
    const auto rep = residual(p.w, eq(p.alias), 1e-3, 4, 0.3);
    CHECK(rep.interior_max_abs < p.tol);
  }
}

TEST_CASE("wrong-velocity control is detected at O(1) residual") {
  auto bad = TravelingWave::k22_compacton(0.75);
  bad.velocity = 0.75 * 1.25;  // amplitude law now violated
  const auto rep = residual(bad, eq("K22"), 1e-3, 4, 0.3);
  CHECK(rep.interior_max_abs > 1e-2);
}

TEST_CASE("residual decreases as dx^4 under refinement") {
  const auto w = TravelingWave::k22_compacton(0.75);
  const auto ast = eq("K22");
  double prev = 0.0;
  for (double dx : {0.0625, 0.03125, 0.015625}) {
    const auto rep = residual(w, ast, dx, 4, 0.3);
    if (prev > 0.0) CHECK(prev / rep.interior_max_abs > 10.0);
    prev = rep.interior_max_abs;
  }
}

TEST_CASE("residual rejects stencils wider than the support") {
  const auto w = TravelingWave::k22_compacton(0.75);
  CHECK_THROWS(residual(w, eq("K22"), 4.0, 4, 0.0));
}

TEST_CASE("compound assembly: coupling, window and placement") {
  const auto kak = TravelingWave::k22_kak(0.75, 20.0);

  const auto comp = compose_compound(kak, 2.2, 0.0);
  CHECK(comp.amplitude == doctest::Approx(4.0 / 3.0 * (2.2 - 1.5)));
  // V' = 3*max/4 + 2V recovers the top speed from the lobe height
  CHECK(0.75 * comp.amplitude + 2.0 * comp.velocity == doctest::Approx(2.2));
  CHECK(comp.validity_end() ==
        doctest::Approx((20.0 - 4.0 * kPi) / (2.2 - 0.75)).epsilon(1e-12));
  CHECK(comp.in_validity_window(0.5 * comp.validity_end()));
  CHECK_FALSE(comp.in_validity_window(comp.validity_end() + 0.1));

  // boundary placement: the top lobe may end exactly at the down-ramp start
  const double dmax = 20.0 - 4.0 * kPi;
  CHECK_NOTHROW(compose_compound(kak, 2.2, dmax));
  CHECK_THROWS(compose_compound(kak, 2.2, dmax + 0.01));
  // empty window
  CHECK_THROWS(compose_compound(kak, 0.7, 0.0));
  // top wave variant validates the coupling
  auto top = TravelingWave::k22_compacton(2.2);  // amplitude 4V'/3, not the coupled height
  CHECK_THROWS(compose_compound(kak, top, 0.0));
  top.amplitude = 4.0 / 3.0 * (2.2 - 2.0 * 0.75);
  CHECK_NOTHROW(compose_compound(kak, top, 0.0));
}

TEST_CASE("compound interior residual stays tiny inside the validity window") {
  const auto kak = TravelingWave::k22_kak(0.75, 20.0);
  const auto comp = compose_compound(kak, 2.2, 0.0);
  const auto rep = residual(comp, eq("K22"), 1e-3, 4, 0.5);
  CHECK(rep.interior_max_abs < 1e-6);
}

TEST_CASE("junction geometry: value and slope continuous, squared profile C3 at zero edges") {
  for (const auto& w : {TravelingWave::k22_compacton(0.75), TravelingWave::k22_kak(0.75, 5.0),
                        compose_compound(TravelingWave::k22_kak(0.75, 20.0), 2.2, 1.0)}) {
    const auto rep = junction_check(w, 0.0);
    CHECK(rep.max_value_jump < 1e-8);
    CHECK(rep.max_slope_jump < 1e-5);
    CHECK(rep.max_sq_third_deriv_jump < 1e-4);
  }
}

TEST_CASE("wave descriptors round-trip through JSON") {
  const auto w = compose_compound(TravelingWave::k22_kak(0.75, 20.0), 2.2, 1.5);
  const auto back = wave_from_json(w.to_json());
  CHECK(back.family == w.family);
  CHECK(back.amplitude == doctest::Approx(w.amplitude));
  CHECK(back.velocity == doctest::Approx(w.velocity));
  CHECK(back.flat_length == doctest::Approx(w.flat_length));
  CHECK(back.offset == doctest::Approx(w.offset));
  CHECK(back.secondary_velocity == doctest::Approx(w.secondary_velocity));
}

TEST_CASE("K(n,n) profile reduces to the quadratic-case compacton at n = 2") {
  const auto a = TravelingWave::knn_compacton(2, 0.75);
  const auto b = TravelingWave::k22_compacton(0.75);
  for (double x = -7.0; x <= 7.0; x += 0.0917)
    CHECK(a.eval(x, 0.2) == doctest::Approx(b.eval(x, 0.2)).epsilon(1e-14));
}
