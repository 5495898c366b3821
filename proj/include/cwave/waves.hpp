#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cwave/equation.hpp"

namespace cwave {

// ---------------------------------------------------------------------------
// Closed-form traveling solutions: solitons, compactons, kink-antikink (KAK)
// plateaus, offset compactons and comp-on-KAK compounds.
//
// Conventions, in the co-moving coordinate xi = x - V*t:
//   compacton      A*cos^2(xi/4) on |xi| <= 2*pi, A = 4V/3
//   KAK            rising ramp on [-2*pi, 0], plateau 4V/3 on [0, lambda],
//                  falling ramp on [lambda, lambda + 2*pi]
//   offset         delta + A*cos^2(xi/4) on |xi| <= 2*pi, delta outside,
//                  V = (3/4)*(2*delta + A)
//   compound       KAK plus a lobe of height (4/3)*(V' - 2V) riding the
//                  plateau; the lobe lives on x - V'*t in [delta, delta+4*pi]
//   K(n,n)         [A*cos^2((n-1)*xi/(2n))]^(1/(n-1)) on |xi| <= pi*n/(n-1),
//                  A = 2*V*n/(n+1); at n=2 this is the compacton above.
//                  (The published table lists the half-width as 4n/(n-1);
//                  only 2n/(n-1) solves the equation and matches n=2.)
// ---------------------------------------------------------------------------

enum class WaveFamily {
  KdVSech2,
  MKdVSech,
  MKdVExotic,
  K22Compacton,
  K22KAK,
  K22CompOnKAK,
  K22OffsetCompacton,
  KnnCompacton,
};

std::string wave_family_name(WaveFamily f);
std::optional<WaveFamily> wave_family_from_name(const std::string& name);

struct TravelingWave {
  WaveFamily family = WaveFamily::K22Compacton;
  double amplitude = 0.0;           // A (for compounds: the top lobe height)
  double velocity = 0.0;            // V
  double flat_length = 0.0;         // lambda (KAK / compound)
  double offset = 0.0;              // delta (offset baseline / compound top start)
  double secondary_velocity = 0.0;  // V' (compound)
  int order = 2;                    // n (KnnCompacton)

  double eval(double x, double t) const;
  long double eval_ld(long double x, long double t) const;

  // Support of the non-constant part in the co-moving coordinate, when the
  // profile is compactly supported (all K22/Knn families).
  std::optional<std::pair<double, double>> support() const;

  // Piecewise-definition junction positions in the lab frame at time t.
  std::vector<double> junctions(double t) const;

  // Half-width candidates reported for the exotic profile (5*pi/6k, pi/6k).
  std::vector<double> half_width_candidates() const;

  // Compound validity window end (lambda - 4*pi - delta)/(V' - V); the lobe
  // start at delta = 0 reproduces the plain window (lambda - 4*pi)/(V' - V).
  double validity_end() const;
  bool in_validity_window(double t) const;

  std::string to_json() const;

  static TravelingWave kdv_soliton(double A);
  static TravelingWave mkdv_soliton(double A);
  static TravelingWave mkdv_exotic(double k);
  static TravelingWave k22_compacton(double V);
  static TravelingWave k22_kak(double V, double lambda);
  static TravelingWave k22_offset_compacton(double A, double delta);
  static TravelingWave knn_compacton(int n, double V);
};

TravelingWave wave_from_json(const std::string& json_text);

// Builds the compound from the KAK, the top speed V' and the top start
// position delta (relative to the plateau start at t = 0). Validates the
// velocity coupling, the window (V' > V) and delta + 4*pi <= lambda, and
// numerically checks junction continuity of the assembled profile.
TravelingWave compose_compound(const TravelingWave& kak, double v_prime, double delta);
// Variant taking a prepared top wave; its amplitude must equal
// (4/3)*(top.velocity - 2*kak.velocity).
TravelingWave compose_compound(const TravelingWave& kak, const TravelingWave& top, double delta);

struct JunctionReport {
  double max_value_jump = 0.0;
  double max_slope_jump = 0.0;
  // Third-derivative jump of u^2 across the junctions where the profile
  // meets zero (the composite the cubed derivative acts on is C^3 there).
  double max_sq_third_deriv_jump = 0.0;
};

JunctionReport junction_check(const TravelingWave& w, double t, double h = 1e-3);

// ---------------------------------------------------------------------------
// Finite-difference residual of a wave against an equation
// ---------------------------------------------------------------------------

struct ResidualReport {
  double max_abs = 0.0;
  double interior_max_abs = 0.0;
  double dx = 0.0;
  int order = 4;
  std::size_t n_points = 0;
  std::size_t n_interior = 0;
};

// Central finite differences at the given order; spatial derivatives act on
// the composite each term differentiates (u^m as a unit, never u across a
// compact edge), the time derivative is a central stencil in t with dt = dx.
// Interior excludes two stencil widths around every junction.
ResidualReport residual(const TravelingWave& w, const EquationAST& ast, double dx,
                        int scheme_order = 4, double t = 0.0,
                        const std::map<std::string, double>& bindings = {},
                        std::optional<std::pair<double, double>> window = std::nullopt);

}  // namespace cwave
