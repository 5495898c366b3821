#pragma once

#include <complex>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace cwave {

// ---------------------------------------------------------------------------
// Multiresolution frame of compacton lobes and KAK plateaus.
//
// Scale convention: s_j = 2^(-j), larger j = finer. The element (k, j) lives
// on the tile [k*s_j, (k+1)*s_j]; same-scale elements have disjoint
// interiors. For j > 0 the element is the compressed unit lobe
// sin^2(pi*(x - k*s_j)/s_j); for j <= 0 it is a KAK with ramps of width 1/2
// (halves of the unit lobe) and flat length s_j - 1, peak value 1.
//
// The two-scale identity lives on the lobe family: a lobe of width s plus
// the same lobe translated by s/2 telescopes into a KAK with ramp s/2 and
// flat s/2 (sin^2 + cos^2 on the overlap). Half-step translates of one lobe
// partition unity; the frame's integer-translate tiles stay disjoint.
// ---------------------------------------------------------------------------

struct FrameElement {
  int k = 0;
  int j = 0;

  double scale() const;                       // s_j = 2^(-j)
  std::pair<double, double> support() const;  // [k*s_j, (k+1)*s_j]
};

double eta_eval(const FrameElement& elem, double x);

// Lobe of width s anchored at a: sin^2(pi*(x-a)/s) on [a, a+s], else 0.
double lobe_eval(double x, double a, double s);
// KAK anchored at a: rise [a, a+ramp], flat [a+ramp, a+ramp+flat], mirrored
// fall; peak 1.
double kak_eval_unit(double x, double a, double ramp, double flat);

// Max pointwise defect of the dilated two-scale identity at scale j anchored
// at k*s_j, evaluated on a dense grid. child_shift_steps = 1 is the identity
// (second lobe moved by s/2); other values are deliberate mis-assemblies for
// control tests.
double two_scale_check(int j, int k, int grid_points = 10000, int child_shift_steps = 1);

// Scale-j' indices whose supports meet the interior of the (k, j) tile:
// k*2^(j'-j) .. (k+1)*2^(j'-j)-1. Requires j' >= j.
std::vector<int> children(int k, int j, int j_prime);

// Max defect of sum-over-half-step-translates of the scale-j lobe against
// the constant plateau value 1 on [x_lo, x_hi].
double partition_check(int j, double x_lo, double x_hi, int grid_points = 10000);

// ---------------------------------------------------------------------------
// Expansions
// ---------------------------------------------------------------------------

struct FrameExpansion {
  std::map<std::pair<int, int>, double> coeffs;  // (k, j) -> C_{k,j}
  int j_min = 0;
  int j_max = 0;

  double eval(double x) const;
  std::string to_json() const;  // list of {k, j, c}
  static FrameExpansion from_json(const std::string& text);
};

struct ExpandOptions {
  int quadrature_points = 256;  // per element tile
  int max_sweeps = 500;
  double tol = 1e-13;
};

struct ExpandResult {
  FrameExpansion expansion;
  double l2_error = 0.0;
  int sweeps = 0;
};

// Coarse-to-fine per-scale least-squares fitting of the residual, swept to
// convergence (block Gauss-Seidel on the normal equations; same-scale blocks
// are diagonal because same-scale tiles are interior-disjoint). The fixed
// point is the joint least-squares projection onto the retained elements, so
// re-expanding a reconstruction reproduces its coefficients.
ExpandResult expand(const std::function<double(double)>& f, double x_lo, double x_hi, int j_min,
                    int j_max, const ExpandOptions& opts = {});

struct SquareTerm {
  FrameElement a, b;
  double weight = 0.0;  // C_a*C_b (doubled for unordered distinct pairs)
};

struct SquareExpansion {
  std::vector<SquareTerm> terms;
  double eval(double x) const;
  // Number of retained cross terms pairing (k, j) with scale j_prime.
  int cross_count(int k, int j, int j_prime) const;
};

// Pointwise-evaluable expansion of u^2: products of overlapping elements
// only (children relation across scales, identical tiles at equal scale).
SquareExpansion square_expand(const FrameExpansion& exp);

// ---------------------------------------------------------------------------
// Morlet expansion and the multi-scale derivative estimate
// ---------------------------------------------------------------------------

std::complex<double> morlet_eval(double alpha, double x);

struct MorletParams {
  double alpha = 8.0;                            // mother-wavelet scale, >= 5
  std::map<std::pair<int, int>, double> coeffs;  // (j, k) -> C_{j,k}

  double half_width(int j) const;  // L_j = 1/(alpha * 2^j)
};

// Complex reconstruction sum C_{j,k} Psi_alpha(2^j x - k).
std::complex<double> morlet_reconstruct(const MorletParams& p, double x);

struct DerivativeEstimate {
  double multi_scale = 0.0;      // sum_j u_j(x0) / L_j^n
  double dominant_scale = 0.0;   // the largest-|u_j| scale alone
  int dominant_j = 0;
};

// u_j(x0) = Psi(0) * C_{j, round(2^j x0)}; scales with no coefficient at the
// covering translate contribute nothing. Throws when no scale covers x0.
// n = 0 returns u(x0) itself.
DerivativeEstimate derivative_estimate(const MorletParams& p, double x0, int n);

}  // namespace cwave
