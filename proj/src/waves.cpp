#include "cwave/waves.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace cwave {

namespace {

constexpr long double kPiL = 3.14159265358979323846264338327950288L;
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

long double sq(long double x) { return x * x; }

long double cos2(long double x) { return sq(std::cos(x)); }

}  // namespace

std::string wave_family_name(WaveFamily f) {
  switch (f) {
    case WaveFamily::KdVSech2: return "kdv-sech2";
    case WaveFamily::MKdVSech: return "mkdv-sech";
    case WaveFamily::MKdVExotic: return "mkdv-exotic";
    case WaveFamily::K22Compacton: return "k22-compacton";
    case WaveFamily::K22KAK: return "k22-kak";
    case WaveFamily::K22CompOnKAK: return "k22-comp-on-kak";
    case WaveFamily::K22OffsetCompacton: return "k22-offset";
    case WaveFamily::KnnCompacton: return "knn-compacton";
  }
  return "unknown";
}

std::optional<WaveFamily> wave_family_from_name(const std::string& name) {
  for (WaveFamily f : {WaveFamily::KdVSech2, WaveFamily::MKdVSech, WaveFamily::MKdVExotic,
                       WaveFamily::K22Compacton, WaveFamily::K22KAK, WaveFamily::K22CompOnKAK,
                       WaveFamily::K22OffsetCompacton, WaveFamily::KnnCompacton})
    if (wave_family_name(f) == name) return f;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Factories
// ---------------------------------------------------------------------------

TravelingWave TravelingWave::kdv_soliton(double A) {
  if (A <= 0) throw std::invalid_argument("KdV soliton amplitude must be positive");
  TravelingWave w;
  w.family = WaveFamily::KdVSech2;
  w.amplitude = A;
  w.velocity = 2.0 * A;
  return w;
}

TravelingWave TravelingWave::mkdv_soliton(double A) {
  if (A <= 0) throw std::invalid_argument("MKdV soliton amplitude must be positive");
  TravelingWave w;
  w.family = WaveFamily::MKdVSech;
  w.amplitude = A;
  w.velocity = A * A;
  return w;
}

TravelingWave TravelingWave::mkdv_exotic(double k) {
  if (k <= 0) throw std::invalid_argument("exotic profile wavenumber must be positive");
  TravelingWave w;
  w.family = WaveFamily::MKdVExotic;
  w.amplitude = std::sqrt(32.0) * k;  // peak value
  w.velocity = 4.0 * k * k;
  return w;
}

TravelingWave TravelingWave::k22_compacton(double V) {
  TravelingWave w;
  w.family = WaveFamily::K22Compacton;
  w.amplitude = 4.0 * V / 3.0;
  w.velocity = V;
  return w;
}

TravelingWave TravelingWave::k22_kak(double V, double lambda) {
  if (lambda < 0) throw std::invalid_argument("KAK flat length must be nonnegative");
  TravelingWave w;
  w.family = WaveFamily::K22KAK;
  w.amplitude = 4.0 * V / 3.0;
  w.velocity = V;
  w.flat_length = lambda;
  return w;
}

TravelingWave TravelingWave::k22_offset_compacton(double A, double delta) {
  TravelingWave w;
  w.family = WaveFamily::K22OffsetCompacton;
  w.amplitude = A;
  w.offset = delta;
  w.velocity = 0.75 * (2.0 * delta + A);
  return w;
}

TravelingWave TravelingWave::knn_compacton(int n, double V) {
  if (n < 2) throw std::invalid_argument("K(n,n) compactons need n >= 2");
  if (n > 2 && V <= 0)
    throw std::invalid_argument("fractional-power profiles need positive velocity");
  TravelingWave w;
  w.family = WaveFamily::KnnCompacton;
  w.order = n;
  w.amplitude = 2.0 * V * n / (n + 1.0);
  w.velocity = V;
  return w;
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

long double TravelingWave::eval_ld(long double x, long double t) const {
  const long double xi = x - static_cast<long double>(velocity) * t;
  switch (family) {
    case WaveFamily::KdVSech2: {
      const long double L = std::sqrt(2.0L / static_cast<long double>(amplitude));
      const long double c = std::cosh(xi / L);
      return amplitude / (c * c);
    }
    case WaveFamily::MKdVSech: {
      const long double L = 1.0L / static_cast<long double>(amplitude);
      return amplitude / std::cosh(xi / L);
    }
    case WaveFamily::MKdVExotic: {
      const long double k = static_cast<long double>(amplitude) / std::sqrt(32.0L);
      const long double c2 = cos2(k * xi);
      return std::sqrt(32.0L) * k * c2 / (3.0L * (1.0L - (2.0L / 3.0L) * c2));
    }
    case WaveFamily::K22Compacton: {
      if (std::abs(xi) >= 2.0L * kPiL) return 0.0L;
      return amplitude * cos2(xi / 4.0L);
    }
    case WaveFamily::K22KAK: {
      const long double lam = flat_length;
      if (xi <= -2.0L * kPiL || xi >= lam + 2.0L * kPiL) return 0.0L;
      if (xi < 0.0L) return amplitude * cos2(xi / 4.0L);
      if (xi <= lam) return amplitude;
      return amplitude * cos2((xi - lam) / 4.0L);
    }
    case WaveFamily::K22OffsetCompacton: {
      if (std::abs(xi) >= 2.0L * kPiL) return offset;
      return offset + amplitude * cos2(xi / 4.0L);
    }
    case WaveFamily::K22CompOnKAK: {
      TravelingWave kak = *this;
      kak.family = WaveFamily::K22KAK;
      kak.amplitude = 4.0 * velocity / 3.0;
      long double u = kak.eval_ld(x, t);
      const long double y = x - static_cast<long double>(secondary_velocity) * t;
      if (y > offset && y < offset + 4.0L * kPiL)
        u += amplitude * cos2((y - offset - 2.0L * kPiL) / 4.0L);
      return u;
    }
    case WaveFamily::KnnCompacton: {
      const long double n = order;
      const long double half = kPiL * n / (n - 1.0L);
      if (std::abs(xi) >= half) return 0.0L;
      const long double inner = amplitude * cos2(xi * (n - 1.0L) / (2.0L * n));
      return std::pow(inner, 1.0L / (n - 1.0L));
    }
  }
  return 0.0L;
}

double TravelingWave::eval(double x, double t) const {
  return static_cast<double>(eval_ld(x, t));
}

std::optional<std::pair<double, double>> TravelingWave::support() const {
  switch (family) {
    case WaveFamily::K22Compacton:
    case WaveFamily::K22OffsetCompacton:
      return std::make_pair(-kTwoPi, kTwoPi);
    case WaveFamily::K22KAK:
    case WaveFamily::K22CompOnKAK:
      return std::make_pair(-kTwoPi, flat_length + kTwoPi);
    case WaveFamily::KnnCompacton: {
      const double half = kPi * order / (order - 1.0);
      return std::make_pair(-half, half);
    }
    default:
      return std::nullopt;
  }
}

std::vector<double> TravelingWave::junctions(double t) const {
  std::vector<double> xs;
  switch (family) {
    case WaveFamily::K22Compacton:
    case WaveFamily::K22OffsetCompacton:
    case WaveFamily::KnnCompacton: {
      const auto s = support();
      xs = {s->first + velocity * t, s->second + velocity * t};
      break;
    }
    case WaveFamily::K22KAK:
      xs = {-kTwoPi + velocity * t, velocity * t, flat_length + velocity * t,
            flat_length + kTwoPi + velocity * t};
      break;
    case WaveFamily::K22CompOnKAK: {
      xs = {-kTwoPi + velocity * t, velocity * t, flat_length + velocity * t,
            flat_length + kTwoPi + velocity * t, offset + secondary_velocity * t,
            offset + 4.0 * kPi + secondary_velocity * t};
      break;
    }
    default:
      break;
  }
  return xs;
}

std::vector<double> TravelingWave::half_width_candidates() const {
  if (family != WaveFamily::MKdVExotic) return {};
  const double k = amplitude / std::sqrt(32.0);
  return {5.0 * kPi / (6.0 * k), kPi / (6.0 * k)};
}

double TravelingWave::validity_end() const {
  if (family != WaveFamily::K22CompOnKAK) return 0.0;
  return (flat_length - 4.0 * kPi - offset) / (secondary_velocity - velocity);
}

bool TravelingWave::in_validity_window(double t) const {
  if (family != WaveFamily::K22CompOnKAK) return true;
  return t >= 0.0 && t <= validity_end();
}

std::string TravelingWave::to_json() const {
  nlohmann::json j;
  j["family"] = wave_family_name(family);
  j["A"] = amplitude;
  j["V"] = velocity;
  j["lambda"] = flat_length;
  j["delta"] = offset;
  j["Vprime"] = secondary_velocity;
  j["n"] = order;
  return j.dump(2);
}

TravelingWave wave_from_json(const std::string& json_text) {
  const auto j = nlohmann::json::parse(json_text);
  TravelingWave w;
  const auto fam = wave_family_from_name(j.at("family").get<std::string>());
  if (!fam) throw std::invalid_argument("unknown wave family in descriptor");
  w.family = *fam;
  w.amplitude = j.value("A", 0.0);
  w.velocity = j.value("V", 0.0);
  w.flat_length = j.value("lambda", 0.0);
  w.offset = j.value("delta", 0.0);
  w.secondary_velocity = j.value("Vprime", 0.0);
  w.order = j.value("n", 2);
  return w;
}

// ---------------------------------------------------------------------------
// Compound assembly
// ---------------------------------------------------------------------------

namespace {

// One-sided 4th-order first derivative, h > 0 toward the interior.
double one_sided_d1(const TravelingWave& w, double x, double t, double h) {
  const double f0 = w.eval(x, t), f1 = w.eval(x + h, t), f2 = w.eval(x + 2 * h, t),
               f3 = w.eval(x + 3 * h, t), f4 = w.eval(x + 4 * h, t);
  return (-25.0 / 12.0 * f0 + 4.0 * f1 - 3.0 * f2 + 4.0 / 3.0 * f3 - 0.25 * f4) / h;
}

double one_sided_sq_d3(const TravelingWave& w, double x, double t, double h) {
  auto g = [&](double xx) { const double u = w.eval(xx, t); return u * u; };
  // 3rd derivative, one-sided (order 1 is plenty for a jump check)
  return (-g(x) + 3 * g(x + h) - 3 * g(x + 2 * h) + g(x + 3 * h)) / (h * h * h);
}

}  // namespace

JunctionReport junction_check(const TravelingWave& w, double t, double h) {
  JunctionReport rep;
  const double eps = 1e-9;
  for (double xj : w.junctions(t)) {
    const double left = w.eval(xj - eps, t), right = w.eval(xj + eps, t);
    rep.max_value_jump = std::max(rep.max_value_jump, std::abs(left - right));
    const double dl = one_sided_d1(w, xj - eps, t, -h);  // left-sided limit
    const double dr = one_sided_d1(w, xj + eps, t, h);   // right-sided limit
    rep.max_slope_jump = std::max(rep.max_slope_jump, std::abs(dl - dr));
  }
  // u^2 third-derivative continuity where the profile meets zero.
  const auto s = w.support();
  if (s) {
    const double lo = s->first + w.velocity * t, hi = s->second + w.velocity * t;
    const double d3l_out = one_sided_sq_d3(w, lo - eps, t, -h);
    const double d3l_in = one_sided_sq_d3(w, lo + eps, t, h);
    const double d3r_in = one_sided_sq_d3(w, hi - eps, t, -h);
    const double d3r_out = one_sided_sq_d3(w, hi + eps, t, h);
    rep.max_sq_third_deriv_jump =
        std::max(std::abs(d3l_out - d3l_in), std::abs(d3r_in - d3r_out));
  }
  return rep;
}

TravelingWave compose_compound(const TravelingWave& kak, double v_prime, double delta) {
  if (kak.family != WaveFamily::K22KAK)
    throw std::invalid_argument("compound base must be a KAK wave");
  const double V = kak.velocity;
  if (v_prime <= V) throw std::invalid_argument("empty validity window: V' must exceed V");
  if (delta < 0.0) throw std::invalid_argument("top start position must be nonnegative");
  if (delta + 4.0 * kPi > kak.flat_length + 1e-12)
    throw std::invalid_argument("top lobe does not fit the plateau: delta + 4*pi > lambda");

  TravelingWave w;
  w.family = WaveFamily::K22CompOnKAK;
  w.velocity = V;
  w.secondary_velocity = v_prime;
  w.flat_length = kak.flat_length;
  w.offset = delta;
  w.amplitude = 4.0 / 3.0 * (v_prime - 2.0 * V);  // top lobe height over the plateau

  const auto rep = junction_check(w, 0.0, 1e-3);
  const double scale = std::max(1.0, std::abs(w.amplitude) + std::abs(kak.amplitude));
  if (rep.max_value_jump > 1e-8 * scale || rep.max_slope_jump > 1e-5 * scale)
    throw std::runtime_error("junction smoothness violated in compound assembly");
  return w;
}

TravelingWave compose_compound(const TravelingWave& kak, const TravelingWave& top, double delta) {
  if (top.family != WaveFamily::K22Compacton && top.family != WaveFamily::K22CompOnKAK)
    throw std::invalid_argument("compound top must be a compacton-shaped wave");
  const double expected = 4.0 / 3.0 * (top.velocity - 2.0 * kak.velocity);
  const double scale = std::max({1.0, std::abs(expected), std::abs(top.amplitude)});
  if (std::abs(top.amplitude - expected) > 1e-12 * scale)
    throw std::invalid_argument(
        "velocity coupling violated: top height must equal (4/3)*(V' - 2V)");
  return compose_compound(kak, top.velocity, delta);
}

// ---------------------------------------------------------------------------
// Finite-difference residual
// ---------------------------------------------------------------------------

namespace {

struct Stencil {
  int radius;
  std::vector<long double> w;  // length 2*radius+1, divided by h^order outside
};

// Central stencils; weights exclude the 1/h^k factor.
Stencil central_stencil(int deriv, int order) {
  if (order == 2) {
    switch (deriv) {
      case 1: return {1, {-0.5L, 0.0L, 0.5L}};
      case 2: return {1, {1.0L, -2.0L, 1.0L}};
      case 3: return {2, {-0.5L, 1.0L, 0.0L, -1.0L, 0.5L}};
      case 4: return {2, {1.0L, -4.0L, 6.0L, -4.0L, 1.0L}};
      default: break;
    }
  } else if (order == 4) {
    switch (deriv) {
      case 1: return {2, {1.0L / 12, -2.0L / 3, 0.0L, 2.0L / 3, -1.0L / 12}};
      case 2: return {2, {-1.0L / 12, 4.0L / 3, -5.0L / 2, 4.0L / 3, -1.0L / 12}};
      case 3: return {3, {1.0L / 8, -1.0L, 13.0L / 8, 0.0L, -13.0L / 8, 1.0L, -1.0L / 8}};
      case 4: return {3, {-1.0L / 6, 2.0L, -13.0L / 2, 28.0L / 3, -13.0L / 2, 2.0L, -1.0L / 6}};
      default: break;
    }
  }
  throw std::invalid_argument("unsupported derivative/order combination");
}

long double ld_pow_int(long double x, int e) {
  long double r = 1.0L;
  for (int i = 0; i < e; ++i) r *= x;
  return r;
}

}  // namespace

ResidualReport residual(const TravelingWave& w, const EquationAST& ast, double dx,
                        int scheme_order, double t, const std::map<std::string, double>& bindings,
                        std::optional<std::pair<double, double>> window) {
  if (scheme_order != 2 && scheme_order != 4)
    throw std::invalid_argument("scheme order must be 2 or 4");
  if (dx <= 0) throw std::invalid_argument("dx must be positive");

  double x_lo, x_hi;
  if (window) {
    x_lo = window->first;
    x_hi = window->second;
  } else if (auto s = w.support()) {
    x_lo = s->first + w.velocity * t - 2.0;
    x_hi = s->second + w.velocity * t + 2.0;
    if (w.family == WaveFamily::K22CompOnKAK) {
      x_lo = std::min(x_lo, -kTwoPi + w.velocity * t - 2.0);
      x_hi = std::max(x_hi, w.flat_length + kTwoPi + w.velocity * t + 2.0);
    }
  } else {
    // localized around the crest for the non-compact families
    const double center = w.velocity * t;
    x_lo = center - 30.0;
    x_hi = center + 30.0;
  }
  const std::size_t n = static_cast<std::size_t>((x_hi - x_lo) / dx) + 1;
  if (n < 32) throw std::invalid_argument("grid too coarse for the requested window");

  if (auto s = w.support()) {
    const double width = s->second - s->first;
    const int radius = scheme_order == 4 ? 3 : 2;
    if ((2 * radius + 1) * dx >= width)
      throw std::invalid_argument("grid too coarse: stencil wider than the support");
  }

  const long double dt = dx;

  // Junction exclusion: two stencil widths.
  const double stencil_width = (2.0 * 3.0 + 1.0) * dx;
  const auto junctions = w.junctions(t);
  auto interior = [&](double x) {
    for (double xj : junctions)
      if (std::abs(x - xj) <= 2.0 * stencil_width) return false;
    return true;
  };

  auto u_at = [&](long double x, long double tt) { return w.eval_ld(x, tt); };

  // d^j_t d^k_x u at (x, t): x-stencil per time level, then t-stencil.
  auto atom_value = [&](const Atom& a, long double x) -> long double {
    auto x_deriv = [&](long double tt) -> long double {
      if (a.x_order == 0) return u_at(x, tt);
      const Stencil s = central_stencil(a.x_order, scheme_order);
      long double acc = 0.0L;
      for (int i = -s.radius; i <= s.radius; ++i)
        acc += s.w[i + s.radius] * u_at(x + i * static_cast<long double>(dx), tt);
      return acc / ld_pow_int(dx, a.x_order);
    };
    if (a.t_order == 0) return x_deriv(t);
    const Stencil s = central_stencil(a.t_order, scheme_order);
    long double acc = 0.0L;
    for (int i = -s.radius; i <= s.radius; ++i)
      acc += s.w[i + s.radius] * x_deriv(static_cast<long double>(t) + i * dt);
    return acc / ld_pow_int(dt, a.t_order);
  };

  auto term_inner = [&](const Term& term, long double x) -> long double {
    if (term.trans == TransKind::Sin) return std::sin(u_at(x, t));
    if (term.trans == TransKind::Cos) return std::cos(u_at(x, t));
    long double prod = 1.0L;
    for (const auto& a : term.atoms) prod *= ld_pow_int(atom_value(a, x), a.power);
    return prod;
  };

  auto term_value = [&](const Term& term, long double x) -> long double {
    long double coeff = term.coeff.value();
    if (term.symbol) {
      auto it = bindings.find(*term.symbol);
      if (it == bindings.end()) throw std::invalid_argument("unbound parameter '" + *term.symbol + "'");
      coeff *= it->second;
    }
    if (term.outer_x_order == 0) return coeff * term_inner(term, x);
    const Stencil s = central_stencil(term.outer_x_order, scheme_order);
    long double acc = 0.0L;
    for (int i = -s.radius; i <= s.radius; ++i)
      acc += s.w[i + s.radius] * term_inner(term, x + i * static_cast<long double>(dx));
    return coeff * acc / ld_pow_int(dx, term.outer_x_order);
  };

  ResidualReport rep;
  rep.dx = dx;
  rep.order = scheme_order;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = x_lo + static_cast<double>(i) * dx;
    long double r = 0.0L;
    for (const auto& term : ast.terms) r += term_value(term, x);
    const double ar = std::abs(static_cast<double>(r));
    rep.max_abs = std::max(rep.max_abs, ar);
    ++rep.n_points;
    if (interior(x)) {
      rep.interior_max_abs = std::max(rep.interior_max_abs, ar);
      ++rep.n_interior;
    }
  }
  return rep;
}

}  // namespace cwave
