#include "cwave/frame.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "json.hpp"

namespace cwave {

namespace {
constexpr double kPi = 3.14159265358979323846;
}

double FrameElement::scale() const { return std::ldexp(1.0, -j); }

std::pair<double, double> FrameElement::support() const {
  const double s = scale();
  return {k * s, (k + 1) * s};
}

double lobe_eval(double x, double a, double s) {
  const double y = x - a;
  if (y <= 0.0 || y >= s) return 0.0;
  const double v = std::sin(kPi * y / s);
  return v * v;
}

double kak_eval_unit(double x, double a, double ramp, double flat) {
  const double y = x - a;
  if (y <= 0.0 || y >= 2.0 * ramp + flat) return 0.0;
  if (y < ramp) {
    const double v = std::sin(kPi * y / (2.0 * ramp));
    return v * v;
  }
  if (y <= ramp + flat) return 1.0;
  const double v = std::sin(kPi * (y - flat) / (2.0 * ramp));
  return v * v;
}

double eta_eval(const FrameElement& elem, double x) {
  const double s = elem.scale();
  const double a = elem.k * s;
  if (elem.j > 0) return lobe_eval(x, a, s);
  return kak_eval_unit(x, a, 0.5, s - 1.0);
}

double two_scale_check(int j, int k, int grid_points, int child_shift_steps) {
  const double s = std::ldexp(1.0, -j);
  const double a = k * s;
  const double shift = child_shift_steps * (s / 2.0);
  double defect = 0.0;
  const double lo = a - 0.5 * s;
  const double hi = a + 2.5 * s;
  for (int i = 0; i <= grid_points; ++i) {
    const double x = lo + (hi - lo) * double(i) / grid_points;
    const double lhs = kak_eval_unit(x, a, s / 2.0, s / 2.0);
    const double rhs = lobe_eval(x, a, s) + lobe_eval(x, a + shift, s);
    defect = std::max(defect, std::abs(lhs - rhs));
  }
  return defect;
}

std::vector<int> children(int k, int j, int j_prime) {
  if (j_prime < j) throw std::invalid_argument("children() needs j' >= j; swap the roles");
  const int factor = 1 << (j_prime - j);
  std::vector<int> out;
  out.reserve(factor);
  for (int kp = k * factor; kp < (k + 1) * factor; ++kp) out.push_back(kp);
  return out;
}

double partition_check(int j, double x_lo, double x_hi, int grid_points) {
  const double s = std::ldexp(1.0, -j);
  double defect = 0.0;
  for (int i = 0; i <= grid_points; ++i) {
    const double x = x_lo + (x_hi - x_lo) * double(i) / grid_points;
    // exactly the two half-step translates whose lobes cover x
    const double q = std::floor(2.0 * x / s);
    double sum = 0.0;
    for (double idx : {q - 1.0, q, q + 1.0}) sum += lobe_eval(x, idx * s / 2.0, s);
    defect = std::max(defect, std::abs(sum - 1.0));
  }
  return defect;
}

// ---------------------------------------------------------------------------
// Expansions
// ---------------------------------------------------------------------------

double FrameExpansion::eval(double x) const {
  double sum = 0.0;
  for (int j = j_min; j <= j_max; ++j) {
    const double s = std::ldexp(1.0, -j);
    const int k = static_cast<int>(std::floor(x / s));
    for (int kk : {k - 1, k, k + 1}) {  // boundary-safe
      auto it = coeffs.find({kk, j});
      if (it != coeffs.end() && it->second != 0.0)
        sum += it->second * eta_eval(FrameElement{kk, j}, x);
    }
  }
  return sum;
}

std::string FrameExpansion::to_json() const {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& [kj, c] : coeffs)
    arr.push_back({{"k", kj.first}, {"j", kj.second}, {"c", c}});
  return arr.dump(2);
}

FrameExpansion FrameExpansion::from_json(const std::string& text) {
  FrameExpansion e;
  const auto arr = nlohmann::json::parse(text);
  bool first = true;
  for (const auto& item : arr) {
    const int k = item.at("k").get<int>();
    const int j = item.at("j").get<int>();
    e.coeffs[{k, j}] = item.at("c").get<double>();
    if (first) { e.j_min = e.j_max = j; first = false; }
    e.j_min = std::min(e.j_min, j);
    e.j_max = std::max(e.j_max, j);
  }
  return e;
}

ExpandResult expand(const std::function<double(double)>& f, double x_lo, double x_hi, int j_min,
                    int j_max, const ExpandOptions& opts) {
  if (j_max < j_min) throw std::invalid_argument("j_max must be >= j_min");
  ExpandResult res;
  res.expansion.j_min = j_min;
  res.expansion.j_max = j_max;
  auto& coeffs = res.expansion.coeffs;

  struct Elem {
    FrameElement fe;
    double norm2;  // <eta, eta> over the tile
  };
  std::vector<Elem> elems;
  for (int j = j_min; j <= j_max; ++j) {
    const double s = std::ldexp(1.0, -j);
    const int k_lo = static_cast<int>(std::floor(x_lo / s));
    const int k_hi = static_cast<int>(std::ceil(x_hi / s)) - 1;
    for (int k = k_lo; k <= k_hi; ++k) {
      FrameElement fe{k, j};
      const auto [a, bnd] = fe.support();
      const int m = opts.quadrature_points;
      const double h = (bnd - a) / m;
      double n2 = 0.0;
      for (int i = 0; i <= m; ++i) {
        const double x = a + i * h;
        const double v = eta_eval(fe, x);
        const double wq = (i == 0 || i == m) ? 0.5 : 1.0;
        n2 += wq * v * v;
      }
      n2 *= h;
      elems.push_back({fe, n2});
      coeffs[{k, j}] = 0.0;
    }
  }

  auto inner_residual = [&](const Elem& e) {
    const auto [a, bnd] = e.fe.support();
    const int m = opts.quadrature_points;
    const double h = (bnd - a) / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double x = a + i * h;
      const double v = eta_eval(e.fe, x);
      if (v == 0.0) continue;
      const double r = f(x) - res.expansion.eval(x);
      const double wq = (i == 0 || i == m) ? 0.5 : 1.0;
      acc += wq * r * v;
    }
    return acc * h;
  };

  // Coarse-to-fine residual fitting, swept until the coefficients settle.
  double scale_ref = 1e-30;
  for (int sweep = 0; sweep < opts.max_sweeps; ++sweep) {
    double max_delta = 0.0;
    for (const auto& e : elems) {
      if (e.norm2 <= 0.0) continue;
      const double delta = inner_residual(e) / e.norm2;
      coeffs[{e.fe.k, e.fe.j}] += delta;
      max_delta = std::max(max_delta, std::abs(delta));
      scale_ref = std::max(scale_ref, std::abs(coeffs[{e.fe.k, e.fe.j}]));
    }
    res.sweeps = sweep + 1;
    if (max_delta <= opts.tol * std::max(1.0, scale_ref)) break;
  }

  // L2 reconstruction error over the window.
  {
    const int m = 8 * opts.quadrature_points;
    const double h = (x_hi - x_lo) / m;
    double acc = 0.0;
    for (int i = 0; i <= m; ++i) {
      const double x = x_lo + i * h;
      const double r = f(x) - res.expansion.eval(x);
      const double wq = (i == 0 || i == m) ? 0.5 : 1.0;
      acc += wq * r * r;
    }
    res.l2_error = std::sqrt(acc * h);
  }
  return res;
}

double SquareExpansion::eval(double x) const {
  double sum = 0.0;
  for (const auto& t : terms)
    sum += t.weight * eta_eval(t.a, x) * eta_eval(t.b, x);
  return sum;
}

int SquareExpansion::cross_count(int k, int j, int j_prime) const {
  int n = 0;
  for (const auto& t : terms) {
    if (t.a.k == k && t.a.j == j && t.b.j == j_prime && !(t.b.k == k && j_prime == j)) ++n;
    else if (j_prime != j && t.b.k == k && t.b.j == j && t.a.j == j_prime) ++n;
  }
  return n;
}

SquareExpansion square_expand(const FrameExpansion& exp) {
  SquareExpansion sq;
  std::vector<std::pair<FrameElement, double>> es;
  for (const auto& [kj, c] : exp.coeffs)
    if (c != 0.0) es.push_back({FrameElement{kj.first, kj.second}, c});

  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t l = i; l < es.size(); ++l) {
      const auto& [ea, ca] = es[i];
      const auto& [eb, cb] = es[l];
      // overlap: identical tiles at equal scale, children relation otherwise
      bool overlap = false;
      if (ea.j == eb.j) {
        overlap = ea.k == eb.k;
      } else {
        const FrameElement& coarse = ea.j < eb.j ? ea : eb;
        const FrameElement& fine = ea.j < eb.j ? eb : ea;
        const auto kids = children(coarse.k, coarse.j, fine.j);
        overlap = std::find(kids.begin(), kids.end(), fine.k) != kids.end();
      }
      if (!overlap) continue;
      SquareTerm st;
      st.a = ea;
      st.b = eb;
      st.weight = (i == l) ? ca * cb : 2.0 * ca * cb;
      sq.terms.push_back(st);
    }
  }
  return sq;
}

// ---------------------------------------------------------------------------
// Morlet
// ---------------------------------------------------------------------------

std::complex<double> morlet_eval(double alpha, double x) {
  if (alpha <= 0.0) throw std::invalid_argument("Morlet scale alpha must be positive");
  const double norm = std::pow(kPi, -0.25);
  return norm * std::exp(std::complex<double>(-0.5 * x * x, -alpha * x));
}

double MorletParams::half_width(int j) const { return 1.0 / (alpha * std::ldexp(1.0, j)); }

std::complex<double> morlet_reconstruct(const MorletParams& p, double x) {
  std::complex<double> sum = 0.0;
  for (const auto& [jk, c] : p.coeffs)
    sum += c * morlet_eval(p.alpha, std::ldexp(1.0, jk.first) * x - jk.second);
  return sum;
}

DerivativeEstimate derivative_estimate(const MorletParams& p, double x0, int n) {
  if (p.alpha < 5.0)
    throw std::invalid_argument("derivative estimate needs alpha >= 5");
  if (n < 0) throw std::invalid_argument("derivative order must be nonnegative");

  const double psi0 = std::pow(kPi, -0.25);
  DerivativeEstimate est;
  bool covered = false;
  double best = 0.0;
  for (const auto& [jk, c] : p.coeffs) {
    const int j = jk.first;
    const int k_cover = static_cast<int>(std::lround(std::ldexp(1.0, j) * x0));
    if (jk.second != k_cover) continue;
    covered = true;
    const double uj = psi0 * c;
    const double inv_L = p.alpha * std::ldexp(1.0, j);
    double contrib = uj;
    for (int i = 0; i < n; ++i) contrib *= inv_L;
    est.multi_scale += contrib;
    if (std::abs(uj) > std::abs(best)) {
      best = uj;
      est.dominant_scale = contrib;
      est.dominant_j = j;
    }
  }
  if (!covered)
    throw std::invalid_argument("no retained scale covers the requested point");
  return est;
}

}  // namespace cwave
