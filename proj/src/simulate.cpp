#include "cwave/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace cwave {

namespace {

constexpr double kPi = 3.14159265358979323846;

struct BlowUp {
  double t;
  std::string note;
};

class Stepper {
 public:
  explicit Stepper(const SimConfig& cfg)
      : cfg_(cfg), n_(cfg.n_points), dx_(cfg.dx()),
        mu_(cfg.hyperviscosity < 0 ? 1e-4 * dx_ * dx_ : cfg.hyperviscosity) {
    if (n_ < 16 || (n_ & (n_ - 1)) != 0)
      throw std::invalid_argument("grid size must be a power of two, >= 16");
    if (cfg_.flux.convective.empty() && cfg_.flux.dispersive.empty())
      throw std::invalid_argument("simulator needs a conservation-form flux");
    f_.resize(n_);
    g_.resize(n_);
    w_.resize(n_);
    k1_.resize(n_);
    k2_.resize(n_);
    k3_.resize(n_);
    k4_.resize(n_);
    tmp_.resize(n_);
  }

  double mu() const { return mu_; }

  double auto_dt(const std::vector<double>& u) const {
    double fp_max = 1.0;
    for (double v : u) {
      double fp = 0.0;
      for (const auto& [c, p] : cfg_.flux.convective) fp += std::abs(c * p * ipow(v, p - 1));
      for (const auto& [c, p] : cfg_.flux.dispersive) fp += std::abs(c * p * ipow(v, p - 1));
      fp_max = std::max(fp_max, fp);
    }
    return cfg_.cfl * dx_ * dx_ * dx_ / fp_max;
  }

  // rhs = -D1[F(u) + D2 G(u)] - mu D4 u
  void rhs(const std::vector<double>& u, std::vector<double>& out) {
    const double inv_dx = 1.0 / dx_;
    const double inv_dx2 = inv_dx * inv_dx;
    const double inv_dx4 = inv_dx2 * inv_dx2;

    for (std::size_t i = 0; i < n_; ++i) {
      double fv = 0.0, gv = 0.0;
      const double v = u[i];
      for (const auto& [c, p] : cfg_.flux.convective) fv += c * ipow(v, p);
      for (const auto& [c, p] : cfg_.flux.dispersive) gv += c * ipow(v, p);
      f_[i] = fv;
      g_[i] = gv;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      // 4th-order D2 of G
      const double d2 = (-g_[at(i - 2)] + 16.0 * g_[at(i - 1)] - 30.0 * g_[i] +
                         16.0 * g_[at(i + 1)] - g_[at(i + 2)]) /
                        12.0 * inv_dx2;
      w_[i] = f_[i] + d2;
    }
    for (std::size_t i = 0; i < n_; ++i) {
      const double d1 = (w_[at(i - 2)] - 8.0 * w_[at(i - 1)] + 8.0 * w_[at(i + 1)] -
                         w_[at(i + 2)]) /
                        12.0 * inv_dx;
      const double d4 = (-u[at(i - 3)] + 12.0 * u[at(i - 2)] - 39.0 * u[at(i - 1)] +
                         56.0 * u[i] - 39.0 * u[at(i + 1)] + 12.0 * u[at(i + 2)] -
                         u[at(i + 3)]) /
                        6.0 * inv_dx4;
      out[i] = -d1 - mu_ * d4;
    }
  }

  void rk4(std::vector<double>& u, double dt) {
    rhs(u, k1_);
    axpy(u, k1_, 0.5 * dt, tmp_);
    rhs(tmp_, k2_);
    axpy(u, k2_, 0.5 * dt, tmp_);
    rhs(tmp_, k3_);
    axpy(u, k3_, dt, tmp_);
    rhs(tmp_, k4_);
    const double c = dt / 6.0;
    for (std::size_t i = 0; i < n_; ++i)
      u[i] += c * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }

  void check_finite(const std::vector<double>& u, double t, double u0_max) const {
    for (double v : u) {
      if (!std::isfinite(v))
        throw BlowUp{t, "non-finite field value"};
      if (std::abs(v) > cfg_.blowup_factor * u0_max)
        throw BlowUp{t, "field exceeded " + std::to_string(cfg_.blowup_factor) +
                            " times the initial maximum"};
    }
  }

 private:
  static double ipow(double x, int e) {
    if (e <= 0) return 1.0;
    double r = 1.0;
    for (int i = 0; i < e; ++i) r *= x;
    return r;
  }

  std::size_t at(std::size_t i) const { return i & (n_ - 1); }  // power-of-two wrap

  static void axpy(const std::vector<double>& u, const std::vector<double>& k, double a,
                   std::vector<double>& out) {
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = u[i] + a * k[i];
  }

  const SimConfig& cfg_;
  std::size_t n_;
  double dx_;
  double mu_;
  std::vector<double> f_, g_, w_, k1_, k2_, k3_, k4_, tmp_;
};

double grid_mass(const std::vector<double>& u, double dx) {
  double s = 0.0;
  for (double v : u) s += v;
  return s * dx;
}

}  // namespace

SimState step(const SimState& state, const SimConfig& config) {
  Stepper st(config);
  SimState out = state;
  const double u0_max = std::max(1e-300, *std::max_element(out.u.begin(), out.u.end(),
                                                           [](double a, double b) {
                                                             return std::abs(a) < std::abs(b);
                                                           }));
  const double dt = config.dt > 0 ? config.dt : st.auto_dt(out.u);
  try {
    st.rk4(out.u, dt);
    st.check_finite(out.u, out.t + dt, std::abs(u0_max));
  } catch (const BlowUp& b) {
    throw std::runtime_error("blow-up at t = " + std::to_string(b.t) + ": " + b.note);
  }
  out.t += dt;
  out.mass = grid_mass(out.u, config.dx());
  return out;
}

SimTrace run(const std::vector<double>& initial, const SimConfig& config) {
  if (initial.size() != config.n_points)
    throw std::invalid_argument("initial data size does not match the grid");
  Stepper st(config);
  SimTrace trace;
  trace.dx = config.dx();

  std::vector<double> u = initial;
  double u0_max = 0.0;
  for (double v : u) u0_max = std::max(u0_max, std::abs(v));
  if (u0_max == 0.0) u0_max = 1.0;

  const double dt = config.dt > 0 ? config.dt : st.auto_dt(u);
  trace.dt = dt;
  const long long total_steps = static_cast<long long>(std::ceil(config.t_end / dt - 1e-9));
  const long long stride =
      std::max<long long>(1, static_cast<long long>(std::llround(config.snapshot_interval / dt)));

  trace.initial_mass = grid_mass(u, trace.dx);

  auto emit = [&](double t) {
    Snapshot snap;
    snap.t = t;
    snap.u = u;
    trace.snapshots.push_back(std::move(snap));
    trace.mass_series.push_back(grid_mass(u, trace.dx));
    trace.inventories.push_back(detect_compactons(u, trace.dx, config.detect_threshold));
    const double denom = std::max(std::abs(trace.initial_mass), 1e-12);
    trace.max_rel_mass_drift = std::max(
        trace.max_rel_mass_drift, std::abs(trace.mass_series.back() - trace.initial_mass) / denom);

    // speeds from center displacement across consecutive snapshots
    if (trace.inventories.size() >= 2) {
      auto& cur = trace.inventories.back();
      const auto& prev = trace.inventories[trace.inventories.size() - 2];
      const double dt_snap =
          trace.snapshots.back().t - trace.snapshots[trace.snapshots.size() - 2].t;
      if (dt_snap > 0) {
        for (auto& pulse : cur.items) {
          double best = 1e300;
          double speed = 0.0;
          for (const auto& old : prev.items) {
            double d = pulse.center - old.center;
            // periodic unwrap to the nearest image
            d -= config.domain_length * std::round(d / config.domain_length);
            if (std::abs(d) < best && std::abs(old.amplitude - pulse.amplitude) <
                                          0.5 * std::max(old.amplitude, pulse.amplitude)) {
              best = std::abs(d);
              speed = d / dt_snap;
            }
          }
          if (best < 0.25 * config.domain_length) {
            pulse.speed = speed;
            pulse.speed_known = true;
          }
        }
      }
    }
  };

  emit(0.0);
  try {
    for (long long s = 1; s <= total_steps; ++s) {
      st.rk4(u, dt);
      if (s % 8 == 0 || s == total_steps) st.check_finite(u, s * dt, u0_max);
      if (s % stride == 0 || s == total_steps) emit(s * dt);
    }
  } catch (const BlowUp& b) {
    trace.blew_up = true;
    trace.blowup_time = b.t;
    trace.blowup_note = b.note;
    Snapshot snap;  // diagnostic snapshot at failure
    snap.t = b.t;
    snap.u = u;
    trace.snapshots.push_back(std::move(snap));
    trace.inventories.push_back(CompactonInventory{});
    trace.mass_series.push_back(grid_mass(u, trace.dx));
  }
  return trace;
}

CompactonInventory detect_compactons(const std::vector<double>& u, double dx, double threshold) {
  CompactonInventory inv;
  const std::size_t n = u.size();
  if (n < 8) return inv;
  for (double v : u)
    if (!std::isfinite(v)) return inv;  // blown-up diagnostic snapshots stay empty

  auto at = [&](std::size_t i) { return u[i % n]; };

  for (std::size_t i = 0; i < n; ++i) {
    const double um = at(i + n - 1), u0 = u[i], up = at(i + 1);
    if (u0 < threshold || u0 < um || u0 <= up) continue;

    // parabolic refinement of the crest
    const double denom = um - 2.0 * u0 + up;
    double frac = 0.0;
    if (denom < 0.0) frac = 0.5 * (um - up) / denom;
    const double center = (static_cast<double>(i) + frac) * dx;
    const double amp = u0 - 0.25 * (um - up) * frac;

    // lobe points above 20% of the crest, stopping at the first minimum
    std::vector<std::pair<double, double>> pts;  // (distance, arccos(sqrt(u/A)))
    for (int dir : {-1, +1}) {
      double prev = u0;
      for (std::size_t s = 1; s < n / 2; ++s) {
        const std::size_t idx = (i + n + static_cast<std::size_t>(dir) * s) % n;
        const double v = u[idx];
        if (v > prev + 1e-12) break;  // climbing into a neighbor lobe
        if (v < 0.2 * amp) break;
        const double ratio = std::min(1.0, std::max(0.0, v / amp));
        pts.emplace_back(static_cast<double>(s) * dx, std::acos(std::sqrt(ratio)));
        prev = v;
      }
    }
    if (pts.size() >= 4) {
      double sdd = 0.0, sdy = 0.0;
      for (const auto& [d, y] : pts) {
        sdd += d * d;
        sdy += d * y;
      }
      DetectedPulse p;
      p.amplitude = amp;
      p.center = center;
      p.half_width = sdy > 0 ? sdd / sdy : 0.0;
      inv.items.push_back(p);
    }
  }
  std::sort(inv.items.begin(), inv.items.end(),
            [](const DetectedPulse& a, const DetectedPulse& b) { return a.center < b.center; });

  // flag unresolved overlaps: adjacent lobes closer than the sum of their
  // nominal supports (pi*L each side)
  for (std::size_t i = 1; i < inv.items.size(); ++i) {
    const double gap = inv.items[i].center - inv.items[i - 1].center;
    const double ext =
        0.5 * kPi * (inv.items[i].half_width + inv.items[i - 1].half_width);
    if (gap < ext) inv.overlapping = true;
  }
  return inv;
}

double cross_correlation_shift(const std::vector<double>& a, const std::vector<double>& b,
                               double dx) {
  if (a.size() != b.size() || a.empty())
    throw std::invalid_argument("cross-correlation needs equal-size snapshots");
  const std::size_t n = a.size();
  std::vector<double> corr(n, 0.0);
  for (std::size_t lag = 0; lag < n; ++lag) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += a[i] * b[(i + lag) % n];
    corr[lag] = s;
  }
  std::size_t best = 0;
  for (std::size_t lag = 1; lag < n; ++lag)
    if (corr[lag] > corr[best]) best = lag;
  // parabolic sub-cell refinement
  const double cm = corr[(best + n - 1) % n], c0 = corr[best], cp = corr[(best + 1) % n];
  const double den = cm - 2.0 * c0 + cp;
  const double frac = den < 0.0 ? 0.5 * (cm - cp) / den : 0.0;
  double lag = static_cast<double>(best) + frac;
  if (lag > static_cast<double>(n) / 2.0) lag -= static_cast<double>(n);
  return lag * dx;
}

std::vector<double> sample_compacton(const SimConfig& cfg, double V, double x0) {
  std::vector<double> u(cfg.n_points, 0.0);
  const double A = 4.0 * V / 3.0;
  for (std::size_t i = 0; i < cfg.n_points; ++i) {
    double xi = static_cast<double>(i) * cfg.dx() - x0;
    xi -= cfg.domain_length * std::round(xi / cfg.domain_length);
    if (std::abs(xi) < 2.0 * kPi) {
      const double c = std::cos(xi / 4.0);
      u[i] = A * c * c;
    }
  }
  return u;
}

std::vector<double> sample_stretched_bump(const SimConfig& cfg, double amplitude,
                                          double width_factor, double x0) {
  std::vector<double> u(cfg.n_points, 0.0);
  const double half_support = 2.0 * kPi * width_factor;
  for (std::size_t i = 0; i < cfg.n_points; ++i) {
    double xi = static_cast<double>(i) * cfg.dx() - x0;
    xi -= cfg.domain_length * std::round(xi / cfg.domain_length);
    if (std::abs(xi) < half_support) {
      const double c = std::cos(xi / (4.0 * width_factor));
      u[i] = amplitude * c * c;
    }
  }
  return u;
}

}  // namespace cwave
