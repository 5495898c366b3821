#include <cmath>

#include "cwave/equation.hpp"
#include "cwave/simulate.hpp"
#include "cwave/waves.hpp"
#include "doctest.h"

using namespace cwave;

namespace {

SimConfig k22_config() {
  SimConfig cfg;
  cfg.domain_length = 256.0;
  cfg.n_points = 2048;
  cfg.flux = *to_conservation_form(parse_equation("u_t + (u^2)_x + (u^2)_xxx = 0"));
  return cfg;
}

}  // namespace

TEST_CASE("a single step moves a traveling compacton by less than 1e-6 in amplitude") {
  SimConfig cfg = k22_config();
  cfg.dt = 1e-4;
  SimState s;
  s.t = 0.0;
  s.u = sample_compacton(cfg, 0.75, 64.0);
  const double before = *std::max_element(s.u.begin(), s.u.end());
  const auto next = step(s, cfg);
  const double after = *std::max_element(next.u.begin(), next.u.end());
  CHECK(std::abs(after - before) < 1e-6);
  CHECK(next.t == doctest::Approx(1e-4));
}

TEST_CASE("the zero field is a fixed point") {
  SimConfig cfg = k22_config();
  cfg.dt = 1e-3;
  SimState s;
  s.u.assign(cfg.n_points, 0.0);
  auto next = step(s, cfg);
  next = step(next, cfg);
  for (double v : next.u) CHECK(v == 0.0);
}

TEST_CASE("a spatially constant field stays constant with exact mass") {
  SimConfig cfg = k22_config();
  cfg.dt = 1e-3;
  SimState s;
  s.u.assign(cfg.n_points, 0.7);
  const auto next = step(s, cfg);
  for (double v : next.u) CHECK(v == doctest::Approx(0.7).epsilon(1e-14));
  CHECK(next.mass == doctest::Approx(0.7 * cfg.domain_length).epsilon(1e-14));
}

TEST_CASE("detector recovers an exact compacton profile") {
  SimConfig cfg = k22_config();
  const auto u = sample_compacton(cfg, 0.75, 64.0);
  const auto inv = detect_compactons(u, cfg.dx(), 0.05);
  REQUIRE(inv.items.size() == 1);
  CHECK(inv.items[0].amplitude == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(inv.items[0].center == doctest::Approx(64.0).epsilon(1e-3));
  CHECK(inv.items[0].half_width == doctest::Approx(4.0).epsilon(0.01));
  CHECK_FALSE(inv.overlapping);
}

TEST_CASE("detector: zero field gives an empty inventory") {
  const std::vector<double> u(2048, 0.0);
  CHECK(detect_compactons(u, 0.125, 0.05).items.empty());
}

TEST_CASE("detector separates two disjoint compactons of different amplitude") {
  SimConfig cfg = k22_config();
  auto u = sample_compacton(cfg, 0.75, 64.0);  // A = 1
  const auto other = sample_compacton(cfg, 0.375, 128.0);  // A = 0.5
  for (std::size_t i = 0; i < u.size(); ++i) u[i] += other[i];
  const auto inv = detect_compactons(u, cfg.dx(), 0.05);
  REQUIRE(inv.items.size() == 2);
  CHECK(inv.items[0].amplitude == doctest::Approx(1.0).epsilon(1e-3));
  CHECK(inv.items[1].amplitude == doctest::Approx(0.5).epsilon(1e-3));
  CHECK(inv.items[0].center < inv.items[1].center);
}

TEST_CASE("short run: mass conserved and speed recovered by cross-correlation") {
  SimConfig cfg = k22_config();
  cfg.t_end = 10.0;
  cfg.snapshot_interval = 2.0;
  const auto u0 = sample_compacton(cfg, 0.75, 64.0);
  const auto tr = run(u0, cfg);
  REQUIRE_FALSE(tr.blew_up);
  CHECK(tr.max_rel_mass_drift < 1e-6);
  const auto& a = tr.snapshots.front();
  const auto& b = tr.snapshots.back();
  const double speed = cross_correlation_shift(a.u, b.u, tr.dx) / (b.t - a.t);
  CHECK(speed == doctest::Approx(0.75).epsilon(0.02));
  // tracked speeds from center displacement agree with the amplitude law
  const auto& inv = tr.inventories.back();
  REQUIRE(inv.items.size() == 1);
  CHECK(inv.items[0].speed_known);
  CHECK(inv.items[0].speed / inv.items[0].amplitude == doctest::Approx(0.75).epsilon(0.05));
}

TEST_CASE("determinism: identical config and data give bitwise-identical traces") {
  SimConfig cfg = k22_config();
  cfg.t_end = 0.5;
  cfg.snapshot_interval = 0.25;
  const auto u0 = sample_compacton(cfg, 0.75, 64.0);
  const auto t1 = run(u0, cfg);
  const auto t2 = run(u0, cfg);
  REQUIRE(t1.snapshots.size() == t2.snapshots.size());
  for (std::size_t s = 0; s < t1.snapshots.size(); ++s)
    for (std::size_t i = 0; i < t1.snapshots[s].u.size(); ++i)
      CHECK(t1.snapshots[s].u[i] == t2.snapshots[s].u[i]);
}

TEST_CASE("shape error drops by >= 8x per halving at t = 10") {
  // auto dt scales as dx^3, so the RK4 error is negligible against the
  // spatial truncation on every grid
  std::vector<double> errs;
  for (std::size_t n : {512u, 1024u, 2048u}) {
    SimConfig cfg = k22_config();
    cfg.n_points = n;
    cfg.t_end = 10.0;
    cfg.snapshot_interval = 10.0;
    const auto u0 = sample_compacton(cfg, 0.75, 64.0);
    const auto tr = run(u0, cfg);
    REQUIRE_FALSE(tr.blew_up);
    const auto& last = tr.snapshots.back();
    const auto wave = TravelingWave::k22_compacton(0.75);
    double l2 = 0.0;
    for (std::size_t i = 0; i < last.u.size(); ++i) {
      const double x = static_cast<double>(i) * cfg.dx();
      const double d = last.u[i] - wave.eval(x - 64.0, last.t);
      l2 += d * d;
    }
    errs.push_back(std::sqrt(l2 * cfg.dx()));
  }
  CHECK(errs[0] / errs[1] >= 8.0);
  CHECK(errs[1] / errs[2] >= 8.0);
}

TEST_CASE("narrow compact data trips the blow-up detector quickly") {
  SimConfig cfg = k22_config();
  cfg.t_end = 5.0;
  const auto u0 = sample_stretched_bump(cfg, 1.0, 0.5, 64.0);
  const auto tr = run(u0, cfg);
  CHECK(tr.blew_up);
  CHECK(tr.blowup_time < 5.0);
  CHECK_FALSE(tr.blowup_note.empty());
}

TEST_CASE("step() surfaces blow-up as an error") {
  SimConfig cfg = k22_config();
  cfg.dt = 1.0;  // grossly unstable step
  SimState s;
  s.u = sample_compacton(cfg, 0.75, 64.0);
  CHECK_THROWS_WITH_AS(step(step(step(s, cfg), cfg), cfg), doctest::Contains("blow-up"),
                       std::runtime_error);
}
