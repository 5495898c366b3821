#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "cwave/equation.hpp"

namespace cwave {

// ---------------------------------------------------------------------------
// Method-of-lines integration of conservation-form K(n,m)-type equations,
// u_t = -d/dx[ F(u) + d^2/dx^2 G(u) ] - mu * d^4/dx^4 u, on a periodic grid:
// RK4 in time, 4th-order central differences applied to the flux composites,
// plus a small conservation-form hyperviscosity for edge regularization.
// ---------------------------------------------------------------------------

struct SimConfig {
  double domain_length = 256.0;
  std::size_t n_points = 2048;  // power of two
  double dt = 0.0;              // 0: auto, cfl * dx^3 / max(1, max|flux'|)
  double t_end = 50.0;
  double cfl = 0.1;
  double hyperviscosity = -1.0;  // negative: auto, 1e-4 * dx^2
  double snapshot_interval = 0.5;
  double blowup_factor = 1e3;
  double detect_threshold = 0.05;
  FluxForm flux;  // from to_conservation_form()

  double dx() const { return domain_length / static_cast<double>(n_points); }
};

struct SimState {
  double t = 0.0;
  std::vector<double> u;
  double mass = 0.0;  // integral of u
};

struct DetectedPulse {
  double amplitude = 0.0;
  double center = 0.0;
  double half_width = 0.0;  // L in A*cos^2(xi/L)
  double speed = 0.0;
  bool speed_known = false;
};

struct CompactonInventory {
  std::vector<DetectedPulse> items;  // centers ascending
  bool overlapping = false;          // adjacent lobes touch; left unsplit
};

struct Snapshot {
  double t = 0.0;
  std::vector<double> u;
};

struct SimTrace {
  std::vector<Snapshot> snapshots;
  std::vector<CompactonInventory> inventories;  // one per snapshot
  std::vector<double> mass_series;
  double dx = 0.0;
  double dt = 0.0;
  bool blew_up = false;
  double blowup_time = 0.0;
  std::string blowup_note;
  double initial_mass = 0.0;
  double max_rel_mass_drift = 0.0;
};

// One RK4 step with the configured (or auto) dt. Throws on blow-up.
SimState step(const SimState& state, const SimConfig& config);

SimTrace run(const std::vector<double>& initial, const SimConfig& config);

CompactonInventory detect_compactons(const std::vector<double>& u, double dx, double threshold);

// Measured translation between two snapshots of a traveling profile:
// cross-correlation lag (parabolic sub-cell refinement), periodic-aware.
double cross_correlation_shift(const std::vector<double>& a, const std::vector<double>& b,
                               double dx);

// Initial data helpers (centered at x0 on the grid).
std::vector<double> sample_compacton(const SimConfig& cfg, double V, double x0);
// cos^2 bump of the given amplitude with support width_factor times the
// compacton support.
std::vector<double> sample_stretched_bump(const SimConfig& cfg, double amplitude,
                                          double width_factor, double x0);

}  // namespace cwave
