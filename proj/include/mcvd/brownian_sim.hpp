#pragma once

// Particle-level Monte Carlo of molecules released at a point and absorbed on
// contact with the receiver sphere.

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcvd/channel.hpp"

namespace mcvd {

enum class AbsorptionMode {
  /// Absorbed iff the end-of-step position lies inside the sphere.
  EndOfStep,
  /// EndOfStep plus a diffusion-bridge test for crossings within the step.
  BridgeCorrected,
};

struct SimConfig {
  ChannelGeometry geom;
  DiffusionEnv env;
  EmissionSpec em;
  double t_end = 0.0;
  std::uint64_t seed = 0;
  /// Simulated molecules; counts are reported unscaled, callers rescale by
  /// em.n_tx() / particles when they want transmitter-equivalent numbers.
  std::uint64_t particles = 1;
  AbsorptionMode absorption_mode = AbsorptionMode::EndOfStep;
  /// Replace runs of steps far from the receiver by one exact Gaussian move
  /// when the path cannot reach the sphere except with probability < 4e-13.
  bool far_field_jumps = true;
  /// Upper bound on t_end / dt.
  std::size_t max_bins = 100'000'000;

  /// Baseline channel: d = 10, rr = 10, D = 79.4, n_tx = 5000, dt = 1e-4.
  static SimConfig baseline(double t_end_s, std::uint64_t particles, std::uint64_t seed);
};

/// Execution knobs that never change the result.
struct SimOptions {
  /// 0 picks std::thread::hardware_concurrency().
  unsigned workers = 1;
  /// Keep the end position of every surviving particle.
  bool keep_survivor_positions = false;
};

struct SimResult {
  /// bin_counts[k] counts absorptions whose step ended in (k dt, (k+1) dt].
  std::vector<std::uint64_t> bin_counts;
  std::uint64_t absorbed_total = 0;
  std::uint64_t survivors = 0;
  SimConfig config;
  /// t_end rounded up to a whole number of bins.
  double t_end_effective = 0.0;
  double wall_time_s = 0.0;
  std::vector<std::array<double, 3>> survivor_positions;

  double bin_width() const noexcept { return config.em.dt(); }
};

/// Runs the simulation. The result depends on the configuration only; the
/// worker count in `options` affects wall time, nothing else.
SimResult simulate(const SimConfig& cfg, const SimOptions& options = {});

/// Number of bins covering [0, t_end]; t_end within 1e-9 relative of a whole
/// multiple of dt is taken as that multiple, otherwise rounded up.
std::size_t bin_count_for(double t_end_s, double dt_s);

struct PeakEstimate {
  double t_peak_s;
  std::uint64_t n_peak;
};

/// Peak read-off from a noisy histogram: the maximum of a centered moving
/// average of `window` bins (truncated at the edges) gives the peak time as
/// that bin's midpoint; the peak count is the largest raw count within the
/// window around it.
PeakEstimate estimate_peak(std::span<const std::uint64_t> bin_counts, double dt_s,
                           std::size_t window);
PeakEstimate estimate_peak(const SimResult& result, std::size_t window);

}  // namespace mcvd
