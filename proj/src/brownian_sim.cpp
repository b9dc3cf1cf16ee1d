#include "mcvd/brownian_sim.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>
#include <string>
#include <thread>

#include "mcvd/errors.hpp"
#include "mcvd/philox.hpp"

namespace mcvd {
namespace {

// Philox counter layout: {step, substream, particle low word, particle high word}.
constexpr std::uint32_t kIncrementXY = 0;
constexpr std::uint32_t kIncrementZ = 1;
constexpr std::uint32_t kBridgeUniform = 2;

// A jump of k steps is taken only if the per-axis standard deviation of the
// whole move is at most gap / (sqrt(3) * kJumpSigmas). By the reflection
// principle the path then reaches the sphere with probability at most
// 12 * Phi_c(7.5) < 4e-13.
constexpr double kJumpSigmas = 7.5;

// u is at least 2^-53, so a bridge probability below exp(-37) never absorbs.
constexpr double kBridgeExponentCutoff = 37.0;

struct Vec3 {
  double x, y, z;
  double norm() const noexcept { return std::sqrt(x * x + y * y + z * z); }
};

struct ParticleOutcome {
  bool absorbed;
  std::size_t bin;
  Vec3 position;
};

class ParticleTracker {
 public:
  ParticleTracker(const SimConfig& cfg, std::size_t n_bins)
      : key_(philox_key(cfg.seed)),
        rr_(cfg.geom.rr()),
        r0_(cfg.geom.r0()),
        step_sigma_(std::sqrt(2.0 * cfg.env.D() * cfg.em.dt())),
        bridge_scale_(1.0 / (cfg.env.D() * cfg.em.dt())),
        jump_steps_per_gap2_(1.0 / (3.0 * kJumpSigmas * kJumpSigmas * step_sigma_ * step_sigma_)),
        bridge_(cfg.absorption_mode == AbsorptionMode::BridgeCorrected),
        jumps_(cfg.far_field_jumps),
        n_bins_(n_bins) {}

  ParticleOutcome run(std::uint64_t particle) const {
    const auto lo = static_cast<std::uint32_t>(particle);
    const auto hi = static_cast<std::uint32_t>(particle >> 32);
    Vec3 pos{r0_, 0.0, 0.0};
    double rho = r0_;
    std::size_t step = 0;
    while (step < n_bins_) {
      const double gap = rho - rr_;
      std::size_t span = 1;
      if (jumps_) {
        const double allowed = gap * gap * jump_steps_per_gap2_;
        const double remaining = static_cast<double>(n_bins_ - step);
        if (allowed >= 2.0) span = static_cast<std::size_t>(std::min(allowed, remaining));
      }
      const double sigma = span == 1 ? step_sigma_ : step_sigma_ * std::sqrt(static_cast<double>(span));
      const auto counter_step = static_cast<std::uint32_t>(step);
      const NormalPair xy = normal_pair(philox4x32_10({counter_step, kIncrementXY, lo, hi}, key_));
      const NormalPair zz = normal_pair(philox4x32_10({counter_step, kIncrementZ, lo, hi}, key_));
      const Vec3 next{pos.x + sigma * xy.first, pos.y + sigma * xy.second, pos.z + sigma * zz.first};
      const double next_rho = next.norm();
      step += span;

      if (span == 1) {
        bool absorbed = next_rho <= rr_;
        if (!absorbed && bridge_) {
          const double exponent = (rho - rr_) * (next_rho - rr_) * bridge_scale_;
          if (exponent < kBridgeExponentCutoff) {
            const PhiloxCounter block =
                philox4x32_10({counter_step, kBridgeUniform, lo, hi}, key_);
            absorbed = unit_open(block[0], block[1]) < std::exp(-exponent);
          }
        }
        if (absorbed) return {true, step - 1, next};
      }
      pos = next;
      rho = next_rho;
    }
    return {false, 0, pos};
  }

 private:
  PhiloxKey key_;
  double rr_;
  double r0_;
  double step_sigma_;
  double bridge_scale_;
  double jump_steps_per_gap2_;
  bool bridge_;
  bool jumps_;
  std::size_t n_bins_;
};

struct WorkerTally {
  std::vector<std::uint64_t> bins;
  std::uint64_t absorbed = 0;
  std::vector<std::array<double, 3>> survivors;
};

void validate(const SimConfig& cfg) {
  if (!std::isfinite(cfg.t_end) || !(cfg.t_end > 0.0)) {
    throw ConfigError("t-end", "simulation horizon must be finite and > 0");
  }
  if (cfg.particles < 1) throw ConfigError("particles", "particles must be >= 1");
  if (!cfg.env.is_absorbing()) {
    throw ConfigError("w", "the simulator models the fully absorbing receiver only");
  }
}

}  // namespace

SimConfig SimConfig::baseline(double t_end_s, std::uint64_t particles, std::uint64_t seed) {
  return SimConfig{
      .geom = ChannelGeometry::from_surface_distance(10.0, 10.0),
      .env = DiffusionEnv::absorbing(79.4),
      .em = EmissionSpec(5000, 1e-4),
      .t_end = t_end_s,
      .seed = seed,
      .particles = particles,
  };
}

std::size_t bin_count_for(double t_end_s, double dt_s) {
  const double ratio = t_end_s / dt_s;
  const double nearest = std::round(ratio);
  const double bins = std::abs(ratio - nearest) <= 1e-9 * std::max(1.0, ratio) ? nearest
                                                                               : std::ceil(ratio);
  return static_cast<std::size_t>(std::max(1.0, bins));
}

SimResult simulate(const SimConfig& cfg, const SimOptions& options) {
  validate(cfg);
  const auto started = std::chrono::steady_clock::now();

  const double ratio = cfg.t_end / cfg.em.dt();
  if (!(ratio < static_cast<double>(cfg.max_bins) + 1.0)) {
    throw ResourceError("simulation needs " + std::to_string(ratio) + " bins, cap is " +
                        std::to_string(cfg.max_bins));
  }
  const std::size_t n_bins = bin_count_for(cfg.t_end, cfg.em.dt());
  if (n_bins > cfg.max_bins || n_bins > 0xFFFFFFFFu) {
    throw ResourceError("simulation needs " + std::to_string(n_bins) + " bins, cap is " +
                        std::to_string(cfg.max_bins));
  }

  unsigned workers = options.workers == 0 ? std::thread::hardware_concurrency() : options.workers;
  workers = static_cast<unsigned>(
      std::clamp<std::uint64_t>(workers == 0 ? 1 : workers, 1, cfg.particles));

  const ParticleTracker tracker(cfg, n_bins);
  std::vector<WorkerTally> tallies(workers);
  auto work = [&](unsigned w) {
    WorkerTally& tally = tallies[w];
    tally.bins.assign(n_bins, 0);
    const std::uint64_t begin = cfg.particles * w / workers;
    const std::uint64_t end = cfg.particles * (w + 1) / workers;
    for (std::uint64_t p = begin; p < end; ++p) {
      const ParticleOutcome out = tracker.run(p);
      if (out.absorbed) {
        ++tally.bins[out.bin];
        ++tally.absorbed;
      } else if (options.keep_survivor_positions) {
        tally.survivors.push_back({out.position.x, out.position.y, out.position.z});
      }
    }
  };

  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) threads.emplace_back(work, w);
  }

  SimResult result{.config = cfg};
  result.bin_counts.assign(n_bins, 0);
  for (WorkerTally& tally : tallies) {
    for (std::size_t k = 0; k < n_bins; ++k) result.bin_counts[k] += tally.bins[k];
    result.absorbed_total += tally.absorbed;
    result.survivor_positions.insert(result.survivor_positions.end(), tally.survivors.begin(),
                                     tally.survivors.end());
  }
  result.survivors = cfg.particles - result.absorbed_total;
  result.t_end_effective = static_cast<double>(n_bins) * cfg.em.dt();

  std::uint64_t binned = 0;
  for (std::uint64_t c : result.bin_counts) binned += c;
  if (binned != result.absorbed_total || result.absorbed_total > cfg.particles) {
    throw InvariantError("simulate: absorption tally does not add up");
  }

  result.wall_time_s =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

PeakEstimate estimate_peak(std::span<const std::uint64_t> bin_counts, double dt_s,
                           std::size_t window) {
  if (bin_counts.empty()) throw std::invalid_argument("estimate_peak: empty histogram");
  if (window == 0 || window % 2 == 0 || window > bin_counts.size()) {
    throw std::invalid_argument("estimate_peak: window must be odd and within [1, bins]");
  }
  const bool any = std::any_of(bin_counts.begin(), bin_counts.end(),
                               [](std::uint64_t c) { return c > 0; });
  if (!any) throw std::invalid_argument("estimate_peak: histogram has no absorptions");

  const std::size_t n = bin_counts.size();
  const std::size_t half = window / 2;
  // Prefix sums keep the moving average exact in integers.
  std::vector<std::uint64_t> prefix(n + 1, 0);
  for (std::size_t k = 0; k < n; ++k) prefix[k + 1] = prefix[k] + bin_counts[k];

  std::size_t best = 0;
  double best_mean = -1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const std::size_t lo = k >= half ? k - half : 0;
    const std::size_t hi = std::min(n, k + half + 1);
    const double mean = static_cast<double>(prefix[hi] - prefix[lo]) / static_cast<double>(hi - lo);
    if (mean > best_mean) {
      best_mean = mean;
      best = k;
    }
  }
  const std::size_t lo = best >= half ? best - half : 0;
  const std::size_t hi = std::min(n, best + half + 1);
  const std::uint64_t raw_max = *std::max_element(bin_counts.begin() + static_cast<std::ptrdiff_t>(lo),
                                                  bin_counts.begin() + static_cast<std::ptrdiff_t>(hi));
  return {(static_cast<double>(best) + 0.5) * dt_s, raw_max};
}

PeakEstimate estimate_peak(const SimResult& result, std::size_t window) {
  return estimate_peak(result.bin_counts, result.bin_width(), window);
}

}  // namespace mcvd
