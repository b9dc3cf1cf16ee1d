#include "mcvd/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mcvd/analytic_channel.hpp"
#include "mcvd/errors.hpp"

namespace mcvd {
namespace {

std::string format_value(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Metadata baseline_metadata(const ChannelGeometry& geom, const DiffusionEnv& env,
                           const EmissionSpec& em) {
  return {{"d_um", format_value(geom.d())},   {"rr_um", format_value(geom.rr())},
          {"r0_um", format_value(geom.r0())}, {"D_um2_s", format_value(env.D())},
          {"n_tx", std::to_string(em.n_tx())}, {"dt_s", format_value(em.dt())}};
}

struct PointParams {
  double swept;
  double series;
  ChannelGeometry geom;
  DiffusionEnv env;
};

void apply(SweepVariable variable, double value, ChannelGeometry& geom, DiffusionEnv& env) {
  switch (variable) {
    case SweepVariable::Distance:
      geom = ChannelGeometry::from_surface_distance(value, geom.rr());
      break;
    case SweepVariable::Diffusion:
      env = DiffusionEnv::absorbing(value);
      break;
    case SweepVariable::ReceiverRadius:
      geom = ChannelGeometry::from_surface_distance(geom.d(), value);
      break;
  }
}

double baseline_value(SweepVariable variable, const ChannelGeometry& geom, const DiffusionEnv& env) {
  switch (variable) {
    case SweepVariable::Distance: return geom.d();
    case SweepVariable::Diffusion: return env.D();
    case SweepVariable::ReceiverRadius: return geom.rr();
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void validate(const SweepSpec& spec, SweepVariable series_variable) {
  if (spec.values.empty()) throw ConfigError("values", "sweep needs at least one value");
  for (std::size_t k = 1; k < spec.values.size(); ++k) {
    if (!(spec.values[k] > spec.values[k - 1])) {
      throw ConfigError("values", "swept values must be strictly increasing");
    }
  }
  if (spec.replicates < 1) throw ConfigError("replicates", "replicates must be >= 1");
  if (!spec.env.is_absorbing()) throw ConfigError("w", "sweeps use the fully absorbing receiver");
  if (!spec.series.empty() && series_variable == spec.variable) {
    throw ConfigError(series_variable == SweepVariable::Diffusion ? "D-values" : "rr-values",
                      "series axis coincides with the swept variable");
  }
  if (!(spec.horizon_peaks > 0.0)) throw ConfigError("horizon-peaks", "must be > 0");
}

// Points ordered by swept value, then series value.
std::vector<PointParams> expand(const SweepSpec& spec, SweepVariable series_variable) {
  std::vector<double> series = spec.series;
  if (series.empty() || series_variable == spec.variable) {
    series = {baseline_value(series_variable, spec.geom, spec.env)};
  }
  std::sort(series.begin(), series.end());
  std::vector<PointParams> points;
  for (double value : spec.values) {
    for (double s : series) {
      ChannelGeometry geom = spec.geom;
      DiffusionEnv env = spec.env;
      if (series_variable != spec.variable) apply(series_variable, s, geom, env);
      apply(spec.variable, value, geom, env);
      points.push_back({value, s, geom, env});
    }
  }
  return points;
}

struct MeanStd {
  double mean;
  double std;
};

MeanStd mean_std(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

SweepReport run_sweep(const SweepSpec& spec, const SimOptions& options, SweepKind kind) {
  const SweepVariable series_variable =
      kind == SweepKind::PeakTime ? SweepVariable::Diffusion : SweepVariable::ReceiverRadius;
  validate(spec, series_variable);

  SweepReport report{.kind = kind, .variable = spec.variable};
  report.metadata = baseline_metadata(spec.geom, spec.env, spec.em);
  report.metadata.emplace_back("variable", to_string(spec.variable));
  report.metadata.emplace_back("particles", std::to_string(spec.particles));
  report.metadata.emplace_back("replicates", std::to_string(spec.replicates));
  report.metadata.emplace_back("seeds", std::to_string(spec.seed) + ".." +
                                            std::to_string(spec.seed + spec.replicates - 1));
  report.metadata.emplace_back("absorption_mode", to_string(spec.absorption_mode));
  report.metadata.emplace_back("horizon_peaks", format_value(spec.horizon_peaks));
  report.metadata.emplace_back("started_at", utc_timestamp());

  const double scale = static_cast<double>(spec.em.n_tx()) / static_cast<double>(spec.particles);
  std::vector<double> series_keys;
  for (const PointParams& point : expand(spec, series_variable)) {
    const double t_peak = peak_time(point.geom, point.env);
    const double analytic =
        kind == SweepKind::PeakTime ? t_peak : peak_amplitude(point.geom, spec.em, point.env);

    SimConfig cfg{.geom = point.geom,
                  .env = point.env,
                  .em = spec.em,
                  .t_end = spec.horizon_peaks * t_peak,
                  .seed = spec.seed,
                  .particles = spec.particles,
                  .absorption_mode = spec.absorption_mode,
                  .far_field_jumps = spec.far_field_jumps};
    const std::size_t n_bins = bin_count_for(cfg.t_end, cfg.em.dt());
    std::size_t window = spec.window.value_or(default_peak_window(t_peak, spec.em.dt()));
    if (window > n_bins) window = n_bins % 2 == 1 ? n_bins : n_bins - 1;

    std::vector<double> estimates;
    for (unsigned r = 0; r < spec.replicates; ++r) {
      cfg.seed = spec.seed + r;
      const SimResult sim = simulate(cfg, options);
      ++report.replicate_runs;
      if (sim.absorbed_total == 0) {
        ++report.empty_replicates;
        continue;
      }
      const PeakEstimate peak = estimate_peak(sim, window);
      const double n_peak = static_cast<double>(peak.n_peak) * scale;
      estimates.push_back(kind == SweepKind::PeakTime ? peak.t_peak_s : n_peak);
      if (n_peak >= peak_amplitude(point.geom, spec.em, point.env)) ++report.sim_at_or_above_analytic;
    }
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const MeanStd stats = estimates.empty() ? MeanStd{nan, nan} : mean_std(estimates);
    series_keys.push_back(point.series);
    report.records.push_back({.swept = point.swept,
                              .d_um = point.geom.d(),
                              .rr_um = point.geom.rr(),
                              .D_um2_s = point.env.D(),
                              .analytic = analytic,
                              .sim_mean = stats.mean,
                              .sim_std = stats.std,
                              .rel_err = std::abs(stats.mean - analytic) / analytic});
  }

  std::vector<double> series_values = series_keys;
  std::sort(series_values.begin(), series_values.end());
  series_values.erase(std::unique(series_values.begin(), series_values.end()), series_values.end());
  for (double s : series_values) {
    std::vector<double> x, analytic, sim;
    for (std::size_t k = 0; k < report.records.size(); ++k) {
      if (series_keys[k] != s) continue;
      x.push_back(report.records[k].swept);
      analytic.push_back(report.records[k].analytic);
      sim.push_back(report.records[k].sim_mean);
    }
    report.fits.push_back({s, log_log_slope(x, analytic), log_log_slope(x, sim)});
  }
  return report;
}

}  // namespace

HistogramReport run_histogram_experiment(const SimConfig& cfg, const SimOptions& options) {
  HistogramReport report{.sim = simulate(cfg, options)};
  const SimResult& sim = report.sim;
  const double dt = cfg.em.dt();
  const double scale = static_cast<double>(cfg.em.n_tx()) / static_cast<double>(cfg.particles);

  report.records.reserve(sim.bin_counts.size());
  for (std::size_t k = 0; k < sim.bin_counts.size(); ++k) {
    const double t0 = static_cast<double>(k) * dt;
    const double t1 = static_cast<double>(k + 1) * dt;
    const double analytic = expected_hits(t0, t1, cfg.geom, cfg.em, cfg.env);
    const double sim_count = static_cast<double>(sim.bin_counts[k]) * scale;
    const double sigma = std::sqrt(analytic * scale);
    report.records.push_back({t0, t1, sim_count, analytic, sigma});
    if (sim_count > 0.0 || analytic > 0.0) {
      ++report.bins_evaluated;
      if (std::abs(sim_count - analytic) <= 3.0 * sigma) ++report.bins_within_3sigma;
    }
  }
  if (report.bins_evaluated > 0) {
    report.fraction_within_3sigma = static_cast<double>(report.bins_within_3sigma) /
                                    static_cast<double>(report.bins_evaluated);
  }
  report.sim_absorbed_fraction =
      static_cast<double>(sim.absorbed_total) / static_cast<double>(cfg.particles);
  report.analytic_absorbed_fraction = hitting_fraction(sim.t_end_effective, cfg.geom, cfg.env);

  report.metadata = baseline_metadata(cfg.geom, cfg.env, cfg.em);
  report.metadata.emplace_back("t_end_s", format_value(sim.t_end_effective));
  report.metadata.emplace_back("particles", std::to_string(cfg.particles));
  report.metadata.emplace_back("seed", std::to_string(cfg.seed));
  report.metadata.emplace_back("absorption_mode", to_string(cfg.absorption_mode));
  report.metadata.emplace_back("started_at", utc_timestamp());
  return report;
}

SweepReport run_peak_time_sweep(const SweepSpec& spec, const SimOptions& options) {
  return run_sweep(spec, options, SweepKind::PeakTime);
}

SweepReport run_peak_amplitude_sweep(const SweepSpec& spec, const SimOptions& options) {
  return run_sweep(spec, options, SweepKind::PeakAmplitude);
}

std::size_t default_peak_window(double t_peak_s, double dt_s) {
  auto window = static_cast<std::size_t>(std::max(3.0, std::round(t_peak_s / (3.0 * dt_s))));
  if (window % 2 == 0) ++window;
  return window;
}

double log_log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw std::invalid_argument("log_log_slope: size mismatch");
  if (x.size() < 2) return std::numeric_limits<double>::quiet_NaN();
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sx += std::log(x[k]);
    sy += std::log(y[k]);
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    const double dx = std::log(x[k]) - mx;
    sxy += dx * (std::log(y[k]) - my);
    sxx += dx * dx;
  }
  return sxy / sxx;
}

std::string to_string(SweepVariable variable) {
  switch (variable) {
    case SweepVariable::Distance: return "distance";
    case SweepVariable::Diffusion: return "diffusion";
    case SweepVariable::ReceiverRadius: return "receiver_radius";
  }
  return "unknown";
}

std::string to_string(AbsorptionMode mode) {
  return mode == AbsorptionMode::EndOfStep ? "end-of-step" : "bridge-corrected";
}

}  // namespace mcvd
