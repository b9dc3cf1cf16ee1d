// mcvd: closed-form channel evaluation, Brownian simulation and sweeps.
//
//   mcvd <command> [--key value]... [--config <file>] [--out <dir>]
//
// Exit codes: 0 success, 2 configuration error, 3 I/O error, 4 internal
// invariant breach.

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "mcvd/analytic_channel.hpp"
#include "mcvd/errors.hpp"
#include "mcvd/experiments.hpp"
#include "mcvd/report_io.hpp"
#include "mcvd/run_config.hpp"

#ifndef MCVD_VERSION
#define MCVD_VERSION "0.0.0"
#endif

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;
constexpr int kExitInternal = 4;

const char* kUsage =
    "usage: mcvd <command> [--key value]... [--config <file>] [--out <dir>]\n"
    "commands: analytic simulate histogram sweep-peak-time sweep-peak-amplitude\n";

// Shortest text that reads back to the same double.
std::string num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

unsigned worker_count() {
  const char* env = std::getenv("MCVD_THREADS");
  if (env == nullptr || *env == '\0') return 0;
  char* end = nullptr;
  const unsigned long value = std::strtoul(env, &end, 10);
  if (*end != '\0') throw mcvd::ConfigError("MCVD_THREADS", "expected a non-negative integer");
  return static_cast<unsigned>(value);
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

class Run {
 public:
  explicit Run(mcvd::RunConfig cfg) : cfg_(std::move(cfg)), started_(std::chrono::steady_clock::now()) {
    options_.workers = worker_count();
    manifest_.emplace_back("command", mcvd::to_string(cfg_.command));
    for (const auto& [key, value] : mcvd::resolved_params(cfg_)) manifest_.emplace_back(key, value);
    manifest_.emplace_back("tool_version", MCVD_VERSION);
  }

  void execute() {
    std::error_code ec;
    std::filesystem::create_directories(cfg_.output_dir, ec);
    if (ec) throw mcvd::IoError(cfg_.output_dir.string(), ec.message());

    switch (cfg_.command) {
      case mcvd::Command::Analytic: analytic(); break;
      case mcvd::Command::Simulate: simulate(); break;
      case mcvd::Command::Histogram: histogram(); break;
      case mcvd::Command::SweepPeakTime:
      case mcvd::Command::SweepPeakAmplitude: sweep(); break;
    }
  }

 private:
  void emit(const std::string& name, const mcvd::CsvTable& table, mcvd::Metadata extra = {}) {
    mcvd::Metadata manifest = manifest_;
    manifest.insert(manifest.end(), extra.begin(), extra.end());
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
    manifest.emplace_back("wall_time_s", num(wall));
    manifest.emplace_back("finished_at", utc_now());
    const auto path = cfg_.output_dir / (name + ".csv");
    mcvd::write_csv(table, manifest, path);
    std::cout << "wrote " << path.string() << "\n";
  }

  void analytic() {
    const auto geom = mcvd::geometry_of(cfg_);
    const auto env = mcvd::environment_of(cfg_);
    const auto absorbing = mcvd::DiffusionEnv::absorbing(env.D());
    const auto em = mcvd::emission_of(cfg_);
    const double t_end = std::stod(mcvd::resolved_params(cfg_).at("t-end"));

    const double t_peak = mcvd::peak_time(geom, absorbing);
    const double n_peak = mcvd::peak_amplitude(geom, em, absorbing);
    std::cout << "peak_time_s = " << num(t_peak) << "\n"
              << "peak_amplitude = " << num(n_peak) << "\n"
              << "survival_fraction = " << num(mcvd::survival_fraction(geom)) << "\n"
              << "hitting_fraction_t_end = " << num(mcvd::hitting_fraction(t_end, geom, absorbing))
              << "\n";
    emit("analytic", mcvd::analytic_curve_table(geom, absorbing, em, t_end),
         {{"peak_time_s", num(t_peak)}, {"peak_amplitude", num(n_peak)}});

    // Radial density profile at t_end out to the Gaussian tail.
    mcvd::CsvTable profile{{"r_um", "density_per_um3"}, {}};
    const double r_max = geom.r0() + 12.0 * std::sqrt(2.0 * env.D() * t_end);
    constexpr int kPoints = 400;
    for (int k = 0; k <= kPoints; ++k) {
      const double r = geom.rr() + (r_max - geom.rr()) * k / kPoints;
      profile.rows.push_back({r, mcvd::molecule_distribution(r, t_end, geom, env)});
    }
    emit("analytic-density", profile,
         {{"receiver", env.is_absorbing() ? "absorbing" : "radiation"}});
  }

  void simulate() {
    const mcvd::SimResult result = mcvd::simulate(mcvd::sim_config_of(cfg_), options_);
    const auto& c = result.config;
    const double analytic = mcvd::hitting_fraction(result.t_end_effective, c.geom, c.env);
    std::cout << "absorbed_total = " << result.absorbed_total << "\n"
              << "survivors = " << result.survivors << "\n"
              << "absorbed_fraction = " << num(double(result.absorbed_total) / double(c.particles))
              << " (analytic " << num(analytic) << ")\n";
    emit("simulate", mcvd::to_table(result),
         {{"t_end_effective_s", num(result.t_end_effective)},
          {"absorbed_total", std::to_string(result.absorbed_total)},
          {"survivors", std::to_string(result.survivors)},
          {"analytic_absorbed_fraction", num(analytic)},
          {"sim_wall_time_s", num(result.wall_time_s)}});
  }

  void histogram() {
    const mcvd::HistogramReport report =
        mcvd::run_histogram_experiment(mcvd::sim_config_of(cfg_), options_);
    std::cout << "bins within 3 sigma: " << report.bins_within_3sigma << " / "
              << report.bins_evaluated << " (" << num(report.fraction_within_3sigma) << ")\n"
              << "absorbed_fraction = " << num(report.sim_absorbed_fraction) << " (analytic "
              << num(report.analytic_absorbed_fraction) << ")\n";
    mcvd::Metadata extra = report.metadata;
    extra.emplace_back("bins_evaluated", std::to_string(report.bins_evaluated));
    extra.emplace_back("bins_within_3sigma", std::to_string(report.bins_within_3sigma));
    extra.emplace_back("fraction_within_3sigma", num(report.fraction_within_3sigma));
    extra.emplace_back("sim_absorbed_fraction", num(report.sim_absorbed_fraction));
    extra.emplace_back("analytic_absorbed_fraction", num(report.analytic_absorbed_fraction));
    emit("histogram", mcvd::to_table(report), extra);
  }

  void sweep() {
    const mcvd::SweepSpec spec = mcvd::sweep_spec_of(cfg_);
    const mcvd::SweepReport report = cfg_.command == mcvd::Command::SweepPeakTime
                                         ? mcvd::run_peak_time_sweep(spec, options_)
                                         : mcvd::run_peak_amplitude_sweep(spec, options_);
    mcvd::Metadata extra = report.metadata;
    const char* series = report.kind == mcvd::SweepKind::PeakTime ? "D" : "rr";
    for (const mcvd::ScalingFit& fit : report.fits) {
      const std::string tag = std::string(series) + "=" + num(fit.series_value);
      std::cout << "log-log slope (" << tag << "): analytic " << num(fit.analytic_slope)
                << ", simulated " << num(fit.sim_slope) << "\n";
      extra.emplace_back("analytic_slope[" + tag + "]", num(fit.analytic_slope));
      extra.emplace_back("sim_slope[" + tag + "]", num(fit.sim_slope));
    }
    if (report.kind == mcvd::SweepKind::PeakAmplitude) {
      extra.emplace_back("replicates_sim_at_or_above_analytic",
                         std::to_string(report.sim_at_or_above_analytic) + "/" +
                             std::to_string(report.replicate_runs));
    }
    extra.emplace_back("empty_replicates", std::to_string(report.empty_replicates));
    if (report.empty_replicates > 0) {
      std::cerr << "warning: " << report.empty_replicates
                << " replicate(s) recorded no absorptions and were left out\n";
    }
    emit(mcvd::to_string(cfg_.command), mcvd::to_table(report), extra);
  }

  mcvd::RunConfig cfg_;
  mcvd::SimOptions options_;
  mcvd::Metadata manifest_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty() || args[0] == "--help" || args[0] == "-h") {
    std::cout << kUsage;
    return args.empty() ? kExitConfig : 0;
  }
  try {
    Run(mcvd::parse_config(args)).execute();
    return 0;
  } catch (const mcvd::ConfigError& e) {
    std::cerr << "mcvd: config error: " << e.what() << "\n" << kUsage;
    return kExitConfig;
  } catch (const mcvd::IoError& e) {
    std::cerr << "mcvd: I/O error: " << e.what() << "\n";
    return kExitIo;
  } catch (const mcvd::ResourceError& e) {
    std::cerr << "mcvd: resource limit: " << e.what() << "\n";
    return kExitConfig;
  } catch (const mcvd::InvariantError& e) {
    std::cerr << "mcvd: internal error: " << e.what() << "\n";
    return kExitInternal;
  } catch (const std::invalid_argument& e) {
    std::cerr << "mcvd: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "mcvd: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "mcvd: internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
