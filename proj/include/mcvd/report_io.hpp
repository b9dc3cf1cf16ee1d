#pragma once

// CSV tables and manifest sidecars for simulation results and reports.
//
// Numbers use '.' as decimal separator and 9 significant digits; nonzero
// magnitudes below 1e-3 are written in scientific notation.

#include <filesystem>
#include <string>
#include <vector>

#include "mcvd/brownian_sim.hpp"
#include "mcvd/experiments.hpp"

namespace mcvd {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
};

/// Columns bin_start_s,bin_end_s,sim_count,analytic_expected,poisson_sigma.
CsvTable to_table(const HistogramReport& report);
/// Peak time:      d_um,D_um2_s,analytic_tpeak_s,sim_tpeak_s,sim_std_s,rel_err
/// Peak amplitude: d_um,rr_um,D_um2_s,analytic_npeak,sim_npeak,sim_std,rel_err
CsvTable to_table(const SweepReport& report);
/// Columns bin_start_s,bin_end_s,count (raw particle counts).
CsvTable to_table(const SimResult& result);
/// Closed-form curve on the dt grid up to t_end:
/// bin_start_s,bin_end_s,hitting_rate_mid_per_s,hitting_fraction_end,analytic_expected.
CsvTable analytic_curve_table(const ChannelGeometry& geom, const DiffusionEnv& env,
                              const EmissionSpec& em, double t_end_s);

std::string format_number(double value);
std::string render_csv(const CsvTable& table);

/// `report.csv` -> `report.manifest`.
std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path);

/// Writes the CSV and its `.manifest` sidecar (one `key = value` per line).
/// Throws IoError naming the path on failure.
void write_csv(const CsvTable& table, const Metadata& manifest,
               const std::filesystem::path& csv_path);

}  // namespace mcvd
