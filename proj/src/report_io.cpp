#include "mcvd/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "mcvd/analytic_channel.hpp"
#include "mcvd/errors.hpp"

namespace mcvd {

CsvTable to_table(const HistogramReport& report) {
  CsvTable table{{"bin_start_s", "bin_end_s", "sim_count", "analytic_expected", "poisson_sigma"},
                 {}};
  table.rows.reserve(report.records.size());
  for (const HistogramRecord& r : report.records) {
    table.rows.push_back({r.bin_start_s, r.bin_end_s, r.sim_count, r.analytic_expected,
                          r.poisson_sigma});
  }
  return table;
}

CsvTable to_table(const SweepReport& report) {
  CsvTable table;
  if (report.kind == SweepKind::PeakTime) {
    table.header = {"d_um", "D_um2_s", "analytic_tpeak_s", "sim_tpeak_s", "sim_std_s", "rel_err"};
    for (const SweepRecord& r : report.records) {
      table.rows.push_back({r.d_um, r.D_um2_s, r.analytic, r.sim_mean, r.sim_std, r.rel_err});
    }
  } else {
    table.header = {"d_um",          "rr_um",     "D_um2_s", "analytic_npeak",
                    "sim_npeak",     "sim_std",   "rel_err"};
    for (const SweepRecord& r : report.records) {
      table.rows.push_back(
          {r.d_um, r.rr_um, r.D_um2_s, r.analytic, r.sim_mean, r.sim_std, r.rel_err});
    }
  }
  return table;
}

CsvTable to_table(const SimResult& result) {
  CsvTable table{{"bin_start_s", "bin_end_s", "count"}, {}};
  const double dt = result.bin_width();
  table.rows.reserve(result.bin_counts.size());
  for (std::size_t k = 0; k < result.bin_counts.size(); ++k) {
    table.rows.push_back({static_cast<double>(k) * dt, static_cast<double>(k + 1) * dt,
                          static_cast<double>(result.bin_counts[k])});
  }
  return table;
}

CsvTable analytic_curve_table(const ChannelGeometry& geom, const DiffusionEnv& env,
                              const EmissionSpec& em, double t_end_s) {
  CsvTable table{{"bin_start_s", "bin_end_s", "hitting_rate_mid_per_s", "hitting_fraction_end",
                  "analytic_expected"},
                 {}};
  const double dt = em.dt();
  const std::size_t n = bin_count_for(t_end_s, dt);
  table.rows.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double t0 = static_cast<double>(k) * dt;
    const double t1 = static_cast<double>(k + 1) * dt;
    table.rows.push_back({t0, t1, hitting_rate(0.5 * (t0 + t1), geom, env),
                          hitting_fraction(t1, geom, env), expected_hits(t0, t1, geom, em, env)});
  }
  return table;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  if (value == 0.0) return "0";
  char buf[40];
  if (std::abs(value) < 1e-3) {
    std::snprintf(buf, sizeof buf, "%.8e", value);
  } else {
    std::snprintf(buf, sizeof buf, "%.9g", value);
  }
  return buf;
}

std::string render_csv(const CsvTable& table) {
  std::string out;
  for (std::size_t k = 0; k < table.header.size(); ++k) {
    if (k > 0) out += ',';
    out += table.header[k];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k > 0) out += ',';
      out += format_number(row[k]);
    }
    out += '\n';
  }
  return out;
}

std::filesystem::path manifest_path_for(const std::filesystem::path& csv_path) {
  std::filesystem::path manifest = csv_path;
  manifest.replace_extension(".manifest");
  return manifest;
}

namespace {

void write_file(const std::filesystem::path& path, const std::string& contents) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError(path.string(), "cannot open for writing");
  out << contents;
  out.flush();
  if (!out) throw IoError(path.string(), "write failed");
}

}  // namespace

void write_csv(const CsvTable& table, const Metadata& manifest,
               const std::filesystem::path& csv_path) {
  write_file(csv_path, render_csv(table));
  std::string text;
  for (const auto& [key, value] : manifest) text += key + " = " + value + '\n';
  write_file(manifest_path_for(csv_path), text);
}

}  // namespace mcvd
