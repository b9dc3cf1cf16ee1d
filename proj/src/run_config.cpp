#include "mcvd/run_config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "mcvd/errors.hpp"

namespace mcvd {
namespace {

enum class KeyType { Real, Count, RealList, Mode, Switch, Variable, Path };

struct KeySpec {
  const char* name;
  KeyType type;
};

constexpr KeySpec kKeys[] = {
    {"d", KeyType::Real},
    {"r0", KeyType::Real},
    {"rr", KeyType::Real},
    {"D", KeyType::Real},
    {"w", KeyType::Real},
    {"dt", KeyType::Real},
    {"n-tx", KeyType::Count},
    {"t-end", KeyType::Real},
    {"seed", KeyType::Count},
    {"particles", KeyType::Count},
    {"mode", KeyType::Mode},
    {"jumps", KeyType::Switch},
    {"max-bins", KeyType::Count},
    {"variable", KeyType::Variable},
    {"values", KeyType::RealList},
    {"D-values", KeyType::RealList},
    {"rr-values", KeyType::RealList},
    {"replicates", KeyType::Count},
    {"window", KeyType::Count},
    {"horizon-peaks", KeyType::Real},
    {"out", KeyType::Path},
};

const KeySpec* find_key(const std::string& name) {
  for (const KeySpec& k : kKeys) {
    if (name == k.name) return &k;
  }
  return nullptr;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_real(const std::string& key, const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw ConfigError(key, "expected a finite number, got '" + text + "'");
  }
  return value;
}

std::uint64_t parse_count(const std::string& key, const std::string& text) {
  std::uint64_t value = 0;
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), last, value);
  if (ec == std::errc() && ptr == last) return value;
  // Also accept integral values written like 1e5.
  const double real = parse_real(key, text);
  if (real < 0.0 || real != std::floor(real) || real >= 18446744073709551616.0) {
    throw ConfigError(key, "expected a non-negative integer, got '" + text + "'");
  }
  return static_cast<std::uint64_t>(real);
}

std::vector<double> parse_list(const std::string& key, const std::string& text) {
  std::vector<double> values;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) values.push_back(parse_real(key, trim(item)));
  if (values.empty()) throw ConfigError(key, "expected a comma-separated list of numbers");
  return values;
}

AbsorptionMode parse_mode(const std::string& text) {
  if (text == "end-of-step") return AbsorptionMode::EndOfStep;
  if (text == "bridge-corrected") return AbsorptionMode::BridgeCorrected;
  throw ConfigError("mode", "expected end-of-step or bridge-corrected, got '" + text + "'");
}

bool parse_switch(const std::string& key, const std::string& text) {
  if (text == "on") return true;
  if (text == "off") return false;
  throw ConfigError(key, "expected on or off, got '" + text + "'");
}

SweepVariable parse_variable(const std::string& text) {
  if (text == "distance") return SweepVariable::Distance;
  if (text == "diffusion") return SweepVariable::Diffusion;
  if (text == "receiver_radius") return SweepVariable::ReceiverRadius;
  throw ConfigError("variable",
                    "expected distance, diffusion or receiver_radius, got '" + text + "'");
}

void check_value(const KeySpec& spec, const std::string& value) {
  switch (spec.type) {
    case KeyType::Real: parse_real(spec.name, value); break;
    case KeyType::Count: parse_count(spec.name, value); break;
    case KeyType::RealList: parse_list(spec.name, value); break;
    case KeyType::Mode: parse_mode(value); break;
    case KeyType::Switch: parse_switch(spec.name, value); break;
    case KeyType::Variable: parse_variable(value); break;
    case KeyType::Path:
      if (value.empty()) throw ConfigError(spec.name, "empty path");
      break;
  }
}

void set_param(RunConfig& cfg, const std::string& key, const std::string& value) {
  const KeySpec* spec = find_key(key);
  if (spec == nullptr) throw ConfigError(key, "unknown key");
  check_value(*spec, value);
  if (key == "out") {
    cfg.output_dir = value;
  } else {
    cfg.params[key] = value;
  }
}

void apply_file_text(RunConfig& cfg, const std::string& text) {
  std::stringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config", "line " + std::to_string(line_no) + " is not 'key = value'");
    }
    set_param(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
}

std::optional<std::string> lookup(const RunConfig& cfg, const std::string& key) {
  const auto it = cfg.params.find(key);
  if (it == cfg.params.end()) return std::nullopt;
  return it->second;
}

std::string param_or(const RunConfig& cfg, const std::string& key, const std::string& fallback) {
  return lookup(cfg, key).value_or(fallback);
}

std::string default_values(Command command) {
  return command == Command::SweepPeakTime || command == Command::SweepPeakAmplitude
             ? "5,10,15,20,25"
             : "";
}

// Builds every typed object the command needs so invariant violations surface
// at parse time.
void validate(const RunConfig& cfg) {
  switch (cfg.command) {
    case Command::Analytic:
      geometry_of(cfg);
      environment_of(cfg);
      emission_of(cfg);
      if (!(parse_real("t-end", param_or(cfg, "t-end", "0.4")) > 0.0)) {
        throw ConfigError("t-end", "t-end must be > 0");
      }
      break;
    case Command::Simulate:
    case Command::Histogram: {
      const SimConfig sim = sim_config_of(cfg);
      if (!sim.env.is_absorbing()) {
        throw ConfigError("w", "the simulator models the fully absorbing receiver only");
      }
      if (!(sim.t_end > 0.0)) throw ConfigError("t-end", "t-end must be > 0");
      if (sim.particles < 1) throw ConfigError("particles", "particles must be >= 1");
      break;
    }
    case Command::SweepPeakTime:
    case Command::SweepPeakAmplitude: {
      const SweepSpec spec = sweep_spec_of(cfg);
      if (!spec.env.is_absorbing()) throw ConfigError("w", "sweeps use the fully absorbing receiver");
      if (spec.particles < 1) throw ConfigError("particles", "particles must be >= 1");
      if (spec.replicates < 1) throw ConfigError("replicates", "replicates must be >= 1");
      for (std::size_t k = 1; k < spec.values.size(); ++k) {
        if (!(spec.values[k] > spec.values[k - 1])) {
          throw ConfigError("values", "swept values must be strictly increasing");
        }
      }
      if (!(spec.horizon_peaks > 0.0)) throw ConfigError("horizon-peaks", "must be > 0");
      break;
    }
  }
  if (const auto window = lookup(cfg, "window")) {
    const std::uint64_t w = parse_count("window", *window);
    if (w == 0 || w % 2 == 0) throw ConfigError("window", "window must be odd and >= 1");
  }
}

}  // namespace

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const KeySpec& k : kKeys) out.emplace_back(k.name);
    return out;
  }();
  return keys;
}

std::string to_string(Command command) {
  switch (command) {
    case Command::Analytic: return "analytic";
    case Command::Simulate: return "simulate";
    case Command::Histogram: return "histogram";
    case Command::SweepPeakTime: return "sweep-peak-time";
    case Command::SweepPeakAmplitude: return "sweep-peak-amplitude";
  }
  return "unknown";
}

Command parse_command(const std::string& name) {
  for (Command c : {Command::Analytic, Command::Simulate, Command::Histogram,
                    Command::SweepPeakTime, Command::SweepPeakAmplitude}) {
    if (to_string(c) == name) return c;
  }
  throw ConfigError("command", "unknown command '" + name + "'");
}

RunConfig parse_config(std::span<const std::string> args) {
  std::optional<std::string> file_text;
  for (std::size_t k = 1; k + 1 < args.size(); ++k) {
    if (args[k] == "--config") {
      std::ifstream in(args[k + 1], std::ios::binary);
      if (!in) throw IoError(args[k + 1], "cannot open config file");
      std::stringstream buffer;
      buffer << in.rdbuf();
      file_text = buffer.str();
    }
  }
  return parse_config(args, file_text);
}

RunConfig parse_config(std::span<const std::string> args,
                       const std::optional<std::string>& file_text) {
  if (args.empty()) throw ConfigError("command", "missing command");
  RunConfig cfg;
  cfg.command = parse_command(args[0]);
  if (file_text) apply_file_text(cfg, *file_text);

  for (std::size_t k = 1; k < args.size(); k += 2) {
    const std::string& flag = args[k];
    if (flag.size() < 3 || flag.rfind("--", 0) != 0) {
      throw ConfigError(flag, "expected --key value");
    }
    if (k + 1 >= args.size()) throw ConfigError(flag.substr(2), "missing value");
    if (flag == "--config") continue;
    set_param(cfg, flag.substr(2), args[k + 1]);
  }
  validate(cfg);
  return cfg;
}

std::string to_config_text(const RunConfig& cfg) {
  std::string text = "# mcvd " + to_string(cfg.command) + "\n";
  for (const auto& [key, value] : cfg.params) text += key + " = " + value + "\n";
  text += "out = " + cfg.output_dir.string() + "\n";
  return text;
}

ChannelGeometry geometry_of(const RunConfig& cfg) {
  const double rr = parse_real("rr", param_or(cfg, "rr", "10"));
  if (const auto r0_text = lookup(cfg, "r0")) {
    const double r0 = parse_real("r0", *r0_text);
    const ChannelGeometry geom = ChannelGeometry::from_center_distance(r0, rr);
    if (const auto d_text = lookup(cfg, "d")) {
      const double d = parse_real("d", *d_text);
      if (std::abs(d - geom.d()) > 1e-12 * std::max(1.0, r0)) {
        throw ConfigError("d", "d must equal r0 - rr when both are given");
      }
    }
    return geom;
  }
  return ChannelGeometry::from_surface_distance(parse_real("d", param_or(cfg, "d", "10")), rr);
}

DiffusionEnv environment_of(const RunConfig& cfg) {
  const double D = parse_real("D", param_or(cfg, "D", "79.4"));
  if (const auto w = lookup(cfg, "w")) return DiffusionEnv::radiation(D, parse_real("w", *w));
  return DiffusionEnv::absorbing(D);
}

EmissionSpec emission_of(const RunConfig& cfg) {
  return EmissionSpec(parse_count("n-tx", param_or(cfg, "n-tx", "5000")),
                      parse_real("dt", param_or(cfg, "dt", "1e-4")));
}

SimConfig sim_config_of(const RunConfig& cfg) {
  const EmissionSpec em = emission_of(cfg);
  return SimConfig{
      .geom = geometry_of(cfg),
      .env = environment_of(cfg),
      .em = em,
      .t_end = parse_real("t-end", param_or(cfg, "t-end", "0.4")),
      .seed = parse_count("seed", param_or(cfg, "seed", "42")),
      .particles = parse_count("particles", param_or(cfg, "particles", std::to_string(em.n_tx()))),
      .absorption_mode = parse_mode(param_or(cfg, "mode", "end-of-step")),
      .far_field_jumps = parse_switch("jumps", param_or(cfg, "jumps", "on")),
      .max_bins = static_cast<std::size_t>(
          parse_count("max-bins", param_or(cfg, "max-bins", "100000000"))),
  };
}

SweepSpec sweep_spec_of(const RunConfig& cfg) {
  const EmissionSpec em = emission_of(cfg);
  const std::string series_key = cfg.command == Command::SweepPeakAmplitude ? "rr-values" : "D-values";
  const std::string series_default =
      cfg.command == Command::SweepPeakAmplitude ? "5,10,15" : "79.4,158.8";
  const SweepVariable variable = parse_variable(param_or(cfg, "variable", "distance"));
  const bool series_is_swept =
      (series_key == "D-values" && variable == SweepVariable::Diffusion) ||
      (series_key == "rr-values" && variable == SweepVariable::ReceiverRadius);

  SweepSpec spec{
      .variable = variable,
      .values = parse_list("values", param_or(cfg, "values", default_values(cfg.command))),
      .series = series_is_swept && !lookup(cfg, series_key)
                    ? std::vector<double>{}
                    : parse_list(series_key, param_or(cfg, series_key, series_default)),
      .geom = geometry_of(cfg),
      .env = environment_of(cfg),
      .em = em,
      .particles = parse_count("particles", param_or(cfg, "particles", std::to_string(em.n_tx()))),
      .seed = parse_count("seed", param_or(cfg, "seed", "42")),
      .replicates = static_cast<unsigned>(parse_count("replicates", param_or(cfg, "replicates", "10"))),
      .absorption_mode = parse_mode(param_or(cfg, "mode", "end-of-step")),
      .far_field_jumps = parse_switch("jumps", param_or(cfg, "jumps", "on")),
      .horizon_peaks = parse_real("horizon-peaks", param_or(cfg, "horizon-peaks", "8")),
  };
  if (const auto window = lookup(cfg, "window")) spec.window = parse_count("window", *window);
  return spec;
}

std::map<std::string, std::string> resolved_params(const RunConfig& cfg) {
  std::map<std::string, std::string> out = cfg.params;
  const ChannelGeometry geom = geometry_of(cfg);
  auto put = [&](const std::string& key, double v) {
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    out.try_emplace(key, std::string(buf, res.ptr));
  };
  put("d", geom.d());
  put("r0", geom.r0());
  put("rr", geom.rr());
  put("D", environment_of(cfg).D());
  const EmissionSpec em = emission_of(cfg);
  out.try_emplace("n-tx", std::to_string(em.n_tx()));
  put("dt", em.dt());
  out.try_emplace("t-end", "0.4");
  if (cfg.command != Command::Analytic) {
    out.try_emplace("seed", "42");
    out.try_emplace("particles", std::to_string(em.n_tx()));
    out.try_emplace("mode", "end-of-step");
    out.try_emplace("jumps", "on");
  }
  if (cfg.command == Command::SweepPeakTime || cfg.command == Command::SweepPeakAmplitude) {
    out.erase("t-end");
    const SweepSpec spec = sweep_spec_of(cfg);
    out.try_emplace("variable", to_string(spec.variable));
    out.try_emplace("values", default_values(cfg.command));
    out.try_emplace("replicates", "10");
    out.try_emplace("horizon-peaks", "8");
    if (!spec.series.empty()) {
      out.try_emplace(cfg.command == Command::SweepPeakAmplitude ? "rr-values" : "D-values",
                      cfg.command == Command::SweepPeakAmplitude ? "5,10,15" : "79.4,158.8");
    }
  }
  return out;
}

}  // namespace mcvd
