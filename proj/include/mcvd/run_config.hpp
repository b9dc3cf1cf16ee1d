#pragma once

// Command-line and config-file front end.
//
// Grammar: mcvd <command> [--key value]... [--config <file>] [--out <dir>]
// The config file holds `key = value` lines using the flag names as keys;
// '#' starts a comment. Flags override file values. Unknown keys are errors.

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcvd/brownian_sim.hpp"
#include "mcvd/experiments.hpp"

namespace mcvd {

enum class Command { Analytic, Simulate, Histogram, SweepPeakTime, SweepPeakAmplitude };

struct RunConfig {
  Command command = Command::Analytic;
  /// Explicitly supplied keys with their textual values.
  std::map<std::string, std::string> params;
  std::filesystem::path output_dir = ".";

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// Parses arguments (without the program name). A `--config` file is read
/// from disk; IoError if it cannot be read, ConfigError for anything invalid.
RunConfig parse_config(std::span<const std::string> args);

/// Same, with the config file contents supplied directly.
RunConfig parse_config(std::span<const std::string> args,
                       const std::optional<std::string>& file_text);

/// Config-file text that parses back to `cfg` (given the same command).
std::string to_config_text(const RunConfig& cfg);

std::string to_string(Command command);
Command parse_command(const std::string& name);

/// Every recognised key mapped to its effective value, defaults included.
std::map<std::string, std::string> resolved_params(const RunConfig& cfg);

ChannelGeometry geometry_of(const RunConfig& cfg);
DiffusionEnv environment_of(const RunConfig& cfg);
EmissionSpec emission_of(const RunConfig& cfg);
SimConfig sim_config_of(const RunConfig& cfg);
SweepSpec sweep_spec_of(const RunConfig& cfg);

/// Keys accepted on the command line and in config files.
const std::vector<std::string>& known_keys();

}  // namespace mcvd
