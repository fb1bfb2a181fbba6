#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "smatruss/simulation.hpp"

// Run configuration: a flat key-value text file with [sections]. Every key
// has a default, so a file only needs the values it changes.
//
//   [dynamics]
//   theta = 0.69
//   [controller]
//   lambda = 0.6
//
// Keys are unique across sections, so overrides may be given as `key=value`
// or `section.key=value`.

namespace smatruss::config {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class ParamMode { nondimensional, dimensional };
enum class RateUnit { omega_over_pi, per_tau };

struct RunConfig {
  std::string preset = "fuzzy-fl";
  ControlMode mode = ControlMode::fuzzy_feedback_linearization;

  ParamMode param_mode = ParamMode::nondimensional;
  MaterialProperties material = MaterialProperties::cu_zn_al_ni();
  TrussGeometry geometry;
  double temperature = 0.0;        ///< K, dimensional mode
  double force_amplitude = 0.0;    ///< N, dimensional mode
  double forcing_frequency = 0.0;  ///< rad/s, dimensional mode
  TrussParams dynamics = TrussParams::chaotic_reference();

  int order = 2;
  double lambda = 0.6;
  double alpha2_hat = 1.0e2;
  double alpha3_hat = 1.15e4;
  // Unset means "same as the plant".
  std::optional<double> theta_hat;
  std::optional<double> xi_hat;
  std::optional<double> b_hat;
  FuzzySettings fuzzy;

  double x0 = 0.68;
  double y0 = 0.0;
  double setpoint = 0.68;
  double duration = 1000.0;
  RateUnit rate_unit = RateUnit::omega_over_pi;
  double plant_rate = 1000.0;
  double control_rate = 200.0;
  double transient_fraction = 0.5;
  double blowup_limit = 10.0;

  RunConfig();
  bool operator==(const RunConfig&) const = default;
};

/// Names accepted by preset().
std::vector<std::string> preset_names();
/// `uncontrolled`, `fl` or `fuzzy-fl`; throws ConfigError otherwise.
RunConfig preset(std::string_view name);

/// Applies one `key=value` or `section.key=value` assignment.
void apply_override(RunConfig& cfg, std::string_view assignment);
void set_value(RunConfig& cfg, std::string_view key, std::string_view value);

/// Parses a config file on top of `base`. Unknown sections or keys, keys in
/// the wrong section and malformed values throw ConfigError with a line number.
RunConfig parse(std::istream& is, RunConfig base = {});
RunConfig load(const std::string& path, RunConfig base = {});

/// Writes every key, so that parse(dump(cfg)) == cfg.
void dump(std::ostream& os, const RunConfig& cfg);

/// Resolves the plant parameters, estimates and rates into a validated
/// Scenario; throws ConfigError on invalid values.
Scenario to_scenario(const RunConfig& cfg);

}  // namespace smatruss::config
