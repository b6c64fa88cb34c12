#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wft/front_tracking.hpp"
#include "wft/functionals.hpp"
#include "wft/scenario_gen.hpp"

namespace wft::cli {

/// Command-line values that take precedence over the file.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> epsilon;
};

/// A parsed scenario. Either a star network (`sim`) or, when `line` is set, a single pipe
/// with transparent ends (`line_cfg`).
struct Scenario {
  std::string source;  ///< file path or "<inline>"
  nlohmann::json document;

  bool line = false;
  SimConfig sim;
  LineConfig line_cfg;

  std::vector<double> snapshot_times;
  std::size_t n_samples = 101;
  std::uint64_t seed = 1;
  bool event_rows = true;

  bool random_network = false;
  RandomNetworkOptions network_options;
  bool random_initial = false;
  RandomDataOptions initial_options;
  bool gains_auto = false;

  bool constants_auto = true;
  bool kappa_auto = true;
  double kappa_factor = 1.5;
  bool check_decay = true;
  CalibrationOptions calibration;
  std::optional<CalibrationResult> calibrated;  ///< set by prepare() when constants are auto

  double epsilon() const { return line ? line_cfg.epsilon : sim.epsilon; }
  double t_end() const { return line ? line_cfg.t_end : sim.t_end; }
  void set_epsilon(double eps);
};

/// Parses and checks field types and ranges. Throws ConfigError naming the field path.
Scenario parse_scenario(const nlohmann::json& doc, const Overrides& overrides = {});
Scenario load_scenario(const std::string& path, const Overrides& overrides = {});

/// Generates random parts, calibrates "auto" constants, picks "auto" gains and kappa_q,
/// then validates the configuration and, if enabled, the decay hypotheses.
void prepare(Scenario& s);

/// Constants block in the form accepted under functionals.constants.
nlohmann::json constants_json(const FunctionalParams& p);

}  // namespace wft::cli
