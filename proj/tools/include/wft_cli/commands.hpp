#pragma once

#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "wft/stability.hpp"
#include "wft_cli/scenario.hpp"

namespace wft::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitVerdict = 1,  ///< ran to completion but an enabled check failed
  kExitConfig = 2,
  kExitSolver = 3,
  kExitCap = 4,
};

struct CommandOptions {
  std::string out;  ///< output directory (run, refine) or file (calibrate, compare)
  Overrides overrides;
  bool quiet = false;
  std::ostream* log = nullptr;  ///< defaults to std::cout
};

/// Result of one scenario run with its verdicts.
struct RunOutcome {
  SimulationTrace trace;
  std::optional<DecayReport> decay;
  bool residuals_ok = true;
  bool passed = true;
};

inline constexpr double kResidualTolerance = 1e-9;

/// Runs a prepared scenario.
RunOutcome execute(const Scenario& s);
nlohmann::json run_report(const Scenario& s, const RunOutcome& r);

struct RefineLevel {
  double epsilon = 0.0;
  std::uint64_t events = 0;
  double distance_to_next = 0.0;  ///< L1 at t_end to the next level (unset on the last)
  double exact_l1 = -1.0;         ///< to the exact solution for single-jump line scenarios, else -1
};

struct RefineResult {
  std::vector<RefineLevel> levels;
  bool monotone = true;        ///< successive distances decrease (zero distances allowed)
  double observed_order = 0.0; ///< least-squares slope of log distance against log epsilon
  bool order_ok = false;       ///< observed_order >= 0.8
};

/// Independent runs of a prepared scenario at each epsilon, executed in parallel.
RefineResult refine(const Scenario& s, const std::vector<double>& epsilons);

struct CompareReport {
  CompareResult unit;
  CompareResult balanced;
  double lipschitz_factor = 0.0;  ///< sup_t L1 / initial L1
};

CompareReport compare(const Scenario& a, const Scenario& b, std::size_t n_samples);

int cmd_run(const std::string& scenario, const CommandOptions& opts);
int cmd_calibrate(const std::string& scenario, std::optional<std::size_t> n_samples, const CommandOptions& opts);
int cmd_refine(const std::string& scenario, const std::vector<double>& epsilons, const CommandOptions& opts);
int cmd_compare(const std::string& scenario_a, const std::string& scenario_b, const CommandOptions& opts);

/// Runs `body`, mapping library exceptions to exit codes with a diagnostic on `err`.
int guarded(const std::function<int()>& body, std::ostream& err);

}  // namespace wft::cli
