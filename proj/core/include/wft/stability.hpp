#pragma once

#include <limits>
#include <vector>

#include "wft/front_tracking.hpp"
#include "wft/functionals.hpp"

namespace wft {

struct CompareOptions {
  std::size_t n_samples = 51;  ///< uniform grid on [0, t_end]
  bool phi_at_events = true;   ///< evaluate Phi at both limits of every event of either run
  PhiVariant variant = PhiVariant::unit;
};

struct CompareSample {
  double t = 0.0;
  double phi = 0.0;
  double l1 = 0.0;
};

struct CompareResult {
  std::vector<CompareSample> samples;
  PhiWeights weights;
  double initial_l1 = 0.0;   ///< at t = 0+, after the initial Riemann problems
  double max_l1 = 0.0;       ///< over samples and event limits
  double max_phi_jump = -std::numeric_limits<double>::infinity();  ///< max Phi(t+) - Phi(t-) over events
  double max_phi_growth = 0.0;  ///< max (Phi(t2-) - Phi(t1+)) / (t2 - t1) between consecutive events
  std::uint64_t events_a = 0;
  std::uint64_t events_b = 0;
};

/// Runs both configurations side by side on a shared clock. The networks and laws must agree.
/// Functional constants for the weights are taken from `a`.
CompareResult compare_runs(const SimConfig& a, const SimConfig& b, const CompareOptions& opts = {});

}  // namespace wft
