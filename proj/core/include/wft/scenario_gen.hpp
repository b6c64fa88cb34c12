#pragma once

#include <random>
#include <vector>

#include "wft/front_tracking.hpp"
#include "wft/functionals.hpp"
#include "wft/network.hpp"

namespace wft {

struct RandomDataOptions {
  std::size_t jumps_per_pipe = 4;
  double amplitude = 1e-4;  ///< each state differs from the equilibrium by at most this in rho and q
};

/// Piecewise-constant perturbation of the equilibria with random breakpoints.
std::vector<PipeInitial> random_initial(const NetworkConfig& net, const RandomDataOptions& opts, std::mt19937_64& rng);

struct CompliantOptions {
  double gamma_w = 1.0;
  double kappa_factor = 1.5;     ///< kappa_q = factor * 4 K K_J (e^g + e^{3g})
  double gain_lo = 0.5;          ///< gains drawn in [gain_lo, gain_hi] * bound
  double gain_hi = 0.9;
  CalibrationOptions calibration;
};

struct CompliantSetup {
  NetworkConfig network;
  FunctionalParams params;
  CalibrationResult calibration;
};

/// Calibrates the constants, then picks kappa_q and positive gains satisfying both decay hypotheses.
/// The boundary constant is recalibrated with the chosen gains until the gain bound holds.
CompliantSetup make_compliant(const PressureLaw& law, NetworkConfig net, const CompliantOptions& opts,
                              std::mt19937_64& rng);

}  // namespace wft
