#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "wft/eos.hpp"
#include "wft/lax_curves.hpp"

namespace wft {

/// Star-shaped network: N pipes on (0,1) joined at x = 0, feedback-controlled at x = 1.
struct NetworkConfig {
  std::vector<double> nu_norms;      ///< section norms, > 0
  std::vector<double> gains;         ///< feedback gains in [0, 1)
  std::vector<GasState> equilibria;  ///< subsonic equilibrium per pipe
  double subsonic_radius = 0.1;      ///< validation neighborhood radius around each equilibrium

  std::size_t n_pipes() const { return nu_norms.size(); }
};

inline constexpr double kCouplingTolerance = 1e-10;

/// Checks sizes, signs, subsonic balls, mass balance and equal dynamic pressure.
/// Throws ConfigError naming the offending field.
void validate(const PressureLaw& law, const NetworkConfig& net);

/// sum_l nu_l q_l
double mass_residual(const NetworkConfig& net, const std::vector<GasState>& traces);
/// max_l |P(u_l) - P(u_1)|
double pressure_mismatch(const PressureLaw& law, const std::vector<GasState>& traces);
/// sum_l nu_l F(u_l); must be <= 0 for admissible coupling.
double entropy_sum(const PressureLaw& law, const NetworkConfig& net, const std::vector<GasState>& traces);

/// Curve-domain radius 0.5 * min_l c(rho_bar_l).
CurveDomain curve_domain(const PressureLaw& law, const NetworkConfig& net);

/// Subsonic density with P(rho, q) = p_star. Throws DomainError if p_star is below the sonic minimum.
double subsonic_density(const PressureLaw& law, double q, double p_star);

/// Equilibria with the given flows and common dynamic pressure.
std::vector<GasState> make_equilibria(const PressureLaw& law, const std::vector<double>& flows, double p_star);

struct RandomNetworkOptions {
  std::size_t n_pipes = 3;
  double nu_min = 0.5;
  double nu_max = 2.0;
  double flow_max = 0.15;     ///< |q_bar| bound on the free pipes
  double reference_rho = 1.0;
  double subsonic_radius = 0.05;
  double min_entropy_margin = 1e-5;  ///< require sum nu F(u_bar) <= -margin
};

/// Random compliant network: mass balance, equal P, sum nu F(u_bar) < 0. Gains are zero.
NetworkConfig random_network(const PressureLaw& law, const RandomNetworkOptions& opts, std::mt19937_64& rng);

}  // namespace wft
