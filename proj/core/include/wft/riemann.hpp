#pragma once

#include <array>
#include <vector>

#include "wft/eos.hpp"
#include "wft/lax_curves.hpp"
#include "wft/network.hpp"

namespace wft {

/// One elementary wave of a Riemann solution.
struct WavePattern {
  Family family = Family::first;
  double sigma = 0.0;
  GasState left;
  GasState right;
  bool shock = false;
  double speed = 0.0;       ///< RH speed (shock only)
  double lambda_lo = 0.0;   ///< fan edges (rarefaction only)
  double lambda_hi = 0.0;
};

WavePattern make_wave(const PressureLaw& law, const GasState& left, Family family, double sigma,
                      const CurveDomain& domain = {});

/// u_r = L2(sigma2)(L1(sigma1)(u_l)).
struct ClassicalSolution {
  double sigma1 = 0.0;
  double sigma2 = 0.0;
  GasState middle;
  std::array<WavePattern, 2> waves;
  double residual = 0.0;  ///< max-norm mismatch of the recomposed right state
};

ClassicalSolution solve_classical(const PressureLaw& law, const GasState& u_l, const GasState& u_r,
                                  const CurveDomain& domain = {});

/// Junction P-solution. Emitted 2-waves have the new trace on their left:
/// states[l] = L2(sigmas[l])(traces[l]).
struct JunctionSolution {
  std::vector<double> sigmas;
  std::vector<GasState> traces;
  double p_star = 0.0;
  double mass_residual = 0.0;
  double pressure_mismatch = 0.0;
  double entropy_sum = 0.0;
};

struct JunctionOptions {
  bool check_entropy = true;  ///< throw EntropyViolation if entropy_sum > kCouplingTolerance
};

JunctionSolution solve_junction(const PressureLaw& law, const NetworkConfig& net, const std::vector<GasState>& states,
                                const JunctionOptions& opts = {});

/// Boundary solver at x = 1: trace = L1(sigma1)(u_l) with
/// v2(trace) - k v1(trace) = v2(u_bar) - k v1(u_bar).
struct BoundarySolution {
  double sigma1 = 0.0;
  GasState trace;
  double residual = 0.0;
};

BoundarySolution solve_boundary(const PressureLaw& law, const GasState& u_l, const GasState& u_bar, double k,
                                const CurveDomain& domain = {});

/// Feedback residual v2(u) - k v1(u) - v2(u_bar) + k v1(u_bar).
double boundary_residual(const PressureLaw& law, const GasState& u, const GasState& u_bar, double k);

}  // namespace wft
