#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wft/fronts.hpp"
#include "wft/network.hpp"

namespace wft {

struct FunctionalParams {
  double gamma_w = 0.0;     ///< spatial weight rate
  double kappa_q = 1.0;     ///< coefficient of the quadratic part
  double K = 1.0;           ///< in-pipe interaction constant
  double K_J = 1.0;         ///< junction amplification constant, >= 1
  double C_b = 1.0;         ///< boundary reflection constant
  double c_min = 1.0;       ///< lower bound on |characteristic speeds|
  double Lambda_max = 1.0;  ///< upper bound on |characteristic speeds|
};

/// Lower bound 4 K K_J (e^g + e^{3g}) on kappa_q required for monotonicity.
double kappa_bound(const FunctionalParams& p);
/// Upper bound e^{-2g} / (4 C_b K_J) on the feedback gains.
double gain_bound(const FunctionalParams& p);
/// Throws ConfigError naming the violated bound.
void check_decay_hypotheses(const FunctionalParams& p, const NetworkConfig& net);

struct QuadraticParts {
  double q11 = 0.0;
  double q22 = 0.0;
  double q12 = 0.0;
  double sum() const { return q11 + q22 + q12; }
};

struct FunctionalSample {
  double t = 0.0;
  double V = 0.0;
  double Q11 = 0.0;
  double Q22 = 0.0;
  double Q12 = 0.0;
  double J = 0.0;
  double TV = 0.0;            ///< sum of |d rho| + |d q| over all jumps
  double strength_sum = 0.0;  ///< sum of |sigma| over all fronts
  std::size_t n_fronts = 0;
};

struct TotalVariation {
  double tv_states = 0.0;
  double strength_sum = 0.0;
};

TotalVariation total_variation(const Snapshot& snap);
TotalVariation total_variation(const PipeSnapshot& pipe);

double v_gamma(const PipeSnapshot& pipe, const FunctionalParams& p);
double v_gamma(const Snapshot& snap, const FunctionalParams& p);

/// Approaching pairs (i, j), i < j, of fronts in one pipe ordered by position.
std::vector<std::pair<std::size_t, std::size_t>> approaching_pairs(const std::vector<WaveFront>& fronts);

/// O(n) evaluation by prefix sums; equal to summing over approaching_pairs.
QuadraticParts q_gamma(const PipeSnapshot& pipe, const FunctionalParams& p);
QuadraticParts q_gamma(const Snapshot& snap, const FunctionalParams& p);

double j_gamma(const Snapshot& snap, const FunctionalParams& p);
/// J of one pipe's fronts evaluated at time t (positions extrapolated, not clamped).
double j_gamma(const std::vector<WaveFront>& fronts, double t, const FunctionalParams& p);

FunctionalSample sample_functionals(const Snapshot& snap, const FunctionalParams& p);
FunctionalSample sample_functionals(const PipeSnapshot& pipe, const FunctionalParams& p);
FunctionalSample operator+(FunctionalSample a, const FunctionalSample& b);

/// J(after) - J(before).
double delta_j(const Snapshot& before, const Snapshot& after, const FunctionalParams& p);

/// Coefficients of the weights W = 1 + k1 A + k1 k2 (J0(u) + J0(v)).
/// Family-1 strengths are further multiplied by `family1` (1 gives weights in [1, 2]).
struct PhiWeights {
  double kappa1 = 0.0;
  double kappa2 = 0.0;
  double family1 = 1.0;
};

enum class PhiVariant {
  unit,              ///< W in [1, 2] for both families
  junction_balanced  ///< family 1 scaled by 2 K_J Lambda_max / c_min so junction fluxes cannot raise Phi
};

/// kappa2 from the interaction constants; kappa1 so that W <= 2 given J0(u) + J0(v) at the reference time.
PhiWeights phi_weights(const Snapshot& u0, const Snapshot& v0, const FunctionalParams& p,
                       PhiVariant variant = PhiVariant::unit);

/// Pointwise shock-curve decomposition v = S2(s2)(S1(s1)(u)).
std::pair<double, double> shock_decomposition(const PressureLaw& law, const GasState& u, const GasState& v);

/// L1-equivalent stability functional between two fields on the same network.
double phi_distance(const PressureLaw& law, const Snapshot& u, const Snapshot& v, const PhiWeights& w,
                    const FunctionalParams& p);

/// Estimated interaction and speed constants over B(u_bar_l, radius), each inflated by 1.25.
struct CalibrationOptions {
  double radius = 0.05;          ///< state neighborhood
  double strength = 0.02;        ///< wave strengths sampled in [-strength, strength]
  std::size_t n_samples = 2000;  ///< per constant
  std::uint64_t seed = 1;
  double reference_gain = 0.01;  ///< used for C_b when all gains vanish
};

struct CalibrationResult {
  FunctionalParams constants;  ///< gamma_w and kappa_q untouched
  double raw_K = 0.0;
  double raw_K_J = 0.0;
  double raw_C_b = 0.0;
  double raw_c_min = 0.0;
  double raw_Lambda_max = 0.0;
  std::size_t used_samples = 0;
};

inline constexpr double kCalibrationInflation = 1.25;

CalibrationResult calibrate_constants(const PressureLaw& law, const NetworkConfig& net, const CalibrationOptions& opts);

/// Time series and verdicts of the decay checks.
struct DecayReport {
  double max_dJ = 0.0;             ///< over events
  std::size_t dJ_violations = 0;   ///< events with dJ > tolerance
  double max_envelope_ratio = 0.0; ///< max_t J(t) / (J(0+) e^{-c g t})
  bool envelope_ok = true;
  double fitted_J_rate = 0.0;      ///< least-squares slope of -log J
  double fitted_TV_rate = 0.0;     ///< nu
  double fitted_TV_constant = 0.0; ///< C = max TV(t) e^{nu t} / TV(0+)
  double tv_constant_bound = 0.0;  ///< 4 K_J e^{gamma_w}
  bool tv_ok = true;
  bool passed = true;
  std::vector<std::string> notes;
};

struct DecayInput {
  std::vector<FunctionalSample> samples;                    ///< uniform samples, t ascending, first at 0+
  std::vector<std::pair<double, double>> event_jumps;       ///< (t, dJ)
};

DecayReport verify_decay(const DecayInput& in, const FunctionalParams& p, double envelope_tol = 1e-6);

/// Roundoff allowance for dJ <= 0 checks.
inline double dj_tolerance(double J) { return 1e-13 * (1.0 + J); }

}  // namespace wft
