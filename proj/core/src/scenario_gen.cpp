#include "wft/scenario_gen.hpp"

#include <algorithm>

#include "wft/errors.hpp"

namespace wft {

std::vector<PipeInitial> random_initial(const NetworkConfig& net, const RandomDataOptions& opts,
                                        std::mt19937_64& rng) {
  std::uniform_real_distribution<double> x_dist(0.0, 1.0);
  std::uniform_real_distribution<double> d(-opts.amplitude, opts.amplitude);
  std::vector<PipeInitial> out;
  for (const GasState& eq : net.equilibria) {
    std::vector<double> xs;
    for (std::size_t i = 0; i < opts.jumps_per_pipe; ++i) xs.push_back(x_dist(rng));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    xs.erase(std::remove_if(xs.begin(), xs.end(), [](double x) { return x <= 0.0 || x >= 1.0; }), xs.end());
    xs.push_back(1.0);
    PipeInitial pipe;
    for (double x : xs) pipe.push_back({x, {eq.rho + d(rng), eq.q + d(rng)}});
    out.push_back(pipe);
  }
  return out;
}

CompliantSetup make_compliant(const PressureLaw& law, NetworkConfig net, const CompliantOptions& opts,
                              std::mt19937_64& rng) {
  std::fill(net.gains.begin(), net.gains.end(), 0.0);
  CompliantSetup out;
  out.calibration = calibrate_constants(law, net, opts.calibration);
  FunctionalParams p = out.calibration.constants;
  p.gamma_w = opts.gamma_w;
  std::uniform_real_distribution<double> frac(opts.gain_lo, opts.gain_hi);
  const double kmax = gain_bound(p);
  for (double& k : net.gains) k = frac(rng) * kmax;
  for (int round = 0; round < 20; ++round) {
    const CalibrationResult with_gains = calibrate_constants(law, net, opts.calibration);
    p.C_b = std::max(p.C_b, with_gains.constants.C_b);
    const double bound = gain_bound(p);
    const double worst = *std::max_element(net.gains.begin(), net.gains.end());
    if (worst <= bound) {
      out.calibration.raw_C_b = std::max(out.calibration.raw_C_b, with_gains.raw_C_b);
      break;
    }
    for (double& k : net.gains) k *= 0.9 * bound / worst;
    if (round == 19) throw ConfigError("network.gains", "could not satisfy the gain bound");
  }
  p.kappa_q = opts.kappa_factor * kappa_bound(p);
  out.params = p;
  out.network = net;
  check_decay_hypotheses(p, net);
  return out;
}

}  // namespace wft
