#include "wft/network.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "wft/detail/roots.hpp"
#include "wft/errors.hpp"

namespace wft {
namespace {

std::string at(const char* field, std::size_t i) { return std::string(field) + "[" + std::to_string(i) + "]"; }

// Subsonic ball check: rho stays positive and the boundary circle stays in lambda1 < 0 < lambda2.
bool ball_subsonic(const PressureLaw& law, const GasState& u, double r) {
  if (!(u.rho - r > 0.0) || !strictly_subsonic(law, u)) return false;
  constexpr int kSamples = 256;
  for (int i = 0; i < kSamples; ++i) {
    const double a = 2.0 * std::numbers::pi * i / kSamples;
    if (!strictly_subsonic(law, {u.rho + r * std::cos(a), u.q + r * std::sin(a)})) return false;
  }
  return true;
}

}  // namespace

void validate(const PressureLaw& law, const NetworkConfig& net) {
  const std::size_t n = net.n_pipes();
  if (n < 2) throw ConfigError("network.n_pipes", "at least two pipes required");
  if (net.gains.size() != n) throw ConfigError("network.gains", "expected " + std::to_string(n) + " entries");
  if (net.equilibria.size() != n) {
    throw ConfigError("network.equilibria", "expected " + std::to_string(n) + " entries");
  }
  if (!(net.subsonic_radius > 0.0)) throw ConfigError("network.subsonic_radius", "must be positive");
  for (std::size_t i = 0; i < n; ++i) {
    if (!(net.nu_norms[i] > 0.0) || !std::isfinite(net.nu_norms[i])) {
      throw ConfigError(at("network.nu_norms", i), "must be positive");
    }
    if (!(net.gains[i] >= 0.0 && net.gains[i] < 1.0)) throw ConfigError(at("network.gains", i), "must lie in [0, 1)");
    const GasState& u = net.equilibria[i];
    if (!(u.rho > 0.0) || !std::isfinite(u.rho) || !std::isfinite(u.q)) {
      throw ConfigError(at("network.equilibria", i), "invalid state");
    }
    if (!ball_subsonic(law, u, net.subsonic_radius)) {
      throw ConfigError(at("network.equilibria", i), "subsonic_radius ball leaves the subsonic region");
    }
  }
  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) scale += net.nu_norms[i] * std::abs(net.equilibria[i].q);
  if (std::abs(mass_residual(net, net.equilibria)) > kCouplingTolerance * std::max(1.0, scale)) {
    throw ConfigError("network.equilibria", "mass balance sum nu*q violated");
  }
  const double p0 = dynamic_pressure(law, net.equilibria[0]);
  if (pressure_mismatch(law, net.equilibria) > kCouplingTolerance * std::max(1.0, p0)) {
    throw ConfigError("network.equilibria", "dynamic pressures differ");
  }
}

double mass_residual(const NetworkConfig& net, const std::vector<GasState>& traces) {
  double s = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) s += net.nu_norms[i] * traces[i].q;
  return s;
}

double pressure_mismatch(const PressureLaw& law, const std::vector<GasState>& traces) {
  double worst = 0.0;
  const double p0 = dynamic_pressure(law, traces.front());
  for (const GasState& u : traces) worst = std::max(worst, std::abs(dynamic_pressure(law, u) - p0));
  return worst;
}

double entropy_sum(const PressureLaw& law, const NetworkConfig& net, const std::vector<GasState>& traces) {
  double s = 0.0;
  for (std::size_t i = 0; i < traces.size(); ++i) s += net.nu_norms[i] * energy_flux(law, traces[i]);
  return s;
}

CurveDomain curve_domain(const PressureLaw& law, const NetworkConfig& net) {
  double c = std::numeric_limits<double>::infinity();
  for (const GasState& u : net.equilibria) c = std::min(c, sound_speed(law, u.rho));
  return {0.5 * c};
}

double subsonic_density(const PressureLaw& law, double q, double p_star) {
  // P(rho) = q^2/rho + p(rho) is increasing for rho above the sonic density, where c(rho) = |q|/rho.
  const double g = law.gamma_exp();
  const double sonic =
      q == 0.0 ? 0.0 : std::pow(q * q / (law.kappa() * g), 1.0 / (g + 1.0));
  auto f = [&](double rho) { return q * q / rho + law.pressure(rho) - p_star; };
  double lo = sonic > 0.0 ? sonic : 1e-300;
  if (sonic > 0.0 && f(sonic) > 0.0) {
    throw DomainError("dynamic pressure below the sonic minimum");
  }
  double hi = std::max(1.0, 2.0 * lo);
  while (f(hi) < 0.0) {
    hi *= 2.0;
    if (hi > 1e100) throw DomainError("subsonic density search diverged");
  }
  return detail::bracketed_root(f, lo, hi, "subsonic_density");
}

std::vector<GasState> make_equilibria(const PressureLaw& law, const std::vector<double>& flows, double p_star) {
  std::vector<GasState> out;
  out.reserve(flows.size());
  for (double q : flows) out.push_back({subsonic_density(law, q, p_star), q});
  return out;
}

NetworkConfig random_network(const PressureLaw& law, const RandomNetworkOptions& opts, std::mt19937_64& rng) {
  if (opts.n_pipes < 2) throw ConfigError("network.n_pipes", "at least two pipes required");
  std::uniform_real_distribution<double> nu_dist(opts.nu_min, opts.nu_max);
  std::uniform_real_distribution<double> flow_dist(-opts.flow_max, opts.flow_max);
  for (int attempt = 0; attempt < 1000; ++attempt) {
    NetworkConfig net;
    const std::size_t n = opts.n_pipes;
    net.nu_norms.resize(n);
    for (double& nu : net.nu_norms) nu = nu_dist(rng);
    std::vector<double> flows(n);
    double balance = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) {
      flows[i] = flow_dist(rng);
      balance += net.nu_norms[i] * flows[i];
    }
    flows[n - 1] = -balance / net.nu_norms[n - 1];
    if (std::abs(flows[n - 1]) > 2.0 * opts.flow_max) continue;
    const double p_star = dynamic_pressure(law, {opts.reference_rho, flows[0]});
    try {
      net.equilibria = make_equilibria(law, flows, p_star);
    } catch (const DomainError&) {
      continue;
    }
    double ent = entropy_sum(law, net, net.equilibria);
    if (ent > 0.0) {
      for (GasState& u : net.equilibria) u.q = -u.q;
      ent = -ent;
    }
    if (!(ent <= -opts.min_entropy_margin)) continue;
    net.gains.assign(n, 0.0);
    net.subsonic_radius = opts.subsonic_radius;
    try {
      validate(law, net);
    } catch (const ConfigError&) {
      continue;
    }
    return net;
  }
  throw ConfigError("network", "could not generate a compliant random network");
}

}  // namespace wft
