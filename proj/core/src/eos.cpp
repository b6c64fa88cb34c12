#include "wft/eos.hpp"

#include <cmath>
#include <string>

#include <fmt/core.h>

#include "wft/errors.hpp"

namespace wft {

void validate(const GasState& u) {
  if (!(u.rho > 0.0) || !std::isfinite(u.rho) || !std::isfinite(u.q)) {
    throw DomainError(fmt::format("invalid gas state (rho={:.6g}, q={:.6g})", u.rho, u.q));
  }
}

PressureLaw::PressureLaw(double kappa, double gamma_exp) : kappa_(kappa), gamma_(gamma_exp) {
  if (!(kappa > 0.0) || !std::isfinite(kappa)) {
    throw ConfigError("law.kappa", "pressure scale must be positive");
  }
  // gamma_exp == 1 is the isothermal law, which has p'' = 0.
  if (!(gamma_exp > 1.0) || !std::isfinite(gamma_exp)) {
    throw ConfigError("law.gamma_exp", "adiabatic exponent must be > 1 (p'' > 0 required)");
  }
}

double PressureLaw::pressure(double rho) const { return kappa_ * std::pow(rho, gamma_); }

double PressureLaw::dpressure(double rho) const {
  return kappa_ * gamma_ * std::pow(rho, gamma_ - 1.0);
}

double PressureLaw::invariant_integral(double rho) const {
  const double c1 = std::sqrt(kappa_ * gamma_);
  return 2.0 * c1 / (gamma_ - 1.0) * (std::pow(rho, 0.5 * (gamma_ - 1.0)) - 1.0);
}

double PressureLaw::density_from_invariant_integral(double h) const {
  const double c1 = std::sqrt(kappa_ * gamma_);
  const double c = c1 + 0.5 * (gamma_ - 1.0) * h;
  return density_from_sound_speed(c);
}

double PressureLaw::internal_energy_integral(double rho) const {
  return kappa_ * (std::pow(rho, gamma_ - 1.0) - 1.0) / (gamma_ - 1.0);
}

double PressureLaw::density_from_sound_speed(double c) const {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw DomainError(fmt::format("sound speed {:.6g} does not correspond to a positive density", c));
  }
  const double rho = std::pow(c / std::sqrt(kappa_ * gamma_), 2.0 / (gamma_ - 1.0));
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw DomainError("density underflow/overflow on curve evaluation");
  }
  return rho;
}

double sound_speed(const PressureLaw& law, double rho) {
  if (!(rho > 0.0)) {
    throw DomainError(fmt::format("sound speed requires rho > 0, got {:.6g}", rho));
  }
  return std::sqrt(law.dpressure(rho));
}

Eigenvalues eigenvalues(const PressureLaw& law, const GasState& u) {
  const double w = u.velocity();
  const double c = sound_speed(law, u.rho);
  return {w - c, w + c};
}

RiemannInvariants riemann_invariants(const PressureLaw& law, const GasState& u) {
  const double w = u.velocity();
  const double h = law.invariant_integral(u.rho);
  return {w + h, w - h};
}

GasState state_from_invariants(const PressureLaw& law, const RiemannInvariants& v) {
  const double h = 0.5 * (v.v1 - v.v2);
  const double w = 0.5 * (v.v1 + v.v2);
  const double rho = law.density_from_invariant_integral(h);
  return {rho, rho * w};
}

RegionTag classify_region(const PressureLaw& law, const GasState& u) {
  const auto [l1, l2] = eigenvalues(law, u);
  RegionTag tag;
  tag.supersonic_minus = l2 < 0.0;
  tag.subsonic_minus = l2 >= 0.0 && u.q <= 0.0;
  tag.subsonic_plus = l1 <= 0.0 && u.q >= 0.0;
  tag.supersonic_plus = l1 > 0.0;
  return tag;
}

bool strictly_subsonic(const PressureLaw& law, const GasState& u) {
  if (!(u.rho > 0.0) || !std::isfinite(u.q)) return false;
  const auto [l1, l2] = eigenvalues(law, u);
  return l1 < 0.0 && l2 > 0.0;
}

double dynamic_pressure(const PressureLaw& law, const GasState& u) {
  return u.q * u.q / u.rho + law.pressure(u.rho);
}

double energy(const PressureLaw& law, const GasState& u) {
  return 0.5 * u.q * u.q / u.rho + u.rho * law.internal_energy_integral(u.rho);
}

double energy_flux(const PressureLaw& law, const GasState& u) {
  return u.velocity() * (energy(law, u) + law.pressure(u.rho));
}

}  // namespace wft
