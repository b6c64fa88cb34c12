#pragma once

#include <utility>

namespace wft {

/// Conserved variables of the p-system on one pipe.
struct GasState {
  double rho = 1.0;  ///< mass density, > 0
  double q = 0.0;    ///< linear momentum density

  double velocity() const { return q / rho; }
  friend bool operator==(const GasState&, const GasState&) = default;
};

/// Throws DomainError unless rho > 0 and both fields are finite.
void validate(const GasState& u);

/// (rho, q) -> (rho, -q). Together with x -> -x this is a symmetry of the system.
inline GasState mirror(const GasState& u) { return {u.rho, -u.q}; }

/// gamma-law pressure p(rho) = kappa * rho^gamma_exp with gamma_exp > 1.
class PressureLaw {
 public:
  PressureLaw(double kappa, double gamma_exp);

  double kappa() const { return kappa_; }
  double gamma_exp() const { return gamma_; }

  double pressure(double rho) const;
  double dpressure(double rho) const;  ///< p'(rho)

  /// h(rho) = int_1^rho sqrt(p'(r))/r dr, closed form.
  double invariant_integral(double rho) const;
  /// Inverse of invariant_integral. Throws DomainError if no positive density maps to h.
  double density_from_invariant_integral(double h) const;

  /// int_1^rho p(r)/r^2 dr, closed form.
  double internal_energy_integral(double rho) const;

  /// Sound speed as a function of c: rho = (c / sqrt(kappa*gamma))^(2/(gamma-1)).
  double density_from_sound_speed(double c) const;

 private:
  double kappa_;
  double gamma_;
};

double sound_speed(const PressureLaw& law, double rho);

struct Eigenvalues {
  double lambda1;
  double lambda2;
};
Eigenvalues eigenvalues(const PressureLaw& law, const GasState& u);

struct RiemannInvariants {
  double v1;  ///< q/rho + h(rho), constant along 1-rarefactions
  double v2;  ///< q/rho - h(rho), constant along 2-rarefactions
};
RiemannInvariants riemann_invariants(const PressureLaw& law, const GasState& u);

/// State with the given Riemann invariants.
GasState state_from_invariants(const PressureLaw& law, const RiemannInvariants& v);

/// Region membership. At q = 0 inside the subsonic region both zero flags are set.
struct RegionTag {
  bool supersonic_minus = false;  ///< A-: lambda2 < 0
  bool subsonic_minus = false;    ///< A0-: lambda2 >= 0, q <= 0
  bool subsonic_plus = false;     ///< A0+: lambda1 <= 0, q >= 0
  bool supersonic_plus = false;   ///< A+: lambda1 > 0

  bool subsonic() const { return subsonic_minus || subsonic_plus; }
};
RegionTag classify_region(const PressureLaw& law, const GasState& u);

/// Strictly inside the subsonic region: lambda1 < 0 < lambda2.
bool strictly_subsonic(const PressureLaw& law, const GasState& u);

double dynamic_pressure(const PressureLaw& law, const GasState& u);
double energy(const PressureLaw& law, const GasState& u);
double energy_flux(const PressureLaw& law, const GasState& u);

}  // namespace wft
