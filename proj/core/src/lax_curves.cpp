#include "wft/lax_curves.hpp"

#include <cmath>
#include <string>

#include "wft/detail/roots.hpp"
#include "wft/errors.hpp"

namespace wft {
namespace {

void check_domain(double sigma, const CurveDomain& domain) {
  if (!std::isfinite(sigma)) {
    throw DomainError("non-finite curve parameter");
  }
  if (std::abs(sigma) > domain.sigma_max) {
    throw DomainError("curve parameter |sigma|=" + std::to_string(std::abs(sigma)) +
                      " exceeds curve-domain radius " + std::to_string(domain.sigma_max));
  }
}

// Hugoniot locus in the relative density offset delta = rho'/rho - 1, written with
// expm1/log1p so that weak shocks keep full relative precision.
struct HugoniotBranch {
  const PressureLaw& law;
  GasState base;
  Family family;
  double w;      // base velocity
  double c;      // base sound speed
  double coeff;  // kappa * rho^(gamma-1)

  HugoniotBranch(const PressureLaw& l, const GasState& b, Family k)
      : law(l), base(b), family(k), w(b.velocity()), c(sound_speed(l, b.rho)),
        coeff(l.kappa() * std::pow(b.rho, l.gamma_exp() - 1.0)) {}

  // sqrt(D) / |delta| where D = [p] [rho] / (rho rho').
  double slope(double delta) const {
    const double g = law.gamma_exp();
    const double ratio = delta == 0.0 ? g : std::expm1(g * std::log1p(delta)) / delta;
    return std::sqrt(coeff * ratio / (1.0 + delta));
  }

  double velocity_jump(double delta) const {
    const double jump = delta * slope(delta);
    return family == Family::first ? -jump : jump;
  }

  double sound_jump(double delta) const {
    return c * std::expm1(0.5 * (law.gamma_exp() - 1.0) * std::log1p(delta));
  }

  // lambda_k(state(delta)) - lambda_k(base)
  double shift(double delta) const {
    const double dw = velocity_jump(delta);
    const double dc = sound_jump(delta);
    return family == Family::first ? dw - dc : dw + dc;
  }

  GasState state(double delta) const {
    const double rho = base.rho * (1.0 + delta);
    return {rho, rho * (w + velocity_jump(delta))};
  }

  double speed(double delta) const {
    const double s = (1.0 + delta) * slope(delta);
    return family == Family::first ? w - s : w + s;
  }

  // Solve shift(delta) == sigma. shift is decreasing in delta for family 1, increasing for 2.
  double solve(double sigma) const {
    if (sigma == 0.0) return 0.0;
    const double lin = 2.0 * std::abs(sigma) / (c * (law.gamma_exp() + 1.0));
    const bool increasing = family == Family::second;
    const bool positive_side = (sigma > 0.0) == increasing;
    auto f = [&](double d) { return shift(d) - sigma; };
    if (positive_side) {
      double hi = 2.0 * lin + 1e-300;
      double fhi = f(hi);
      for (int i = 0; (fhi > 0.0) != increasing || fhi == 0.0; ++i) {
        if (fhi == 0.0) return hi;
        if (i > 200) throw DomainError("Hugoniot bracket growth failed");
        hi *= 2.0;
        fhi = f(hi);
      }
      return detail::bracketed_root(f, 0.0, hi, -sigma, fhi, "Hugoniot locus");
    }
    // delta in (-1, 0): move toward vacuum geometrically.
    double gap = std::min(0.5, 2.0 * lin + 1e-300);
    double lo = -gap;
    double flo = f(lo);
    for (int i = 0; (flo > 0.0) == increasing && flo != 0.0; ++i) {
      if (i > 200) throw DomainError("Hugoniot bracket growth failed (vacuum approached)");
      gap = gap < 0.5 ? 2.0 * gap : 0.5 * (1.0 + gap);
      lo = -gap;
      flo = f(lo);
    }
    return detail::bracketed_root(f, lo, 0.0, flo, -sigma, "Hugoniot locus");
  }
};

void check_residual(double residual, double scale, const char* what) {
  if (!(std::abs(residual) <= kCurveTolerance * std::max(1.0, scale))) {
    throw SolverError(std::string(what) + ": eigenvalue-shift residual " + std::to_string(residual) +
                      " above tolerance");
  }
}

}  // namespace

double characteristic_speed(const PressureLaw& law, const GasState& u, Family k) {
  const auto ev = eigenvalues(law, u);
  return k == Family::first ? ev.lambda1 : ev.lambda2;
}

GasState integral_curve_state(const PressureLaw& law, const CurveQuery& query) {
  validate(query.base);
  if (query.sigma == 0.0) return query.base;
  const double g = law.gamma_exp();
  const double c = sound_speed(law, query.base.rho);
  const double dc = query.sigma * (g - 1.0) / (g + 1.0);
  const auto v = riemann_invariants(law, query.base);
  if (query.family == Family::first) {
    const double rho = law.density_from_sound_speed(c - dc);
    return {rho, rho * (v.v1 - law.invariant_integral(rho))};
  }
  const double rho = law.density_from_sound_speed(c + dc);
  return {rho, rho * (v.v2 + law.invariant_integral(rho))};
}

GasState rarefaction_state(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain) {
  if (query.sigma < 0.0) {
    throw ContractViolation("rarefaction_state requires sigma >= 0");
  }
  check_domain(query.sigma, domain);
  return integral_curve_state(law, query);
}

GasState hugoniot_state(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain) {
  validate(query.base);
  check_domain(query.sigma, domain);
  if (query.sigma == 0.0) return query.base;
  const HugoniotBranch branch(law, query.base, query.family);
  const double delta = branch.solve(query.sigma);
  check_residual(branch.shift(delta) - query.sigma, std::abs(query.sigma), "Hugoniot locus");
  return branch.state(delta);
}

ShockPoint shock_state(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain) {
  if (!(query.sigma < 0.0)) {
    throw ContractViolation("shock_state requires sigma < 0");
  }
  validate(query.base);
  check_domain(query.sigma, domain);
  const HugoniotBranch branch(law, query.base, query.family);
  const double delta = branch.solve(query.sigma);
  check_residual(branch.shift(delta) - query.sigma, std::abs(query.sigma), "shock curve");
  return {branch.state(delta), branch.speed(delta)};
}

double rankine_hugoniot_speed(const PressureLaw& law, const GasState& a, const GasState& b, Family k) {
  const double drho = b.rho - a.rho;
  if (drho == 0.0) {
    return 0.5 * (characteristic_speed(law, a, k) + characteristic_speed(law, b, k));
  }
  return (b.q - a.q) / drho;
}

LaxPoint lax_point(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain) {
  if (query.sigma >= 0.0) {
    return {rarefaction_state(law, query, domain), std::nullopt};
  }
  const auto shock = shock_state(law, query, domain);
  return {shock.state, shock.speed};
}

GasState lax_state(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain) {
  return lax_point(law, query, domain).state;
}

GasState lax_origin(const PressureLaw& law, const GasState& right, Family family, double sigma,
                    const CurveDomain& domain) {
  check_domain(sigma, domain);
  // Both the integral curves and the k-Hugoniot relation are symmetric in their endpoints,
  // so the left state lies on the same curve through `right` at the opposite shift.
  if (sigma >= 0.0) {
    return integral_curve_state(law, {right, family, -sigma});
  }
  return hugoniot_state(law, {right, family, -sigma}, domain);
}

}  // namespace wft
