#include "wft/riemann.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include <fmt/core.h>

#include "wft/detail/newton.hpp"
#include "wft/detail/roots.hpp"
#include "wft/errors.hpp"

namespace wft {

WavePattern make_wave(const PressureLaw& law, const GasState& left, Family family, double sigma,
                      const CurveDomain& domain) {
  WavePattern w;
  w.family = family;
  w.sigma = sigma;
  w.left = left;
  const LaxPoint p = lax_point(law, {left, family, sigma}, domain);
  w.right = p.state;
  if (p.shock_speed) {
    w.shock = true;
    w.speed = *p.shock_speed;
  } else {
    w.lambda_lo = characteristic_speed(law, left, family);
    w.lambda_hi = characteristic_speed(law, w.right, family);
  }
  return w;
}

ClassicalSolution solve_classical(const PressureLaw& law, const GasState& u_l, const GasState& u_r,
                                  const CurveDomain& domain) {
  validate(u_l);
  validate(u_r);
  ClassicalSolution sol;
  if (u_l == u_r) {
    sol.middle = u_l;
    sol.waves = {make_wave(law, u_l, Family::first, 0.0), make_wave(law, u_l, Family::second, 0.0)};
    return sol;
  }
  // Two-rarefaction guess: exact when both waves are rarefactions.
  const RiemannInvariants vl = riemann_invariants(law, u_l);
  const RiemannInvariants vr = riemann_invariants(law, u_r);
  const double g = 0.25 * (law.gamma_exp() + 1.0);
  Eigen::VectorXd x0(2);
  x0 << g * (vr.v2 - vl.v2), g * (vr.v1 - vl.v1);

  auto residual = [&](const Eigen::VectorXd& s) -> std::optional<Eigen::VectorXd> {
    try {
      const GasState m = lax_state(law, {u_l, Family::first, s[0]}, domain);
      const GasState r = lax_state(law, {m, Family::second, s[1]}, domain);
      const RiemannInvariants v = riemann_invariants(law, r);
      Eigen::VectorXd out(2);
      out << v.v1 - vr.v1, v.v2 - vr.v2;
      return out;
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  std::optional<detail::NewtonResult> res;
  if (!residual(x0)) {
    if (std::max(std::abs(x0[0]), std::abs(x0[1])) > domain.sigma_max) {
      throw DomainError("solve_classical: states too far apart for the curve domain");
    }
    x0.setZero();
  }
  res = detail::newton_solve(residual, x0, {}, "solve_classical");
  sol.sigma1 = res->x[0];
  sol.sigma2 = res->x[1];
  sol.waves[0] = make_wave(law, u_l, Family::first, sol.sigma1, domain);
  sol.middle = sol.waves[0].right;
  sol.waves[1] = make_wave(law, sol.middle, Family::second, sol.sigma2, domain);
  const GasState& r = sol.waves[1].right;
  sol.residual = std::max(std::abs(r.rho - u_r.rho), std::abs(r.q - u_r.q));
  if (sol.residual > 1e-10 * std::max(1.0, std::abs(u_r.rho) + std::abs(u_r.q))) {
    throw SolverError("solve_classical: recomposition residual " + std::to_string(sol.residual));
  }
  // The incoming right state is reproduced exactly by callers; store it verbatim.
  sol.waves[1].right = u_r;
  return sol;
}

JunctionSolution solve_junction(const PressureLaw& law, const NetworkConfig& net, const std::vector<GasState>& states,
                                const JunctionOptions& opts) {
  const std::size_t n = net.n_pipes();
  if (states.size() != n) throw ContractViolation("solve_junction: expected one state per pipe");
  for (std::size_t i = 0; i < n; ++i) {
    validate(states[i]);
    if (!strictly_subsonic(law, states[i])) {
      throw DomainError("solve_junction: pipe " + std::to_string(i) + " state is not subsonic");
    }
  }
  const CurveDomain domain = curve_domain(law, net);

  auto traces_for = [&](const Eigen::VectorXd& s) -> std::optional<std::vector<GasState>> {
    std::vector<GasState> tr(n);
    try {
      for (std::size_t i = 0; i < n; ++i) {
        tr[i] = lax_origin(law, states[i], Family::second, s[static_cast<Eigen::Index>(i)], domain);
        if (!strictly_subsonic(law, tr[i])) return std::nullopt;
      }
    } catch (const DomainError&) {
      return std::nullopt;
    }
    return tr;
  };
  auto residual = [&](const Eigen::VectorXd& s) -> std::optional<Eigen::VectorXd> {
    auto tr = traces_for(s);
    if (!tr) return std::nullopt;
    Eigen::VectorXd r(static_cast<Eigen::Index>(n));
    r[0] = mass_residual(net, *tr);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      r[static_cast<Eigen::Index>(i + 1)] = dynamic_pressure(law, (*tr)[i]) - dynamic_pressure(law, (*tr)[i + 1]);
    }
    return r;
  };

  const auto res = detail::newton_solve(residual, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n)), {},
                                        "solve_junction");
  JunctionSolution sol;
  sol.sigmas.assign(res.x.data(), res.x.data() + n);
  sol.traces = *traces_for(res.x);
  sol.p_star = 0.0;
  for (const GasState& u : sol.traces) sol.p_star += dynamic_pressure(law, u);
  sol.p_star /= static_cast<double>(n);
  sol.mass_residual = mass_residual(net, sol.traces);
  sol.pressure_mismatch = pressure_mismatch(law, sol.traces);
  sol.entropy_sum = entropy_sum(law, net, sol.traces);
  if (opts.check_entropy && sol.entropy_sum > kCouplingTolerance) {
    throw EntropyViolation(
        fmt::format("solve_junction: entropy sum {:.3g} > 0; states left the admissible neighborhood", sol.entropy_sum));
  }
  return sol;
}

double boundary_residual(const PressureLaw& law, const GasState& u, const GasState& u_bar, double k) {
  const RiemannInvariants v = riemann_invariants(law, u);
  const RiemannInvariants vb = riemann_invariants(law, u_bar);
  return (v.v2 - vb.v2) - k * (v.v1 - vb.v1);
}

BoundarySolution solve_boundary(const PressureLaw& law, const GasState& u_l, const GasState& u_bar, double k,
                                const CurveDomain& domain) {
  validate(u_l);
  if (!(k >= 0.0 && k < 1.0)) throw ContractViolation("solve_boundary: gain must lie in [0, 1)");
  auto psi = [&](double s) {
    return boundary_residual(law, lax_state(law, {u_l, Family::first, s}, domain), u_bar, k);
  };
  BoundarySolution sol;
  const double f0 = psi(0.0);
  // Below roundoff level of the invariants the feedback condition already holds.
  if (std::abs(f0) <= 1e-15) {
    sol.trace = u_l;
    return sol;
  }
  // d(v2)/d(sigma) = 4/(gamma+1) along the 1-curve at sigma = 0, and v1 is stationary to second order.
  const double guess = -f0 * 0.25 * (law.gamma_exp() + 1.0);
  double d = 0.25 * std::abs(guess);
  double lo = guess - d;
  double hi = guess + d;
  double flo = 0.0;
  double fhi = 0.0;
  for (int i = 0;; ++i) {
    try {
      flo = psi(lo);
      fhi = psi(hi);
    } catch (const DomainError&) {
      throw DomainError("solve_boundary: root not bracketed within curve domain");
    }
    if ((flo <= 0.0) != (fhi <= 0.0) || flo == 0.0 || fhi == 0.0) break;
    if (i > 60) throw SolverError("solve_boundary: bracket growth failed");
    d *= 2.0;
    lo = guess - d;
    hi = guess + d;
  }
  sol.sigma1 = detail::bracketed_root(psi, lo, hi, flo, fhi, "solve_boundary", 1e-17);
  sol.trace = lax_state(law, {u_l, Family::first, sol.sigma1}, domain);
  sol.residual = boundary_residual(law, sol.trace, u_bar, k);
  if (std::abs(sol.residual) > 1e-10) {
    throw SolverError("solve_boundary: residual " + std::to_string(sol.residual));
  }
  return sol;
}

}  // namespace wft
