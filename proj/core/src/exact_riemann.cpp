#include "wft/exact_riemann.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <vector>

#include "wft/detail/roots.hpp"
#include "wft/errors.hpp"

namespace wft {
namespace {

// Velocity change across a wave connecting density rho_k to rho (Toro's f_K).
double wave_function(const PressureLaw& law, double rho_k, double rho) {
  if (rho <= rho_k) {
    return law.invariant_integral(rho) - law.invariant_integral(rho_k);
  }
  const double dp = law.pressure(rho) - law.pressure(rho_k);
  return std::sqrt(dp * (rho - rho_k) / (rho * rho_k));
}

}  // namespace

ExactRiemann::ExactRiemann(const PressureLaw& law, const GasState& left, const GasState& right)
    : law_(law), left_(left), right_(right) {
  validate(left);
  validate(right);
  const double wl = left.velocity();
  const double wr = right.velocity();
  // g(rho) = wl - f_l(rho) - wr - f_r(rho) is strictly decreasing.
  auto g = [&](double rho) { return wl - wave_function(law, left.rho, rho) - wr - wave_function(law, right.rho, rho); };
  double lo = std::min(left.rho, right.rho);
  double hi = std::max(left.rho, right.rho);
  while (g(lo) < 0.0) {
    lo *= 0.5;
    if (lo < 1e-200) throw DomainError("exact Riemann solution contains vacuum");
  }
  while (g(hi) > 0.0) {
    hi *= 2.0;
    if (hi > 1e200) throw DomainError("exact Riemann solution diverged");
  }
  for (int i = 0; i < 200 && hi - lo > 0.0; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (g(mid) > 0.0 ? lo : hi) = mid;
  }
  const double rho_m = 0.5 * (lo + hi);
  const double w_m = 0.5 * (wl - wave_function(law, left.rho, rho_m) + wr + wave_function(law, right.rho, rho_m));
  middle_ = {rho_m, rho_m * w_m};

  if (first_is_shock()) {
    s1_lo_ = s1_hi_ = (middle_.q - left.q) / (middle_.rho - left.rho);
  } else {
    s1_lo_ = wl - sound_speed(law, left.rho);
    s1_hi_ = w_m - sound_speed(law, rho_m);
  }
  if (second_is_shock()) {
    s2_lo_ = s2_hi_ = (right.q - middle_.q) / (right.rho - middle_.rho);
  } else {
    s2_lo_ = w_m + sound_speed(law, rho_m);
    s2_hi_ = wr + sound_speed(law, right.rho);
  }
}

std::array<double, 4> ExactRiemann::edges() const { return {s1_lo_, s1_hi_, s2_lo_, s2_hi_}; }

GasState ExactRiemann::sample(double xi) const {
  const double g = law_.gamma_exp();
  const double c0 = std::sqrt(law_.kappa() * g);
  const double a = 2.0 / (g - 1.0);
  if (xi < s1_lo_) return left_;
  if (xi < s1_hi_) {
    // Inside the 1-fan: w - c = xi and w + h(c) = v1(left), h(c) = a (c - c0).
    const double v1 = left_.velocity() + law_.invariant_integral(left_.rho);
    const double c = (v1 - xi + a * c0) / (1.0 + a);
    const double rho = law_.density_from_sound_speed(c);
    return {rho, rho * (xi + c)};
  }
  if (xi < s2_lo_) return middle_;
  if (xi < s2_hi_) {
    const double v2 = right_.velocity() - law_.invariant_integral(right_.rho);
    const double c = (xi - v2 + a * c0) / (1.0 + a);
    const double rho = law_.density_from_sound_speed(c);
    return {rho, rho * (xi - c)};
  }
  return right_;
}

double l1_error(const PipeSnapshot& pipe, const ExactRiemann& exact, double t, double x0) {
  if (!(t > 0.0)) throw ContractViolation("l1_error: t must be positive");
  std::vector<double> xs = {pipe.x_lo, pipe.x_hi};
  for (const WaveFront& f : pipe.fronts) xs.push_back(f.x_ref);
  for (double e : exact.edges()) xs.push_back(x0 + e * t);
  std::sort(xs.begin(), xs.end());
  double total = 0.0;
  std::size_t cell = 0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double a = std::max(xs[i], pipe.x_lo);
    const double b = std::min(xs[i + 1], pipe.x_hi);
    if (!(b > a)) continue;
    const double mid = 0.5 * (a + b);
    while (cell < pipe.fronts.size() && pipe.fronts[cell].x_ref <= mid) ++cell;
    const GasState u = pipe.cells[cell];
    auto diff = [&](double x, int comp) {
      const GasState e = exact.sample((x - x0) / t);
      return comp == 0 ? u.rho - e.rho : u.q - e.q;
    };
    // Split where a component of u - exact changes sign so every piece is smooth.
    constexpr int kProbe = 8;
    std::vector<double> cuts = {a, b};
    // Probes stay inside (a, b): the exact field may jump at either end.
    for (int comp = 0; comp < 2; ++comp) {
      double xl = a + 0.5 * (b - a) / kProbe;
      double fl = diff(xl, comp);
      for (int k = 1; k < kProbe; ++k) {
        const double xr = a + (b - a) * (k + 0.5) / kProbe;
        const double fr = diff(xr, comp);
        const bool noise = std::max(std::abs(fl), std::abs(fr)) < 1e-14;
        if (!noise && ((fl < 0.0 && fr > 0.0) || (fl > 0.0 && fr < 0.0))) {
          cuts.push_back(detail::bracketed_root([&](double x) { return diff(x, comp); }, xl, xr, fl, fr,
                                                "l1_error sign change", 1e-15));
        }
        xl = xr;
        fl = fr;
      }
    }
    std::sort(cuts.begin(), cuts.end());
    auto f = [&](double x) { return std::abs(diff(x, 0)) + std::abs(diff(x, 1)); };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
      if (cuts[k + 1] > cuts[k]) {
        total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, cuts[k], cuts[k + 1], 3, 1e-13);
      }
    }
  }
  return total;
}

}  // namespace wft
