#pragma once

#include <array>

#include "wft/eos.hpp"
#include "wft/fronts.hpp"

namespace wft {

/// Self-similar solution of one Riemann problem, computed independently of the
/// eigenvalue-shift parametrization: the middle density is found from velocity
/// matching across the two waves by bisection.
class ExactRiemann {
 public:
  ExactRiemann(const PressureLaw& law, const GasState& left, const GasState& right);

  const GasState& middle() const { return middle_; }
  bool first_is_shock() const { return middle_.rho > left_.rho; }
  bool second_is_shock() const { return middle_.rho > right_.rho; }

  /// Solution at self-similar coordinate xi = (x - x0) / t.
  GasState sample(double xi) const;

  /// Breakpoints in xi: wave edges (shock speeds or fan edges), ascending.
  std::array<double, 4> edges() const;

 private:
  PressureLaw law_;
  GasState left_;
  GasState right_;
  GasState middle_;
  double s1_lo_, s1_hi_, s2_lo_, s2_hi_;
};

/// int |rho - rho_exact| + |q - q_exact| dx over the pipe interval at time t > 0, with the
/// Riemann jump located at x0. Integrated piecewise between all breakpoints of both fields.
double l1_error(const PipeSnapshot& pipe, const ExactRiemann& exact, double t, double x0);

}  // namespace wft
