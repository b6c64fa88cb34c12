#pragma once

#include <limits>
#include <optional>

#include "wft/eos.hpp"

namespace wft {

enum class Family { first = 1, second = 2 };

inline int index(Family k) { return static_cast<int>(k); }
inline Family other(Family k) { return k == Family::first ? Family::second : Family::first; }

/// Characteristic speed lambda_k.
double characteristic_speed(const PressureLaw& law, const GasState& u, Family k);

/// Point on the Lax curve of `family` through `base`, at eigenvalue shift `sigma`.
struct CurveQuery {
  GasState base;
  Family family = Family::first;
  double sigma = 0.0;
};

/// Curves are evaluated only for |sigma| <= sigma_max; beyond that a DomainError is thrown.
struct CurveDomain {
  double sigma_max = std::numeric_limits<double>::infinity();
};

/// Absolute tolerance on the eigenvalue-shift residual of curve evaluations.
inline constexpr double kCurveTolerance = 1e-12;

/// Rarefaction branch (sigma >= 0). Closed form along the integral curve.
GasState rarefaction_state(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain = {});

/// Integral curve through `base` for either sign of sigma (sigma < 0 walks the curve backwards).
GasState integral_curve_state(const PressureLaw& law, const CurveQuery& query);

struct ShockPoint {
  GasState state;
  double speed = 0.0;  ///< Rankine-Hugoniot speed
};

/// Lax-admissible shock branch (sigma < 0); `base` is the left state.
ShockPoint shock_state(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain = {});

/// Hugoniot locus of `family` through `base`, parametrized by eigenvalue shift for either sign.
/// For sigma < 0 this coincides with shock_state; for sigma > 0 it is the non-admissible branch.
GasState hugoniot_state(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain = {});

/// Rankine-Hugoniot speed (q_b - q_a) / (rho_b - rho_a). Falls back to the average
/// characteristic speed when the densities coincide.
double rankine_hugoniot_speed(const PressureLaw& law, const GasState& a, const GasState& b, Family k);

/// Composite Lax curve: rarefaction for sigma >= 0, shock for sigma < 0.
/// The result is the right state of a jump whose left state is `base`.
GasState lax_state(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain = {});

struct LaxPoint {
  GasState state;
  std::optional<double> shock_speed;  ///< set only on the shock branch
};
LaxPoint lax_point(const PressureLaw& law, const CurveQuery& query, const CurveDomain& domain = {});

/// Inverse of lax_state: the left state `u` with lax_state(u, family, sigma) == right.
GasState lax_origin(const PressureLaw& law, const GasState& right, Family family, double sigma,
                    const CurveDomain& domain = {});

}  // namespace wft
