#pragma once

#include <cmath>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "wft/errors.hpp"

namespace wft::detail {

struct NewtonOptions {
  double tolerance = 1e-15;       ///< target max-norm residual; iteration also stops when no longer decreasing
  double accept = 1e-11;          ///< residual accepted if the iteration stalls
  int max_iterations = 100;
  double fd_relative_step = 1e-7; ///< central-difference step is fd_relative_step * (1 + |x_i|)
};

struct NewtonResult {
  Eigen::VectorXd x;
  double residual = 0.0;
  int iterations = 0;
};

/// Residual callback: returns nullopt when x lies outside the admissible set
/// (the line search then shortens the step).
using ResidualFn = std::function<std::optional<Eigen::VectorXd>(const Eigen::VectorXd&)>;

/// Damped Newton with a central finite-difference Jacobian and backtracking.
NewtonResult newton_solve(const ResidualFn& residual, Eigen::VectorXd x0, const NewtonOptions& opts,
                          const std::string& what);

}  // namespace wft::detail
