#include "wft/detail/newton.hpp"

#include <limits>

namespace wft::detail {

NewtonResult newton_solve(const ResidualFn& residual, Eigen::VectorXd x, const NewtonOptions& opts,
                          const std::string& what) {
  const Eigen::Index n = x.size();
  auto r0 = residual(x);
  if (!r0) {
    throw SolverError(what + ": initial guess outside admissible set");
  }
  Eigen::VectorXd r = *r0;
  double norm = r.lpNorm<Eigen::Infinity>();
  Eigen::MatrixXd jac(n, n);
  int it = 0;
  for (; it < opts.max_iterations && norm > opts.tolerance; ++it) {
    for (Eigen::Index j = 0; j < n; ++j) {
      const double h = opts.fd_relative_step * (1.0 + std::abs(x[j]));
      Eigen::VectorXd xp = x;
      Eigen::VectorXd xm = x;
      xp[j] += h;
      xm[j] -= h;
      auto rp = residual(xp);
      auto rm = residual(xm);
      if (rp && rm) {
        jac.col(j) = (*rp - *rm) / (2.0 * h);
      } else if (rp) {
        jac.col(j) = (*rp - r) / h;
      } else if (rm) {
        jac.col(j) = (r - *rm) / h;
      } else {
        throw SolverError(what + ": Jacobian stencil left the admissible set");
      }
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu(jac);
    if (!(std::abs(lu.determinant()) > 0.0)) {
      throw SolverError(what + ": singular Jacobian");
    }
    const Eigen::VectorXd step = lu.solve(r);
    double t = 1.0;
    bool accepted = false;
    // Near the roundoff floor a failed full step means convergence; skip the line search.
    const int max_halvings = norm < 1e3 * opts.tolerance ? 1 : 40;
    for (int k = 0; k < max_halvings; ++k, t *= 0.5) {
      const Eigen::VectorXd trial = x - t * step;
      auto rt = residual(trial);
      if (!rt) continue;
      const double tn = rt->lpNorm<Eigen::Infinity>();
      if (tn < norm) {
        x = trial;
        r = *rt;
        norm = tn;
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // stalled at roundoff level
  }
  if (!(norm <= opts.accept)) {
    throw SolverError(what + ": Newton did not converge (residual " + std::to_string(norm) + " after " +
                      std::to_string(it) + " iterations)");
  }
  return {x, norm, it};
}

}  // namespace wft::detail
