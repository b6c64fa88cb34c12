#include "wft/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include <fmt/core.h>

#include "wft/detail/newton.hpp"
#include "wft/errors.hpp"
#include "wft/riemann.hpp"

namespace wft {

double kappa_bound(const FunctionalParams& p) {
  return 4.0 * p.K * p.K_J * (std::exp(p.gamma_w) + std::exp(3.0 * p.gamma_w));
}

double gain_bound(const FunctionalParams& p) { return std::exp(-2.0 * p.gamma_w) / (4.0 * p.C_b * p.K_J); }

void check_decay_hypotheses(const FunctionalParams& p, const NetworkConfig& net) {
  if (!(p.K_J >= 1.0)) throw ConfigError("functionals.constants.K_J", "must be >= 1");
  if (!(p.kappa_q > kappa_bound(p))) {
    throw ConfigError("functionals.kappa_q", fmt::format("kappa_q = {:.6g} violates kappa_q > 4 K K_J (e^g + e^3g) = {:.6g}",
                                                         p.kappa_q, kappa_bound(p)));
  }
  const double kmax = gain_bound(p);
  for (std::size_t i = 0; i < net.gains.size(); ++i) {
    if (net.gains[i] > kmax) {
      throw ConfigError(fmt::format("network.gains[{}]", i),
                        fmt::format("gain {:.6g} violates k <= e^(-2g)/(4 C_b K_J) = {:.6g}", net.gains[i], kmax));
    }
  }
}

TotalVariation total_variation(const PipeSnapshot& pipe) {
  TotalVariation tv;
  for (std::size_t i = 0; i + 1 < pipe.cells.size(); ++i) {
    tv.tv_states += std::abs(pipe.cells[i + 1].rho - pipe.cells[i].rho) + std::abs(pipe.cells[i + 1].q - pipe.cells[i].q);
  }
  for (const WaveFront& f : pipe.fronts) tv.strength_sum += std::abs(f.sigma);
  return tv;
}

TotalVariation total_variation(const Snapshot& snap) {
  TotalVariation tv;
  for (const PipeSnapshot& p : snap.pipes) {
    const TotalVariation t = total_variation(p);
    tv.tv_states += t.tv_states;
    tv.strength_sum += t.strength_sum;
  }
  return tv;
}

namespace {

// Position of a front: anchored positions for snapshots, extrapolated ones for live fronts.
struct AtRef {
  double operator()(const WaveFront& f) const { return f.x_ref; }
};
struct AtTime {
  double t;
  double operator()(const WaveFront& f) const { return f.position(t); }
};

template <class Pos>
double v_sum(const std::vector<WaveFront>& fronts, const FunctionalParams& p, Pos pos) {
  double v = 0.0;
  for (const WaveFront& f : fronts) {
    if (f.family == Family::first) {
      v += 2.0 * p.K_J * std::abs(f.sigma) * std::exp(p.gamma_w * pos(f));
    } else {
      v += std::abs(f.sigma) * std::exp(-p.gamma_w * pos(f));
    }
  }
  return v;
}

template <class Pos>
QuadraticParts q_sum(const std::vector<WaveFront>& fronts, const FunctionalParams& p, Pos pos) {
  // Same-family pairs: all pairs minus pairs of two rarefactions, via (S^2 - sum a^2) / 2.
  double s1 = 0, s1sq = 0, r1 = 0, r1sq = 0;
  double s2 = 0, s2sq = 0, r2 = 0, r2sq = 0;
  double left2 = 0.0;  // family-2 mass seen so far, weight e^{-g x}
  QuadraticParts q;
  for (const WaveFront& f : fronts) {
    const double a = std::abs(f.sigma);
    if (f.family == Family::first) {
      const double w = a * std::exp(p.gamma_w * pos(f));
      s1 += w;
      s1sq += w * w;
      if (f.sigma >= 0.0) {
        r1 += w;
        r1sq += w * w;
      }
      q.q12 += w * left2;
    } else {
      const double w = a * std::exp(-p.gamma_w * pos(f));
      s2 += w;
      s2sq += w * w;
      if (f.sigma >= 0.0) {
        r2 += w;
        r2sq += w * w;
      }
      left2 += w;
    }
  }
  q.q11 = std::max(0.0, 0.5 * ((s1 * s1 - s1sq) - (r1 * r1 - r1sq)));
  q.q22 = std::max(0.0, 0.5 * ((s2 * s2 - s2sq) - (r2 * r2 - r2sq)));
  return q;
}

}  // namespace

double v_gamma(const PipeSnapshot& pipe, const FunctionalParams& p) { return v_sum(pipe.fronts, p, AtRef{}); }

double j_gamma(const std::vector<WaveFront>& fronts, double t, const FunctionalParams& p) {
  return v_sum(fronts, p, AtTime{t}) + p.kappa_q * q_sum(fronts, p, AtTime{t}).sum();
}

double v_gamma(const Snapshot& snap, const FunctionalParams& p) {
  double v = 0.0;
  for (const PipeSnapshot& pipe : snap.pipes) v += v_gamma(pipe, p);
  return v;
}

std::vector<std::pair<std::size_t, std::size_t>> approaching_pairs(const std::vector<WaveFront>& fronts) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t i = 0; i < fronts.size(); ++i) {
    for (std::size_t j = i + 1; j < fronts.size(); ++j) {
      const WaveFront& a = fronts[i];
      const WaveFront& b = fronts[j];
      const bool crossing = a.family == Family::second && b.family == Family::first;
      const bool same = a.family == b.family && std::min(a.sigma, b.sigma) < 0.0;
      if (crossing || same) out.emplace_back(i, j);
    }
  }
  return out;
}

QuadraticParts q_gamma(const PipeSnapshot& pipe, const FunctionalParams& p) { return q_sum(pipe.fronts, p, AtRef{}); }

QuadraticParts q_gamma(const Snapshot& snap, const FunctionalParams& p) {
  QuadraticParts q;
  for (const PipeSnapshot& pipe : snap.pipes) {
    const QuadraticParts t = q_gamma(pipe, p);
    q.q11 += t.q11;
    q.q22 += t.q22;
    q.q12 += t.q12;
  }
  return q;
}

double j_gamma(const Snapshot& snap, const FunctionalParams& p) {
  return v_gamma(snap, p) + p.kappa_q * q_gamma(snap, p).sum();
}

FunctionalSample sample_functionals(const PipeSnapshot& pipe, const FunctionalParams& p) {
  FunctionalSample s;
  s.V = v_gamma(pipe, p);
  const QuadraticParts q = q_gamma(pipe, p);
  s.Q11 = q.q11;
  s.Q22 = q.q22;
  s.Q12 = q.q12;
  s.J = s.V + p.kappa_q * q.sum();
  const TotalVariation tv = total_variation(pipe);
  s.TV = tv.tv_states;
  s.strength_sum = tv.strength_sum;
  s.n_fronts = pipe.fronts.size();
  return s;
}

FunctionalSample operator+(FunctionalSample a, const FunctionalSample& b) {
  a.V += b.V;
  a.Q11 += b.Q11;
  a.Q22 += b.Q22;
  a.Q12 += b.Q12;
  a.J += b.J;
  a.TV += b.TV;
  a.strength_sum += b.strength_sum;
  a.n_fronts += b.n_fronts;
  return a;
}

FunctionalSample sample_functionals(const Snapshot& snap, const FunctionalParams& p) {
  FunctionalSample s;
  for (const PipeSnapshot& pipe : snap.pipes) s = s + sample_functionals(pipe, p);
  s.t = snap.t;
  return s;
}

double delta_j(const Snapshot& before, const Snapshot& after, const FunctionalParams& p) {
  return j_gamma(after, p) - j_gamma(before, p);
}

PhiWeights phi_weights(const Snapshot& u0, const Snapshot& v0, const FunctionalParams& p, PhiVariant variant) {
  FunctionalParams flat = p;
  flat.gamma_w = 0.0;
  PhiWeights w;
  w.kappa2 = 8.0 * std::max({1.0, p.K / p.kappa_q, p.K_J});
  const double j0 = j_gamma(u0, flat) + j_gamma(v0, flat);
  w.kappa1 = j0 > 0.0 ? 1.0 / ((1.0 + w.kappa2) * j0) : 0.0;
  if (variant == PhiVariant::junction_balanced) w.family1 = 2.0 * p.K_J * p.Lambda_max / p.c_min;
  return w;
}

std::pair<double, double> shock_decomposition(const PressureLaw& law, const GasState& u, const GasState& v) {
  if (u == v) return {0.0, 0.0};
  const RiemannInvariants vu = riemann_invariants(law, u);
  const RiemannInvariants vv = riemann_invariants(law, v);
  const double g = 0.25 * (law.gamma_exp() + 1.0);
  Eigen::VectorXd x0(2);
  x0 << g * (vv.v2 - vu.v2), g * (vv.v1 - vu.v1);
  auto residual = [&](const Eigen::VectorXd& s) -> std::optional<Eigen::VectorXd> {
    try {
      const GasState m = hugoniot_state(law, {u, Family::first, s[0]});
      const GasState r = hugoniot_state(law, {m, Family::second, s[1]});
      const RiemannInvariants vr = riemann_invariants(law, r);
      Eigen::VectorXd out(2);
      out << vr.v1 - vv.v1, vr.v2 - vv.v2;
      return out;
    } catch (const DomainError&) {
      return std::nullopt;
    }
  };
  const auto res = detail::newton_solve(residual, x0, {}, "shock_decomposition");
  return {res.x[0], res.x[1]};
}

namespace {

struct FamilySums {
  double f1 = 0.0;
  double f2 = 0.0;
  double of(Family k) const { return k == Family::first ? f1 : f2; }
  void add(const WaveFront& f) { (f.family == Family::first ? f1 : f2) += std::abs(f.sigma); }
};

FamilySums totals(const std::vector<WaveFront>& fronts) {
  FamilySums s;
  for (const WaveFront& f : fronts) s.add(f);
  return s;
}

}  // namespace

double phi_distance(const PressureLaw& law, const Snapshot& u, const Snapshot& v, const PhiWeights& w,
                    const FunctionalParams& p) {
  if (u.pipes.size() != v.pipes.size()) throw ContractViolation("phi_distance: pipe count mismatch");
  FunctionalParams flat = p;
  flat.gamma_w = 0.0;
  const double jterm = w.kappa1 * w.kappa2 * (j_gamma(u, flat) + j_gamma(v, flat));
  double phi = 0.0;
  for (std::size_t pi = 0; pi < u.pipes.size(); ++pi) {
    const PipeSnapshot& pu = u.pipes[pi];
    const PipeSnapshot& pv = v.pipes[pi];
    const FamilySums tot_u = totals(pu.fronts);
    const FamilySums tot_v = totals(pv.fronts);
    FamilySums left_u;
    FamilySums left_v;
    std::size_t i = 0;  // cell of u; fronts 0..i-1 are left
    std::size_t j = 0;
    auto xu = [&](std::size_t k) { return k < pu.fronts.size() ? std::clamp(pu.fronts[k].x_ref, pu.x_lo, pu.x_hi) : pu.x_hi; };
    auto xv = [&](std::size_t k) { return k < pv.fronts.size() ? std::clamp(pv.fronts[k].x_ref, pv.x_lo, pv.x_hi) : pv.x_hi; };
    double x = pu.x_lo;
    while (i < pu.cells.size() && j < pv.cells.size()) {
      const double end = std::min(xu(i), xv(j));
      if (end > x) {
        const auto [s1, s2] = shock_decomposition(law, pu.cells[i], pv.cells[j]);
        double integrand = 0.0;
        for (Family k : {Family::first, Family::second}) {
          const double s = k == Family::first ? s1 : s2;
          if (s == 0.0) continue;
          // Waves of the other family approaching x: 2-waves on the left of x for i = 1,
          // 1-waves on the right of x for i = 2.
          double a1 = 0.0;
          if (k == Family::first) {
            a1 = left_u.f2 + left_v.f2;
          } else {
            a1 = (tot_u.f1 - left_u.f1) + (tot_v.f1 - left_v.f1);
          }
          double a2 = 0.0;
          if (s < 0.0) {
            a2 = left_u.of(k) + (tot_v.of(k) - left_v.of(k));
          } else {
            a2 = left_v.of(k) + (tot_u.of(k) - left_u.of(k));
          }
          const double weight = 1.0 + w.kappa1 * (a1 + a2) + jterm;
          integrand += std::abs(s) * weight * (k == Family::first ? w.family1 : 1.0);
        }
        phi += (end - x) * integrand;
        x = end;
      }
      if (xu(i) <= end && i < pu.cells.size()) {
        if (i < pu.fronts.size()) left_u.add(pu.fronts[i]);
        ++i;
      }
      if (xv(j) <= end && j < pv.cells.size()) {
        if (j < pv.fronts.size()) left_v.add(pv.fronts[j]);
        ++j;
      }
    }
  }
  return phi;
}

namespace {

GasState random_in_ball(const GasState& c, double r, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u01(0.0, 1.0);
  const double rad = r * std::sqrt(u01(rng));
  const double ang = 2.0 * std::numbers::pi * u01(rng);
  return {c.rho + rad * std::cos(ang), c.q + rad * std::sin(ang)};
}

double random_strength(double s, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> mag(0.02 * s, s);
  std::bernoulli_distribution sign(0.5);
  const double m = mag(rng);
  return sign(rng) ? m : -m;
}

}  // namespace

CalibrationResult calibrate_constants(const PressureLaw& law, const NetworkConfig& net,
                                      const CalibrationOptions& opts) {
  if (opts.n_samples == 0) throw ConfigError("calibrate.n_samples", "must be positive");
  if (!(opts.radius > 0.0) || opts.radius > net.subsonic_radius) {
    throw ConfigError("calibrate.radius", "must lie in (0, subsonic_radius]");
  }
  validate(law, net);
  std::mt19937_64 rng(opts.seed);
  const std::size_t n = net.n_pipes();
  std::uniform_int_distribution<std::size_t> pipe_dist(0, n - 1);
  const CurveDomain domain = curve_domain(law, net);
  CalibrationResult out;

  // Speed bounds.
  double c_min = std::numeric_limits<double>::infinity();
  double lam_max = 0.0;
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    const GasState u = random_in_ball(net.equilibria[pipe_dist(rng)], opts.radius, rng);
    const Eigenvalues e = eigenvalues(law, u);
    c_min = std::min({c_min, -e.lambda1, e.lambda2});
    lam_max = std::max({lam_max, std::abs(e.lambda1), std::abs(e.lambda2)});
  }
  for (const GasState& u : net.equilibria) {
    const Eigenvalues e = eigenvalues(law, u);
    c_min = std::min({c_min, -e.lambda1, e.lambda2});
    lam_max = std::max({lam_max, std::abs(e.lambda1), std::abs(e.lambda2)});
  }

  // In-pipe interactions.
  double K = 0.0;
  std::size_t used_k = 0;
  std::uniform_int_distribution<int> type_dist(0, 2);
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    const GasState u = random_in_ball(net.equilibria[pipe_dist(rng)], opts.radius, rng);
    const int type = type_dist(rng);
    double a = random_strength(opts.strength, rng);
    double b = random_strength(opts.strength, rng);
    try {
      if (type == 0) {
        // 2-wave on the left of a 1-wave.
        const GasState m = lax_state(law, {u, Family::second, a}, domain);
        const GasState r = lax_state(law, {m, Family::first, b}, domain);
        const ClassicalSolution sol = solve_classical(law, u, r, domain);
        K = std::max(K, (std::abs(sol.sigma1 - b) + std::abs(sol.sigma2 - a)) / std::abs(a * b));
      } else {
        const Family k = type == 1 ? Family::first : Family::second;
        if (a >= 0.0 && b >= 0.0) a = -a;
        const GasState m = lax_state(law, {u, k, a}, domain);
        const GasState r = lax_state(law, {m, k, b}, domain);
        const ClassicalSolution sol = solve_classical(law, u, r, domain);
        const double same = k == Family::first ? sol.sigma1 : sol.sigma2;
        const double cross = k == Family::first ? sol.sigma2 : sol.sigma1;
        K = std::max(K, (std::abs(same - (a + b)) + std::abs(cross)) / std::abs(a * b));
      }
      ++used_k;
    } catch (const Error&) {
    }
  }

  // Junction amplification of an incoming 1-wave.
  double KJ = 0.0;
  std::size_t used_j = 0;
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    std::vector<GasState> states(n);
    for (std::size_t l = 0; l < n; ++l) states[l] = random_in_ball(net.equilibria[l], 0.5 * opts.radius, rng);
    const std::size_t l = pipe_dist(rng);
    const double sm = random_strength(opts.strength, rng);
    try {
      const JunctionSolution base = solve_junction(law, net, states, {.check_entropy = false});
      std::vector<GasState> hit = base.traces;
      hit[l] = lax_state(law, {hit[l], Family::first, sm}, domain);
      const JunctionSolution sol = solve_junction(law, net, hit, {.check_entropy = false});
      double sum = 0.0;
      for (double x : sol.sigmas) sum += std::abs(x);
      KJ = std::max(KJ, sum / std::abs(sm));
      ++used_j;
    } catch (const Error&) {
    }
  }

  // Boundary reflection.
  std::vector<std::size_t> gain_pipes;
  for (std::size_t l = 0; l < n; ++l) {
    if (net.gains[l] > 0.0) gain_pipes.push_back(l);
  }
  double Cb = 0.0;
  std::size_t used_b = 0;
  for (std::size_t s = 0; s < opts.n_samples; ++s) {
    const std::size_t l = gain_pipes.empty() ? pipe_dist(rng) : gain_pipes[rng() % gain_pipes.size()];
    const double k = gain_pipes.empty() ? opts.reference_gain : net.gains[l];
    const GasState& ub = net.equilibria[l];
    const double s2 = random_strength(opts.strength, rng);
    try {
      const GasState um = solve_boundary(law, random_in_ball(ub, 0.5 * opts.radius, rng), ub, k, domain).trace;
      const GasState ul = lax_origin(law, um, Family::second, s2, domain);
      const BoundarySolution sol = solve_boundary(law, ul, ub, k, domain);
      Cb = std::max(Cb, std::abs(sol.sigma1) / (k * std::abs(s2)));
      ++used_b;
    } catch (const Error&) {
    }
  }

  const std::size_t used = std::min({used_k, used_j, used_b});
  if (used < opts.n_samples / 2 || used == 0) {
    throw ConfigError("calibrate.n_samples", "too many samples failed (" + std::to_string(used) + " usable of " +
                                                 std::to_string(opts.n_samples) + "); reduce radius or strength");
  }
  out.raw_K = K;
  out.raw_K_J = KJ;
  out.raw_C_b = Cb;
  out.raw_c_min = c_min;
  out.raw_Lambda_max = lam_max;
  out.used_samples = used;
  out.constants.K = kCalibrationInflation * K;
  out.constants.K_J = std::max(1.0, kCalibrationInflation * KJ);
  out.constants.C_b = kCalibrationInflation * Cb;
  out.constants.c_min = c_min / kCalibrationInflation;
  out.constants.Lambda_max = kCalibrationInflation * lam_max;
  return out;
}

DecayReport verify_decay(const DecayInput& in, const FunctionalParams& p, double envelope_tol) {
  DecayReport r;
  r.tv_constant_bound = 4.0 * p.K_J * std::exp(p.gamma_w);
  for (const auto& [t, dJ] : in.event_jumps) {
    r.max_dJ = std::max(r.max_dJ, dJ);
  }
  if (in.samples.empty()) {
    r.notes.push_back("no samples");
    return r;
  }
  const double J0 = in.samples.front().J;
  const double t0 = in.samples.front().t;
  for (const auto& [t, dJ] : in.event_jumps) {
    if (dJ > dj_tolerance(J0)) ++r.dJ_violations;
  }
  const double rate = p.c_min * p.gamma_w;
  for (const FunctionalSample& s : in.samples) {
    if (J0 > 0.0) {
      const double env = J0 * std::exp(-rate * (s.t - t0));
      r.max_envelope_ratio = std::max(r.max_envelope_ratio, s.J / env);
      if (s.J > env * (1.0 + envelope_tol)) r.envelope_ok = false;
    } else if (s.J > 0.0) {
      r.envelope_ok = false;
    }
  }

  auto slope = [](const std::vector<std::pair<double, double>>& pts) {
    double mt = 0, my = 0;
    for (const auto& [t, y] : pts) {
      mt += t;
      my += y;
    }
    mt /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double num = 0, den = 0;
    for (const auto& [t, y] : pts) {
      num += (t - mt) * (y - my);
      den += (t - mt) * (t - mt);
    }
    return den > 0.0 ? num / den : 0.0;
  };

  std::vector<std::pair<double, double>> logj;
  std::vector<std::pair<double, double>> logtv;
  for (const FunctionalSample& s : in.samples) {
    if (s.J > 0.0) logj.emplace_back(s.t, std::log(s.J));
    if (s.TV > 0.0) logtv.emplace_back(s.t, std::log(s.TV));
  }
  if (logj.size() >= 2) r.fitted_J_rate = -slope(logj);

  const double tv0 = in.samples.front().TV;
  if (tv0 > 0.0) {
    if (logtv.size() >= 2) {
      r.fitted_TV_rate = -slope(logtv);
    } else {
      r.fitted_TV_rate = std::numeric_limits<double>::infinity();
    }
    double c = 0.0;
    for (const FunctionalSample& s : in.samples) {
      if (s.TV > 0.0) c = std::max(c, s.TV * std::exp(r.fitted_TV_rate * (s.t - t0)) / tv0);
    }
    r.fitted_TV_constant = c;
    r.tv_ok = r.fitted_TV_rate > 0.0 && c <= r.tv_constant_bound;
    if (!r.tv_ok && p.gamma_w <= 0.0) {
      r.tv_ok = true;
      r.notes.push_back("TV decay is not claimed for gamma_w = 0; fit reported only");
    }
    if (!r.tv_ok) r.notes.push_back("TV decay fit outside bound");
  } else {
    r.fitted_TV_constant = 0.0;
  }
  if (!r.envelope_ok) r.notes.push_back("J exceeds exponential envelope");
  if (r.dJ_violations > 0) r.notes.push_back("J increased at an event");
  r.passed = r.dJ_violations == 0 && r.envelope_ok && r.tv_ok;
  return r;
}

}  // namespace wft
