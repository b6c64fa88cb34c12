// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "wft/errors.hpp"
#include "wft/exact_riemann.hpp"
#include "wft/front_tracking.hpp"
#include "wft/functionals.hpp"
#include "wft/network.hpp"
#include "wft/scenario_gen.hpp"
#include "wft/stability.hpp"
#include "wft_cli/commands.hpp"
#include "wft_cli/scenario.hpp"

using namespace wft;

namespace {

const PressureLaw kLaw(1.0, 1.4);

struct Verdict {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;
double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double uniform(std::mt19937_64& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// ---- criterion 1 ------------------------------------------------------------

Verdict riemann_oracle() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  const double t_end = 0.5;
  double worst = 0.0;
  std::size_t failures = 0;
  for (int i = 0; i < 50; ++i) {
    const GasState left{uniform(rng, 0.9, 1.1), uniform(rng, -0.1, 0.1)};
    const GasState right{left.rho + uniform(rng, -0.06, 0.06), left.q + uniform(rng, -0.04, 0.04)};
    const ExactRiemann exact(kLaw, left, right);
    const auto edges = exact.edges();
    if (std::max(std::abs(edges.front()), std::abs(edges.back())) * t_end >= 1.0) {
      return {false, fmt::format("scenario {} reaches the boundary", i)};
    }
    for (double eps : {1e-2, 1e-3}) {
      LineConfig cfg;
      cfg.law = kLaw;
      cfg.x_lo = -1.0;
      cfg.x_hi = 1.0;
      cfg.initial = {{0.0, left}, {1.0, right}};
      cfg.epsilon = eps;
      cfg.t_end = t_end;
      cfg.record_events = false;
      const SimulationTrace tr = run(cfg, {.n_samples = 2});
      const double err = l1_error(tr.final_state.pipes[0], exact, t_end, 0.0);
      worst = std::max(worst, err / eps);
      if (err > 5.0 * eps) ++failures;
    }
  }
  const double secs = seconds_since(t0);
  return {failures == 0 && secs < 10.0,
          fmt::format("50 scenarios x 2 eps, max L1/eps {:.3g} (limit 5), {} over, {:.2f} s", worst, failures, secs)};
}

// ---- criteria 2 to 5: seeded compliant runs ------------------------------------

struct Setup {
  std::size_t n = 0;
  double gamma = 0.0;
  CompliantSetup compliant;
};

struct SuiteRun {
  std::size_t setup = 0;
  SimulationTrace trace;
  DecayReport decay;
};

struct Suite {
  std::vector<Setup> setups;
  std::vector<SuiteRun> runs;
  double seconds = 0.0;
  std::string error;
};

const std::size_t kPipes[] = {2, 3, 5};
const double kGammas[] = {0.0, 0.5, 1.0};

Suite run_suite() {
  Suite s;
  const auto t0 = Clock::now();
  try {
    for (double g : kGammas) {
      for (std::size_t n : kPipes) {
        std::mt19937_64 rng(100 + n);
        RandomNetworkOptions no;
        no.n_pipes = n;
        no.min_entropy_margin = 1e-4;
        const NetworkConfig net = random_network(kLaw, no, rng);
        CompliantOptions co;
        co.gamma_w = g;
        co.calibration.n_samples = 1000;
        co.calibration.seed = 7 + n;
        s.setups.push_back({n, g, make_compliant(kLaw, net, co, rng)});
      }
    }
    for (std::size_t i = 0; i < 100; ++i) {
      const std::size_t k = i % s.setups.size();
      const Setup& st = s.setups[k];
      std::mt19937_64 rng(1000 + i);
      RandomDataOptions ro;
      ro.jumps_per_pipe = st.n == 5 ? 2 : 3 + i % 2;
      ro.amplitude = uniform(rng, 5e-4, 2e-3);
      SimConfig cfg;
      cfg.law = kLaw;
      cfg.network = st.compliant.network;
      cfg.functionals = st.compliant.params;
      cfg.epsilon = 5e-3;
      cfg.t_end = 3.0;
      cfg.initial = random_initial(cfg.network, ro, rng);
      SuiteRun r;
      r.setup = k;
      r.trace = run(cfg, {.n_samples = 301});
      r.decay = verify_decay(decay_input(r.trace), cfg.functionals);
      s.runs.push_back(std::move(r));
    }
  } catch (const std::exception& e) {
    s.error = e.what();
  }
  s.seconds = seconds_since(t0);
  return s;
}

Verdict residuals(const Suite& s) {
  if (!s.error.empty()) return {false, "suite aborted: " + s.error};
  ResidualMaxima worst;
  for (const SuiteRun& r : s.runs) {
    worst.mass = std::max(worst.mass, r.trace.residuals.mass);
    worst.pressure = std::max(worst.pressure, r.trace.residuals.pressure);
    worst.boundary = std::max(worst.boundary, r.trace.residuals.boundary);
    worst.entropy = std::max(worst.entropy, r.trace.residuals.entropy);
  }
  const bool ok = s.runs.size() == 100 && worst.mass <= 1e-9 && worst.pressure <= 1e-9 && worst.boundary <= 1e-9 &&
                  worst.entropy <= 1e-9;
  return {ok, fmt::format("{} runs, mass {:.3g}  pressure {:.3g}  feedback {:.3g}  entropy sum {:.3g}", s.runs.size(),
                          worst.mass, worst.pressure, worst.boundary, worst.entropy)};
}

Verdict glimm_monotonicity(const Suite& s) {
  if (!s.error.empty()) return {false, "suite aborted: " + s.error};
  std::size_t violations = 0;
  std::uint64_t events = 0;
  double max_dj = -std::numeric_limits<double>::infinity();
  for (const SuiteRun& r : s.runs) {
    violations += r.decay.dJ_violations;
    events += r.trace.n_events;
    max_dj = std::max(max_dj, r.decay.max_dJ);
  }
  return {violations == 0 && events > 0,
          fmt::format("{} events over gamma_w in {{0, 0.5, 1}}, max dJ {:.3g}, {} violations", events, max_dj,
                      violations)};
}

Verdict exponential_decay(const Suite& s) {
  if (!s.error.empty()) return {false, "suite aborted: " + s.error};
  std::size_t runs = 0;
  std::size_t bad = 0;
  double worst_envelope = 0.0;
  double min_nu = std::numeric_limits<double>::infinity();
  double worst_c = 0.0;
  for (const SuiteRun& r : s.runs) {
    if (s.setups[r.setup].gamma != 1.0) continue;
    ++runs;
    const DecayReport& d = r.decay;
    worst_envelope = std::max(worst_envelope, d.max_envelope_ratio);
    min_nu = std::min(min_nu, d.fitted_TV_rate);
    worst_c = std::max(worst_c, d.fitted_TV_constant / d.tv_constant_bound);
    if (!d.envelope_ok || !(d.fitted_TV_rate > 0.0) || d.fitted_TV_constant > d.tv_constant_bound) ++bad;
  }
  const bool ok = runs > 0 && bad == 0 && s.seconds < 60.0;
  return {ok, fmt::format("{} runs at gamma_w 1, max J/envelope {:.9f}, min nu {:.3g}, max C/bound {:.3g}, "
                          "{} failing, suite {:.1f} s",
                          runs, worst_envelope, min_nu, worst_c, bad, s.seconds)};
}

Verdict interaction_estimates(const Suite& s) {
  if (!s.error.empty()) return {false, "suite aborted: " + s.error};
  std::size_t n_col = 0, n_junc = 0, n_bnd = 0, bad = 0, skipped = 0;
  double r_col = 0.0, r_junc = 0.0, r_bnd = 0.0;
  // Strengths carry absolute roundoff near 1e-15; ratios are reported where the bound is well above it.
  constexpr double kRoundoff = 1e-13;
  auto ratio = [](double lhs, double rhs) { return rhs > 100.0 * kRoundoff ? lhs / rhs : 0.0; };
  for (const SuiteRun& r : s.runs) {
    const FunctionalParams& p = s.setups[r.setup].compliant.params;
    for (const EventRecord& e : r.trace.events) {
      if (e.kind == EventKind::collision) {
        if (e.incoming.size() != 2) {
          ++skipped;
          continue;
        }
        const WaveRecord& a = e.incoming[0];
        const WaveRecord& b = e.incoming[1];
        double in[3] = {0.0, 0.0, 0.0};
        double out[3] = {0.0, 0.0, 0.0};
        for (const WaveRecord& w : e.incoming) in[index(w.family)] += w.sigma;
        for (const WaveRecord& w : e.outgoing) out[index(w.family)] += w.sigma;
        const double lhs = std::abs(out[1] - in[1]) + std::abs(out[2] - in[2]);
        const double rhs = p.K * std::abs(a.sigma * b.sigma);
        ++n_col;
        r_col = std::max(r_col, ratio(lhs, rhs));
        if (lhs > rhs + kRoundoff) ++bad;
      } else if (e.kind == EventKind::junction) {
        double in = 0.0, out = 0.0;
        for (const WaveRecord& w : e.incoming) in += std::abs(w.sigma);
        for (const WaveRecord& w : e.outgoing) out += std::abs(w.sigma);
        if (in == 0.0) {
          ++skipped;
          continue;
        }
        ++n_junc;
        r_junc = std::max(r_junc, ratio(out, p.K_J * in));
        if (out > p.K_J * in + kRoundoff) ++bad;
      } else if (e.kind == EventKind::boundary) {
        double in = 0.0, out = 0.0;
        for (const WaveRecord& w : e.incoming) in += std::abs(w.sigma);
        for (const WaveRecord& w : e.outgoing) out += std::abs(w.sigma);
        const double rhs = p.C_b * e.gain * in;
        ++n_bnd;
        r_bnd = std::max(r_bnd, ratio(out, rhs));
        if (out > rhs + kRoundoff) ++bad;
      }
    }
  }
  return {bad == 0 && n_col > 0 && n_junc > 0 && n_bnd > 0,
          fmt::format("collisions {} (max ratio {:.3g}), junction hits {} ({:.3g}), boundary hits {} ({:.3g}), "
                      "{} violations, {} skipped",
                      n_col, r_col, n_junc, r_junc, n_bnd, r_bnd, bad, skipped)};
}

// ---- criterion 6 ------------------------------------------------------------

Verdict lipschitz(const Suite& s) {
  if (!s.error.empty()) return {false, "suite aborted: " + s.error};
  const auto it = std::find_if(s.setups.begin(), s.setups.end(),
                               [](const Setup& st) { return st.n == 3 && st.gamma == 1.0; });
  const CompliantSetup& cs = it->compliant;
  struct Pair {
    double eps, delta, sup_l1, jump, growth;
  };
  std::vector<Pair> pairs;
  double unit_jump = -std::numeric_limits<double>::infinity();
  double unit_growth = 0.0;
  std::mt19937_64 rng(606);
  for (int j = 0; j < 20; ++j) {
    const double eps = j < 10 ? 1e-2 : 5e-3;
    SimConfig a;
    a.law = kLaw;
    a.network = cs.network;
    a.functionals = cs.params;
    a.epsilon = eps;
    a.t_end = 1.0;
    RandomDataOptions ro;
    ro.amplitude = 3e-3;
    a.initial = random_initial(a.network, ro, rng);
    SimConfig b = a;
    const double target = std::pow(10.0, uniform(rng, -4.0, -2.0));
    const double d = target / static_cast<double>(a.network.n_pipes());
    for (PipeInitial& pipe : b.initial) {
      for (InitialSegment& seg : pipe) seg.state.rho += (rng() & 1u) ? d : -d;
    }
    const CompareResult bal = compare_runs(a, b, {.n_samples = 51, .variant = PhiVariant::junction_balanced});
    pairs.push_back({eps, bal.initial_l1, bal.max_l1, bal.max_phi_jump, bal.max_phi_growth});
    if (j % 5 == 0) {
      const CompareResult unit = compare_runs(a, b, {.n_samples = 51, .variant = PhiVariant::unit});
      unit_jump = std::max(unit_jump, unit.max_phi_jump);
      unit_growth = std::max(unit_growth, unit.max_phi_growth / eps);
    }
  }

  double L = 0.0, L_coarse = 0.0, dmin = 1.0, dmax = 0.0, jump = -std::numeric_limits<double>::infinity();
  double C = 0.0;
  for (const Pair& p : pairs) {
    L = std::max(L, p.sup_l1 / p.delta);
    if (p.eps == 1e-2) {
      L_coarse = std::max(L_coarse, p.sup_l1 / p.delta);
      C = std::max(C, p.growth / p.eps);
    }
    dmin = std::min(dmin, p.delta);
    dmax = std::max(dmax, p.delta);
    jump = std::max(jump, p.jump);
  }
  // L and C are fitted on the coarse half and must hold on the held-out fine half.
  std::size_t held_out_bad = 0;
  for (const Pair& p : pairs) {
    if (p.eps == 1e-2) continue;
    if (p.sup_l1 > L_coarse * p.delta * (1.0 + 1e-9)) ++held_out_bad;
    if (p.growth > C * p.eps + 1e-12) ++held_out_bad;
  }
  const bool ok = dmin >= 1e-4 && dmax <= 1e-2 && jump <= 1e-12 && held_out_bad == 0;
  return {ok, fmt::format("delta in [{:.2g}, {:.2g}], L {:.6g}, max dPhi at events {:.3g}, growth/eps C {:.3g}, "
                          "held-out violations {}; unit weights (not junction balanced): max dPhi {:.3g}, "
                          "growth/eps {:.3g}",
                          dmin, dmax, L, jump, C, held_out_bad, unit_jump, unit_growth)};
}

// ---- criterion 7 ------------------------------------------------------------

Verdict refinement() {
  cli::Scenario s = cli::load_scenario(std::string(WFT_SCENARIO_DIR) + "/multi_jump.json");
  cli::prepare(s);
  const double e0 = s.epsilon();
  const cli::RefineResult r = cli::refine(s, {e0, e0 / 2, e0 / 4, e0 / 8, e0 / 16});
  std::string d;
  for (std::size_t i = 0; i + 1 < r.levels.size(); ++i) d += fmt::format(" {:.3g}", r.levels[i].distance_to_next);
  return {r.monotone && r.observed_order >= 0.8 && r.levels.size() == 5,
          fmt::format("distances{}, order {:.3f}", d, r.observed_order)};
}

// ---- criterion 8 ------------------------------------------------------------

struct Piece {
  double a, b;
  GasState u;
};

double l1_pieces(std::vector<Piece> f, std::vector<Piece> g) {
  auto by_a = [](const Piece& x, const Piece& y) { return x.a < y.a; };
  std::sort(f.begin(), f.end(), by_a);
  std::sort(g.begin(), g.end(), by_a);
  std::vector<double> xs;
  for (const auto* v : {&f, &g}) {
    for (const Piece& p : *v) {
      xs.push_back(p.a);
      xs.push_back(p.b);
    }
  }
  std::sort(xs.begin(), xs.end());
  auto at = [](const std::vector<Piece>& v, double x) {
    auto p = std::upper_bound(v.begin(), v.end(), x, [](double y, const Piece& q) { return y < q.a; });
    return std::prev(p)->u;
  };
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const double w = xs[i + 1] - xs[i];
    if (w <= 0.0) continue;
    const double m = 0.5 * (xs[i] + xs[i + 1]);
    const GasState u = at(f, m);
    const GasState v = at(g, m);
    sum += w * (std::abs(u.rho - v.rho) + std::abs(u.q - v.q));
  }
  return sum;
}

Verdict equilibrium_and_mirror(const Suite& s) {
  if (!s.error.empty()) return {false, "suite aborted: " + s.error};
  // Equilibrium data on the largest network.
  const CompliantSetup& cs = s.setups.back().compliant;
  SimConfig eq;
  eq.law = kLaw;
  eq.network = cs.network;
  eq.functionals = cs.params;
  eq.epsilon = 1e-3;
  eq.t_end = 20.0;
  for (const GasState& u : cs.network.equilibria) eq.initial.push_back({{1.0, u}});
  const SimulationTrace te = run(eq);
  bool still = te.n_events == 0 && te.stats.max_fronts == 0;
  for (std::size_t l = 0; l < te.final_state.pipes.size(); ++l) {
    still = still && te.final_state.pipes[l].cells.size() == 1 &&
            te.final_state.pipes[l].cells[0] == cs.network.equilibria[l];
  }

  // Mirrored 2-pipe junction against the line on [-1, 1].
  std::mt19937_64 rng(88);
  double worst = 0.0;
  std::size_t cases = 0;
  for (int c = 0; c < 6; ++c) {
    const double eps = c % 2 == 0 ? 1e-2 : 1e-3;
    const GasState bar{1.0, 0.05};
    std::vector<double> breaks{0.0};
    for (int k = 0; k < 4; ++k) breaks.push_back(uniform(rng, -0.45, 0.45));
    std::sort(breaks.begin(), breaks.end());
    breaks.push_back(1.0);
    std::vector<Piece> data;
    double lo = -1.0;
    for (double x : breaks) {
      data.push_back({lo, x, {bar.rho + uniform(rng, -0.02, 0.02), bar.q + uniform(rng, -0.02, 0.02)}});
      lo = x;
    }
    // Equilibrium at both ends so the zero-gain boundaries emit nothing.
    data.front().u = bar;
    data.back().u = bar;

    LineConfig line;
    line.law = kLaw;
    line.x_lo = -1.0;
    line.x_hi = 1.0;
    line.epsilon = eps;
    line.t_end = 0.3;
    line.record_events = false;
    for (const Piece& p : data) line.initial.push_back({p.b, p.u});

    SimConfig net;
    net.law = kLaw;
    net.network.nu_norms = {1.0, 1.0};
    net.network.gains = {0.0, 0.0};
    net.network.equilibria = {mirror(bar), bar};
    net.epsilon = eps;
    net.t_end = line.t_end;
    net.track_functionals = false;
    net.record_events = false;
    net.initial.resize(2);
    for (auto p = data.rbegin(); p != data.rend(); ++p) {
      if (p->b <= 0.0) net.initial[0].push_back({-p->a, mirror(p->u)});
    }
    for (const Piece& p : data) {
      if (p.a >= 0.0) net.initial[1].push_back({p.b, p.u});
    }

    const SimulationTrace tl = run(line, {.n_samples = 2});
    const SimulationTrace tn = run(net, {.n_samples = 2});
    std::vector<Piece> f, g;
    for (const Segment& sg : segments(tl.final_state)) f.push_back({sg.x_left, sg.x_right, sg.state});
    for (const Segment& sg : segments(tn.final_state)) {
      if (sg.pipe == 0) {
        g.push_back({-sg.x_right, -sg.x_left, mirror(sg.state)});
      } else {
        g.push_back({sg.x_left, sg.x_right, sg.state});
      }
    }
    worst = std::max(worst, l1_pieces(f, g));
    ++cases;
  }
  return {still && worst <= 1e-9,
          fmt::format("equilibrium: {} events, {} fronts by t = 20; mirror: {} cases, max L1 {:.3g}", te.n_events,
                      te.stats.max_fronts, cases, worst)};
}

bool report(int n, const std::function<Verdict()>& body) {
  Verdict v;
  const auto t0 = Clock::now();
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  std::printf("criterion %d: %s  %s  [%.2f s]\n", n, v.pass ? "PASS" : "FAIL", v.detail.c_str(), seconds_since(t0));
  std::fflush(stdout);
  return v.pass;
}

}  // namespace

int main() {
  bool all = true;
  all &= report(1, riemann_oracle);
  const Suite suite = run_suite();
  all &= report(2, [&] { return residuals(suite); });
  all &= report(3, [&] { return glimm_monotonicity(suite); });
  all &= report(4, [&] { return exponential_decay(suite); });
  all &= report(5, [&] { return interaction_estimates(suite); });
  all &= report(6, [&] { return lipschitz(suite); });
  all &= report(7, refinement);
  all &= report(8, [&] { return equilibrium_and_mirror(suite); });
  return all ? 0 : 1;
}
