#include <doctest.h>

#include <cmath>
#include <random>

#include "wft/errors.hpp"
#include "wft/exact_riemann.hpp"
#include "wft/front_tracking.hpp"
#include "wft/riemann.hpp"
#include "wft/scenario_gen.hpp"

using namespace wft;

namespace {
const PressureLaw kAir(1.0, 1.4);

NetworkConfig rest_network(std::size_t n, double rho = 1.0) {
  NetworkConfig net;
  net.nu_norms.assign(n, 1.0);
  net.gains.assign(n, 0.0);
  net.equilibria.assign(n, GasState{rho, 0.0});
  net.subsonic_radius = 0.1;
  return net;
}

SimConfig at_rest(std::size_t n) {
  SimConfig cfg;
  cfg.law = kAir;
  cfg.network = rest_network(n);
  cfg.initial.assign(n, PipeInitial{{1.0, {1.0, 0.0}}});
  cfg.epsilon = 1e-2;
  cfg.t_end = 1.0;
  return cfg;
}

WaveFront moving(double x, double speed, double t_ref = 0.0) {
  WaveFront f;
  f.x_ref = x;
  f.t_ref = t_ref;
  f.speed = speed;
  return f;
}
}  // namespace

TEST_CASE("fan splitting") {
  const GasState base{1.0, 0.0};
  const double eps = 1e-2;
  SUBCASE("small fan is one front") {
    const auto f = split_rarefaction(kAir, base, Family::second, 0.7 * eps, eps);
    REQUIRE(f.size() == 1);
    CHECK(f[0].sigma == doctest::Approx(0.7 * eps));
  }
  SUBCASE("two equal pieces") {
    const auto f = split_rarefaction(kAir, base, Family::second, 2 * eps, eps);
    REQUIRE(f.size() == 2);
    CHECK(f[0].sigma == doctest::Approx(eps));
    CHECK(f[1].sigma == doctest::Approx(eps));
    const GasState end = rarefaction_state(kAir, {base, Family::second, 2 * eps});
    CHECK(f[1].right.rho == doctest::Approx(end.rho).epsilon(1e-12));
    CHECK(f[1].right.q == doctest::Approx(end.q).epsilon(1e-12));
  }
  SUBCASE("fractional count rounds up") {
    CHECK(fan_pieces(3.5 * eps, eps) == 4);
    CHECK(fan_pieces(eps, eps) == 1);
    const auto f = split_rarefaction(kAir, base, Family::first, 3.5 * eps, eps);
    REQUIRE(f.size() == 4);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
      sum += f[i].sigma;
      CHECK(f[i].sigma <= eps);
      CHECK(f[i].kind == FrontKind::rarefaction);
      if (i > 0) {
        CHECK(f[i].left == f[i - 1].right);
        CHECK(f[i].speed > f[i - 1].speed);
      }
    }
    CHECK(sum == doctest::Approx(3.5 * eps));
    const GasState end = rarefaction_state(kAir, {base, Family::first, 3.5 * eps});
    CHECK(std::abs(f.back().right.rho - end.rho) < 1e-12);
    CHECK(std::abs(f.back().right.q - end.q) < 1e-12);
  }
}

TEST_CASE("event scheduling") {
  SUBCASE("boundary hit") {
    const auto e = next_event({moving(0.5, 1.3)}, 0.0, 0.0, 1.0, 0);
    REQUIRE(e);
    CHECK(e->kind == EventKind::boundary);
    CHECK(e->time == doctest::Approx(0.5 / 1.3));
  }
  SUBCASE("junction hit") {
    const auto e = next_event({moving(0.25, -0.5, 1.0)}, 1.0, 0.0, 1.0, 0);
    REQUIRE(e);
    CHECK(e->kind == EventKind::junction);
    CHECK(e->time == doctest::Approx(1.5));
  }
  SUBCASE("collision") {
    const std::vector<WaveFront> f = {moving(0.2, 2.0), moving(0.8, -2.0)};
    const auto e = next_event(f, 0.0, 0.0, 1.0, 0);
    REQUIRE(e);
    CHECK(e->kind == EventKind::collision);
    CHECK(e->time == doctest::Approx(0.15));
    CHECK(f[0].position(e->time) == doctest::Approx(0.5));
  }
  SUBCASE("stationary front never hits") {
    CHECK_FALSE(next_event({moving(0.5, 0.0)}, 0.0, 0.0, 1.0, 0));
    CHECK_FALSE(next_event({}, 0.0, 0.0, 1.0, 0));
  }
}

TEST_CASE("initial data discretization") {
  SUBCASE("segments are returned unchanged") {
    const PipeInitial in = {{0.3, {1.0, 0.0}}, {0.6, {1.01, 0.0}}, {1.0, {1.0, 0.01}}};
    const PipeInitial out = discretize_initial(in);
    REQUIRE(out.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(out[i].x_right == in[i].x_right);
      CHECK(out[i].state == in[i].state);
    }
  }
  SUBCASE("equal neighbours merge") {
    const PipeInitial out = discretize_initial(PipeInitial{{0.5, {1.0, 0.0}}, {1.0, {1.0, 0.0}}});
    REQUIRE(out.size() == 1);
    CHECK(out[0].x_right == 1.0);
  }
  SUBCASE("constant field") {
    const PipeInitial out = discretize_initial([](double) { return GasState{1.0, 0.02}; }, 1e-3);
    REQUIRE(out.size() == 1);
  }
  SUBCASE("monotone ramp") {
    const double eps = 1e-3;
    auto ramp = [](double x) { return GasState{1.0 + 0.05 * x, 0.0}; };
    const PipeInitial out = discretize_initial(ramp, eps);
    double tv = 0.0;
    double err = 0.0;
    double x = 0.0;
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (i > 0) tv += std::abs(out[i].state.rho - out[i - 1].state.rho);
      // Exact L1 error of a constant against a line on [x, x_right].
      const double a = 1.0 + 0.05 * x - out[i].state.rho;
      const double b = 1.0 + 0.05 * out[i].x_right - out[i].state.rho;
      const double w = out[i].x_right - x;
      err += (a * b >= 0.0) ? 0.5 * w * std::abs(a + b) : 0.5 * w * (a * a + b * b) / (std::abs(a) + std::abs(b));
      x = out[i].x_right;
    }
    CHECK(tv <= 0.05);
    CHECK(tv == doctest::Approx(0.05 * (1.0 - 1.0 / out.size())));
    CHECK(err < eps);
    CHECK(out.back().x_right == 1.0);
  }
}

TEST_CASE("initialization") {
  SUBCASE("equilibrium has no fronts") {
    Simulation sim(at_rest(3));
    CHECK(sim.n_fronts() == 0);
    CHECK_FALSE(sim.peek());
    sim.advance_to(5.0);
    CHECK(sim.event_count() == 0);
    for (const auto& pipe : sim.snapshot().pipes) {
      REQUIRE(pipe.cells.size() == 1);
      CHECK(pipe.cells[0] == GasState{1.0, 0.0});
    }
  }
  SUBCASE("pure 2-shock jump is one front") {
    LineConfig cfg;
    cfg.law = kAir;
    const GasState right = shock_state(kAir, {{1.0, 0.0}, Family::second, -0.02}).state;
    cfg.initial = {{0.5, {1.0, 0.0}}, {1.0, right}};
    Simulation sim(cfg);
    CHECK(sim.n_fronts() == 1);
    const auto snap = sim.snapshot();
    REQUIRE(snap.pipes[0].fronts.size() == 1);
    CHECK(snap.pipes[0].fronts[0].family == Family::second);
    CHECK(snap.pipes[0].fronts[0].kind == FrontKind::shock);
    CHECK(snap.pipes[0].fronts[0].sigma == doctest::Approx(-0.02));
  }
  SUBCASE("3.5 epsilon rarefaction gives four pieces") {
    LineConfig cfg;
    cfg.law = kAir;
    cfg.epsilon = 1e-2;
    const GasState right = rarefaction_state(kAir, {{1.0, 0.0}, Family::second, 3.5e-2});
    cfg.initial = {{0.5, {1.0, 0.0}}, {1.0, right}};
    Simulation sim(cfg);
    const auto snap = sim.snapshot();
    REQUIRE(snap.pipes[0].fronts.size() == 4);
    double sum = 0.0;
    for (const auto& f : snap.pipes[0].fronts) {
      CHECK(f.family == Family::second);
      CHECK(f.sigma <= cfg.epsilon * (1 + 1e-12));
      sum += f.sigma;
    }
    CHECK(sum == doctest::Approx(3.5e-2).epsilon(1e-9));
  }
  SUBCASE("states outside the neighborhood are rejected") {
    SimConfig cfg = at_rest(2);
    cfg.initial[1] = {{1.0, {1.5, 0.0}}};
    CHECK_THROWS_AS(validate(cfg), ConfigError);
  }
}

TEST_CASE("junction hit matches a direct junction solve") {
  SimConfig cfg = at_rest(2);
  cfg.t_end = 2.0;
  // A 1-shock in pipe 0 travelling toward the junction.
  const GasState behind = lax_state(kAir, {{1.0, 0.0}, Family::first, -0.01});
  cfg.initial[0] = {{0.5, {1.0, 0.0}}, {1.0, behind}};
  cfg.network.gains = {0.0, 0.0};
  Simulation sim(cfg);
  // The boundary of pipe 0 also reflects at t = 0; the shock reaches the junction first.
  const auto e = sim.peek();
  REQUIRE(e);
  CHECK(e->kind == EventKind::junction);
  const EventRecord rec = sim.step();
  REQUIRE(rec.incoming.size() == 1);
  const JunctionSolution direct = solve_junction(kAir, cfg.network, {behind, {1.0, 0.0}});
  REQUIRE(rec.outgoing.size() == 2);
  double out = 0.0;
  for (const WaveRecord& w : rec.outgoing) {
    CHECK(w.family == Family::second);
    CHECK(w.sigma == doctest::Approx(direct.sigmas[w.pipe]).epsilon(1e-10));
    out += std::abs(w.sigma);
  }
  // Equal sections: the junction is transparent, so the whole wave passes into pipe 1.
  CHECK(out <= 2.0 * std::abs(rec.incoming[0].sigma));
  CHECK(sim.residuals().mass <= 1e-12);
  CHECK(sim.residuals().pressure <= 1e-12);
}

TEST_CASE("zero gain boundary absorbs") {
  SimConfig cfg = at_rest(2);
  cfg.t_end = 2.0;
  const GasState left = lax_origin(kAir, {1.0, 0.0}, Family::second, -0.01);
  cfg.initial[0] = {{0.5, left}, {1.0, {1.0, 0.0}}};
  // A pure 2-shock toward the boundary of pipe 0; keep pipe 1 at rest.
  cfg.network.equilibria = {{1.0, 0.0}, {1.0, 0.0}};
  Simulation sim(cfg);
  // The t = 0 junction and boundary problems are trivial here.
  REQUIRE(sim.n_fronts() >= 1);
  bool seen = false;
  while (auto e = sim.peek()) {
    if (e->time > cfg.t_end) break;
    const EventRecord& rec = sim.step();
    if (rec.kind == EventKind::boundary && rec.pipe == 0 && !seen) {
      seen = true;
      REQUIRE(rec.incoming.size() == 1);
      const double s2 = std::abs(rec.incoming[0].sigma);
      double s1 = 0.0;
      for (const auto& w : rec.outgoing) s1 += std::abs(w.sigma);
      CHECK(s1 <= s2 * s2);
    }
  }
  CHECK(seen);
  CHECK(sim.residuals().boundary <= 1e-12);
}

TEST_CASE("single Riemann datum matches the exact solution") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> d(-0.02, 0.02);
  for (double eps : {1e-2, 1e-3}) {
    for (int trial = 0; trial < 5; ++trial) {
      const GasState ul{1.0 + d(rng), d(rng)};
      const GasState ur{1.0 + d(rng), d(rng)};
      LineConfig cfg;
      cfg.law = kAir;
      cfg.x_lo = -1.0;
      cfg.x_hi = 1.0;
      cfg.initial = {{0.0, ul}, {1.0, ur}};
      cfg.epsilon = eps;
      cfg.t_end = 0.5;
      const SimulationTrace tr = run(cfg);
      REQUIRE(tr.final_state.pipes.size() == 1);
      const double err = l1_error(tr.final_state.pipes[0], ExactRiemann(kAir, ul, ur), cfg.t_end, 0.0);
      CHECK(err <= 5 * eps);
      CHECK(err <= 1.5 * eps * std::abs(ul.rho - ur.rho) + 1.5 * eps * std::abs(ul.q - ur.q) + 1e-12);
    }
  }
}

TEST_CASE("l1_error agrees with a fine midpoint sum") {
  const GasState ul{1.04, 0.03};
  const GasState ur{0.97, 0.06};
  const ExactRiemann exact(kAir, ul, ur);
  LineConfig cfg;
  cfg.law = kAir;
  cfg.x_lo = -1.0;
  cfg.x_hi = 1.0;
  cfg.initial = {{0.0, ul}, {1.0, ur}};
  cfg.epsilon = 4e-3;
  cfg.t_end = 0.4;
  const SimulationTrace tr = run(cfg);
  const PipeSnapshot& pipe = tr.final_state.pipes[0];
  const int n = 400000;
  const double h = 2.0 / n;
  double brute = 0.0;
  std::size_t cell = 0;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + (i + 0.5) * h;
    while (cell < pipe.fronts.size() && pipe.fronts[cell].x_ref <= x) ++cell;
    const GasState e = exact.sample(x / cfg.t_end);
    brute += h * (std::abs(pipe.cells[cell].rho - e.rho) + std::abs(pipe.cells[cell].q - e.q));
  }
  CHECK(l1_error(pipe, exact, cfg.t_end, 0.0) == doctest::Approx(brute).epsilon(1e-4));
}

TEST_CASE("randomized runs keep coupling residuals and monotone functional") {
  std::mt19937_64 rng(4);
  for (std::size_t n : {2u, 3u}) {
    RandomNetworkOptions ro;
    ro.n_pipes = n;
    const NetworkConfig base = random_network(kAir, ro, rng);
    CompliantOptions co;
    co.calibration.n_samples = 300;
    co.gamma_w = 0.5;
    const CompliantSetup setup = make_compliant(kAir, base, co, rng);
    SimConfig cfg;
    cfg.law = kAir;
    cfg.network = setup.network;
    cfg.functionals = setup.params;
    cfg.epsilon = 2e-3;
    cfg.t_end = 1.5;
    cfg.full_event_rows = false;
    cfg.initial = random_initial(cfg.network, {}, rng);
    const SimulationTrace tr = run(cfg);
    CHECK(tr.n_events > 0);
    CHECK(tr.residuals.mass <= 1e-9);
    CHECK(tr.residuals.pressure <= 1e-9);
    CHECK(tr.residuals.boundary <= 1e-9);
    CHECK(tr.residuals.entropy <= 1e-9);
    std::size_t bad = 0;
    for (const auto& e : tr.events) bad += e.dJ > dj_tolerance(tr.initial.J) ? 1 : 0;
    CHECK(bad == 0);
    // Fronts stay consistent with their states.
    for (const auto& pipe : tr.final_state.pipes) {
      for (std::size_t i = 0; i < pipe.fronts.size(); ++i) {
        const WaveFront& f = pipe.fronts[i];
        CHECK(f.left == pipe.cells[i]);
        CHECK(f.right == pipe.cells[i + 1]);
        if (i > 0) CHECK(pipe.fronts[i - 1].x_ref <= f.x_ref);
      }
    }
  }
}

TEST_CASE("runs are deterministic") {
  std::mt19937_64 rng(8);
  const NetworkConfig net = random_network(kAir, {}, rng);
  SimConfig cfg;
  cfg.law = kAir;
  cfg.network = net;
  cfg.epsilon = 5e-3;
  cfg.t_end = 1.0;
  cfg.initial = random_initial(net, {}, rng);
  const auto a = run(cfg);
  const auto b = run(cfg);
  REQUIRE(a.events.size() == b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    CHECK(a.events[i].t == b.events[i].t);
    CHECK(a.events[i].dJ == b.events[i].dJ);
  }
  CHECK(l1_distance(a.final_state, b.final_state) == 0.0);
}

TEST_CASE("interaction cap") {
  std::mt19937_64 rng(8);
  const NetworkConfig net = random_network(kAir, {}, rng);
  SimConfig cfg;
  cfg.law = kAir;
  cfg.network = net;
  cfg.initial = random_initial(net, {}, rng);
  cfg.interaction_cap = 3;
  CHECK_THROWS_AS(run(cfg), InteractionCapExceeded);
}

TEST_CASE("snapshot rows are ordered") {
  std::mt19937_64 rng(2);
  const NetworkConfig net = random_network(kAir, {}, rng);
  SimConfig cfg;
  cfg.law = kAir;
  cfg.network = net;
  cfg.t_end = 0.3;
  cfg.initial = random_initial(net, {}, rng);
  RunOptions opts;
  opts.snapshot_times = {0.0, 0.3};
  const auto tr = run(cfg, opts);
  REQUIRE(tr.snapshots.size() == 2);
  for (const auto& snap : tr.snapshots) {
    const auto rows = segments(snap);
    REQUIRE_FALSE(rows.empty());
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const bool ordered = rows[i - 1].pipe < rows[i].pipe ||
                           (rows[i - 1].pipe == rows[i].pipe && rows[i - 1].x_left < rows[i].x_left);
      CHECK(ordered);
      if (rows[i - 1].pipe == rows[i].pipe) CHECK(rows[i - 1].x_right == rows[i].x_left);
    }
    CHECK(rows.front().x_left == 0.0);
    CHECK(rows.back().x_right == 1.0);
  }
}

TEST_CASE("L1 continuity in time") {
  std::mt19937_64 rng(12);
  const NetworkConfig net = random_network(kAir, {}, rng);
  SimConfig cfg;
  cfg.law = kAir;
  cfg.network = net;
  cfg.t_end = 1.0;
  cfg.initial = random_initial(net, {}, rng);
  Simulation sim(cfg);
  Snapshot prev = sim.snapshot();
  for (int i = 1; i <= 20; ++i) {
    sim.advance_to(0.05 * i);
    const Snapshot cur = sim.snapshot();
    const double lam = 2.0;
    CHECK(l1_distance(prev, cur) <= lam * 0.05 * (total_variation(prev).tv_states + 1e-12));
    prev = cur;
  }
}
