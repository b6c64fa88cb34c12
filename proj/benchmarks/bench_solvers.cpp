#include <random>

#include <benchmark/benchmark.h>

#include "wft/front_tracking.hpp"
#include "wft/network.hpp"
#include "wft/riemann.hpp"
#include "wft/scenario_gen.hpp"

using namespace wft;

namespace {

const PressureLaw kLaw(1.0, 1.4);

NetworkConfig star(std::size_t n) {
  RandomNetworkOptions o;
  o.n_pipes = n;
  std::mt19937_64 rng(11);
  return random_network(kLaw, o, rng);
}

void BM_SolveClassical(benchmark::State& state) {
  const GasState l{1.0, 0.02};
  const GasState r{1.03, -0.01};
  for (auto _ : state) benchmark::DoNotOptimize(solve_classical(kLaw, l, r));
}
BENCHMARK(BM_SolveClassical);

void BM_SolveJunction(benchmark::State& state) {
  const NetworkConfig net = star(static_cast<std::size_t>(state.range(0)));
  std::vector<GasState> states = net.equilibria;
  states[0].rho += 0.01;
  for (auto _ : state) benchmark::DoNotOptimize(solve_junction(kLaw, net, states));
}
BENCHMARK(BM_SolveJunction)->Arg(2)->Arg(3)->Arg(5)->Arg(8);

void BM_SolveBoundary(benchmark::State& state) {
  const GasState bar{1.0, 0.05};
  const GasState u{1.01, 0.04};
  for (auto _ : state) benchmark::DoNotOptimize(solve_boundary(kLaw, u, bar, 0.01));
}
BENCHMARK(BM_SolveBoundary);

// Full network run; calibration happens once outside the timed loop.
void BM_Run(benchmark::State& state) {
  std::mt19937_64 rng(5);
  CompliantOptions co;
  co.calibration.n_samples = 300;
  const CompliantSetup setup = make_compliant(kLaw, star(3), co, rng);
  SimConfig cfg;
  cfg.law = kLaw;
  cfg.network = setup.network;
  cfg.functionals = setup.params;
  cfg.epsilon = 1.0 / static_cast<double>(state.range(0));
  cfg.t_end = 1.0;
  RandomDataOptions ro;
  ro.amplitude = 1e-2;
  cfg.initial = random_initial(setup.network, ro, rng);
  std::uint64_t events = 0;
  for (auto _ : state) {
    const SimulationTrace tr = run(cfg);
    events = tr.n_events;
    benchmark::DoNotOptimize(tr.final_state);
  }
  state.counters["events"] = static_cast<double>(events);
}
BENCHMARK(BM_Run)->Arg(100)->Arg(1000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
