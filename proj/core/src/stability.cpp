#include "wft/stability.hpp"

#include <algorithm>
#include <cmath>

#include "wft/errors.hpp"

namespace wft {

namespace {

bool same_network(const SimConfig& a, const SimConfig& b) {
  if (a.law.kappa() != b.law.kappa() || a.law.gamma_exp() != b.law.gamma_exp()) return false;
  const NetworkConfig& x = a.network;
  const NetworkConfig& y = b.network;
  return x.nu_norms == y.nu_norms && x.gains == y.gains && x.equilibria == y.equilibria;
}

}  // namespace

CompareResult compare_runs(const SimConfig& a, const SimConfig& b, const CompareOptions& opts) {
  if (!same_network(a, b)) throw ConfigError("network", "compared scenarios must share law and network");
  if (a.t_end != b.t_end) throw ConfigError("run.t_end", "compared scenarios must share t_end");
  SimConfig ca = a;
  SimConfig cb = b;
  for (SimConfig* c : {&ca, &cb}) {
    c->track_functionals = false;
    c->full_event_rows = false;
    c->record_events = false;
  }
  Simulation ua(ca);
  Simulation ub(cb);
  const FunctionalParams& p = a.functionals;
  CompareResult out;
  out.weights = phi_weights(ua.snapshot(), ub.snapshot(), p, opts.variant);
  auto phi = [&](const Snapshot& x, const Snapshot& y) { return phi_distance(a.law, x, y, out.weights, p); };
  out.initial_l1 = l1_distance(ua.snapshot(), ub.snapshot());

  const std::size_t n = std::max<std::size_t>(opts.n_samples, 2);
  std::vector<double> grid;
  for (std::size_t i = 0; i < n; ++i) grid.push_back(a.t_end * static_cast<double>(i) / static_cast<double>(n - 1));

  double last_t = 0.0;
  double last_phi = phi(ua.snapshot(), ub.snapshot());
  std::size_t gi = 0;
  for (;;) {
    const auto ea = ua.peek();
    const auto eb = ub.peek();
    double te = std::numeric_limits<double>::infinity();
    if (ea) te = std::min(te, ea->time);
    if (eb) te = std::min(te, eb->time);
    // Grid samples strictly before the next event.
    while (gi < grid.size() && grid[gi] < te) {
      const Snapshot sa = ua.snapshot(grid[gi]);
      const Snapshot sb = ub.snapshot(grid[gi]);
      const CompareSample s{grid[gi], phi(sa, sb), l1_distance(sa, sb)};
      out.max_l1 = std::max(out.max_l1, s.l1);
      out.samples.push_back(s);
      ++gi;
    }
    if (te > a.t_end) break;
    if (opts.phi_at_events) {
      const Snapshot sa = ua.snapshot(te);
      const Snapshot sb = ub.snapshot(te);
      const double before = phi(sa, sb);
      out.max_l1 = std::max(out.max_l1, l1_distance(sa, sb));
      if (te > last_t) out.max_phi_growth = std::max(out.max_phi_growth, (before - last_phi) / (te - last_t));
      while (ua.peek() && ua.peek()->time <= te) ua.step();
      while (ub.peek() && ub.peek()->time <= te) ub.step();
      const double after = phi(ua.snapshot(te), ub.snapshot(te));
      out.max_phi_jump = std::max(out.max_phi_jump, after - before);
      last_t = te;
      last_phi = after;
    } else {
      ua.advance_to(te);
      ub.advance_to(te);
    }
  }
  out.events_a = ua.event_count();
  out.events_b = ub.event_count();
  return out;
}

}  // namespace wft
