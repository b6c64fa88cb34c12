#include "wft/front_tracking.hpp"

#include <algorithm>
#include <cmath>
#include <tuple>

#include <fmt/format.h>

#include "wft/errors.hpp"
#include "wft/riemann.hpp"

namespace wft {

std::string to_string(EventKind k) {
  switch (k) {
    case EventKind::collision:
      return "collision";
    case EventKind::junction:
      return "junction";
    case EventKind::boundary:
      return "boundary";
    case EventKind::exit:
      return "exit";
  }
  return "unknown";
}

std::size_t fan_pieces(double sigma, double epsilon) {
  // The 1e-12 slack keeps sigma = m * epsilon from rounding up to m + 1 pieces.
  return static_cast<std::size_t>(std::max(1.0, std::ceil(sigma / epsilon * (1.0 - 1e-12))));
}

double front_speed(const PressureLaw& law, const GasState& left, const GasState& right, Family family,
                   double sigma) {
  if (sigma < 0.0) return shock_state(law, {left, family, sigma}).speed;
  return 0.5 * (characteristic_speed(law, left, family) + characteristic_speed(law, right, family));
}

std::vector<WaveFront> split_rarefaction(const PressureLaw& law, const GasState& base, Family family, double sigma,
                                         double epsilon, const CurveDomain& domain) {
  if (!(sigma > 0.0)) throw ContractViolation("split_rarefaction: sigma must be positive");
  if (!(epsilon > 0.0)) throw ContractViolation("split_rarefaction: epsilon must be positive");
  const std::size_t m = fan_pieces(sigma, epsilon);
  const GasState end = rarefaction_state(law, {base, family, sigma}, domain);
  std::vector<WaveFront> out;
  out.reserve(m);
  GasState left = base;
  for (std::size_t j = 0; j < m; ++j) {
    WaveFront f;
    f.family = family;
    f.sigma = sigma / static_cast<double>(m);
    f.kind = FrontKind::rarefaction;
    f.left = left;
    f.right = j + 1 == m ? end : rarefaction_state(law, {left, family, f.sigma}, domain);
    f.speed = front_speed(law, f.left, f.right, family, f.sigma);
    out.push_back(f);
    left = f.right;
  }
  return out;
}

std::optional<Event> next_event(const std::vector<WaveFront>& fronts, double now, double x_lo, double x_hi,
                                int pipe) {
  std::optional<Event> best;
  auto offer = [&](double dt, EventKind kind, std::size_t index, std::uint64_t min_id) {
    Event e{now + std::max(0.0, dt), kind, pipe, index, min_id};
    if (!best || std::tie(e.time, e.min_id) < std::tie(best->time, best->min_id)) best = e;
  };
  if (fronts.empty()) return best;
  const WaveFront& first = fronts.front();
  if (first.speed < 0.0) {
    offer((first.position(now) - x_lo) / -first.speed, EventKind::junction, 0, first.id);
  }
  const WaveFront& last = fronts.back();
  if (last.speed > 0.0) {
    offer((x_hi - last.position(now)) / last.speed, EventKind::boundary, fronts.size() - 1, last.id);
  }
  for (std::size_t i = 0; i + 1 < fronts.size(); ++i) {
    const WaveFront& a = fronts[i];
    const WaveFront& b = fronts[i + 1];
    if (a.speed > b.speed) {
      offer((b.position(now) - a.position(now)) / (a.speed - b.speed), EventKind::collision, i,
            std::min(a.id, b.id));
    }
  }
  return best;
}

PipeInitial discretize_initial(const PipeInitial& segments) {
  PipeInitial out;
  for (const InitialSegment& s : segments) {
    if (!out.empty() && out.back().state == s.state) {
      out.back().x_right = s.x_right;
    } else {
      out.push_back(s);
    }
  }
  return out;
}

PipeInitial discretize_initial(const std::function<GasState(double)>& field, double epsilon, std::size_t max_cells) {
  if (!(epsilon > 0.0)) throw ContractViolation("discretize_initial: epsilon must be positive");
  auto sample = [&](std::size_t m) {
    PipeInitial p(m);
    for (std::size_t i = 0; i < m; ++i) {
      p[i].x_right = static_cast<double>(i + 1) / static_cast<double>(m);
      p[i].state = field((static_cast<double>(i) + 0.5) / static_cast<double>(m));
    }
    p.back().x_right = 1.0;
    return p;
  };
  auto l1 = [](const PipeInitial& coarse, const PipeInitial& fine) {
    double d = 0.0;
    const double h = 1.0 / static_cast<double>(fine.size());
    for (std::size_t i = 0; i < fine.size(); ++i) {
      const GasState& c = coarse[i / 2].state;
      d += h * (std::abs(c.rho - fine[i].state.rho) + std::abs(c.q - fine[i].state.q));
    }
    return d;
  };
  std::size_t m = 16;
  PipeInitial cur = sample(m);
  while (2 * m <= max_cells) {
    PipeInitial finer = sample(2 * m);
    // For BV data the error of the coarse grid is about twice its distance to the finer one.
    if (2.0 * l1(cur, finer) < epsilon) return discretize_initial(cur);
    cur = std::move(finer);
    m *= 2;
  }
  throw ContractViolation("discretize_initial: L1 budget not reached within max_cells");
}

namespace {

void validate_pipe_initial(const PipeInitial& init, double x_lo, double x_hi, const std::string& path) {
  if (init.empty()) throw ConfigError(path, "at least one segment required");
  double prev = x_lo;
  for (std::size_t i = 0; i < init.size(); ++i) {
    const std::string at = path + "[" + std::to_string(i) + "]";
    if (!(init[i].x_right > prev)) throw ConfigError(at + ".x_right", "breakpoints must be strictly increasing");
    if (!(init[i].state.rho > 0.0) || !std::isfinite(init[i].state.rho) || !std::isfinite(init[i].state.q)) {
      throw ConfigError(at, "invalid state");
    }
    prev = init[i].x_right;
  }
  if (init.back().x_right != x_hi) {
    throw ConfigError(path + "[" + std::to_string(init.size() - 1) + "].x_right", "last segment must end at the pipe end");
  }
}

}  // namespace

void validate(const SimConfig& cfg) {
  validate(cfg.law, cfg.network);
  if (!(cfg.epsilon > 0.0)) throw ConfigError("run.epsilon", "must be positive");
  if (!(cfg.t_end > 0.0)) throw ConfigError("run.t_end", "must be positive");
  if (cfg.interaction_cap == 0) throw ConfigError("run.interaction_cap", "must be positive");
  if (cfg.initial.size() != cfg.network.n_pipes()) {
    throw ConfigError("initial", "expected one segment list per pipe");
  }
  for (std::size_t p = 0; p < cfg.initial.size(); ++p) {
    const std::string path = "initial[" + std::to_string(p) + "]";
    validate_pipe_initial(cfg.initial[p], 0.0, 1.0, path);
    const GasState& eq = cfg.network.equilibria[p];
    for (std::size_t i = 0; i < cfg.initial[p].size(); ++i) {
      const GasState& u = cfg.initial[p][i].state;
      if (std::hypot(u.rho - eq.rho, u.q - eq.q) > cfg.network.subsonic_radius) {
        throw ConfigError(path + "[" + std::to_string(i) + "]", "state outside the subsonic_radius ball of the equilibrium");
      }
    }
  }
}

Simulation::Simulation(const SimConfig& cfg)
    : law_(cfg.law),
      network_(cfg.network),
      has_junction_(true),
      epsilon_(cfg.epsilon),
      cap_(cfg.interaction_cap),
      params_(cfg.functionals),
      track_(cfg.track_functionals),
      full_rows_(cfg.track_functionals && cfg.full_event_rows),
      record_(cfg.record_events),
      check_entropy_(cfg.check_entropy) {
  validate(cfg);
  domain_ = curve_domain(law_, network_);
  pipes_.resize(network_.n_pipes());
  for (std::size_t p = 0; p < pipes_.size(); ++p) {
    pipes_[p].gain = network_.gains[p];
    pipes_[p].equilibrium = network_.equilibria[p];
  }
  initialize(cfg.initial);
}

Simulation::Simulation(const LineConfig& cfg)
    : law_(cfg.law),
      has_junction_(false),
      epsilon_(cfg.epsilon),
      cap_(cfg.interaction_cap),
      params_(cfg.functionals),
      track_(cfg.track_functionals),
      full_rows_(cfg.track_functionals && cfg.full_event_rows),
      record_(cfg.record_events),
      check_entropy_(false) {
  if (!(cfg.x_hi > cfg.x_lo)) throw ConfigError("line.x_hi", "must exceed x_lo");
  if (!(cfg.epsilon > 0.0)) throw ConfigError("run.epsilon", "must be positive");
  if (cfg.interaction_cap == 0) throw ConfigError("run.interaction_cap", "must be positive");
  validate_pipe_initial(cfg.initial, cfg.x_lo, cfg.x_hi, "initial[0]");
  Pipe pipe;
  pipe.x_lo = cfg.x_lo;
  pipe.x_hi = cfg.x_hi;
  pipe.left = End::open;
  pipe.right = End::open;
  pipes_.push_back(pipe);
  initialize({cfg.initial});
}

std::vector<WaveFront> Simulation::make_wave(int pipe, double x, const GasState& left, const GasState& right,
                                             Family family, double sigma, bool split,
                                             std::vector<GasState>& chain) {
  std::vector<WaveFront> out;
  chain.clear();
  if (sigma > 0.0 && split) {
    out = split_rarefaction(law_, left, family, sigma, epsilon_, domain_);
    out.back().right = right;
    out.back().speed = front_speed(law_, out.back().left, right, family, out.back().sigma);
  } else {
    WaveFront f;
    f.family = family;
    f.sigma = sigma;
    f.kind = sigma < 0.0 ? FrontKind::shock : FrontKind::rarefaction;
    f.left = left;
    f.right = right;
    f.speed = front_speed(law_, left, right, family, sigma);
    out.push_back(f);
    if (sigma > 0.0) {
      stats_.max_piece = std::max(stats_.max_piece, sigma);
      if (sigma > 2.0 * epsilon_) ++stats_.oversize_pieces;
    }
  }
  for (WaveFront& f : out) {
    f.id = next_id_++;
    f.pipe = pipe;
    f.x_ref = x;
    f.t_ref = now_;
    chain.push_back(f.right);
  }
  return out;
}

void Simulation::initialize(const std::vector<PipeInitial>& initial) {
  std::vector<GasState> chain;
  for (std::size_t p = 0; p < pipes_.size(); ++p) {
    Pipe& pipe = pipes_[p];
    const PipeInitial init = discretize_initial(initial[p]);
    pipe.cells.push_back(init.front().state);
    for (std::size_t i = 0; i + 1 < init.size(); ++i) {
      const GasState& ul = init[i].state;
      const GasState& ur = init[i + 1].state;
      const double x = init[i].x_right;
      ClassicalSolution sol;
      try {
        sol = solve_classical(law_, ul, ur, domain_);
      } catch (const Error& e) {
        throw SolverError(fmt::format("initial jump in pipe {} at x={}: {}", p, x, e.what()));
      }
      GasState left = ul;
      if (std::abs(sol.sigma1) > kMinStrength) {
        const GasState mid = std::abs(sol.sigma2) > kMinStrength ? sol.middle : ur;
        auto w = make_wave(static_cast<int>(p), x, ul, mid, Family::first, sol.sigma1, true, chain);
        pipe.fronts.insert(pipe.fronts.end(), w.begin(), w.end());
        pipe.cells.insert(pipe.cells.end(), chain.begin(), chain.end());
        left = mid;
      }
      if (std::abs(sol.sigma2) > kMinStrength) {
        auto w = make_wave(static_cast<int>(p), x, left, ur, Family::second, sol.sigma2, true, chain);
        pipe.fronts.insert(pipe.fronts.end(), w.begin(), w.end());
        pipe.cells.insert(pipe.cells.end(), chain.begin(), chain.end());
      }
      if (pipe.cells.back() != ur) {
        // Both waves negligible: keep a single state.
        pipe.cells.back() = ur;
      }
    }
  }
  if (has_junction_) {
    std::vector<GasState> traces;
    for (const Pipe& pipe : pipes_) traces.push_back(pipe.cells.front());
    try {
      junction_solve(traces, nullptr);
    } catch (const Error& e) {
      throw SolverError(fmt::format("initial junction problem: {}", e.what()));
    }
    for (std::size_t p = 0; p < pipes_.size(); ++p) {
      try {
        boundary_solve(p, nullptr);
      } catch (const Error& e) {
        throw SolverError(fmt::format("initial boundary problem in pipe {}: {}", p, e.what()));
      }
    }
    check_residuals();
  }
  refresh_all();
  note_fronts();
}

void Simulation::junction_solve(const std::vector<GasState>& traces, EventRecord* rec) {
  const JunctionSolution sol = solve_junction(law_, network_, traces, {.check_entropy = check_entropy_});
  std::vector<GasState> chain;
  for (std::size_t p = 0; p < pipes_.size(); ++p) {
    Pipe& pipe = pipes_[p];
    const double s = sol.sigmas[p];
    if (rec) rec->outgoing.push_back({Family::second, s, static_cast<int>(p)});
    if (std::abs(s) <= kMinStrength) continue;
    auto w = make_wave(static_cast<int>(p), pipe.x_lo, sol.traces[p], pipe.cells.front(), Family::second, s, true,
                       chain);
    // chain holds right states; the last equals the old trace.
    chain.pop_back();
    pipe.cells.insert(pipe.cells.begin(), chain.begin(), chain.end());
    pipe.cells.insert(pipe.cells.begin(), sol.traces[p]);
    pipe.fronts.insert(pipe.fronts.begin(), w.begin(), w.end());
  }
}

void Simulation::boundary_solve(std::size_t p, EventRecord* rec) {
  Pipe& pipe = pipes_[p];
  const GasState ul = pipe.cells.back();
  const BoundarySolution sol = solve_boundary(law_, ul, pipe.equilibrium, pipe.gain, domain_);
  if (rec) {
    rec->outgoing.push_back({Family::first, sol.sigma1, static_cast<int>(p)});
    rec->gain = pipe.gain;
  }
  if (std::abs(sol.sigma1) <= kMinStrength) return;
  std::vector<GasState> chain;
  auto w = make_wave(static_cast<int>(p), pipe.x_hi, ul, sol.trace, Family::first, sol.sigma1, true, chain);
  pipe.cells.insert(pipe.cells.end(), chain.begin(), chain.end());
  pipe.fronts.insert(pipe.fronts.end(), w.begin(), w.end());
}

void Simulation::refresh(std::size_t p) {
  Pipe& pipe = pipes_[p];
  pipe.next = next_event(pipe.fronts, now_, pipe.x_lo, pipe.x_hi, static_cast<int>(p));
}

void Simulation::refresh_all() {
  for (std::size_t p = 0; p < pipes_.size(); ++p) refresh(p);
}

std::optional<Event> Simulation::peek() const {
  std::optional<Event> best;
  for (const Pipe& pipe : pipes_) {
    if (!pipe.next) continue;
    const Event& e = *pipe.next;
    if (!best || std::tie(e.time, e.pipe, e.min_id) < std::tie(best->time, best->pipe, best->min_id)) best = e;
  }
  return best;
}

std::size_t Simulation::n_fronts() const {
  std::size_t n = 0;
  for (const Pipe& p : pipes_) n += p.fronts.size();
  return n;
}

void Simulation::note_fronts() { stats_.max_fronts = std::max(stats_.max_fronts, n_fronts()); }

PipeSnapshot Simulation::pipe_snapshot(std::size_t p, double t) const {
  const Pipe& pipe = pipes_[p];
  PipeSnapshot s;
  s.x_lo = pipe.x_lo;
  s.x_hi = pipe.x_hi;
  s.cells = pipe.cells;
  s.fronts = pipe.fronts;
  for (WaveFront& f : s.fronts) {
    f.x_ref = std::clamp(f.position(t), pipe.x_lo, pipe.x_hi);
    f.t_ref = t;
  }
  return s;
}

Snapshot Simulation::snapshot() const { return snapshot(now_); }

Snapshot Simulation::snapshot(double t) const {
  if (t < now_) throw ContractViolation("snapshot: time before the simulation clock");
  Snapshot s;
  s.t = t;
  for (std::size_t p = 0; p < pipes_.size(); ++p) s.pipes.push_back(pipe_snapshot(p, t));
  return s;
}

FunctionalSample Simulation::functionals() const {
  FunctionalSample s = sample_functionals(snapshot(), params_);
  s.t = now_;
  return s;
}

void Simulation::check_residuals() {
  if (!has_junction_) return;
  std::vector<GasState> traces;
  for (const Pipe& pipe : pipes_) traces.push_back(pipe.cells.front());
  residuals_.mass = std::max(residuals_.mass, std::abs(mass_residual(network_, traces)));
  residuals_.pressure = std::max(residuals_.pressure, pressure_mismatch(law_, traces));
  residuals_.entropy = std::max(residuals_.entropy, entropy_sum(law_, network_, traces));
  for (const Pipe& pipe : pipes_) {
    residuals_.boundary =
        std::max(residuals_.boundary, std::abs(boundary_residual(law_, pipe.cells.back(), pipe.equilibrium, pipe.gain)));
  }
}

const EventRecord& Simulation::step() {
  const std::optional<Event> ev = peek();
  if (!ev) throw ContractViolation("Simulation::step: no pending event");
  if (event_count_ >= cap_) {
    throw InteractionCapExceeded(fmt::format("interaction cap {} reached at t={:.17g}", cap_, now_));
  }
  now_ = std::max(now_, ev->time);
  const std::size_t p = static_cast<std::size_t>(ev->pipe);
  Pipe& pipe = pipes_[p];

  EventRecord rec;
  rec.index = event_count_;
  rec.t = now_;
  rec.kind = ev->kind;
  rec.pipe = ev->pipe;
  // Only the hit pipe changes, except at the junction where every pipe emits.
  const bool touches_all = ev->kind == EventKind::junction && pipe.left == End::junction;
  auto local_j = [&]() {
    double j = 0.0;
    for (std::size_t q = 0; q < pipes_.size(); ++q) {
      if (touches_all || q == p) j += j_gamma(pipes_[q].fronts, now_, params_);
    }
    return j;
  };
  double j_before = 0.0;
  if (track_) j_before = local_j();
  if (full_rows_) rec.before = functionals();

  std::vector<GasState> chain;
  bool all_pipes = false;
  switch (ev->kind) {
    case EventKind::collision: {
      const std::size_t i = ev->index;
      const WaveFront a = pipe.fronts[i];
      const WaveFront b = pipe.fronts[i + 1];
      const double x = std::clamp(0.5 * (a.position(now_) + b.position(now_)), pipe.x_lo, pipe.x_hi);
      rec.x = x;
      rec.incoming = {{a.family, a.sigma, ev->pipe}, {b.family, b.sigma, ev->pipe}};
      const GasState ul = pipe.cells[i];
      const GasState ur = pipe.cells[i + 2];
      ClassicalSolution sol;
      try {
        sol = solve_classical(law_, ul, ur, domain_);
      } catch (const Error& e) {
        throw SolverError(fmt::format("collision in pipe {} at t={:.17g}, x={:.17g}: {}", p, now_, x, e.what()));
      }
      rec.outgoing = {{Family::first, sol.sigma1, ev->pipe}, {Family::second, sol.sigma2, ev->pipe}};
      std::vector<WaveFront> out;
      std::vector<GasState> states;
      const bool w1 = std::abs(sol.sigma1) > kMinStrength;
      const bool w2 = std::abs(sol.sigma2) > kMinStrength;
      if (w1) {
        const GasState mid = w2 ? sol.middle : ur;
        auto w = make_wave(ev->pipe, x, ul, mid, Family::first, sol.sigma1, false, chain);
        out.insert(out.end(), w.begin(), w.end());
        states.insert(states.end(), chain.begin(), chain.end());
      }
      if (w2) {
        auto w = make_wave(ev->pipe, x, w1 ? sol.middle : ul, ur, Family::second, sol.sigma2, false, chain);
        out.insert(out.end(), w.begin(), w.end());
        states.insert(states.end(), chain.begin(), chain.end());
      }
      // Replace fronts i, i+1 and the cell between them.
      pipe.fronts.erase(pipe.fronts.begin() + static_cast<std::ptrdiff_t>(i),
                        pipe.fronts.begin() + static_cast<std::ptrdiff_t>(i + 2));
      pipe.fronts.insert(pipe.fronts.begin() + static_cast<std::ptrdiff_t>(i), out.begin(), out.end());
      pipe.cells.erase(pipe.cells.begin() + static_cast<std::ptrdiff_t>(i + 1),
                       pipe.cells.begin() + static_cast<std::ptrdiff_t>(i + 3));
      if (!states.empty()) states.pop_back();  // equals ur
      states.push_back(ur);
      pipe.cells.insert(pipe.cells.begin() + static_cast<std::ptrdiff_t>(i + 1), states.begin(), states.end());
      if (out.empty()) pipe.cells.erase(pipe.cells.begin() + static_cast<std::ptrdiff_t>(i + 1));
      ++stats_.interactions;
      break;
    }
    case EventKind::junction: {
      const WaveFront f = pipe.fronts.front();
      rec.x = pipe.x_lo;
      rec.incoming = {{f.family, f.sigma, ev->pipe}};
      pipe.fronts.erase(pipe.fronts.begin());
      pipe.cells.erase(pipe.cells.begin());
      if (pipe.left == End::open) {
        rec.kind = EventKind::exit;
        break;
      }
      if (f.family != Family::first) {
        throw SolverError(fmt::format("2-wave reached the junction in pipe {} at t={:.17g}", p, now_));
      }
      std::vector<GasState> traces;
      for (const Pipe& q : pipes_) traces.push_back(q.cells.front());
      try {
        junction_solve(traces, &rec);
      } catch (const Error& e) {
        throw SolverError(fmt::format("junction at t={:.17g}: {}", now_, e.what()));
      }
      all_pipes = true;
      ++stats_.interactions;
      break;
    }
    case EventKind::boundary: {
      const WaveFront f = pipe.fronts.back();
      rec.x = pipe.x_hi;
      rec.incoming = {{f.family, f.sigma, ev->pipe}};
      pipe.fronts.pop_back();
      pipe.cells.pop_back();
      if (pipe.right == End::open) {
        rec.kind = EventKind::exit;
        break;
      }
      if (f.family != Family::second) {
        throw SolverError(fmt::format("1-wave reached the boundary of pipe {} at t={:.17g}", p, now_));
      }
      try {
        boundary_solve(p, &rec);
      } catch (const Error& e) {
        throw SolverError(fmt::format("boundary of pipe {} at t={:.17g}: {}", p, now_, e.what()));
      }
      ++stats_.interactions;
      break;
    }
    case EventKind::exit:
      break;
  }
  ++event_count_;
  if (all_pipes) {
    refresh_all();
  } else {
    refresh(p);
  }
  check_residuals();
  note_fronts();
  if (track_) rec.dJ = local_j() - j_before;
  if (full_rows_) rec.after = functionals();
  if (record_) events_.push_back(rec);
  last_ = std::move(rec);
  return last_;
}

void Simulation::advance_to(double t) {
  for (auto ev = peek(); ev && ev->time <= t; ev = peek()) step();
  now_ = std::max(now_, t);
}

namespace {

template <class Config>
SimulationTrace run_impl(const Config& cfg, const RunOptions& opts) {
  Simulation sim(cfg);
  SimulationTrace tr;
  tr.t_end = cfg.t_end;
  tr.initial = sim.functionals();
  std::vector<double> sample_times;
  const std::size_t n = std::max<std::size_t>(opts.n_samples, 2);
  for (std::size_t i = 0; i < n; ++i) {
    sample_times.push_back(cfg.t_end * static_cast<double>(i) / static_cast<double>(n - 1));
  }
  std::vector<double> snaps = opts.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t si = 0;
  std::size_t ni = 0;
  while (si < sample_times.size() || ni < snaps.size()) {
    const double ts = si < sample_times.size() ? sample_times[si] : std::numeric_limits<double>::infinity();
    const double tn = ni < snaps.size() ? snaps[ni] : std::numeric_limits<double>::infinity();
    const double t = std::min(ts, tn);
    if (t > cfg.t_end) break;
    sim.advance_to(t);
    if (ts == t) {
      if (cfg.track_functionals) tr.samples.push_back(sim.functionals());
      ++si;
    }
    if (tn == t) {
      tr.snapshots.push_back(sim.snapshot());
      ++ni;
    }
  }
  sim.advance_to(cfg.t_end);
  tr.final_state = sim.snapshot();
  tr.events = sim.events();
  tr.residuals = sim.residuals();
  tr.stats = sim.stats();
  tr.n_events = sim.event_count();
  if (tr.stats.oversize_pieces > 0) {
    tr.stats.warnings.push_back(fmt::format("{} in-pipe rarefaction pieces exceeded 2*epsilon (max {:.3g})",
                                            tr.stats.oversize_pieces, tr.stats.max_piece));
  }
  return tr;
}

}  // namespace

SimulationTrace run(const SimConfig& cfg, const RunOptions& opts) { return run_impl(cfg, opts); }
SimulationTrace run(const LineConfig& cfg, const RunOptions& opts) { return run_impl(cfg, opts); }

DecayInput decay_input(const SimulationTrace& trace) {
  DecayInput in;
  in.samples = trace.samples;
  for (const EventRecord& e : trace.events) in.event_jumps.emplace_back(e.t, e.dJ);
  return in;
}

}  // namespace wft
