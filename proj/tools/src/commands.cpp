#include "wft_cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <future>
#include <iostream>
#include <map>

#include <fmt/format.h>

#include "wft/errors.hpp"
#include "wft/exact_riemann.hpp"
#include "wft_cli/writers.hpp"

namespace wft::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kSchemaVersion = 1;

std::ostream& log_of(const CommandOptions& o) { return o.log ? *o.log : std::cout; }

fs::path out_dir(const CommandOptions& o, const char* fallback) {
  fs::path dir = o.out.empty() ? fs::path(fallback) : fs::path(o.out);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("--out", "cannot create directory '" + dir.string() + "': " + ec.message());
  return dir;
}

json sample_json(const FunctionalSample& s) {
  return json{{"t", s.t},   {"V", s.V},   {"Q11", s.Q11}, {"Q22", s.Q22},
              {"Q12", s.Q12}, {"J", s.J}, {"TV", s.TV},   {"strength_sum", s.strength_sum},
              {"n_fronts", s.n_fronts}};
}

json state_json(const GasState& u) { return json::array({u.rho, u.q}); }

json network_json(const Scenario& s) {
  if (s.line) return json{{"mode", "line"}, {"x_lo", s.line_cfg.x_lo}, {"x_hi", s.line_cfg.x_hi}};
  const NetworkConfig& n = s.sim.network;
  json eq = json::array();
  for (const GasState& u : n.equilibria) eq.push_back(state_json(u));
  return json{{"mode", "network"},
              {"n_pipes", n.n_pipes()},
              {"nu_norms", n.nu_norms},
              {"gains", n.gains},
              {"equilibria", eq},
              {"subsonic_radius", n.subsonic_radius},
              {"randomized", s.random_network}};
}

json calibration_json(const CalibrationResult& c, const CalibrationOptions& o) {
  return json{{"raw", {{"K", c.raw_K},
                       {"K_J", c.raw_K_J},
                       {"C_b", c.raw_C_b},
                       {"c_min", c.raw_c_min},
                       {"Lambda_max", c.raw_Lambda_max}}},
              {"inflation", kCalibrationInflation},
              {"n_samples", o.n_samples},
              {"used_samples", c.used_samples},
              {"radius", o.radius},
              {"strength", o.strength},
              {"seed", o.seed}};
}

json decay_json(const DecayReport& d) {
  return json{{"max_dJ", d.max_dJ},
              {"dJ_violations", d.dJ_violations},
              {"max_envelope_ratio", d.max_envelope_ratio},
              {"envelope_ok", d.envelope_ok},
              {"fitted_J_rate", d.fitted_J_rate},
              {"fitted_TV_rate", d.fitted_TV_rate},
              {"fitted_TV_constant", d.fitted_TV_constant},
              {"tv_constant_bound", d.tv_constant_bound},
              {"tv_ok", d.tv_ok},
              {"passed", d.passed},
              {"notes", d.notes}};
}

void summary(const CommandOptions& o, const std::string& line) {
  if (!o.quiet) log_of(o) << line << '\n';
}

std::vector<double> default_snapshots(const Scenario& s) {
  if (!s.snapshot_times.empty()) return s.snapshot_times;
  return {0.0, s.t_end()};
}

}  // namespace

RunOutcome execute(const Scenario& s) {
  RunOptions ro;
  ro.n_samples = s.n_samples;
  for (double t : default_snapshots(s)) ro.snapshot_times.push_back(std::min(t, s.t_end()));
  RunOutcome out;
  if (s.line) {
    out.trace = run(s.line_cfg, ro);
    return out;
  }
  out.trace = run(s.sim, ro);
  const ResidualMaxima& r = out.trace.residuals;
  out.residuals_ok = r.mass <= kResidualTolerance && r.pressure <= kResidualTolerance &&
                     r.boundary <= kResidualTolerance && r.entropy <= kResidualTolerance;
  if (s.check_decay) out.decay = verify_decay(decay_input(out.trace), s.sim.functionals);
  out.passed = out.residuals_ok && (!out.decay || out.decay->passed);
  return out;
}

json run_report(const Scenario& s, const RunOutcome& r) {
  const SimulationTrace& tr = r.trace;
  const FunctionalParams& p = s.line ? s.line_cfg.functionals : s.sim.functionals;
  std::map<std::string, std::uint64_t> kinds;
  for (const EventRecord& e : tr.events) ++kinds[to_string(e.kind)];
  json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = "run";
  j["scenario"] = s.source;
  j["seed"] = s.seed;
  j["law"] = {{"kappa", s.sim.law.kappa()}, {"gamma_exp", s.sim.law.gamma_exp()}};
  j["run"] = {{"epsilon", s.epsilon()}, {"t_end", s.t_end()}, {"n_samples", s.n_samples}};
  j["network"] = network_json(s);
  j["functionals"] = {{"gamma_w", p.gamma_w},
                      {"kappa_q", p.kappa_q},
                      {"kappa_bound", kappa_bound(p)},
                      {"gain_bound", gain_bound(p)},
                      {"constants", constants_json(p)},
                      {"constants_source", s.constants_auto ? "auto" : "file"},
                      {"decay_checked", s.check_decay}};
  if (s.calibrated) j["functionals"]["calibration"] = calibration_json(*s.calibrated, s.calibration);
  j["interpretation"] = {
      {"decay_rate_constant", "c = c_min, the lower bound on |characteristic speed| over the sampled region"},
      {"envelope", "J(t) <= J(0+) exp(-c gamma_w t); the exponent carries t"},
      {"q12_pairs", "family-2 front left of family-1 front, weight exp(gamma_w (x_family1 - x_family2))"},
      {"pipe_sum", "outer sums over the N pipes"}};
  j["stats"] = {{"events", tr.n_events},
                {"events_by_kind", kinds},
                {"max_fronts", tr.stats.max_fronts},
                {"oversize_pieces", tr.stats.oversize_pieces},
                {"max_piece", tr.stats.max_piece},
                {"warnings", tr.stats.warnings}};
  if (!s.line) {
    j["residuals"] = {{"mass", tr.residuals.mass},
                      {"pressure", tr.residuals.pressure},
                      {"entropy_sum_max", tr.residuals.entropy},
                      {"boundary", tr.residuals.boundary},
                      {"tolerance", kResidualTolerance}};
  }
  j["initial"] = sample_json(tr.initial);
  if (!tr.samples.empty()) j["final"] = sample_json(tr.samples.back());
  if (r.decay) j["decay"] = decay_json(*r.decay);
  j["verdicts"] = {{"residuals", r.residuals_ok},
                   {"dJ", !r.decay || r.decay->dJ_violations == 0},
                   {"envelope", !r.decay || r.decay->envelope_ok},
                   {"tv_decay", !r.decay || r.decay->tv_ok},
                   {"passed", r.passed}};
  return j;
}

int cmd_run(const std::string& path, const CommandOptions& opts) {
  Scenario s = load_scenario(path, opts.overrides);
  prepare(s);
  const fs::path dir = out_dir(opts, "wft_out");
  const RunOutcome r = execute(s);
  const SimulationTrace& tr = r.trace;
  std::vector<std::string> files = {"functionals.csv", "events.csv", "report.json", "plot.py"};
  write_functionals_csv(dir / "functionals.csv", tr, !s.line && s.event_rows);
  write_events_csv(dir / "events.csv", tr.events);
  for (const Snapshot& snap : tr.snapshots) {
    files.push_back(snapshot_name(snap.t));
    write_snapshot_csv(dir / files.back(), snap);
  }
  write_plot_script(dir / "plot.py");
  json report = run_report(s, r);
  report["files"] = files;
  write_json(dir / "report.json", report);
  summary(opts, fmt::format("events {}  max fronts {}  J(0+) {}  J(t_end) {}", tr.n_events, tr.stats.max_fronts,
                            num(tr.initial.J), num(tr.samples.empty() ? 0.0 : tr.samples.back().J)));
  if (r.decay) {
    summary(opts, fmt::format("max dJ {}  envelope ratio {}  J rate {}  TV rate {}  TV constant {} (bound {})",
                              num(r.decay->max_dJ), num(r.decay->max_envelope_ratio), num(r.decay->fitted_J_rate),
                              num(r.decay->fitted_TV_rate), num(r.decay->fitted_TV_constant),
                              num(r.decay->tv_constant_bound)));
  }
  summary(opts, std::string(r.passed ? "PASS" : "FAIL") + "  report: " + (dir / "report.json").string());
  return r.passed ? kExitOk : kExitVerdict;
}

int cmd_calibrate(const std::string& path, std::optional<std::size_t> n_samples, const CommandOptions& opts) {
  Scenario s = load_scenario(path, opts.overrides);
  if (s.line) throw ConfigError("line", "calibration needs a network scenario");
  if (n_samples) s.calibration.n_samples = *n_samples;
  if (s.calibration.n_samples == 0) throw ConfigError("calibrate.n_samples", "must be positive");
  // Network only: constants are what we are computing.
  s.constants_auto = false;
  s.check_decay = false;
  s.kappa_auto = false;
  const bool gains_auto = s.gains_auto;
  s.gains_auto = false;
  std::mt19937_64 rng(s.seed);
  NetworkConfig net = s.sim.network;
  if (s.random_network) net = random_network(s.sim.law, s.network_options, rng);
  if (net.gains.empty() || gains_auto) net.gains.assign(net.n_pipes(), 0.0);
  validate(s.sim.law, net);

  CalibrationOptions doubled = s.calibration;
  doubled.n_samples *= 2;
  auto fa = std::async(std::launch::async, [&] { return calibrate_constants(s.sim.law, net, s.calibration); });
  auto fb = std::async(std::launch::async, [&] { return calibrate_constants(s.sim.law, net, doubled); });
  const CalibrationResult a = fa.get();
  const CalibrationResult b = fb.get();
  auto rel = [](double x, double y) { return std::abs(y - x) / std::max(std::abs(x), 1e-300); };
  const FunctionalParams& pa = a.constants;
  const FunctionalParams& pb = b.constants;
  const double change = std::max({rel(pa.K, pb.K), rel(pa.K_J, pb.K_J), rel(pa.C_b, pb.C_b), rel(pa.c_min, pb.c_min),
                                  rel(pa.Lambda_max, pb.Lambda_max)});
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["command"] = "calibrate";
  doc["scenario"] = s.source;
  doc["constants"] = constants_json(pa);
  doc["calibration"] = calibration_json(a, s.calibration);
  doc["network"] = json{{"nu_norms", net.nu_norms}, {"gains", net.gains}};
  doc["convergence"] = {{"doubled_n_samples", doubled.n_samples},
                        {"doubled_constants", constants_json(pb)},
                        {"max_relative_change", change},
                        {"within_5_percent", change < 0.05},
                        {"note", change < 0.05 ? "constants stable under doubling n_samples"
                                               : "constants moved by 5% or more when doubling n_samples; "
                                                 "increase functionals.calibration.n_samples"}};
  if (opts.out.empty()) {
    log_of(opts) << doc.dump(2) << '\n';
  } else {
    const fs::path out(opts.out);
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    write_json(out, doc);
    summary(opts, fmt::format("K {}  K_J {}  C_b {}  c_min {}  Lambda_max {}  (doubling change {})", num(pa.K),
                              num(pa.K_J), num(pa.C_b), num(pa.c_min), num(pa.Lambda_max), num(change)));
  }
  return kExitOk;
}

RefineResult refine(const Scenario& s, const std::vector<double>& epsilons) {
  if (epsilons.size() < 2) throw ConfigError("--epsilon", "refinement needs at least two values");
  for (double e : epsilons) {
    if (!(e > 0.0)) throw ConfigError("--epsilon", "must be positive");
  }
  std::vector<std::future<SimulationTrace>> jobs;
  for (double eps : epsilons) {
    jobs.push_back(std::async(std::launch::async, [&s, eps] {
      RunOptions ro;
      ro.n_samples = 2;
      if (s.line) {
        LineConfig c = s.line_cfg;
        c.epsilon = eps;
        c.track_functionals = false;
        c.record_events = false;
        return run(c, ro);
      }
      SimConfig c = s.sim;
      c.epsilon = eps;
      c.track_functionals = false;
      c.record_events = false;
      return run(c, ro);
    }));
  }
  std::vector<SimulationTrace> traces;
  for (auto& j : jobs) traces.push_back(j.get());

  RefineResult out;
  const bool exact = s.line && s.line_cfg.initial.size() == 2;
  for (std::size_t i = 0; i < traces.size(); ++i) {
    RefineLevel l;
    l.epsilon = epsilons[i];
    l.events = traces[i].n_events;
    if (i + 1 < traces.size()) l.distance_to_next = l1_distance(traces[i].final_state, traces[i + 1].final_state);
    if (exact) {
      const ExactRiemann oracle(s.line_cfg.law, s.line_cfg.initial[0].state, s.line_cfg.initial[1].state);
      l.exact_l1 = l1_error(traces[i].final_state.pipes[0], oracle, s.line_cfg.t_end, s.line_cfg.initial[0].x_right);
    }
    out.levels.push_back(l);
  }
  std::vector<std::pair<double, double>> pts;
  for (std::size_t i = 0; i + 1 < out.levels.size(); ++i) {
    const double d = out.levels[i].distance_to_next;
    if (i > 0) {
      const double prev = out.levels[i - 1].distance_to_next;
      if (!(d < prev || (d == 0.0 && prev == 0.0))) out.monotone = false;
    }
    if (d > 0.0) pts.emplace_back(std::log(out.levels[i].epsilon), std::log(d));
  }
  if (pts.size() >= 2) {
    double mx = 0, my = 0;
    for (const auto& [x, y] : pts) {
      mx += x;
      my += y;
    }
    mx /= static_cast<double>(pts.size());
    my /= static_cast<double>(pts.size());
    double num = 0, den = 0;
    for (const auto& [x, y] : pts) {
      num += (x - mx) * (y - my);
      den += (x - mx) * (x - mx);
    }
    out.observed_order = den > 0.0 ? num / den : 0.0;
  }
  out.order_ok = out.observed_order >= 0.8;
  return out;
}

int cmd_refine(const std::string& path, const std::vector<double>& epsilons, const CommandOptions& opts) {
  Scenario s = load_scenario(path, opts.overrides);
  prepare(s);
  std::vector<double> eps = epsilons;
  if (eps.empty()) {
    for (int k = 0; k < 5; ++k) eps.push_back(s.epsilon() / std::ldexp(1.0, k));
  }
  const fs::path dir = out_dir(opts, "wft_refine");
  const RefineResult r = refine(s, eps);
  std::string csv = "epsilon,events,distance_to_next,exact_l1\n";
  json levels = json::array();
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const RefineLevel& l = r.levels[i];
    const bool last = i + 1 == r.levels.size();
    csv += fmt::format("{},{},{},{}\n", num(l.epsilon), l.events, last ? "" : num(l.distance_to_next),
                       l.exact_l1 < 0.0 ? "" : num(l.exact_l1));
    json lj = {{"epsilon", l.epsilon}, {"events", l.events}};
    if (!last) lj["distance_to_next"] = l.distance_to_next;
    if (l.exact_l1 >= 0.0) lj["exact_l1"] = l.exact_l1;
    levels.push_back(lj);
  }
  write_text(dir / "refine.csv", csv);
  const bool check_order = r.levels.size() >= 3;
  const bool passed = r.monotone && (!check_order || r.order_ok);
  json doc = {{"schema_version", kSchemaVersion},
              {"command", "refine"},
              {"scenario", s.source},
              {"seed", s.seed},
              {"t_end", s.t_end()},
              {"levels", levels},
              {"monotone", r.monotone},
              {"observed_order", r.observed_order},
              {"order_checked", check_order},
              {"order_ok", r.order_ok},
              {"passed", passed}};
  write_json(dir / "refine.json", doc);
  for (std::size_t i = 0; i < r.levels.size(); ++i) {
    const RefineLevel& l = r.levels[i];
    summary(opts, fmt::format("eps {}  events {}  d(next) {}{}", num(l.epsilon), l.events,
                              i + 1 < r.levels.size() ? num(l.distance_to_next) : "-",
                              l.exact_l1 < 0.0 ? "" : "  exact " + num(l.exact_l1)));
  }
  summary(opts, fmt::format("observed order {}  monotone {}", num(r.observed_order), r.monotone));
  return passed ? kExitOk : kExitVerdict;
}

CompareReport compare(const Scenario& a, const Scenario& b, std::size_t n_samples) {
  if (a.line || b.line) throw ConfigError("line", "compare needs network scenarios");
  SimConfig cb = b.sim;
  cb.functionals = a.sim.functionals;
  auto job = [&](PhiVariant v) {
    CompareOptions o;
    o.n_samples = n_samples;
    o.variant = v;
    return compare_runs(a.sim, cb, o);
  };
  auto fu = std::async(std::launch::async, job, PhiVariant::unit);
  auto fb = std::async(std::launch::async, job, PhiVariant::junction_balanced);
  CompareReport r;
  r.unit = fu.get();
  r.balanced = fb.get();
  r.lipschitz_factor = r.unit.initial_l1 > 0.0 ? r.unit.max_l1 / r.unit.initial_l1 : 0.0;
  return r;
}

int cmd_compare(const std::string& path_a, const std::string& path_b, const CommandOptions& opts) {
  auto load = [&](const std::string& p) {
    Scenario s = load_scenario(p, opts.overrides);
    prepare(s);
    return s;
  };
  auto fa = std::async(std::launch::async, load, path_a);
  auto fb = std::async(std::launch::async, load, path_b);
  const Scenario a = fa.get();
  const Scenario b = fb.get();
  const CompareReport r = compare(a, b, a.n_samples);
  const double eps = a.epsilon();
  auto variant = [&](const CompareResult& c) {
    return json{{"kappa1", c.weights.kappa1},
                {"kappa2", c.weights.kappa2},
                {"family1_factor", c.weights.family1},
                {"max_phi_jump", c.max_phi_jump},
                {"max_phi_growth_rate", c.max_phi_growth},
                {"growth_rate_over_epsilon", c.max_phi_growth / eps}};
  };
  json doc = {{"schema_version", kSchemaVersion},
              {"command", "compare"},
              {"scenarios", {a.source, b.source}},
              {"seed", a.seed},
              {"epsilon", eps},
              {"t_end", a.t_end()},
              {"initial_l1", r.unit.initial_l1},
              {"max_l1", r.unit.max_l1},
              {"lipschitz_factor", r.lipschitz_factor},
              {"events", {r.unit.events_a, r.unit.events_b}},
              {"phi", {{"unit", variant(r.unit)}, {"junction_balanced", variant(r.balanced)}}}};
  fs::path out = opts.out.empty() ? fs::path("compare.json") : fs::path(opts.out);
  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  write_json(out, doc);
  std::string csv = "t,phi_unit,phi_balanced,l1\n";
  for (std::size_t i = 0; i < r.unit.samples.size() && i < r.balanced.samples.size(); ++i) {
    const CompareSample& u = r.unit.samples[i];
    csv += fmt::format("{},{},{},{}\n", num(u.t), num(u.phi), num(r.balanced.samples[i].phi), num(u.l1));
  }
  fs::path csv_path = out;
  csv_path.replace_extension(".csv");
  write_text(csv_path, csv);
  summary(opts, fmt::format("initial L1 {}  sup L1 {}  L {}  max dPhi at events {}  max Phi growth {} (balanced {})",
                            num(r.unit.initial_l1), num(r.unit.max_l1), num(r.lipschitz_factor),
                            num(r.unit.max_phi_jump), num(r.unit.max_phi_growth), num(r.balanced.max_phi_growth)));
  return kExitOk;
}

int guarded(const std::function<int()>& body, std::ostream& err) {
  try {
    return body();
  } catch (const InteractionCapExceeded& e) {
    err << "error: interaction cap exceeded: " << e.what() << '\n';
    return kExitCap;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const nlohmann::json::exception& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const fs::filesystem_error& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const Error& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  } catch (const std::exception& e) {
    err << "solver error: " << e.what() << '\n';
    return kExitSolver;
  }
}

}  // namespace wft::cli
