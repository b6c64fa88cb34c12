#include "wft_cli/scenario.hpp"

#include <cmath>
#include <fstream>
#include <random>

#include "wft/errors.hpp"
#include "wft/network.hpp"

namespace wft::cli {

using nlohmann::json;

namespace {

std::string join(const std::string& path, const std::string& key) { return path.empty() ? key : path + "." + key; }
std::string join(const std::string& path, std::size_t i) { return path + "[" + std::to_string(i) + "]"; }

const json* find(const json& obj, const std::string& key) {
  const auto it = obj.find(key);
  return it == obj.end() ? nullptr : &*it;
}

double number(const json& v, const std::string& path) {
  if (!v.is_number()) throw ConfigError(path, "expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(path, "must be finite");
  return x;
}

double positive(const json& v, const std::string& path) {
  const double x = number(v, path);
  if (!(x > 0.0)) throw ConfigError(path, "must be positive");
  return x;
}

std::uint64_t count(const json& v, const std::string& path) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < 0) throw ConfigError(path, "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

const json& object(const json& v, const std::string& path) {
  if (!v.is_object()) throw ConfigError(path, "expected an object");
  return v;
}

const json& array(const json& v, const std::string& path) {
  if (!v.is_array()) throw ConfigError(path, "expected an array");
  return v;
}

bool is_auto(const json& v) { return v.is_string() && v.get<std::string>() == "auto"; }

bool boolean(const json& v, const std::string& path) {
  if (!v.is_boolean()) throw ConfigError(path, "expected true or false");
  return v.get<bool>();
}

GasState state(const json& v, const std::string& path) {
  array(v, path);
  if (v.size() != 2) throw ConfigError(path, "expected [rho, q]");
  return {positive(v[0], join(path, 0)), number(v[1], join(path, 1))};
}

std::vector<double> numbers(const json& v, const std::string& path) {
  array(v, path);
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(number(v[i], join(path, i)));
  return out;
}

PipeInitial segments(const json& v, const std::string& path, double x_lo, double x_hi) {
  array(v, path);
  if (v.empty()) throw ConfigError(path, "needs at least one segment");
  PipeInitial out;
  double prev = x_lo;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const std::string p = join(path, i);
    array(v[i], p);
    if (v[i].size() != 3) throw ConfigError(p, "expected [x_right, rho, q]");
    const double x = number(v[i][0], join(p, 0));
    if (!(x > prev)) throw ConfigError(join(p, 0), "breakpoints must be strictly increasing");
    if (x > x_hi) throw ConfigError(join(p, 0), "breakpoint beyond the pipe end");
    out.push_back({x, {positive(v[i][1], join(p, 1)), number(v[i][2], join(p, 2))}});
    prev = x;
  }
  if (out.back().x_right != x_hi) throw ConfigError(join(join(path, v.size() - 1), 0), "last segment must end at the pipe end");
  return out;
}

void parse_law(const json& doc, PressureLaw& law) {
  const json* l = find(doc, "law");
  if (!l) return;
  object(*l, "law");
  double kappa = law.kappa();
  double g = law.gamma_exp();
  if (const json* k = find(*l, "kappa")) kappa = positive(*k, "law.kappa");
  if (const json* k = find(*l, "gamma_exp")) g = number(*k, "law.gamma_exp");
  if (!(g > 1.0)) throw ConfigError("law.gamma_exp", "must exceed 1");
  law = PressureLaw(kappa, g);
}

void parse_network(const json& n, Scenario& s) {
  object(n, "network");
  NetworkConfig& net = s.sim.network;
  if (const json* r = find(n, "random")) {
    object(*r, "network.random");
    s.random_network = true;
    RandomNetworkOptions& o = s.network_options;
    if (const json* v = find(*r, "n_pipes")) o.n_pipes = count(*v, "network.random.n_pipes");
    if (const json* v = find(*r, "nu_min")) o.nu_min = positive(*v, "network.random.nu_min");
    if (const json* v = find(*r, "nu_max")) o.nu_max = positive(*v, "network.random.nu_max");
    if (const json* v = find(*r, "flow_max")) o.flow_max = number(*v, "network.random.flow_max");
    if (const json* v = find(*r, "reference_rho")) o.reference_rho = positive(*v, "network.random.reference_rho");
    if (const json* v = find(*r, "subsonic_radius")) o.subsonic_radius = positive(*v, "network.random.subsonic_radius");
    if (const json* v = find(*r, "entropy_margin")) o.min_entropy_margin = positive(*v, "network.random.entropy_margin");
    if (o.n_pipes < 2) throw ConfigError("network.random.n_pipes", "needs at least 2 pipes");
    if (!(o.nu_min <= o.nu_max)) throw ConfigError("network.random.nu_max", "must be >= nu_min");
  } else {
    const json* np = find(n, "n_pipes");
    const json* nu = find(n, "nu_norms");
    const json* eq = find(n, "equilibria");
    if (!nu) throw ConfigError("network.nu_norms", "missing");
    if (!eq) throw ConfigError("network.equilibria", "missing");
    net.nu_norms = numbers(*nu, "network.nu_norms");
    array(*eq, "network.equilibria");
    net.equilibria.clear();
    for (std::size_t i = 0; i < eq->size(); ++i) net.equilibria.push_back(state((*eq)[i], join("network.equilibria", i)));
    if (np && count(*np, "network.n_pipes") != net.nu_norms.size()) {
      throw ConfigError("network.n_pipes", "does not match the length of network.nu_norms");
    }
    if (net.equilibria.size() != net.nu_norms.size()) {
      throw ConfigError("network.equilibria", "needs one entry per pipe");
    }
    if (const json* r = find(n, "subsonic_radius")) net.subsonic_radius = positive(*r, "network.subsonic_radius");
  }
  const json* g = find(n, "gains");
  if (!g || is_auto(*g)) {
    s.gains_auto = g != nullptr;
  } else {
    net.gains = numbers(*g, "network.gains");
  }
}

void parse_initial(const json& v, Scenario& s) {
  if (v.is_object()) {
    const json* r = find(v, "random");
    if (!r) throw ConfigError("initial", "expected per-pipe segments or {\"random\": {...}}");
    object(*r, "initial.random");
    s.random_initial = true;
    if (const json* x = find(*r, "jumps_per_pipe")) s.initial_options.jumps_per_pipe = count(*x, "initial.random.jumps_per_pipe");
    if (const json* x = find(*r, "amplitude")) s.initial_options.amplitude = positive(*x, "initial.random.amplitude");
    return;
  }
  array(v, "initial");
  s.sim.initial.clear();
  for (std::size_t i = 0; i < v.size(); ++i) s.sim.initial.push_back(segments(v[i], join("initial", i), 0.0, 1.0));
}

void parse_run(const json& r, Scenario& s) {
  object(r, "run");
  const json* eps = find(r, "epsilon");
  if (!eps) throw ConfigError("run.epsilon", "required");
  s.set_epsilon(positive(*eps, "run.epsilon"));
  const json* t_end = find(r, "t_end");
  if (!t_end) throw ConfigError("run.t_end", "required");
  s.sim.t_end = positive(*t_end, "run.t_end");
  s.line_cfg.t_end = s.sim.t_end;
  if (const json* v = find(r, "interaction_cap")) {
    const std::uint64_t cap = count(*v, "run.interaction_cap");
    if (cap == 0) throw ConfigError("run.interaction_cap", "must be positive");
    s.sim.interaction_cap = cap;
    s.line_cfg.interaction_cap = cap;
  }
  if (const json* v = find(r, "snapshot_times")) {
    s.snapshot_times = numbers(*v, "run.snapshot_times");
    for (std::size_t i = 0; i < s.snapshot_times.size(); ++i) {
      if (s.snapshot_times[i] < 0.0) throw ConfigError(join("run.snapshot_times", i), "must be >= 0");
    }
  }
  if (const json* v = find(r, "seed")) s.seed = count(*v, "run.seed");
  if (const json* v = find(r, "n_samples")) {
    s.n_samples = count(*v, "run.n_samples");
    if (s.n_samples < 2) throw ConfigError("run.n_samples", "needs at least 2 samples");
  }
  if (const json* v = find(r, "event_rows")) s.event_rows = boolean(*v, "run.event_rows");
}

void parse_functionals(const json& f, Scenario& s) {
  object(f, "functionals");
  FunctionalParams& p = s.sim.functionals;
  if (const json* v = find(f, "gamma_w")) {
    p.gamma_w = number(*v, "functionals.gamma_w");
    if (p.gamma_w < 0.0) throw ConfigError("functionals.gamma_w", "must be >= 0");
  }
  if (const json* v = find(f, "kappa_q")) {
    s.kappa_auto = is_auto(*v);
    if (!s.kappa_auto) p.kappa_q = positive(*v, "functionals.kappa_q");
  }
  if (const json* v = find(f, "kappa_factor")) {
    s.kappa_factor = number(*v, "functionals.kappa_factor");
    if (!(s.kappa_factor > 1.0)) throw ConfigError("functionals.kappa_factor", "must exceed 1");
  }
  if (const json* v = find(f, "check_decay")) s.check_decay = boolean(*v, "functionals.check_decay");
  if (const json* c = find(f, "constants")) {
    s.constants_auto = is_auto(*c);
    if (!s.constants_auto) {
      object(*c, "functionals.constants");
      auto need = [&](const char* key) -> double {
        const json* v = find(*c, key);
        if (!v) throw ConfigError(join("functionals.constants", key), "missing");
        return positive(*v, join("functionals.constants", key));
      };
      p.K = need("K");
      p.K_J = need("K_J");
      p.C_b = need("C_b");
      p.c_min = need("c_min");
      p.Lambda_max = need("Lambda_max");
      if (p.K_J < 1.0) throw ConfigError("functionals.constants.K_J", "must be >= 1");
    }
  }
  if (const json* c = find(f, "calibration")) {
    object(*c, "functionals.calibration");
    CalibrationOptions& o = s.calibration;
    if (const json* v = find(*c, "n_samples")) o.n_samples = count(*v, "functionals.calibration.n_samples");
    if (const json* v = find(*c, "radius")) o.radius = positive(*v, "functionals.calibration.radius");
    if (const json* v = find(*c, "strength")) o.strength = positive(*v, "functionals.calibration.strength");
    if (const json* v = find(*c, "seed")) o.seed = count(*v, "functionals.calibration.seed");
  }
}

}  // namespace

void Scenario::set_epsilon(double eps) {
  sim.epsilon = eps;
  line_cfg.epsilon = eps;
}

Scenario parse_scenario(const json& doc, const Overrides& overrides) {
  object(doc, "");
  Scenario s;
  s.source = "<inline>";
  s.document = doc;
  parse_law(doc, s.sim.law);
  s.line_cfg.law = s.sim.law;
  if (const json* l = find(doc, "line")) {
    object(*l, "line");
    s.line = true;
    if (find(doc, "network")) throw ConfigError("line", "a scenario is either a line or a network");
    if (const json* v = find(*l, "x_lo")) s.line_cfg.x_lo = number(*v, "line.x_lo");
    if (const json* v = find(*l, "x_hi")) s.line_cfg.x_hi = number(*v, "line.x_hi");
    if (!(s.line_cfg.x_hi > s.line_cfg.x_lo)) throw ConfigError("line.x_hi", "must exceed line.x_lo");
    const json* init = find(*l, "initial");
    if (!init) throw ConfigError("line.initial", "missing");
    s.line_cfg.initial = segments(*init, "line.initial", s.line_cfg.x_lo, s.line_cfg.x_hi);
    s.check_decay = false;
  } else {
    const json* n = find(doc, "network");
    if (!n) throw ConfigError("network", "missing");
    parse_network(*n, s);
    const json* init = find(doc, "initial");
    if (!init) throw ConfigError("initial", "missing");
    parse_initial(*init, s);
  }
  const json* run = find(doc, "run");
  if (!run) throw ConfigError("run", "missing");
  parse_run(*run, s);
  s.calibration.seed = s.seed;
  if (const json* f = find(doc, "functionals")) parse_functionals(*f, s);
  if (s.line) s.check_decay = false;
  if (overrides.seed) {
    s.seed = *overrides.seed;
    s.calibration.seed = *overrides.seed;
  }
  if (overrides.epsilon) {
    if (!(*overrides.epsilon > 0.0)) throw ConfigError("--epsilon", "must be positive");
    s.set_epsilon(*overrides.epsilon);
  }
  s.sim.full_event_rows = s.event_rows;
  return s;
}

Scenario load_scenario(const std::string& path, const Overrides& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError("", "cannot read scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("", "'" + path + "' is not valid JSON: " + e.what());
  }
  Scenario s = parse_scenario(doc, overrides);
  s.source = path;
  return s;
}

void prepare(Scenario& s) {
  if (s.line) {
    s.line_cfg.functionals = s.sim.functionals;
    return;
  }
  std::mt19937_64 rng(s.seed);
  NetworkConfig& net = s.sim.network;
  if (s.random_network) {
    net = random_network(s.sim.law, s.network_options, rng);
    if (!s.gains_auto) {
      const json& g = s.document["network"];
      if (const json* v = find(g, "gains")) net.gains = numbers(*v, "network.gains");
    }
  }
  if (net.gains.empty() && !s.gains_auto) net.gains.assign(net.n_pipes(), 0.0);
  if (s.gains_auto) net.gains.assign(net.n_pipes(), 0.0);
  validate(s.sim.law, net);

  FunctionalParams& p = s.sim.functionals;
  if (s.constants_auto) {
    if (s.gains_auto) {
      CompliantOptions co;
      co.gamma_w = p.gamma_w;
      co.kappa_factor = s.kappa_factor;
      co.calibration = s.calibration;
      const CompliantSetup setup = make_compliant(s.sim.law, net, co, rng);
      net = setup.network;
      s.calibrated = setup.calibration;
      const double kappa = p.kappa_q;
      p = setup.params;
      if (!s.kappa_auto) p.kappa_q = kappa;
    } else {
      s.calibrated = calibrate_constants(s.sim.law, net, s.calibration);
      const double g = p.gamma_w;
      const double kappa = p.kappa_q;
      p = s.calibrated->constants;
      p.gamma_w = g;
      p.kappa_q = kappa;
    }
  } else if (s.gains_auto) {
    const double kmax = gain_bound(p);
    for (double& k : net.gains) k = 0.8 * kmax;
  }
  if (s.kappa_auto) p.kappa_q = s.kappa_factor * kappa_bound(p);

  if (s.random_initial) s.sim.initial = random_initial(net, s.initial_options, rng);
  if (s.sim.initial.size() != net.n_pipes()) throw ConfigError("initial", "needs one segment list per pipe");
  validate(s.sim);
  if (s.check_decay) check_decay_hypotheses(p, net);
}

json constants_json(const FunctionalParams& p) {
  return json{{"K", p.K}, {"K_J", p.K_J}, {"C_b", p.C_b}, {"c_min", p.c_min}, {"Lambda_max", p.Lambda_max}};
}

}  // namespace wft::cli
