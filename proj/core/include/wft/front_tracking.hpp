#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "wft/eos.hpp"
#include "wft/fronts.hpp"
#include "wft/functionals.hpp"
#include "wft/network.hpp"

namespace wft {

/// Constant state on (previous x_right, x_right].
struct InitialSegment {
  double x_right = 1.0;
  GasState state;
};
using PipeInitial = std::vector<InitialSegment>;

/// Waves with |sigma| at or below this are not created.
inline constexpr double kMinStrength = 1e-13;

struct SimConfig {
  PressureLaw law{1.0, 1.4};
  NetworkConfig network;
  double epsilon = 1e-2;
  double t_end = 1.0;
  std::vector<PipeInitial> initial;  ///< one per pipe, x in (0, 1]
  std::uint64_t interaction_cap = 1'000'000;
  FunctionalParams functionals;
  bool track_functionals = true;  ///< dJ of every event, from the pipes it touches
  bool full_event_rows = true;    ///< also the network-wide functionals at both limits
  bool record_events = true;
  bool check_entropy = true;      ///< junction entropy violations are errors
};

/// A single pipe on [x_lo, x_hi] with transparent ends: waves leave without reflection.
struct LineConfig {
  PressureLaw law{1.0, 1.4};
  double x_lo = 0.0;
  double x_hi = 1.0;
  PipeInitial initial;  ///< x_right in (x_lo, x_hi]
  double epsilon = 1e-2;
  double t_end = 1.0;
  std::uint64_t interaction_cap = 1'000'000;
  FunctionalParams functionals;
  bool track_functionals = false;
  bool full_event_rows = false;
  bool record_events = true;
};

/// Piecewise-constant approximation of `field` on (0, 1) with L1 error below epsilon
/// (estimated by successive halving). Midpoint sampling never increases the total variation.
PipeInitial discretize_initial(const std::function<GasState(double)>& field, double epsilon,
                               std::size_t max_cells = 1u << 20);
/// Segment input is already piecewise constant; adjacent equal states are merged.
PipeInitial discretize_initial(const PipeInitial& segments);

/// Validates breakpoints and states; throws ConfigError with the field path.
void validate(const SimConfig& cfg);

/// Fan of ceil(sigma / epsilon) equal pieces chained from `base`; the last right state is the exact fan end.
std::vector<WaveFront> split_rarefaction(const PressureLaw& law, const GasState& base, Family family, double sigma,
                                         double epsilon, const CurveDomain& domain = {});

/// Number of pieces used for a fan of strength sigma.
std::size_t fan_pieces(double sigma, double epsilon);

/// Speed of a front between two states: RH speed for shocks, mean characteristic speed for rarefaction pieces.
double front_speed(const PressureLaw& law, const GasState& left, const GasState& right, Family family, double sigma);


enum class EventKind { collision, junction, boundary, exit };
std::string to_string(EventKind k);

struct Event {
  double time = std::numeric_limits<double>::infinity();
  EventKind kind = EventKind::collision;
  int pipe = -1;
  std::size_t index = 0;  ///< front index (left front for collisions)
  std::uint64_t min_id = 0;
};

/// Earliest event among fronts of one pipe, all anchored at time `now`.
std::optional<Event> next_event(const std::vector<WaveFront>& fronts, double now, double x_lo, double x_hi, int pipe);

struct WaveRecord {
  Family family = Family::first;
  double sigma = 0.0;
  int pipe = 0;
};

struct EventRecord {
  std::uint64_t index = 0;
  double t = 0.0;
  EventKind kind = EventKind::collision;
  int pipe = 0;
  double x = 0.0;
  std::vector<WaveRecord> incoming;
  std::vector<WaveRecord> outgoing;  ///< strengths before fan splitting
  double gain = 0.0;                 ///< boundary events
  FunctionalSample before;  ///< network-wide, only with full_event_rows
  FunctionalSample after;
  double dJ = 0.0;
};

struct ResidualMaxima {
  double mass = 0.0;
  double pressure = 0.0;
  double entropy = -std::numeric_limits<double>::infinity();  ///< max of sum nu F (should stay <= 0)
  double boundary = 0.0;
};

struct SimStats {
  std::uint64_t interactions = 0;
  std::size_t max_fronts = 0;
  std::size_t oversize_pieces = 0;  ///< in-pipe rarefaction pieces above 2 epsilon
  double max_piece = 0.0;
  std::vector<std::string> warnings;
};

class Simulation {
 public:
  explicit Simulation(const SimConfig& cfg);
  explicit Simulation(const LineConfig& cfg);

  double time() const { return now_; }
  std::optional<Event> peek() const;
  /// Process the next event. Throws ContractViolation if none is pending.
  const EventRecord& step();
  /// Process every event with time <= t, then move the clock to t.
  void advance_to(double t);

  Snapshot snapshot() const;
  /// Field at time t in [time(), next event time]; fronts extrapolated without processing events.
  Snapshot snapshot(double t) const;
  FunctionalSample functionals() const;

  const std::vector<EventRecord>& events() const { return events_; }
  const ResidualMaxima& residuals() const { return residuals_; }
  const SimStats& stats() const { return stats_; }
  const FunctionalParams& params() const { return params_; }
  const PressureLaw& law() const { return law_; }
  std::size_t n_fronts() const;
  std::uint64_t event_count() const { return event_count_; }

 private:
  enum class End { junction, feedback, open };
  struct Pipe {
    double x_lo = 0.0;
    double x_hi = 1.0;
    End left = End::junction;
    End right = End::feedback;
    double gain = 0.0;
    GasState equilibrium;
    std::vector<GasState> cells;
    std::vector<WaveFront> fronts;
    std::optional<Event> next;
  };

  void initialize(const std::vector<PipeInitial>& initial);
  std::vector<WaveFront> make_wave(int pipe, double x, const GasState& left, const GasState& right, Family family,
                                   double sigma, bool split, std::vector<GasState>& chain);
  void junction_solve(const std::vector<GasState>& traces, EventRecord* rec);
  void boundary_solve(std::size_t p, EventRecord* rec);
  void refresh(std::size_t p);
  void refresh_all();
  void check_residuals();
  PipeSnapshot pipe_snapshot(std::size_t p, double t) const;
  void note_fronts();

  PressureLaw law_;
  NetworkConfig network_;
  bool has_junction_ = true;
  double epsilon_;
  std::uint64_t cap_;
  FunctionalParams params_;
  bool track_;
  bool full_rows_;
  bool record_;
  bool check_entropy_;
  CurveDomain domain_;
  std::vector<Pipe> pipes_;
  double now_ = 0.0;
  std::uint64_t next_id_ = 1;
  std::uint64_t event_count_ = 0;
  std::vector<EventRecord> events_;
  EventRecord last_;
  ResidualMaxima residuals_;
  SimStats stats_;
};

struct RunOptions {
  std::vector<double> snapshot_times;
  std::size_t n_samples = 101;  ///< uniform functional samples on [0, t_end]
};

struct SimulationTrace {
  std::vector<EventRecord> events;
  std::vector<FunctionalSample> samples;
  std::vector<Snapshot> snapshots;
  Snapshot final_state;
  FunctionalSample initial;  ///< J(0+) after the t = 0 Riemann problems
  ResidualMaxima residuals;
  SimStats stats;
  double t_end = 0.0;
  std::uint64_t n_events = 0;
};

SimulationTrace run(const SimConfig& cfg, const RunOptions& opts = {});
SimulationTrace run(const LineConfig& cfg, const RunOptions& opts = {});

/// Event jumps of a trace in the form consumed by verify_decay.
DecayInput decay_input(const SimulationTrace& trace);

}  // namespace wft
