#pragma once

#include <cstdint>
#include <vector>

#include "wft/eos.hpp"
#include "wft/lax_curves.hpp"

namespace wft {

enum class FrontKind { shock, rarefaction };

/// A straight-line discontinuity: position(t) = x_ref + speed * (t - t_ref).
struct WaveFront {
  std::uint64_t id = 0;
  int pipe = 0;
  Family family = Family::first;
  double x_ref = 0.0;
  double t_ref = 0.0;
  double speed = 0.0;
  GasState left;
  GasState right;
  double sigma = 0.0;
  FrontKind kind = FrontKind::shock;

  double position(double t) const { return x_ref + speed * (t - t_ref); }
};

/// Piecewise-constant field of one pipe at a fixed time.
/// cells.size() == fronts.size() + 1; front i separates cells i and i+1.
/// Fronts are re-anchored so that x_ref is the position at the snapshot time.
struct PipeSnapshot {
  double x_lo = 0.0;
  double x_hi = 1.0;
  std::vector<GasState> cells;
  std::vector<WaveFront> fronts;
};

struct Snapshot {
  double t = 0.0;
  std::vector<PipeSnapshot> pipes;
};

/// One row of the snapshot CSV: constant state on [x_left, x_right) of a pipe.
struct Segment {
  int pipe = 0;
  double x_left = 0.0;
  double x_right = 0.0;
  GasState state;
};

/// Rows sorted by (pipe, x_left); zero-length pieces are dropped.
std::vector<Segment> segments(const Snapshot& snap);

/// sum over pipes of int |rho - rho~| + |q - q~| dx. Both snapshots must share pipe intervals.
double l1_distance(const Snapshot& a, const Snapshot& b);

}  // namespace wft
