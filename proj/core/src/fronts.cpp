#include "wft/fronts.hpp"

#include <algorithm>
#include <cmath>

#include "wft/errors.hpp"

namespace wft {
namespace {

// Breakpoints of one pipe clamped into its interval.
std::vector<double> breaks(const PipeSnapshot& p) {
  std::vector<double> x;
  x.reserve(p.fronts.size() + 2);
  x.push_back(p.x_lo);
  for (const WaveFront& f : p.fronts) x.push_back(std::clamp(f.x_ref, p.x_lo, p.x_hi));
  x.push_back(p.x_hi);
  // Roundoff can leave neighbouring fronts a few ulps out of order.
  for (std::size_t i = 1; i < x.size(); ++i) x[i] = std::max(x[i], x[i - 1]);
  return x;
}

}  // namespace

std::vector<Segment> segments(const Snapshot& snap) {
  std::vector<Segment> out;
  for (std::size_t p = 0; p < snap.pipes.size(); ++p) {
    const PipeSnapshot& pipe = snap.pipes[p];
    const auto x = breaks(pipe);
    for (std::size_t i = 0; i < pipe.cells.size(); ++i) {
      if (x[i + 1] > x[i]) out.push_back({static_cast<int>(p), x[i], x[i + 1], pipe.cells[i]});
    }
  }
  return out;
}

double l1_distance(const Snapshot& a, const Snapshot& b) {
  if (a.pipes.size() != b.pipes.size()) throw ContractViolation("l1_distance: pipe count mismatch");
  double total = 0.0;
  for (std::size_t p = 0; p < a.pipes.size(); ++p) {
    const auto xa = breaks(a.pipes[p]);
    const auto xb = breaks(b.pipes[p]);
    const auto& ca = a.pipes[p].cells;
    const auto& cb = b.pipes[p].cells;
    std::size_t i = 0;
    std::size_t j = 0;
    double x = std::max(xa.front(), xb.front());
    while (i < ca.size() && j < cb.size()) {
      const double end = std::min(xa[i + 1], xb[j + 1]);
      if (end > x) {
        total += (end - x) * (std::abs(ca[i].rho - cb[j].rho) + std::abs(ca[i].q - cb[j].q));
        x = end;
      }
      if (xa[i + 1] <= end) ++i;
      if (j < cb.size() && xb[j + 1] <= end) ++j;
    }
  }
  return total;
}

}  // namespace wft
