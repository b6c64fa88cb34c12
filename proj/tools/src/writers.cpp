#include "wft_cli/writers.hpp"

#include <algorithm>
#include <fstream>

#include <fmt/format.h>

#include "wft/errors.hpp"

namespace wft::cli {

namespace fs = std::filesystem;

namespace {

std::ofstream open(const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("--out", "cannot write '" + path.string() + "'");
  return out;
}

std::string waves(const std::vector<WaveRecord>& ws) {
  std::string s;
  for (const WaveRecord& w : ws) {
    if (!s.empty()) s += ';';
    s += fmt::format("{}:{}@{}", index(w.family) + 1, num(w.sigma), w.pipe);
  }
  return s;
}

double strength(const std::vector<WaveRecord>& ws) {
  double s = 0.0;
  for (const WaveRecord& w : ws) s += std::abs(w.sigma);
  return s;
}

std::string sample_row(double t, const std::string& kind, int pipe, const FunctionalSample& f, double dj) {
  return fmt::format("{},{},{},{},{},{},{},{},{},{},{},{}\n", num(t), kind, pipe, num(f.V), num(f.Q11), num(f.Q22),
                     num(f.Q12), num(f.J), num(f.TV), num(f.strength_sum), f.n_fronts, num(dj));
}

}  // namespace

std::string num(double x) { return fmt::format("{:.17g}", x); }

std::string snapshot_name(double t) { return fmt::format("snapshot_t{:.6f}.csv", t); }

void write_snapshot_csv(const fs::path& path, const Snapshot& snap) {
  std::ofstream out = open(path);
  out << kSnapshotHeader << '\n';
  for (const Segment& s : segments(snap)) {
    out << fmt::format("{},{},{},{},{}\n", s.pipe, num(s.x_left), num(s.x_right), num(s.state.rho), num(s.state.q));
  }
}

void write_functionals_csv(const fs::path& path, const SimulationTrace& trace, bool limits) {
  struct Row {
    double t;
    int order;  // samples before events at equal times
    std::size_t seq;
    std::string text;
  };
  std::vector<Row> rows;
  std::size_t seq = 0;
  for (const FunctionalSample& s : trace.samples) rows.push_back({s.t, 0, seq++, sample_row(s.t, "sample", -1, s, 0.0)});
  for (const EventRecord& e : trace.events) {
    const std::string kind = to_string(e.kind);
    if (limits) {
      rows.push_back({e.t, 1, seq++, sample_row(e.t, kind + "-", e.pipe, e.before, e.dJ)});
      rows.push_back({e.t, 1, seq++, sample_row(e.t, kind + "+", e.pipe, e.after, e.dJ)});
    } else {
      rows.push_back({e.t, 1, seq++, fmt::format("{},{},{},,,,,,,,,{}\n", num(e.t), kind, e.pipe, num(e.dJ))});
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const Row& a, const Row& b) {
    return std::tie(a.t, a.order, a.seq) < std::tie(b.t, b.order, b.seq);
  });
  std::ofstream out = open(path);
  out << kFunctionalsHeader << '\n';
  for (const Row& r : rows) out << r.text;
}

void write_events_csv(const fs::path& path, const std::vector<EventRecord>& events) {
  std::ofstream out = open(path);
  out << kEventsHeader << '\n';
  for (const EventRecord& e : events) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{},{}\n", e.index, num(e.t), to_string(e.kind), e.pipe, num(e.x),
                       num(e.gain), waves(e.incoming), waves(e.outgoing), num(strength(e.incoming)),
                       num(strength(e.outgoing)), num(e.dJ));
  }
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out = open(path);
  out << text;
}

void write_json(const fs::path& path, const nlohmann::json& doc) {
  std::ofstream out = open(path);
  out << doc.dump(2) << '\n';
}

void write_plot_script(const fs::path& path) {
  std::ofstream out = open(path);
  out << R"PY(#!/usr/bin/env python3
"""Plots the output of `wft run`. Usage: python3 plot.py [output_dir]"""
import csv
import glob
import os
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

root = sys.argv[1] if len(sys.argv) > 1 else os.path.dirname(os.path.abspath(__file__))

t, J, V, TV = [], [], [], []
with open(os.path.join(root, "functionals.csv")) as f:
    for row in csv.DictReader(f):
        if row["event_kind"] != "sample":
            continue
        t.append(float(row["t"]))
        J.append(float(row["J"]))
        V.append(float(row["V"]))
        TV.append(float(row["TV"]))

fig, ax = plt.subplots()
for label, ys in (("J", J), ("V", V), ("TV", TV)):
    pts = [(a, b) for a, b in zip(t, ys) if b > 0]
    if pts:
        ax.semilogy(*zip(*pts), label=label)
ax.set_xlabel("t")
ax.legend()
fig.savefig(os.path.join(root, "functionals.png"), dpi=150)

for path in sorted(glob.glob(os.path.join(root, "snapshot_t*.csv"))):
    pipes = {}
    with open(path) as f:
        for row in csv.DictReader(f):
            p = pipes.setdefault(int(row["pipe"]), ([], [], []))
            p[0].extend([float(row["x_left"]), float(row["x_right"])])
            p[1].extend([float(row["rho"])] * 2)
            p[2].extend([float(row["q"])] * 2)
    fig, (a1, a2) = plt.subplots(2, 1, sharex=True)
    for k, (xs, rho, q) in sorted(pipes.items()):
        a1.plot(xs, rho, label=f"pipe {k}")
        a2.plot(xs, q)
    a1.set_ylabel("rho")
    a2.set_ylabel("q")
    a2.set_xlabel("x")
    a1.legend()
    fig.savefig(path[:-4] + ".png", dpi=150)
    plt.close(fig)
)PY";
}

}  // namespace wft::cli
