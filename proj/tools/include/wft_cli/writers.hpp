#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "wft/front_tracking.hpp"

namespace wft::cli {

/// 17 significant digits.
std::string num(double x);

inline constexpr const char* kSnapshotHeader = "pipe,x_left,x_right,rho,q";
inline constexpr const char* kFunctionalsHeader = "t,event_kind,pipe,V,Q11,Q22,Q12,J,TV,strength_sum,n_fronts,dJ";
inline constexpr const char* kEventsHeader = "index,t,kind,pipe,x,gain,incoming,outgoing,in_strength,out_strength,dJ";

void write_snapshot_csv(const std::filesystem::path& path, const Snapshot& snap);
/// Sample rows (event_kind "sample", pipe -1) merged in time order with event rows. With
/// `limits`, each event gives a "<kind>-" row (left limit) and a "<kind>+" row (right limit);
/// otherwise one "<kind>" row carrying only t, pipe and dJ.
void write_functionals_csv(const std::filesystem::path& path, const SimulationTrace& trace, bool limits);
void write_events_csv(const std::filesystem::path& path, const std::vector<EventRecord>& events);
void write_text(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const nlohmann::json& doc);
void write_plot_script(const std::filesystem::path& path);

/// "snapshot_t0.500000.csv"
std::string snapshot_name(double t);

}  // namespace wft::cli
