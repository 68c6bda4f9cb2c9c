#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "routeflow/metrics.hpp"
#include "routeflow/model.hpp"
#include "routeflow/synthgen.hpp"
#include "routeflow/timing.hpp"

namespace routeflow {

struct TrajectoryFile {
    TrajectorySet set;
    std::optional<std::vector<Point2>> truth_trend;
    std::optional<std::vector<TruthHotspot>> truth_hotspots;
};

struct FramesFile {
    FrameSet frames;
    GroupAssignment groups;
};

// Trajectory JSON:
//   {"normalized": false,
//    "trajectories": [{"id": "t00", "points": [[x, y], ...], "weight": 1}, ...],
//    "truth": {...}}                                    (truth optional)
TrajectoryFile load_trajectories(const std::string& path);
std::string trajectories_to_json(const TrajectoryFile& file);
void save_trajectories(const TrajectoryFile& file, const std::string& path);

// Frames JSON:
//   {"radius": r, "frame_count": N,
//    "frames": [{"t": 0.0, "objects": {"id": [x, y], ...}}, ...],
//    "groups": [{"members": [...], "first_frame": i, "last_frame": j,
//                "hotspot_times": [...]}, ...]}
FramesFile load_frames(const std::string& path);
std::string frames_to_json(const FramesFile& file);
void save_frames(const FramesFile& file, const std::string& path);

std::string report_to_json(const MetricsReport& report, const std::string& dataset_id,
                           const std::string& params_hash, std::uint64_t seed);

// One SVG per frame, unit viewBox, one circle per object.
void export_svg(const FramesFile& file, const std::string& out_dir);

// Single self-contained HTML player embedding the frames; no external fetches.
void export_html(const FramesFile& file, const std::string& out_path);

// Atomic write: temp file in the target directory, then rename.
void write_file_atomic(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

} // namespace routeflow
