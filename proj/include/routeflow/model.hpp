#pragma once

#include <string>
#include <vector>

#include "routeflow/geometry.hpp"

namespace routeflow {

// One object's movement as an ordered polyline. No timestamps: point order is
// the only temporal information in the input.
struct Trajectory {
    std::string id;
    std::vector<Point2> points; // length >= 2, no consecutive duplicates
    int weight = 1;             // number of merged source trajectories
};

// Bounding box of the raw input, kept so normalized coordinates can be mapped
// back to data space.
struct SceneBounds {
    double min_x = 0.0, min_y = 0.0;
    double max_x = 1.0, max_y = 1.0;
    double scale = 1.0;    // normalized = (raw - min) * scale + offset
    double offset_x = 0.0;
    double offset_y = 0.0;
};

struct TrajectorySet {
    std::vector<Trajectory> trajectories;
    SceneBounds scene_bounds;
    bool normalized = false;
};

// Fixed-count resampled trajectory used as force-simulation state. `anchor`
// keeps the initial resampled positions and never changes after construction.
struct ControlPolyline {
    std::string trajectory_id;
    std::vector<Point2> current;
    std::vector<Point2> anchor;
    bool degenerate = false; // input had zero total length
};

struct PreprocessConfig {
    double max_step = 0.2;       // noise filter: max allowed step length (scene fraction)
    double simplify_eps = 0.002; // polyline simplification tolerance
    double merge_eps = 0.01;     // DTW threshold for merging near-duplicates
};

// Drops consecutive duplicate points in place.
void dedupe_points(std::vector<Point2>& pts);

// Affinely maps all points into [0,1]^2 preserving aspect ratio: the longer
// axis spans [0,1], the shorter is centered. Records the map in scene_bounds.
TrajectorySet normalize(const TrajectorySet& set);

// C points equally spaced by arc length; first and last input points are kept
// exactly. A zero-length trajectory yields C copies of its single location,
// flagged degenerate.
ControlPolyline resample(const Trajectory& traj, int control_points);

// Noise filtering, polyline compression, and near-duplicate merging, in that
// order. Total: never fails. Expects a normalized set.
TrajectorySet preprocess(const TrajectorySet& set, const PreprocessConfig& cfg, int control_points);

// Douglas-Peucker simplification keeping endpoints.
std::vector<Point2> simplify_polyline(const std::vector<Point2>& pts, double eps);

} // namespace routeflow
