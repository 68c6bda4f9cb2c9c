#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "routeflow/layout.hpp"

namespace routeflow {

struct Keypoint {
    Point2 position;
    double time = 0.0;
    // Shared timing handle: node id for keypoints at hotspots/sources/sinks,
    // otherwise an edge-interval tag. Keypoints with equal sync keys move
    // together during speed adjustment, which keeps groups synchronized.
    std::string sync_key;
    std::string edge_id; // edge of the segment starting at this keypoint ("" on the last)
    bool at_node = false;
};

struct KeyframedPath {
    std::string object_id;
    std::vector<Keypoint> keypoints; // times nondecreasing
};

struct FrameSet {
    int frame_count = 0;
    double radius = 9.0 / 1250.0;
    std::vector<double> times;                    // uniform grid over [0,1]
    std::vector<std::string> object_ids;          // column order
    std::vector<std::vector<Point2>> positions;   // [frame][object]
};

struct TimingParams {
    int frame_count = 240;
    bool easing = true;
    int speed_max_iters = 1000;
    double adjust_fraction = 0.1; // keypoint shift per iteration, fraction of segment dt
    std::uint64_t seed = 42;
};

struct ScanlineResult {
    std::map<std::string, double> node_times;
    std::vector<std::string> warnings;
};

struct SpeedRatioResult {
    double initial_ratio = 1.0;
    double achieved_ratio = 1.0;
    int iterations = 0;
    bool converged = true;
};

// Projects every node onto the scan direction (mean end minus mean start of
// all journeys) and min-max normalizes to [0,1]. Degenerate direction falls
// back to (1,0); zero projection range maps every node to 0.5. Both are
// reported as warnings.
ScanlineResult scanline_times(const HotspotGraph& graph, const LayoutPlan& plan);

// Builds per-object keyframed paths: node keypoints at the scanline times and
// intermediate keypoints along each edge geometry, timed by arc length.
std::vector<KeyframedPath> build_keyframed_paths(const HotspotGraph& graph,
                                                 const ScanlineResult& times);

// Iteratively retimes keypoints until the fastest segment is below twice the
// slowest (dwell segments excluded), drawing delay-vs-advance from a seeded
// RNG. Keypoints sharing a sync key move together. Iterations that would
// worsen the ratio are rolled back; times are re-normalized to [0,1] at the
// end. Never throws: on iteration exhaustion the best effort is returned.
SpeedRatioResult enforce_speed_ratio(std::vector<KeyframedPath>& paths, const TimingParams& params);

// Cubic smoothstep used for slow-in/slow-out.
inline double ease_smoothstep(double s) { return s * s * (3.0 - 2.0 * s); }

// Samples object positions on a uniform time grid, interpolating within
// keypoint segments (eased when enabled) and adding the per-edge layout
// offset. Objects are static before their start and after their end.
FrameSet sample_frames(const std::vector<KeyframedPath>& paths, const LayoutPlan& plan,
                       int frame_count, bool easing, double radius);

} // namespace routeflow
