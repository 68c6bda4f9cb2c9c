#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "routeflow/compatibility.hpp"
#include "routeflow/model.hpp"

namespace routeflow {

struct BundlingParams {
    double eta = 0.05;                   // attraction range (scene fraction)
    double alpha = 5.0;                  // spring weight
    double beta = 1.0;                   // anchor weight
    int k = 5;                           // compatibility neighbors
    int iterations = 300;                // force iterations per level
    double step = 0.002;                 // integration step size
    double level_attraction_factor = 10; // attraction multiplier per level
    int max_levels = 4;
    double merge_delta = 0.02;           // bundled-portion distance threshold
    int min_run = 3;                     // minimum bundled-run length (control points)
    int control_points = 32;             // C
};

struct IndexRange {
    int lo = 0; // inclusive
    int hi = 0; // inclusive
    int length() const { return hi - lo + 1; }
};

// One group of trajectories that became geometrically shared over an index
// range, together with the level that created it.
struct MergeEvent {
    int level = 0;
    std::set<std::string> members; // original trajectory ids
    IndexRange range;
};

struct LevelResult {
    int level = 0;
    std::vector<ControlPolyline> polylines; // one representative per unit
    std::map<std::string, std::set<std::string>> membership; // unit id -> original ids
    std::map<std::string, std::vector<IndexRange>> merged_portions; // ranges merged at this level
    std::vector<MergeEvent> events; // merges performed at this level
};

struct BundleHierarchy {
    std::vector<LevelResult> levels;
    std::map<std::string, std::vector<Point2>> final_paths; // original id -> bundled polyline
    std::map<std::string, std::vector<Point2>> anchors;     // original id -> resampled input
    std::vector<MergeEvent> events;                         // all levels, in creation order
    double merge_delta = 0.02; // carried for downstream hotspot unification
    int min_run = 3;
};

// The three control-point forces. See the unit tests for the hand-derived
// values they reproduce.
Point2 attraction_force(const Point2& u_i, const Point2& v_j, int cv, double eta);
Point2 spring_force(const Point2& u_prev, const Point2& u_i, const Point2& u_next, int cu);
Point2 anchor_force(const Point2& u_i, const Point2& u_anchor);

// Resultant force on every control point of polylines[index]: level-scaled
// attraction over the top-k neighbors plus weighted spring and anchor terms.
// Endpoints receive zero force.
std::vector<Point2> resultant_force(const std::vector<ControlPolyline>& polylines, int index,
                                    const CompatibilityIndex& compat, const BundlingParams& params,
                                    double level_factor);

// One bundling level over the given polylines: runs the synchronous force
// loop, then detects and merges bundled portions.
LevelResult bundle_level(const std::vector<ControlPolyline>& polylines, const BundlingParams& params,
                         int level);

// The full bottom-up hierarchy. Level 1 runs on the resampled input with
// attraction factor 1; each later level reuses the merged polylines with the
// factor multiplied by level_attraction_factor. Stops when a level merges
// nothing, one unit remains, or max_levels is reached.
BundleHierarchy bundle_hierarchy(const TrajectorySet& set, const BundlingParams& params);

} // namespace routeflow
