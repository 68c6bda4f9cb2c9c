#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "routeflow/model.hpp"
#include "routeflow/timing.hpp"

namespace routeflow {

struct Group {
    std::set<std::string> members;
    int first_frame = 0;
    int last_frame = 0; // inclusive
    std::vector<double> hotspot_times; // shared node times, for interval checks
};

struct GroupAssignment {
    std::vector<Group> groups;
};

struct RasterConfig {
    int resolution = 1000;
};

struct MetricsReport {
    std::optional<double> occlusion_overall;
    std::optional<double> occlusion_within;
    std::optional<double> deformation;
    std::optional<double> dispersion;
    std::optional<double> deviation;
    std::optional<double> ink_ratio;
    std::vector<std::string> warnings;
};

// 1 iff the discs at p and q penetrate: ||p-q|| < 2*radius - 1e-9. Tangency
// does not count as overlap.
int overlap(const Point2& p, const Point2& q, double radius);

// Mean over frames of the ordered-pair overlap fraction across all objects.
double occlusion_overall(const FrameSet& frames, double radius);

// Mean over groups of the mean overlap fraction across each group's active
// frames. Singleton groups contribute nothing and are excluded from the mean.
double occlusion_within(const FrameSet& frames, const GroupAssignment& groups, double radius,
                        std::vector<std::string>* warnings = nullptr);

// Mean over groups of the per-frame mean absolute change of within-group
// pairwise distances, each group averaged by |T_G|.
double deformation(const FrameSet& frames, const GroupAssignment& groups);

// Mean over groups of the mean within-group pairwise distance.
double dispersion(const FrameSet& frames, const GroupAssignment& groups);

// Mean DTW between each original trajectory and its bundled path. Throws
// IdMismatch when the id sets differ.
double deviation(const TrajectorySet& original,
                 const std::map<std::string, std::vector<Point2>>& bundled);

// Number of grid cells touched when stroking every path onto an RxR grid
// with one-cell-wide lines.
long ink(const std::vector<std::vector<Point2>>& paths, const RasterConfig& raster);

// Ink(bundled) / Ink(original). Throws DegenerateInk when the original set
// covers no cells.
double ink_ratio(const TrajectorySet& original,
                 const std::map<std::string, std::vector<Point2>>& bundled,
                 const RasterConfig& raster);

// Grid cells covered by one polyline stroke; exposed for the rasterizer tests.
std::vector<std::pair<int, int>> raster_cells(const std::vector<Point2>& path, int resolution);

} // namespace routeflow
