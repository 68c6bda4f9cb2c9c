#include "routeflow/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "routeflow/dtw.hpp"
#include "routeflow/error.hpp"
#include "routeflow/kernels.hpp"

namespace routeflow {

int overlap(const Point2& p, const Point2& q, double radius) {
    return dist(p, q) < 2.0 * radius - 1e-9 ? 1 : 0;
}

double occlusion_overall(const FrameSet& frames, double radius) {
    const std::size_t n = frames.object_ids.size();
    if (n < 2) throw Error(ErrorCode::EmptyInput, "occlusion_overall: fewer than 2 objects");

    std::vector<long> counts = overlap_counts_per_frame(frames.positions, radius);
    const double pairs = static_cast<double>(n) * static_cast<double>(n - 1);
    double sum = 0.0;
    for (long c : counts) sum += static_cast<double>(c) / pairs;
    return sum / static_cast<double>(frames.frame_count);
}

namespace {

std::vector<std::size_t> member_columns(const FrameSet& frames, const Group& group) {
    std::vector<std::size_t> cols;
    for (std::size_t i = 0; i < frames.object_ids.size(); ++i)
        if (group.members.count(frames.object_ids[i])) cols.push_back(i);
    return cols;
}

} // namespace

double occlusion_within(const FrameSet& frames, const GroupAssignment& groups, double radius,
                        std::vector<std::string>* warnings) {
    double sum = 0.0;
    int counted = 0;
    for (const auto& group : groups.groups) {
        if (group.members.size() < 2) continue;
        auto cols = member_columns(frames, group);
        double g = static_cast<double>(cols.size());
        double group_sum = 0.0;
        int frames_in = 0;
        for (int t = group.first_frame; t <= group.last_frame && t < frames.frame_count; ++t) {
            const auto& row = frames.positions[static_cast<std::size_t>(t)];
            long count = 0;
            for (std::size_t a = 0; a < cols.size(); ++a)
                for (std::size_t b = a + 1; b < cols.size(); ++b)
                    count += 2L * overlap(row[cols[a]], row[cols[b]], radius);
            group_sum += static_cast<double>(count) / (g * (g - 1.0));
            ++frames_in;
        }
        if (frames_in > 0) {
            sum += group_sum / static_cast<double>(frames_in);
            ++counted;
        }
    }
    if (counted == 0) {
        if (warnings) warnings->push_back("occlusion_within: all groups singleton, reporting 0");
        return 0.0;
    }
    return sum / static_cast<double>(counted);
}

double deformation(const FrameSet& frames, const GroupAssignment& groups) {
    double sum = 0.0;
    int counted = 0;
    for (const auto& group : groups.groups) {
        if (group.members.size() < 2) continue;
        auto cols = member_columns(frames, group);
        double g = static_cast<double>(cols.size());
        double group_sum = 0.0;
        int frames_in = 0;
        for (int t = group.first_frame; t <= group.last_frame && t < frames.frame_count; ++t) {
            ++frames_in;
            if (t == 0) continue; // needs a predecessor frame
            const auto& cur = frames.positions[static_cast<std::size_t>(t)];
            const auto& prev = frames.positions[static_cast<std::size_t>(t - 1)];
            double change = 0.0;
            for (std::size_t a = 0; a < cols.size(); ++a)
                for (std::size_t b = a + 1; b < cols.size(); ++b)
                    change += 2.0 * std::abs(dist(cur[cols[a]], cur[cols[b]]) -
                                             dist(prev[cols[a]], prev[cols[b]]));
            group_sum += change / (g * (g - 1.0));
        }
        if (frames_in > 0) {
            sum += group_sum / static_cast<double>(frames_in);
            ++counted;
        }
    }
    return counted > 0 ? sum / static_cast<double>(counted) : 0.0;
}

double dispersion(const FrameSet& frames, const GroupAssignment& groups) {
    double sum = 0.0;
    int counted = 0;
    for (const auto& group : groups.groups) {
        if (group.members.size() < 2) continue;
        auto cols = member_columns(frames, group);
        double g = static_cast<double>(cols.size());
        double group_sum = 0.0;
        int frames_in = 0;
        for (int t = group.first_frame; t <= group.last_frame && t < frames.frame_count; ++t) {
            const auto& row = frames.positions[static_cast<std::size_t>(t)];
            double d = 0.0;
            for (std::size_t a = 0; a < cols.size(); ++a)
                for (std::size_t b = a + 1; b < cols.size(); ++b) d += 2.0 * dist(row[cols[a]], row[cols[b]]);
            group_sum += d / (g * (g - 1.0));
            ++frames_in;
        }
        if (frames_in > 0) {
            sum += group_sum / static_cast<double>(frames_in);
            ++counted;
        }
    }
    return counted > 0 ? sum / static_cast<double>(counted) : 0.0;
}

double deviation(const TrajectorySet& original,
                 const std::map<std::string, std::vector<Point2>>& bundled) {
    if (original.trajectories.size() != bundled.size())
        throw Error(ErrorCode::IdMismatch, "deviation: trajectory counts differ");
    double sum = 0.0;
    for (const auto& t : original.trajectories) {
        auto it = bundled.find(t.id);
        if (it == bundled.end()) throw Error(ErrorCode::IdMismatch, "deviation: missing id " + t.id);
        sum += dtw(t.points, it->second);
    }
    return sum / static_cast<double>(original.trajectories.size());
}

namespace {

int to_cell(double v, int resolution) {
    int c = static_cast<int>(std::floor(v * resolution));
    return std::clamp(c, 0, resolution - 1);
}

// Bresenham over grid cells; both endpoints included.
void stroke_line(int x0, int y0, int x1, int y1, std::vector<char>& grid, int resolution) {
    int dx = std::abs(x1 - x0), sx = x0 < x1 ? 1 : -1;
    int dy = -std::abs(y1 - y0), sy = y0 < y1 ? 1 : -1;
    int err = dx + dy;
    for (;;) {
        grid[static_cast<std::size_t>(y0) * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(x0)] = 1;
        if (x0 == x1 && y0 == y1) break;
        int e2 = 2 * err;
        if (e2 >= dy) {
            err += dy;
            x0 += sx;
        }
        if (e2 <= dx) {
            err += dx;
            y0 += sy;
        }
    }
}

void stroke_path(const std::vector<Point2>& path, std::vector<char>& grid, int resolution) {
    if (path.empty()) return;
    int px = to_cell(path[0].x, resolution);
    int py = to_cell(path[0].y, resolution);
    if (path.size() == 1) {
        grid[static_cast<std::size_t>(py) * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(px)] = 1;
        return;
    }
    for (std::size_t i = 1; i < path.size(); ++i) {
        int cx = to_cell(path[i].x, resolution);
        int cy = to_cell(path[i].y, resolution);
        stroke_line(px, py, cx, cy, grid, resolution);
        px = cx;
        py = cy;
    }
}

} // namespace

std::vector<std::pair<int, int>> raster_cells(const std::vector<Point2>& path, int resolution) {
    std::vector<char> grid(static_cast<std::size_t>(resolution) * static_cast<std::size_t>(resolution), 0);
    stroke_path(path, grid, resolution);
    std::vector<std::pair<int, int>> cells;
    for (int y = 0; y < resolution; ++y)
        for (int x = 0; x < resolution; ++x)
            if (grid[static_cast<std::size_t>(y) * static_cast<std::size_t>(resolution) + static_cast<std::size_t>(x)])
                cells.emplace_back(x, y);
    return cells;
}

long ink(const std::vector<std::vector<Point2>>& paths, const RasterConfig& raster) {
    const int r = raster.resolution;
    std::vector<char> grid(static_cast<std::size_t>(r) * static_cast<std::size_t>(r), 0);
    for (const auto& path : paths) stroke_path(path, grid, r);
    long count = 0;
    for (char c : grid) count += c;
    return count;
}

double ink_ratio(const TrajectorySet& original,
                 const std::map<std::string, std::vector<Point2>>& bundled,
                 const RasterConfig& raster) {
    std::vector<std::vector<Point2>> orig_paths, bundled_paths;
    for (const auto& t : original.trajectories) orig_paths.push_back(t.points);
    for (const auto& [_, path] : bundled) bundled_paths.push_back(path);

    long orig_ink = ink(orig_paths, raster);
    if (orig_ink == 0) throw Error(ErrorCode::DegenerateInk, "ink_ratio: original paths cover no cells");
    return static_cast<double>(ink(bundled_paths, raster)) / static_cast<double>(orig_ink);
}

} // namespace routeflow
