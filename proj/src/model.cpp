#include "routeflow/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "routeflow/dtw.hpp"
#include "routeflow/error.hpp"

namespace routeflow {

void dedupe_points(std::vector<Point2>& pts) {
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
}

TrajectorySet normalize(const TrajectorySet& set) {
    if (set.trajectories.empty()) throw Error(ErrorCode::EmptyInput, "normalize: no trajectories");

    double min_x = std::numeric_limits<double>::infinity();
    double min_y = std::numeric_limits<double>::infinity();
    double max_x = -std::numeric_limits<double>::infinity();
    double max_y = -std::numeric_limits<double>::infinity();
    for (const auto& t : set.trajectories) {
        for (const auto& p : t.points) {
            min_x = std::min(min_x, p.x);
            max_x = std::max(max_x, p.x);
            min_y = std::min(min_y, p.y);
            max_y = std::max(max_y, p.y);
        }
    }
    double w = max_x - min_x;
    double h = max_y - min_y;
    if (w <= 0.0 && h <= 0.0)
        throw Error(ErrorCode::DegenerateExtent, "normalize: bounding box has zero extent");

    // Longer axis spans [0,1], shorter axis centered.
    double scale = 1.0 / std::max(w, h);
    double off_x = (1.0 - w * scale) / 2.0;
    double off_y = (1.0 - h * scale) / 2.0;

    TrajectorySet out = set;
    out.scene_bounds = {min_x, min_y, max_x, max_y, scale, off_x, off_y};
    out.normalized = true;
    for (auto& t : out.trajectories) {
        for (auto& p : t.points) {
            p.x = (p.x - min_x) * scale + off_x;
            p.y = (p.y - min_y) * scale + off_y;
        }
        dedupe_points(t.points);
    }
    return out;
}

ControlPolyline resample(const Trajectory& traj, int control_points) {
    ControlPolyline out;
    out.trajectory_id = traj.id;
    const auto& pts = traj.points;
    const int c = control_points;

    double total = polyline_length(pts);
    if (total <= 0.0 || pts.size() < 2) {
        out.degenerate = true;
        Point2 loc = pts.empty() ? Point2{} : pts.front();
        out.current.assign(static_cast<std::size_t>(c), loc);
        out.anchor = out.current;
        return out;
    }

    out.current.reserve(static_cast<std::size_t>(c));
    out.current.push_back(pts.front());
    std::size_t seg = 0;
    double seg_start = 0.0; // cumulative length at pts[seg]
    double seg_len = dist(pts[0], pts[1]);
    for (int i = 1; i < c - 1; ++i) {
        double target = total * static_cast<double>(i) / static_cast<double>(c - 1);
        while (seg + 2 < pts.size() && seg_start + seg_len < target) {
            seg_start += seg_len;
            ++seg;
            seg_len = dist(pts[seg], pts[seg + 1]);
        }
        double t = seg_len > 0.0 ? (target - seg_start) / seg_len : 0.0;
        out.current.push_back(lerp(pts[seg], pts[seg + 1], std::clamp(t, 0.0, 1.0)));
    }
    out.current.push_back(pts.back());
    out.anchor = out.current;
    return out;
}

namespace {

// Recursive Douglas-Peucker over [lo, hi], marking kept indices.
void dp_mark(const std::vector<Point2>& pts, std::size_t lo, std::size_t hi, double eps,
             std::vector<char>& keep) {
    if (hi <= lo + 1) return;
    double worst = -1.0;
    std::size_t worst_i = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        double d = point_segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > worst) {
            worst = d;
            worst_i = i;
        }
    }
    if (worst > eps) {
        keep[worst_i] = 1;
        dp_mark(pts, lo, worst_i, eps, keep);
        dp_mark(pts, worst_i, hi, eps, keep);
    }
}

std::vector<Point2> drop_spikes(const std::vector<Point2>& pts, double max_step) {
    if (pts.size() <= 2) return pts;
    std::vector<Point2> out;
    out.reserve(pts.size());
    out.push_back(pts.front());
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        if (dist(out.back(), pts[i]) <= max_step) out.push_back(pts[i]);
    }
    out.push_back(pts.back());
    return out;
}

} // namespace

std::vector<Point2> simplify_polyline(const std::vector<Point2>& pts, double eps) {
    if (pts.size() <= 2) return pts;
    std::vector<char> keep(pts.size(), 0);
    keep.front() = keep.back() = 1;
    dp_mark(pts, 0, pts.size() - 1, eps, keep);
    std::vector<Point2> out;
    out.reserve(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i)
        if (keep[i]) out.push_back(pts[i]);
    return out;
}

TrajectorySet preprocess(const TrajectorySet& set, const PreprocessConfig& cfg, int control_points) {
    TrajectorySet out = set;

    for (auto& t : out.trajectories) {
        t.points = drop_spikes(t.points, cfg.max_step);
        t.points = simplify_polyline(t.points, cfg.simplify_eps);
        dedupe_points(t.points);
        if (t.points.size() < 2) t.points.push_back(t.points.front()); // keep length >= 2
    }

    // Merge near-duplicates: greedy in ascending id order, resampling both
    // sides to C points and taking the weight-weighted pointwise mean.
    std::sort(out.trajectories.begin(), out.trajectories.end(),
              [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });

    std::vector<Trajectory> merged;
    std::vector<char> used(out.trajectories.size(), 0);
    for (std::size_t i = 0; i < out.trajectories.size(); ++i) {
        if (used[i]) continue;
        Trajectory base = out.trajectories[i];
        ControlPolyline base_poly = resample(base, control_points);
        for (std::size_t j = i + 1; j < out.trajectories.size(); ++j) {
            if (used[j]) continue;
            ControlPolyline other = resample(out.trajectories[j], control_points);
            double d = dtw_bounded(base_poly.current, other.current, cfg.merge_eps);
            if (d < cfg.merge_eps) {
                double wa = static_cast<double>(base.weight);
                double wb = static_cast<double>(out.trajectories[j].weight);
                for (std::size_t p = 0; p < base_poly.current.size(); ++p) {
                    base_poly.current[p] =
                        (base_poly.current[p] * wa + other.current[p] * wb) * (1.0 / (wa + wb));
                }
                base.weight += out.trajectories[j].weight;
                base.points = base_poly.current;
                dedupe_points(base.points);
                if (base.points.size() < 2) base.points.push_back(base_poly.current.back());
                used[j] = 1;
            }
        }
        merged.push_back(std::move(base));
    }
    out.trajectories = std::move(merged);
    return out;
}

} // namespace routeflow
