#include "routeflow/timing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "routeflow/error.hpp"

namespace routeflow {

namespace {

Point2 scan_direction(const HotspotGraph& graph, std::vector<std::string>* warnings) {
    Point2 start_mean, end_mean;
    int n = 0;
    for (const auto& node : graph.nodes) {
        if (node.role == NodeRole::Source) {
            start_mean += node.position;
            ++n;
        } else if (node.role == NodeRole::Sink) {
            end_mean += node.position;
        }
    }
    Point2 d = n > 0 ? end_mean * (1.0 / n) - start_mean * (1.0 / n) : Point2{1.0, 0.0};
    if (norm(d) < 1e-12) {
        if (warnings) warnings->push_back("scanline: start and end means coincide, falling back to (1,0)");
        return {1.0, 0.0};
    }
    return normalized(d);
}

} // namespace

ScanlineResult scanline_times(const HotspotGraph& graph, const LayoutPlan&) {
    if (graph.nodes.empty()) throw Error(ErrorCode::EmptyInput, "scanline_times: empty graph");

    ScanlineResult result;
    Point2 d = scan_direction(graph, &result.warnings);

    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& node : graph.nodes) {
        double t = dot(node.position, d);
        result.node_times[node.id] = t;
        lo = std::min(lo, t);
        hi = std::max(hi, t);
    }
    if (hi - lo < 1e-12) {
        result.warnings.push_back("scanline: all nodes project equally, assigning 0.5");
        for (auto& [_, t] : result.node_times) t = 0.5;
    } else {
        for (auto& [_, t] : result.node_times) t = (t - lo) / (hi - lo);
    }

    // Journeys must not run backward in time: raise any node that projects
    // before its predecessor along some object's path. The small gap keeps
    // repaired legs from degenerating into zero-duration jumps, which the
    // speed adjustment could never stretch.
    const double gap = 0.005;
    for (int pass = 0; pass < static_cast<int>(graph.nodes.size()); ++pass) {
        bool changed = false;
        for (const auto& [_, nodes] : graph.object_nodes) {
            for (std::size_t i = 1; i < nodes.size(); ++i) {
                double prev = result.node_times[nodes[i - 1]];
                double& cur = result.node_times[nodes[i]];
                if (cur < prev) {
                    cur = prev + gap;
                    changed = true;
                }
            }
        }
        if (!changed) break;
    }
    return result;
}

std::vector<KeyframedPath> build_keyframed_paths(const HotspotGraph& graph,
                                                 const ScanlineResult& times) {
    std::vector<KeyframedPath> paths;
    for (const auto& [object_id, nodes] : graph.object_nodes) {
        const auto& edge_ids = graph.object_edges.at(object_id);
        KeyframedPath path;
        path.object_id = object_id;

        // Every edge contributes its full geometry, start and end keypoint
        // included. Consecutive edges meet in two keypoints that share the
        // node time: the switch between edge frames happens at that instant,
        // never inside a segment, so co-travelers stay a rigid formation for
        // the whole traversal.
        for (std::size_t s = 0; s < edge_ids.size(); ++s) {
            const GraphEdge* edge = graph.find_edge(edge_ids[s]);
            const auto& geom = edge->geometry;
            double t0 = times.node_times.at(nodes[s]);
            double t1 = times.node_times.at(nodes[s + 1]);

            Keypoint head;
            head.position = geom.front();
            head.time = t0;
            head.sync_key = nodes[s];
            head.edge_id = edge->id;
            head.at_node = true;
            path.keypoints.push_back(head);

            if (geom.size() > 2) {
                double total = polyline_length(geom);
                double walked = 0.0;
                for (std::size_t g = 1; g + 1 < geom.size(); ++g) {
                    walked += dist(geom[g - 1], geom[g]);
                    double frac = total > 0.0 ? walked / total : 0.0;
                    Keypoint kp;
                    kp.position = geom[g];
                    kp.time = t0 + (t1 - t0) * frac;
                    kp.sync_key = edge->id + "#" + std::to_string(g);
                    kp.edge_id = edge->id;
                    path.keypoints.push_back(kp);
                }
            }

            Keypoint tail;
            tail.position = geom.back();
            tail.time = t1;
            tail.sync_key = nodes[s + 1];
            tail.edge_id = edge->id;
            tail.at_node = true;
            path.keypoints.push_back(tail);
        }

        paths.push_back(std::move(path));
    }
    std::sort(paths.begin(), paths.end(),
              [](const KeyframedPath& a, const KeyframedPath& b) { return a.object_id < b.object_id; });
    return paths;
}

namespace {

constexpr double kDwell = 1e-9;

// Speeds are defined between consecutive timing anchors: the hotspot, source
// and sink keypoints. Intermediate keypoints carry the edge geometry; their
// times are derived per arc length, which makes the speed inside one leg
// uniform, so the leg is the natural unit of the constraint.
std::vector<std::size_t> anchor_indices(const KeyframedPath& path) {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < path.keypoints.size(); ++i)
        if (path.keypoints[i].at_node) out.push_back(i);
    if (out.empty()) {
        for (std::size_t i = 0; i < path.keypoints.size(); ++i) out.push_back(i);
    }
    return out;
}

double arc_between(const KeyframedPath& path, std::size_t a, std::size_t b) {
    double arc = 0.0;
    for (std::size_t i = a; i < b; ++i)
        arc += dist(path.keypoints[i].position, path.keypoints[i + 1].position);
    return arc;
}

// Re-derives the intermediate keypoint times from the anchor times.
void retime_intermediates(KeyframedPath& path) {
    auto anchors = anchor_indices(path);
    for (std::size_t s = 0; s + 1 < anchors.size(); ++s) {
        std::size_t a = anchors[s], b = anchors[s + 1];
        if (b <= a + 1) continue;
        double total = arc_between(path, a, b);
        double t0 = path.keypoints[a].time;
        double t1 = path.keypoints[b].time;
        double walked = 0.0;
        for (std::size_t i = a + 1; i < b; ++i) {
            walked += dist(path.keypoints[i - 1].position, path.keypoints[i].position);
            double frac = total > 0.0 ? walked / total : 0.0;
            path.keypoints[i].time = t0 + (t1 - t0) * frac;
        }
    }
}

struct LegRef {
    std::size_t path = 0;
    std::size_t a = 0, b = 0; // anchor keypoint indices
    double speed = 0.0;
};

// Fastest and slowest legs. Dwell legs are excluded, and so are the
// zero-duration frame switches at nodes (both anchors share a sync key).
bool speed_extremes(const std::vector<KeyframedPath>& paths, LegRef& fastest, double& min_speed) {
    bool any = false;
    min_speed = std::numeric_limits<double>::infinity();
    double max_speed = -1.0;
    for (std::size_t p = 0; p < paths.size(); ++p) {
        auto anchors = anchor_indices(paths[p]);
        for (std::size_t s = 0; s + 1 < anchors.size(); ++s) {
            std::size_t a = anchors[s], b = anchors[s + 1];
            const auto& kps = paths[p].keypoints;
            if (kps[a].sync_key == kps[b].sync_key) continue;
            double arc = arc_between(paths[p], a, b);
            if (arc <= kDwell) continue;
            double dt = std::max(kps[b].time - kps[a].time, 1e-12);
            double speed = arc / dt;
            any = true;
            min_speed = std::min(min_speed, speed);
            if (speed > max_speed) {
                max_speed = speed;
                fastest = {p, a, b, speed};
            }
        }
    }
    return any;
}

double speed_ratio(const std::vector<KeyframedPath>& paths) {
    LegRef fastest{};
    double min_speed = 0.0;
    if (!speed_extremes(paths, fastest, min_speed)) return 1.0;
    return fastest.speed / min_speed;
}

void apply_sync_time(std::vector<KeyframedPath>& paths, const std::string& key, double t) {
    for (auto& path : paths) {
        bool touched = false;
        for (auto& kp : path.keypoints)
            if (kp.sync_key == key) {
                kp.time = t;
                touched = true;
            }
        if (touched) retime_intermediates(path);
    }
}

// Tightest interval the anchors sharing `key` may move within without
// breaking anchor ordering for any path. Anchors with the same key move
// along and do not constrain.
void sync_bounds(const std::vector<KeyframedPath>& paths, const std::string& key, double& lo, double& hi) {
    lo = 0.0;
    hi = 1.0;
    for (const auto& path : paths) {
        auto anchors = anchor_indices(path);
        for (std::size_t s = 0; s < anchors.size(); ++s) {
            const auto& kp = path.keypoints[anchors[s]];
            if (kp.sync_key != key) continue;
            if (s > 0) {
                const auto& prev = path.keypoints[anchors[s - 1]];
                if (prev.sync_key != key) lo = std::max(lo, prev.time);
            }
            if (s + 1 < anchors.size()) {
                const auto& next = path.keypoints[anchors[s + 1]];
                if (next.sync_key != key) hi = std::min(hi, next.time);
            }
        }
    }
}

} // namespace

SpeedRatioResult enforce_speed_ratio(std::vector<KeyframedPath>& paths, const TimingParams& params) {
    SpeedRatioResult result;
    std::mt19937_64 rng(params.seed);

    double ratio = speed_ratio(paths);
    result.initial_ratio = ratio;
    int iter = 0;
    for (; iter < params.speed_max_iters && ratio >= 2.0; ++iter) {
        LegRef fastest{};
        double min_speed = 0.0;
        if (!speed_extremes(paths, fastest, min_speed)) break;

        const auto& kps = paths[fastest.path].keypoints;
        double dt = kps[fastest.b].time - kps[fastest.a].time;
        double step = std::max(params.adjust_fraction * dt, 1e-4);

        bool delay_latter = (rng() & 1) != 0;
        std::size_t kp_index = delay_latter ? fastest.b : fastest.a;
        std::string key = kps[kp_index].sync_key;
        double old_time = kps[kp_index].time;

        double lo, hi;
        sync_bounds(paths, key, lo, hi);
        double proposed = delay_latter ? std::min(old_time + step, hi) : std::max(old_time - step, lo);

        apply_sync_time(paths, key, proposed);
        double new_ratio = speed_ratio(paths);
        if (new_ratio > ratio) {
            apply_sync_time(paths, key, old_time); // reject: never worsen the ratio
        } else {
            ratio = new_ratio;
        }
    }

    // Re-normalize to [0,1].
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (const auto& path : paths)
        for (const auto& kp : path.keypoints) {
            lo = std::min(lo, kp.time);
            hi = std::max(hi, kp.time);
        }
    if (hi - lo > 1e-12) {
        for (auto& path : paths) {
            for (auto& kp : path.keypoints) kp.time = (kp.time - lo) / (hi - lo);
        }
        // Anchor times stay bitwise equal across sharers under the affine
        // map; re-derive the intermediates so every leg stays consistent.
        std::map<std::string, double> anchor_times;
        for (const auto& path : paths)
            for (const auto& kp : path.keypoints)
                if (kp.at_node) anchor_times[kp.sync_key] = kp.time;
        for (auto& path : paths) {
            for (auto& kp : path.keypoints)
                if (kp.at_node) kp.time = anchor_times.at(kp.sync_key);
            retime_intermediates(path);
        }
    }

    result.achieved_ratio = speed_ratio(paths);
    result.iterations = iter;
    result.converged = result.achieved_ratio < 2.0;
    return result;
}

FrameSet sample_frames(const std::vector<KeyframedPath>& paths, const LayoutPlan& plan,
                       int frame_count, bool easing, double radius) {
    FrameSet frames;
    frames.frame_count = frame_count;
    frames.radius = radius;
    frames.times.resize(static_cast<std::size_t>(frame_count));
    for (int f = 0; f < frame_count; ++f)
        frames.times[static_cast<std::size_t>(f)] = static_cast<double>(f) / static_cast<double>(frame_count - 1);

    for (const auto& path : paths) frames.object_ids.push_back(path.object_id);

    // Per keypoint, the layout offset of the segment starting at it.
    std::vector<std::vector<Point2>> kp_offsets(paths.size());
    for (std::size_t p = 0; p < paths.size(); ++p) {
        const auto& kps = paths[p].keypoints;
        kp_offsets[p].resize(kps.size());
        for (std::size_t i = 0; i < kps.size(); ++i) {
            const std::string& edge = kps[i].edge_id.empty() && i > 0 ? kps[i - 1].edge_id : kps[i].edge_id;
            auto eit = plan.edge_offsets.find(edge);
            if (eit != plan.edge_offsets.end()) {
                auto oit = eit->second.find(paths[p].object_id);
                if (oit != eit->second.end()) kp_offsets[p][i] = oit->second;
            }
        }
    }

    frames.positions.assign(static_cast<std::size_t>(frame_count),
                            std::vector<Point2>(paths.size()));

#pragma omp parallel for schedule(static)
    for (long f = 0; f < frame_count; ++f) {
        double t = frames.times[static_cast<std::size_t>(f)];
        auto& row = frames.positions[static_cast<std::size_t>(f)];
        for (std::size_t p = 0; p < paths.size(); ++p) {
            const auto& kps = paths[p].keypoints;
            if (t <= kps.front().time) {
                row[p] = kps.front().position + kp_offsets[p].front();
                continue;
            }
            if (t >= kps.back().time) {
                row[p] = kps.back().position + kp_offsets[p][kps.size() - 2];
                continue;
            }
            // First keypoint strictly after t; the segment start precedes it.
            std::size_t hi = kps.size() - 1;
            std::size_t lo = 0;
            while (lo + 1 < hi) {
                std::size_t mid = (lo + hi) / 2;
                if (kps[mid].time > t) hi = mid;
                else lo = mid;
            }
            double dt = kps[hi].time - kps[lo].time;
            double s = dt > 0.0 ? (t - kps[lo].time) / dt : 1.0;
            double e = easing ? ease_smoothstep(s) : s;
            row[p] = lerp(kps[lo].position, kps[hi].position, e) + kp_offsets[p][lo];
        }
    }
    return frames;
}

} // namespace routeflow
