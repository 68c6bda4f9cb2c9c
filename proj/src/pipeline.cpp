#include "routeflow/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <ctime>
#include <sstream>

#include "json.hpp"

#include "routeflow/error.hpp"

namespace routeflow {

namespace {

constexpr const char* kToolVersion = "routeflow 0.1.0";

std::string utc_now() {
    std::time_t t = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

class StageClock {
public:
    explicit StageClock(RunManifest& manifest) : manifest_(manifest) {}

    template <typename F>
    auto run(const std::string& name, F&& f) {
        auto start = std::chrono::steady_clock::now();
        if constexpr (std::is_void_v<decltype(f())>) {
            f();
            record(name, start);
        } else {
            auto result = f();
            record(name, start);
            return result;
        }
    }

private:
    void record(const std::string& name, std::chrono::steady_clock::time_point start) {
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        manifest_.stages.push_back({name, seconds});
    }
    RunManifest& manifest_;
};

double stage_seconds(const RunManifest& m, const std::string& name) {
    for (const auto& s : m.stages)
        if (s.name == name) return s.seconds;
    return 0.0;
}

} // namespace

GroupAssignment derive_groups(const HotspotGraph& graph, const ScanlineResult& times,
                              const std::vector<KeyframedPath>& paths, int frame_count) {
    // Objects with identical hotspot itineraries travel as one group.
    std::map<std::string, std::vector<std::string>> by_itinerary;
    for (const auto& [object_id, nodes] : graph.object_nodes) {
        std::string key;
        for (const auto& n : nodes) {
            const GraphNode* node = graph.find_node(n);
            if (node->role == NodeRole::Hotspot) key += n + "|";
        }
        by_itinerary[key.empty() ? "lone:" + object_id : key].push_back(object_id);
    }

    std::map<std::string, std::pair<double, double>> spans; // object -> journey times
    for (const auto& p : paths)
        spans[p.object_id] = {p.keypoints.front().time, p.keypoints.back().time};

    GroupAssignment assignment;
    for (const auto& [key, members] : by_itinerary) {
        Group g;
        double start = 1.0, end = 0.0;
        for (const auto& m : members) {
            g.members.insert(m);
            start = std::min(start, spans.at(m).first);
            end = std::max(end, spans.at(m).second);
        }
        if (key.rfind("lone:", 0) != 0) {
            std::string rest = key;
            while (!rest.empty()) {
                auto bar = rest.find('|');
                std::string node = rest.substr(0, bar);
                // All members share the node, so the synchronized keypoint
                // time can be read from any of them.
                for (const auto& p : paths) {
                    if (!g.members.count(p.object_id)) continue;
                    for (const auto& kp : p.keypoints)
                        if (kp.at_node && kp.sync_key == node) {
                            g.hotspot_times.push_back(kp.time);
                            break;
                        }
                    break;
                }
                rest = rest.substr(bar + 1);
            }
        }
        (void)times;
        // Frames whose grid time falls inside the group's journey.
        g.first_frame = frame_count - 1;
        g.last_frame = 0;
        for (int f = 0; f < frame_count; ++f) {
            double t = static_cast<double>(f) / static_cast<double>(frame_count - 1);
            if (t >= start - 1e-12 && t <= end + 1e-12) {
                g.first_frame = std::min(g.first_frame, f);
                g.last_frame = std::max(g.last_frame, f);
            }
        }
        if (g.first_frame > g.last_frame) {
            g.first_frame = 0;
            g.last_frame = frame_count - 1;
        }
        assignment.groups.push_back(std::move(g));
    }
    return assignment;
}

AnimateResult animate(const TrajectorySet& input, const PipelineConfig& cfg) {
    if (input.trajectories.empty()) throw Error(ErrorCode::EmptyInput, "animate: no trajectories");
    if (cfg.frame_count < 2) throw Error(ErrorCode::UsageError, "animate: frame_count must be >= 2");

    AnimateResult result;
    result.manifest.seed = cfg.seed;
    result.manifest.tool_version = kToolVersion;
    result.manifest.config_hash = config_hash(cfg);
    result.manifest.started_at = utc_now();
    StageClock clock(result.manifest);
    auto total_start = std::chrono::steady_clock::now();

    TrajectorySet normalized_set =
        clock.run("normalize", [&] { return input.normalized ? input : normalize(input); });
    TrajectorySet prepared = clock.run(
        "preprocess", [&] { return preprocess(normalized_set, cfg.preprocess, cfg.control_points); });
    result.hierarchy = clock.run("bundle", [&] { return bundle_hierarchy(prepared, cfg.bundling); });
    result.graph = clock.run("extract_hotspots", [&] { return extract_hotspots(result.hierarchy); });

    LayoutOrder order = clock.run("layout_order", [&] { return layout_order(result.graph); });
    result.plan =
        clock.run("layout_plan", [&] { return build_layout_plan(result.graph, order, cfg.layout); });

    ScanlineResult times =
        clock.run("scanline", [&] { return scanline_times(result.graph, result.plan); });
    for (const auto& w : times.warnings) result.warnings.push_back(w);

    result.paths = clock.run("keyframes", [&] { return build_keyframed_paths(result.graph, times); });
    clock.run("speed_ratio", [&] {
        TimingParams timing = cfg.timing;
        timing.seed = cfg.seed;
        result.speed = enforce_speed_ratio(result.paths, timing);
        if (!result.speed.converged)
            result.warnings.push_back("speed ratio cap reached, achieved " +
                                      std::to_string(result.speed.achieved_ratio));
    });
    result.frames.frames = clock.run("sample_frames", [&] {
        return sample_frames(result.paths, result.plan, cfg.frame_count, cfg.timing.easing,
                             cfg.layout.radius);
    });
    result.frames.groups = derive_groups(result.graph, times, result.paths, cfg.frame_count);

    result.manifest.finished_at = utc_now();
    result.manifest.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - total_start).count();
    const RunManifest& m = result.manifest;
    result.manifest.path_generation_seconds = stage_seconds(m, "normalize") +
                                              stage_seconds(m, "preprocess") + stage_seconds(m, "bundle") +
                                              stage_seconds(m, "extract_hotspots");
    result.manifest.layout_generation_seconds =
        stage_seconds(m, "layout_order") + stage_seconds(m, "layout_plan") + stage_seconds(m, "scanline") +
        stage_seconds(m, "keyframes") + stage_seconds(m, "speed_ratio") + stage_seconds(m, "sample_frames");
    return result;
}

AnimateResult animate_straight_baseline(const TrajectorySet& input, const PipelineConfig& cfg) {
    if (input.trajectories.empty()) throw Error(ErrorCode::EmptyInput, "animate: no trajectories");
    if (cfg.frame_count < 2) throw Error(ErrorCode::UsageError, "animate: frame_count must be >= 2");

    AnimateResult result;
    result.manifest.seed = cfg.seed;
    result.manifest.tool_version = kToolVersion;
    result.manifest.config_hash = config_hash(cfg);
    result.manifest.started_at = utc_now();
    auto total_start = std::chrono::steady_clock::now();

    TrajectorySet set = input.normalized ? input : normalize(input);
    std::vector<Trajectory> sorted = set.trajectories;
    std::sort(sorted.begin(), sorted.end(),
              [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });

    FrameSet& frames = result.frames.frames;
    frames.frame_count = cfg.frame_count;
    frames.radius = cfg.layout.radius;
    for (const auto& t : sorted) frames.object_ids.push_back(t.id);
    for (int f = 0; f < cfg.frame_count; ++f) {
        double t = static_cast<double>(f) / static_cast<double>(cfg.frame_count - 1);
        frames.times.push_back(t);
        std::vector<Point2> row;
        for (const auto& traj : sorted) row.push_back(lerp(traj.points.front(), traj.points.back(), t));
        frames.positions.push_back(std::move(row));
    }
    for (const auto& t : sorted) {
        Group g;
        g.members.insert(t.id);
        g.first_frame = 0;
        g.last_frame = cfg.frame_count - 1;
        result.frames.groups.groups.push_back(std::move(g));
    }

    result.manifest.finished_at = utc_now();
    result.manifest.total_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - total_start).count();
    result.manifest.stages.push_back({"straight_baseline", result.manifest.total_seconds});
    result.manifest.layout_generation_seconds = result.manifest.total_seconds;
    return result;
}

std::string manifest_to_json(const RunManifest& manifest) {
    nlohmann::ordered_json j;
    j["tool_version"] = manifest.tool_version;
    j["input_hash"] = manifest.input_hash;
    j["config_hash"] = manifest.config_hash;
    j["seed"] = manifest.seed;
    j["started_at"] = manifest.started_at;
    j["finished_at"] = manifest.finished_at;
    j["stages"] = nlohmann::ordered_json::array();
    for (const auto& s : manifest.stages)
        j["stages"].push_back({{"name", s.name}, {"seconds", s.seconds}});
    j["path_generation_seconds"] = manifest.path_generation_seconds;
    j["layout_generation_seconds"] = manifest.layout_generation_seconds;
    j["total_seconds"] = manifest.total_seconds;
    return j.dump(2) + "\n";
}

} // namespace routeflow
