#include "doctest.h"

#include "routeflow/timing.hpp"

using namespace routeflow;

namespace {

HotspotGraph three_stop_graph() {
    HotspotGraph g;
    auto node = [&](const std::string& id, Point2 pos, NodeRole role) {
        GraphNode n;
        n.id = id;
        n.position = pos;
        n.role = role;
        g.nodes.push_back(n);
    };
    node("src:a", {0.0, 0.5}, NodeRole::Source);
    node("h000", {0.5, 0.5}, NodeRole::Hotspot);
    node("snk:a", {1.0, 0.5}, NodeRole::Sink);
    GraphEdge e0;
    e0.id = "e0";
    e0.from = "src:a";
    e0.to = "h000";
    e0.members = {"a"};
    e0.geometry = {{0.0, 0.5}, {0.5, 0.5}};
    GraphEdge e1;
    e1.id = "e1";
    e1.from = "h000";
    e1.to = "snk:a";
    e1.members = {"a"};
    e1.geometry = {{0.5, 0.5}, {1.0, 0.5}};
    g.edges = {e0, e1};
    g.object_nodes["a"] = {"src:a", "h000", "snk:a"};
    g.object_edges["a"] = {"e0", "e1"};
    return g;
}

KeyframedPath straight_path(const std::string& id, std::vector<std::pair<double, double>> xs_ts) {
    KeyframedPath p;
    p.object_id = id;
    int i = 0;
    for (auto [x, t] : xs_ts) {
        Keypoint kp;
        kp.position = {x, 0.0};
        kp.time = t;
        kp.sync_key = id + ":" + std::to_string(i++);
        kp.at_node = true; // hand-built paths are pure anchor sequences
        p.keypoints.push_back(kp);
    }
    return p;
}

} // namespace

TEST_CASE("scanline projects nodes onto the journey direction") {
    auto g = three_stop_graph();
    auto result = scanline_times(g, LayoutPlan{});
    CHECK(result.node_times.at("src:a") == doctest::Approx(0.0));
    CHECK(result.node_times.at("h000") == doctest::Approx(0.5));
    CHECK(result.node_times.at("snk:a") == doctest::Approx(1.0));
    CHECK(result.warnings.empty());
}

TEST_CASE("mirroring the scene reverses the scanline order") {
    auto g = three_stop_graph();
    for (auto& n : g.nodes) n.position.x = -n.position.x;
    g.nodes[1].position.x = -0.2; // keep the interior node off-center
    auto result = scanline_times(g, LayoutPlan{});
    CHECK(result.node_times.at("src:a") == doctest::Approx(0.0));
    CHECK(result.node_times.at("snk:a") == doctest::Approx(1.0));
    CHECK(result.node_times.at("h000") > 0.0);
}

TEST_CASE("degenerate projections fall back with a warning") {
    HotspotGraph g;
    for (const auto& id : {"src:a", "snk:a"}) {
        GraphNode n;
        n.id = id;
        n.position = {0.5, 0.5};
        n.role = id[1] == 'r' ? NodeRole::Source : NodeRole::Sink;
        g.nodes.push_back(n);
    }
    GraphEdge e;
    e.id = "e0";
    e.from = "src:a";
    e.to = "snk:a";
    e.members = {"a"};
    e.geometry = {{0.5, 0.5}, {0.5, 0.5}};
    g.edges = {e};
    g.object_nodes["a"] = {"src:a", "snk:a"};
    g.object_edges["a"] = {"e0"};

    auto result = scanline_times(g, LayoutPlan{});
    CHECK(!result.warnings.empty());
    for (const auto& [_, t] : result.node_times) CHECK(t == doctest::Approx(0.5));
}

TEST_CASE("uniform speeds are left untouched") {
    std::vector<KeyframedPath> paths{straight_path("a", {{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}})};
    TimingParams params;
    auto result = enforce_speed_ratio(paths, params);
    CHECK(result.achieved_ratio == doctest::Approx(1.0));
    CHECK(result.converged);
    CHECK(paths[0].keypoints[1].time == doctest::Approx(0.5));
}

TEST_CASE("a 1:3 speed split is adjusted below ratio 2") {
    // Speeds 1 and 3: keypoints at x 0, 0.5, 2.0 with times 0, 0.5, 1.
    std::vector<KeyframedPath> paths{straight_path("a", {{0.0, 0.0}, {0.5, 0.5}, {2.0, 1.0}})};
    TimingParams params;
    auto result = enforce_speed_ratio(paths, params);
    CHECK(result.achieved_ratio < 2.0);
    CHECK(result.converged);
    // Times stay ordered and normalized.
    CHECK(paths[0].keypoints[0].time == doctest::Approx(0.0));
    CHECK(paths[0].keypoints[2].time == doctest::Approx(1.0));
    CHECK(paths[0].keypoints[1].time > 0.0);
    CHECK(paths[0].keypoints[1].time < 1.0);
}

TEST_CASE("speed adjustment is deterministic per seed") {
    for (std::uint64_t seed : {7ULL, 42ULL}) {
        std::vector<KeyframedPath> a{straight_path("a", {{0.0, 0.0}, {0.2, 0.5}, {2.0, 1.0}})};
        std::vector<KeyframedPath> b{straight_path("a", {{0.0, 0.0}, {0.2, 0.5}, {2.0, 1.0}})};
        TimingParams params;
        params.seed = seed;
        enforce_speed_ratio(a, params);
        enforce_speed_ratio(b, params);
        for (std::size_t i = 0; i < a[0].keypoints.size(); ++i)
            CHECK(a[0].keypoints[i].time == b[0].keypoints[i].time);
    }
}

TEST_CASE("the ratio never increases") {
    std::vector<KeyframedPath> paths{straight_path("a", {{0.0, 0.0}, {0.1, 0.5}, {2.0, 1.0}}),
                                     straight_path("b", {{0.0, 0.0}, {1.0, 0.3}, {1.2, 1.0}})};
    auto before_paths = paths;
    TimingParams params;
    params.speed_max_iters = 37; // force an early stop
    auto result = enforce_speed_ratio(paths, params);

    auto ratio_of = [](const std::vector<KeyframedPath>& ps) {
        double lo = 1e300, hi = 0.0;
        for (const auto& p : ps)
            for (std::size_t i = 0; i + 1 < p.keypoints.size(); ++i) {
                double dp = dist(p.keypoints[i].position, p.keypoints[i + 1].position);
                if (dp <= 1e-9) continue;
                double s = dp / std::max(p.keypoints[i + 1].time - p.keypoints[i].time, 1e-12);
                lo = std::min(lo, s);
                hi = std::max(hi, s);
            }
        return hi / lo;
    };
    CHECK(result.achieved_ratio <= ratio_of(before_paths) + 1e-9);
}

TEST_CASE("shared sync keys move together bitwise") {
    KeyframedPath a = straight_path("a", {{0.0, 0.0}, {0.5, 0.5}, {2.0, 1.0}});
    KeyframedPath b = straight_path("b", {{0.0, 0.0}, {0.5, 0.5}, {2.0, 1.0}});
    // Both middle keypoints share a hotspot.
    a.keypoints[1].sync_key = "h000";
    b.keypoints[1].sync_key = "h000";
    std::vector<KeyframedPath> paths{a, b};
    TimingParams params;
    enforce_speed_ratio(paths, params);
    CHECK(paths[0].keypoints[1].time == paths[1].keypoints[1].time);
}

TEST_CASE("smoothstep easing hits the frozen reference values") {
    CHECK(ease_smoothstep(0.5) == doctest::Approx(0.5));
    CHECK(std::abs(ease_smoothstep(0.25) - 0.15625) < 1e-12);
    CHECK(ease_smoothstep(0.0) == 0.0);
    CHECK(ease_smoothstep(1.0) == 1.0);
}

TEST_CASE("sample_frames interpolates linearly without easing") {
    std::vector<KeyframedPath> paths{straight_path("a", {{0.0, 0.0}, {1.0, 1.0}})};
    LayoutPlan plan;
    auto frames = sample_frames(paths, plan, 3, false, 0.01);
    REQUIRE(frames.frame_count == 3);
    CHECK(frames.positions[1][0].x == doctest::Approx(0.5));
}

TEST_CASE("sample_frames applies easing inside segments only") {
    std::vector<KeyframedPath> paths{straight_path("a", {{0.0, 0.0}, {1.0, 1.0}})};
    LayoutPlan plan;
    auto frames = sample_frames(paths, plan, 5, true, 0.01);
    // At s = 0.25 the eased position is 0.15625.
    CHECK(frames.positions[1][0].x == doctest::Approx(0.15625));
    // Keypoint endpoints are untouched by easing.
    CHECK(frames.positions[0][0].x == doctest::Approx(0.0));
    CHECK(frames.positions[4][0].x == doctest::Approx(1.0));
}

TEST_CASE("objects hold still outside their active interval") {
    std::vector<KeyframedPath> paths{straight_path("a", {{0.2, 0.25}, {0.8, 0.75}})};
    LayoutPlan plan;
    auto frames = sample_frames(paths, plan, 5, false, 0.01);
    CHECK(frames.positions[0][0].x == doctest::Approx(0.2)); // before start
    CHECK(frames.positions[4][0].x == doctest::Approx(0.8)); // after end
}
