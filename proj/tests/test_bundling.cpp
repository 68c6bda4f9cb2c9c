#include "doctest.h"

#include <random>

#include "routeflow/bundling.hpp"
#include "routeflow/error.hpp"

using namespace routeflow;

TEST_CASE("attraction force reproduces the hand-derived value") {
    // 0.1 * (0.1, 0) / (2 * (0.01 + 0.01)^2) = (12.5, 0)
    Point2 f = attraction_force({0, 0}, {0.1, 0}, 2, 0.1);
    CHECK(std::abs(f.x - 12.5) < 1e-12);
    CHECK(std::abs(f.y - 0.0) < 1e-12);
}

TEST_CASE("attraction vanishes at zero displacement and is antisymmetric") {
    Point2 zero = attraction_force({0.4, 0.4}, {0.4, 0.4}, 3, 0.05);
    CHECK(zero.x == 0.0);
    CHECK(zero.y == 0.0);

    Point2 ab = attraction_force({0.1, 0.2}, {0.5, 0.7}, 4, 0.05);
    Point2 ba = attraction_force({0.5, 0.7}, {0.1, 0.2}, 4, 0.05);
    CHECK(ab.x == doctest::Approx(-ba.x).epsilon(1e-12));
    CHECK(ab.y == doctest::Approx(-ba.y).epsilon(1e-12));
}

TEST_CASE("spring force on uniform collinear spacing is zero") {
    Point2 f = spring_force({0, 0}, {0.1, 0}, {0.2, 0}, 3);
    CHECK(f.x == doctest::Approx(0.0));
    CHECK(f.y == doctest::Approx(0.0));
}

TEST_CASE("spring force reproduces the hand-derived bend value") {
    // 3 * ((0,0) + (0.2,0) - 2*(0.1,0.05)) = (0, -0.3)
    Point2 f = spring_force({0, 0}, {0.1, 0.05}, {0.2, 0}, 3);
    CHECK(std::abs(f.x - 0.0) < 1e-12);
    CHECK(std::abs(f.y - (-0.3)) < 1e-12);
}

TEST_CASE("spring force scales linearly with positions") {
    Point2 f1 = spring_force({0, 0}, {0.3, 0.1}, {0.5, 0.4}, 5);
    Point2 f2 = spring_force({0, 0}, {0.6, 0.2}, {1.0, 0.8}, 5);
    CHECK(f2.x == doctest::Approx(2.0 * f1.x));
    CHECK(f2.y == doctest::Approx(2.0 * f1.y));
}

TEST_CASE("anchor force reproduces the hand-derived value") {
    // |u'-u| = 0.5, direction (-0.6, -0.8): 0.25 * (-0.6, -0.8) = (-0.15, -0.2)
    Point2 f = anchor_force({0.3, 0.4}, {0, 0});
    CHECK(std::abs(f.x - (-0.15)) < 1e-12);
    CHECK(std::abs(f.y - (-0.2)) < 1e-12);
}

TEST_CASE("anchor force magnitude is the squared displacement") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        Point2 u{coord(rng), coord(rng)};
        Point2 a{coord(rng), coord(rng)};
        CHECK(norm(anchor_force(u, a)) == doctest::Approx(dist2(u, a)).epsilon(1e-9));
    }
    Point2 rest = anchor_force({0.2, 0.2}, {0.2, 0.2});
    CHECK(rest.x == 0.0);
    CHECK(rest.y == 0.0);
}

namespace {

ControlPolyline horizontal(const std::string& id, double y, int c = 8) {
    Trajectory t{id, {{0.0, y}, {1.0, y}}, 1};
    return resample(t, c);
}

} // namespace

TEST_CASE("resultant force with alpha=beta=0 equals the attraction oracle") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    BundlingParams params;
    params.alpha = 0.0;
    params.beta = 0.0;
    params.k = 1;

    for (int trial = 0; trial < 20; ++trial) {
        std::vector<ControlPolyline> polys;
        for (int p = 0; p < 2; ++p) {
            ControlPolyline poly;
            poly.trajectory_id = p == 0 ? "a" : "b";
            for (int i = 0; i < 6; ++i) poly.current.push_back({coord(rng), coord(rng)});
            poly.anchor = poly.current;
            polys.push_back(poly);
        }
        auto compat = build_compatibility(polys, params.k);
        double level_factor = 2.5;
        auto forces = resultant_force(polys, 0, compat, params, level_factor);

        for (std::size_t i = 1; i + 1 < polys[0].current.size(); ++i) {
            Point2 expect;
            for (const auto& vj : polys[1].current)
                expect += attraction_force(polys[0].current[i], vj, 6, params.eta);
            expect = expect * level_factor;
            CHECK(std::abs(forces[i].x - expect.x) < 1e-9);
            CHECK(std::abs(forces[i].y - expect.y) < 1e-9);
        }
        CHECK(forces.front() == Point2{0, 0});
        CHECK(forces.back() == Point2{0, 0});
    }
}

TEST_CASE("resultant force vanishes for an isolated straight polyline at rest") {
    std::vector<ControlPolyline> polys{horizontal("a", 0.5)};
    auto compat = build_compatibility(polys, 5);
    BundlingParams params;
    auto forces = resultant_force(polys, 0, compat, params, 1.0);
    for (const auto& f : forces) {
        CHECK(std::abs(f.x) < 1e-12);
        CHECK(std::abs(f.y) < 1e-12);
    }
}

TEST_CASE("bundle_level merges close parallel segments without iterations") {
    BundlingParams params;
    params.iterations = 1;
    params.step = 0.0; // no movement: the merge must come from plain proximity
    std::vector<ControlPolyline> polys{horizontal("a", 0.5), horizontal("b", 0.5 + 0.5 * params.merge_delta)};
    auto level = bundle_level(polys, params, 1);
    REQUIRE(level.events.size() == 1);
    CHECK(level.events[0].members == std::set<std::string>{"a", "b"});
    REQUIRE(level.membership.size() == 1);
    CHECK(level.membership.begin()->second.size() == 2);
}

TEST_CASE("bundle_level leaves distant segments alone") {
    BundlingParams params;
    params.iterations = 2;
    params.eta = 1e-4; // attraction far too weak to close the gap
    std::vector<ControlPolyline> polys{horizontal("a", 0.05), horizontal("b", 0.95)};
    auto level = bundle_level(polys, params, 1);
    CHECK(level.events.empty());
    CHECK(level.membership.size() == 2);
}

TEST_CASE("bundle_level with a single polyline is an identity") {
    BundlingParams params;
    std::vector<ControlPolyline> polys{horizontal("a", 0.37)};
    auto level = bundle_level(polys, params, 1);
    REQUIRE(level.polylines.size() == 1);
    for (std::size_t i = 0; i < polys[0].current.size(); ++i)
        CHECK(level.polylines[0].current[i] == polys[0].current[i]);
}

namespace {

TrajectorySet lanes(std::vector<double> ys) {
    TrajectorySet set;
    int i = 0;
    for (double y : ys) {
        Trajectory t;
        t.id = "t" + std::to_string(i++);
        t.points = {{0.1, y}, {0.9, y}};
        set.trajectories.push_back(std::move(t));
    }
    set.normalized = true;
    return set;
}

} // namespace

TEST_CASE("bundle_hierarchy determinism") {
    auto set = lanes({0.48, 0.50, 0.52, 0.70});
    BundlingParams params;
    params.iterations = 40;
    auto h1 = bundle_hierarchy(set, params);
    auto h2 = bundle_hierarchy(set, params);
    REQUIRE(h1.final_paths.size() == h2.final_paths.size());
    for (const auto& [id, path] : h1.final_paths) {
        const auto& other = h2.final_paths.at(id);
        for (std::size_t i = 0; i < path.size(); ++i) CHECK(path[i] == other[i]);
    }
    CHECK(h1.events.size() == h2.events.size());
}

TEST_CASE("bundle_hierarchy preserves endpoints exactly") {
    auto set = lanes({0.45, 0.5, 0.55});
    BundlingParams params;
    params.iterations = 60;
    auto h = bundle_hierarchy(set, params);
    for (const auto& t : set.trajectories) {
        auto resampled = resample(t, params.control_points);
        const auto& path = h.final_paths.at(t.id);
        CHECK(path.front() == resampled.current.front());
        CHECK(path.back() == resampled.current.back());
    }
}

TEST_CASE("identical trajectories collapse at level 1") {
    auto set = lanes({0.5, 0.5, 0.5});
    BundlingParams params;
    params.iterations = 1;
    auto h = bundle_hierarchy(set, params);
    REQUIRE(!h.levels.empty());
    const auto& last = h.levels.back();
    CHECK(last.membership.size() == 1);
    CHECK(last.membership.begin()->second.size() == 3);
}

TEST_CASE("max_levels caps the hierarchy") {
    auto set = lanes({0.48, 0.5, 0.52, 0.8});
    BundlingParams params;
    params.iterations = 10;
    params.max_levels = 1;
    auto h = bundle_hierarchy(set, params);
    CHECK(h.levels.size() == 1);
}

TEST_CASE("frozen portions never move at later levels") {
    TrajectorySet set;
    // Two tight lanes that merge at level 1 plus one lane far enough that the
    // short force budget cannot capture it, so a second level actually runs.
    set.normalized = true;
    int i = 0;
    for (double y : {0.500, 0.505, 0.9}) {
        Trajectory t;
        t.id = "t" + std::to_string(i++);
        t.points = {{0.1, y}, {0.9, y}};
        set.trajectories.push_back(std::move(t));
    }
    BundlingParams params;
    params.iterations = 5;
    params.merge_delta = 0.01;
    auto h = bundle_hierarchy(set, params);
    REQUIRE(h.levels.size() >= 2);

    const auto& first_events = h.levels[0].events;
    if (!first_events.empty()) {
        const auto& ev = first_events[0];
        // Geometry inside the level-1 range must be identical in the final paths.
        std::vector<Point2> reference;
        const std::string& member = *ev.members.begin();
        for (int idx = ev.range.lo; idx <= ev.range.hi; ++idx)
            reference.push_back(h.final_paths.at(member)[static_cast<std::size_t>(idx)]);
        for (const auto& m : ev.members) {
            const auto& path = h.final_paths.at(m);
            for (int idx = ev.range.lo; idx <= ev.range.hi; ++idx)
                CHECK(path[static_cast<std::size_t>(idx)] ==
                      reference[static_cast<std::size_t>(idx - ev.range.lo)]);
        }
    }
}

TEST_CASE("one force step at anchors with no neighbors is a no-op") {
    auto set = lanes({0.5});
    BundlingParams params;
    params.iterations = 1;
    auto h = bundle_hierarchy(set, params);
    auto resampled = resample(set.trajectories[0], params.control_points);
    const auto& path = h.final_paths.at("t0");
    for (std::size_t i = 0; i < path.size(); ++i) CHECK(path[i] == resampled.current[i]);
}

TEST_CASE("empty input is rejected") {
    TrajectorySet set;
    set.normalized = true;
    CHECK_THROWS_AS(bundle_hierarchy(set, BundlingParams{}), Error);
}
