#include "doctest.h"

#include <cmath>

#include "routeflow/error.hpp"
#include "routeflow/synthgen.hpp"

using namespace routeflow;

namespace {

constexpr double kPi = 3.14159265358979323846;

double min_triple_angle(const std::vector<Point2>& pts) {
    double worst = kPi;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        Point2 a = pts[i - 1] - pts[i];
        Point2 b = pts[i + 1] - pts[i];
        double na = norm(a), nb = norm(b);
        if (na < 1e-12 || nb < 1e-12) continue;
        worst = std::min(worst, std::acos(std::clamp(dot(a, b) / (na * nb), -1.0, 1.0)));
    }
    return worst;
}

} // namespace

TEST_CASE("trends are deterministic per seed") {
    auto a = gen_trend(1, 42);
    auto b = gen_trend(1, 42);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    auto c = gen_trend(1, 43);
    bool different = a.size() != c.size();
    for (std::size_t i = 0; !different && i < a.size(); ++i) different = a[i] != c[i];
    CHECK(different);
}

TEST_CASE("sampled trends stay smooth for both bend counts across many seeds") {
    // The control polygon respects the 135-degree rule; a fortiori the dense
    // B-spline sample stays above a slightly relaxed bound.
    for (std::uint64_t seed = 0; seed < 100; ++seed) {
        for (int bends : {1, 2}) {
            auto trend = gen_trend(bends, seed);
            CHECK(trend.size() >= 50);
            CHECK(min_triple_angle(trend) > 0.7 * kPi); // 126 degrees on the dense sample
            for (const auto& p : trend) {
                CHECK(p.x >= 0.0);
                CHECK(p.x <= 1.0);
                CHECK(p.y >= 0.0);
                CHECK(p.y <= 1.0);
            }
        }
    }
}

TEST_CASE("hotspot counts and kinds follow the assignment") {
    auto trend = gen_trend(1, 42);

    auto two = gen_hotspots(trend, HotspotAssignment::OneConvOneDiv, 42);
    REQUIRE(two.size() == 2);
    CHECK(two[0].convergence);
    CHECK(!two[1].convergence);
    CHECK(two[0].arc_fraction < two[1].arc_fraction);

    auto conv2 = gen_hotspots(trend, HotspotAssignment::TwoConvOneDiv, 42);
    REQUIRE(conv2.size() == 3);
    CHECK(conv2[0].convergence);
    CHECK(conv2[1].convergence);
    CHECK(!conv2[2].convergence);

    auto div2 = gen_hotspots(trend, HotspotAssignment::OneConvTwoDiv, 42);
    REQUIRE(div2.size() == 3);
    CHECK(div2[0].convergence);
    CHECK(!div2[1].convergence);
    CHECK(!div2[2].convergence);
}

TEST_CASE("hotspots are reproducible and lie on the trend") {
    auto trend = gen_trend(2, 7);
    auto h1 = gen_hotspots(trend, HotspotAssignment::OneConvOneDiv, 7);
    auto h2 = gen_hotspots(trend, HotspotAssignment::OneConvOneDiv, 7);
    REQUIRE(h1.size() == h2.size());
    for (std::size_t i = 0; i < h1.size(); ++i) CHECK(h1[i].position == h2[i].position);

    for (const auto& h : h1) {
        double best = 1e9;
        for (std::size_t i = 1; i < trend.size(); ++i)
            best = std::min(best, point_segment_distance(h.position, trend[i - 1], trend[i]));
        CHECK(best < 1e-9);
    }
}

TEST_CASE("datasets carry the configured trajectory count and distinct endpoints") {
    SynthConfig cfg;
    cfg.seed = 42;
    auto data = generate(cfg);
    CHECK(data.trajectories.trajectories.size() == 30);

    const double min_sep = 2.0 * 9.0 / 1250.0;
    const auto& ts = data.trajectories.trajectories;
    for (std::size_t a = 0; a < ts.size(); ++a) {
        for (std::size_t b = a + 1; b < ts.size(); ++b) {
            CHECK(dist(ts[a].points.front(), ts[b].points.front()) >= min_sep - 1e-12);
            CHECK(dist(ts[a].points.back(), ts[b].points.back()) >= min_sep - 1e-12);
        }
    }
}

TEST_CASE("zero perturbation makes co-routed trajectories identical along shared segments") {
    SynthConfig cfg;
    cfg.seed = 42;
    cfg.perturbation_scale = 0.0;
    auto data = generate(cfg);

    // Find two trajectories sharing their middle (both on the trend): the
    // middle sample of any two main-cohort objects must coincide.
    const auto& ts = data.trajectories.trajectories;
    int identical_pairs = 0;
    for (std::size_t a = 0; a < ts.size(); ++a) {
        for (std::size_t b = a + 1; b < ts.size(); ++b) {
            std::size_t mid_a = ts[a].points.size() / 2;
            std::size_t mid_b = ts[b].points.size() / 2;
            if (dist(ts[a].points[mid_a], ts[b].points[mid_b]) < 1e-12) ++identical_pairs;
        }
    }
    CHECK(identical_pairs > 0);
}

TEST_CASE("generation is bit-stable per seed") {
    SynthConfig cfg;
    cfg.seed = 1234;
    cfg.trend_bends = 2;
    cfg.assignment = HotspotAssignment::TwoConvOneDiv;
    auto a = generate(cfg);
    auto b = generate(cfg);
    REQUIRE(a.trajectories.trajectories.size() == b.trajectories.trajectories.size());
    for (std::size_t i = 0; i < a.trajectories.trajectories.size(); ++i) {
        const auto& ta = a.trajectories.trajectories[i];
        const auto& tb = b.trajectories.trajectories[i];
        REQUIRE(ta.points.size() == tb.points.size());
        for (std::size_t p = 0; p < ta.points.size(); ++p) CHECK(ta.points[p] == tb.points[p]);
    }
}

TEST_CASE("all points stay inside the unit square") {
    for (std::uint64_t seed : {42ULL, 43ULL, 99ULL}) {
        SynthConfig cfg;
        cfg.seed = seed;
        cfg.assignment = HotspotAssignment::OneConvTwoDiv;
        auto data = generate(cfg);
        for (const auto& t : data.trajectories.trajectories)
            for (const auto& p : t.points) {
                CHECK(p.x >= 0.0);
                CHECK(p.x <= 1.0);
                CHECK(p.y >= 0.0);
                CHECK(p.y <= 1.0);
            }
    }
}

TEST_CASE("assignment names round-trip") {
    for (auto a : {HotspotAssignment::OneConvOneDiv, HotspotAssignment::TwoConvOneDiv,
                   HotspotAssignment::OneConvTwoDiv}) {
        HotspotAssignment parsed;
        CHECK(parse_assignment(assignment_name(a), parsed));
        CHECK(parsed == a);
    }
    HotspotAssignment out;
    CHECK(!parse_assignment("bogus", out));
}
