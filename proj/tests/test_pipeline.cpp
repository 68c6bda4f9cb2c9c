#include "doctest.h"

#include <algorithm>

#include "routeflow/metrics.hpp"
#include "routeflow/pipeline.hpp"
#include "routeflow/synthgen.hpp"

using namespace routeflow;

namespace {

AnimateResult small_run(std::uint64_t seed = 42, int count = 12) {
    SynthConfig synth;
    synth.seed = seed;
    synth.trajectory_count = count;
    SynthDataset data = generate(synth);
    PipelineConfig cfg = default_config();
    cfg.seed = seed;
    cfg.frame_count = 60;
    cfg.propagate();
    return animate(data.trajectories, cfg);
}

} // namespace

TEST_CASE("frame endpoints equal the true starts and ends") {
    SynthConfig synth;
    synth.seed = 42;
    synth.trajectory_count = 12;
    SynthDataset data = generate(synth);
    PipelineConfig cfg = default_config();
    cfg.frame_count = 60;
    cfg.propagate();
    AnimateResult r = animate(data.trajectories, cfg);

    const FrameSet& frames = r.frames.frames;
    std::map<std::string, Point2> starts, ends;
    TrajectorySet prepared = preprocess(data.trajectories, cfg.preprocess, cfg.control_points);
    for (const auto& t : prepared.trajectories) {
        starts[t.id] = t.points.front();
        ends[t.id] = t.points.back();
    }
    for (std::size_t o = 0; o < frames.object_ids.size(); ++o) {
        const auto& id = frames.object_ids[o];
        CHECK(dist(frames.positions.front()[o], starts.at(id)) < 1e-9);
        CHECK(dist(frames.positions.back()[o], ends.at(id)) < 1e-9);
    }
}

TEST_CASE("every object is present in every frame") {
    AnimateResult r = small_run();
    const FrameSet& frames = r.frames.frames;
    CHECK(frames.frame_count == 60);
    for (const auto& row : frames.positions) {
        REQUIRE(row.size() == frames.object_ids.size());
        for (const auto& p : row) CHECK(finite(p));
    }
}

TEST_CASE("manifest stage durations cover the total wall time") {
    AnimateResult r = small_run();
    double stage_sum = 0.0;
    for (const auto& s : r.manifest.stages) {
        CHECK(s.seconds >= 0.0);
        stage_sum += s.seconds;
    }
    CHECK(stage_sum <= r.manifest.total_seconds * 1.1);
    CHECK(stage_sum >= r.manifest.total_seconds * 0.9);
    CHECK(r.manifest.path_generation_seconds + r.manifest.layout_generation_seconds <=
          r.manifest.total_seconds * 1.1);
    CHECK(!r.manifest.config_hash.empty());
    CHECK(!r.manifest.started_at.empty());
}

TEST_CASE("group membership partitions the animated objects") {
    AnimateResult r = small_run(43);
    std::set<std::string> seen;
    for (const auto& g : r.frames.groups.groups) {
        for (const auto& m : g.members) {
            CHECK(!seen.count(m));
            seen.insert(m);
        }
        CHECK(g.first_frame >= 0);
        CHECK(g.last_frame < r.frames.frames.frame_count);
        CHECK(g.first_frame <= g.last_frame);
    }
    CHECK(seen.size() == r.frames.frames.object_ids.size());
}

TEST_CASE("keypoint times stay nondecreasing after speed adjustment") {
    AnimateResult r = small_run();
    for (const auto& path : r.paths) {
        for (std::size_t i = 1; i < path.keypoints.size(); ++i)
            CHECK(path.keypoints[i].time >= path.keypoints[i - 1].time);
        CHECK(path.keypoints.front().time >= 0.0);
        CHECK(path.keypoints.back().time <= 1.0);
    }
}

TEST_CASE("the straight baseline is a pure lerp with singleton groups") {
    SynthConfig synth;
    synth.seed = 42;
    synth.trajectory_count = 8;
    SynthDataset data = generate(synth);
    PipelineConfig cfg = default_config();
    cfg.frame_count = 5;
    cfg.propagate();
    AnimateResult r = animate_straight_baseline(data.trajectories, cfg);

    const FrameSet& frames = r.frames.frames;
    REQUIRE(frames.frame_count == 5);
    CHECK(r.frames.groups.groups.size() == 8);
    for (const auto& g : r.frames.groups.groups) CHECK(g.members.size() == 1);

    std::map<std::string, const Trajectory*> by_id;
    for (const auto& t : data.trajectories.trajectories) by_id[t.id] = &t;
    for (std::size_t o = 0; o < frames.object_ids.size(); ++o) {
        const Trajectory& t = *by_id.at(frames.object_ids[o]);
        Point2 expect = lerp(t.points.front(), t.points.back(), 0.5);
        CHECK(dist(frames.positions[2][o], expect) < 1e-12);
    }
}

TEST_CASE("routeflow disperses groups less than the straight baseline") {
    SynthConfig synth;
    synth.seed = 42;
    SynthDataset data = generate(synth);
    PipelineConfig cfg = default_config();
    cfg.frame_count = 120;
    cfg.propagate();

    AnimateResult ours = animate(data.trajectories, cfg);
    AnimateResult base = animate_straight_baseline(data.trajectories, cfg);

    // Evaluate both frame sets against the trajectory-aware grouping.
    double ours_dispersion = dispersion(ours.frames.frames, ours.frames.groups);
    double base_dispersion = dispersion(base.frames.frames, ours.frames.groups);
    CHECK(ours_dispersion < base_dispersion);
}
