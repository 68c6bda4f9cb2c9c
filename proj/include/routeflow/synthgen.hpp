#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "routeflow/model.hpp"

namespace routeflow {

enum class HotspotAssignment {
    OneConvOneDiv,  // 1 convergence + 1 divergence
    TwoConvOneDiv,  // 2 convergences + 1 divergence
    OneConvTwoDiv,  // 1 convergence + 2 divergences
};

const char* assignment_name(HotspotAssignment a);
bool parse_assignment(const std::string& text, HotspotAssignment& out);

struct SynthConfig {
    int trend_bends = 1; // 1 or 2
    HotspotAssignment assignment = HotspotAssignment::OneConvOneDiv;
    int trajectory_count = 30;
    double perturbation_scale = 0.01; // smooth noise amplitude, scene fraction
    std::uint64_t seed = 42;
};

struct TruthHotspot {
    Point2 position;
    bool convergence = true;
    double arc_fraction = 0.0; // position along the trend, for diagnostics
};

struct SynthDataset {
    TrajectorySet trajectories;
    std::vector<Point2> truth_trend;
    std::vector<TruthHotspot> truth_hotspots;
};

// Smooth global trend: random start/end plus `bends` interior control points,
// sampled as a clamped B-spline. Control triples keep interior angles above
// 135 degrees; rejection-sampled up to 1000 attempts.
std::vector<Point2> gen_trend(int bends, std::uint64_t seed);

// Distinct arc-length positions along the trend, ordered, with kinds per the
// assignment. A convergence always precedes its paired divergence.
std::vector<TruthHotspot> gen_hotspots(const std::vector<Point2>& trend, HotspotAssignment assignment,
                                       std::uint64_t seed);

// Full dataset: branch polylines attached at the hotspots, objects routed
// along trend or branches, smooth per-object noise, and start/end positions
// pairwise separated by at least two disc radii.
SynthDataset gen_trajectories(const std::vector<Point2>& trend, const std::vector<TruthHotspot>& hotspots,
                              const SynthConfig& cfg);

// gen_trend + gen_hotspots + gen_trajectories with a single seed.
SynthDataset generate(const SynthConfig& cfg);

} // namespace routeflow
