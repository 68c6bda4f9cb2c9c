#pragma once

#include <map>
#include <string>
#include <vector>

#include "routeflow/config.hpp"
#include "routeflow/hotspots.hpp"
#include "routeflow/io.hpp"

namespace routeflow {

struct StageTiming {
    std::string name;
    double seconds = 0.0;
};

struct RunManifest {
    std::string input_hash;
    std::string config_hash;
    std::uint64_t seed = 0;
    std::string tool_version;
    std::string started_at;  // ISO 8601, UTC
    std::string finished_at;
    std::vector<StageTiming> stages;
    double path_generation_seconds = 0.0;   // preprocessing + bundling + hotspot extraction
    double layout_generation_seconds = 0.0; // layout + timing + sampling
    double total_seconds = 0.0;
};

struct AnimateResult {
    FramesFile frames;
    BundleHierarchy hierarchy;
    HotspotGraph graph;
    LayoutPlan plan;
    std::vector<KeyframedPath> paths;
    SpeedRatioResult speed;
    RunManifest manifest;
    std::vector<std::string> warnings;
};

// The full pipeline: normalize, preprocess, bundle, extract hotspots, order,
// plan layout, time, enforce the speed ratio, and sample frames.
AnimateResult animate(const TrajectorySet& input, const PipelineConfig& cfg);

// Control condition: straight start-to-end interpolation, no bundling. Every
// object is its own group.
AnimateResult animate_straight_baseline(const TrajectorySet& input, const PipelineConfig& cfg);

std::string manifest_to_json(const RunManifest& manifest);

// Groups objects by identical hotspot itineraries and derives active frames
// from the journey times.
GroupAssignment derive_groups(const HotspotGraph& graph, const ScanlineResult& times,
                              const std::vector<KeyframedPath>& paths, int frame_count);

} // namespace routeflow
