#pragma once

#include <cstdint>
#include <string>

#include "routeflow/bundling.hpp"
#include "routeflow/layout.hpp"
#include "routeflow/metrics.hpp"
#include "routeflow/model.hpp"
#include "routeflow/synthgen.hpp"
#include "routeflow/timing.hpp"

namespace routeflow {

// Every knob of the pipeline in one serializable block. Unknown keys in a
// config file are rejected.
struct PipelineConfig {
    std::uint64_t seed = 42;
    int frame_count = 240;
    int control_points = 32;
    PreprocessConfig preprocess;
    BundlingParams bundling;
    LayoutParams layout;
    TimingParams timing;
    RasterConfig raster;
    SynthConfig synth;

    // Keeps the shared knobs (seed, counts) consistent across sub-blocks.
    void propagate();
};

PipelineConfig default_config();

std::string config_to_json(const PipelineConfig& cfg);
PipelineConfig config_from_json(const std::string& text);
PipelineConfig load_config(const std::string& path);

// FNV-1a over a canonical serialization; used for run provenance.
std::string config_hash(const PipelineConfig& cfg);
std::string fnv1a_hex(const std::string& bytes);

} // namespace routeflow
