#include "routeflow/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

#include "routeflow/error.hpp"

namespace routeflow {

using nlohmann::ordered_json;

void PipelineConfig::propagate() {
    bundling.control_points = control_points;
    timing.frame_count = frame_count;
    timing.seed = seed;
    synth.seed = seed;
}

PipelineConfig default_config() {
    PipelineConfig cfg;
    cfg.propagate();
    return cfg;
}

namespace {

void check_keys(const ordered_json& obj, const std::set<std::string>& allowed, const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        if (!allowed.count(it.key()))
            throw Error(ErrorCode::ParseError, "config: unknown key '" + it.key() + "' in " + where);
    }
}

template <typename T>
void read(const ordered_json& obj, const char* key, T& out) {
    if (obj.contains(key)) out = obj.at(key).get<T>();
}

} // namespace

std::string config_to_json(const PipelineConfig& cfg) {
    ordered_json j;
    j["seed"] = cfg.seed;
    j["frame_count"] = cfg.frame_count;
    j["control_points"] = cfg.control_points;
    j["preprocess"] = {{"max_step", cfg.preprocess.max_step},
                       {"simplify_eps", cfg.preprocess.simplify_eps},
                       {"merge_eps", cfg.preprocess.merge_eps}};
    j["bundling"] = {{"eta", cfg.bundling.eta},
                     {"alpha", cfg.bundling.alpha},
                     {"beta", cfg.bundling.beta},
                     {"k", cfg.bundling.k},
                     {"iterations", cfg.bundling.iterations},
                     {"step", cfg.bundling.step},
                     {"level_attraction_factor", cfg.bundling.level_attraction_factor},
                     {"max_levels", cfg.bundling.max_levels},
                     {"merge_delta", cfg.bundling.merge_delta},
                     {"min_run", cfg.bundling.min_run}};
    j["layout"] = {{"radius", cfg.layout.radius},
                   {"ref_gain", cfg.layout.ref_gain},
                   {"neighbor_gain", cfg.layout.neighbor_gain},
                   {"max_iterations", cfg.layout.max_iterations},
                   {"tolerance", cfg.layout.tolerance}};
    j["timing"] = {{"easing", cfg.timing.easing},
                   {"speed_max_iters", cfg.timing.speed_max_iters},
                   {"adjust_fraction", cfg.timing.adjust_fraction}};
    j["raster"] = {{"resolution", cfg.raster.resolution}};
    j["synth"] = {{"trend_bends", cfg.synth.trend_bends},
                  {"hotspot_assignment", assignment_name(cfg.synth.assignment)},
                  {"trajectory_count", cfg.synth.trajectory_count},
                  {"perturbation_scale", cfg.synth.perturbation_scale}};
    return j.dump(2) + "\n";
}

PipelineConfig config_from_json(const std::string& text) {
    ordered_json j;
    try {
        j = ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("config: ") + e.what());
    }

    PipelineConfig cfg;
    check_keys(j, {"seed", "frame_count", "control_points", "preprocess", "bundling", "layout", "timing",
                   "raster", "synth"},
               "top level");
    read(j, "seed", cfg.seed);
    read(j, "frame_count", cfg.frame_count);
    read(j, "control_points", cfg.control_points);

    if (j.contains("preprocess")) {
        const auto& p = j.at("preprocess");
        check_keys(p, {"max_step", "simplify_eps", "merge_eps"}, "preprocess");
        read(p, "max_step", cfg.preprocess.max_step);
        read(p, "simplify_eps", cfg.preprocess.simplify_eps);
        read(p, "merge_eps", cfg.preprocess.merge_eps);
    }
    if (j.contains("bundling")) {
        const auto& b = j.at("bundling");
        check_keys(b,
                   {"eta", "alpha", "beta", "k", "iterations", "step", "level_attraction_factor",
                    "max_levels", "merge_delta", "min_run"},
                   "bundling");
        read(b, "eta", cfg.bundling.eta);
        read(b, "alpha", cfg.bundling.alpha);
        read(b, "beta", cfg.bundling.beta);
        read(b, "k", cfg.bundling.k);
        read(b, "iterations", cfg.bundling.iterations);
        read(b, "step", cfg.bundling.step);
        read(b, "level_attraction_factor", cfg.bundling.level_attraction_factor);
        read(b, "max_levels", cfg.bundling.max_levels);
        read(b, "merge_delta", cfg.bundling.merge_delta);
        read(b, "min_run", cfg.bundling.min_run);
    }
    if (j.contains("layout")) {
        const auto& l = j.at("layout");
        check_keys(l, {"radius", "ref_gain", "neighbor_gain", "max_iterations", "tolerance"}, "layout");
        read(l, "radius", cfg.layout.radius);
        read(l, "ref_gain", cfg.layout.ref_gain);
        read(l, "neighbor_gain", cfg.layout.neighbor_gain);
        read(l, "max_iterations", cfg.layout.max_iterations);
        read(l, "tolerance", cfg.layout.tolerance);
    }
    if (j.contains("timing")) {
        const auto& t = j.at("timing");
        check_keys(t, {"easing", "speed_max_iters", "adjust_fraction"}, "timing");
        read(t, "easing", cfg.timing.easing);
        read(t, "speed_max_iters", cfg.timing.speed_max_iters);
        read(t, "adjust_fraction", cfg.timing.adjust_fraction);
    }
    if (j.contains("raster")) {
        const auto& r = j.at("raster");
        check_keys(r, {"resolution"}, "raster");
        read(r, "resolution", cfg.raster.resolution);
    }
    if (j.contains("synth")) {
        const auto& s = j.at("synth");
        check_keys(s, {"trend_bends", "hotspot_assignment", "trajectory_count", "perturbation_scale"},
                   "synth");
        read(s, "trend_bends", cfg.synth.trend_bends);
        if (s.contains("hotspot_assignment")) {
            std::string name = s.at("hotspot_assignment").get<std::string>();
            if (!parse_assignment(name, cfg.synth.assignment))
                throw Error(ErrorCode::ParseError, "config: bad hotspot_assignment '" + name + "'");
        }
        read(s, "trajectory_count", cfg.synth.trajectory_count);
        read(s, "perturbation_scale", cfg.synth.perturbation_scale);
    }

    cfg.propagate();
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error(ErrorCode::IoError, "config: cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return config_from_json(os.str());
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

std::string config_hash(const PipelineConfig& cfg) { return fnv1a_hex(config_to_json(cfg)); }

} // namespace routeflow
