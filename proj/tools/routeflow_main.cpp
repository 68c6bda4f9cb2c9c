#include <cstdint>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"

#include "routeflow/config.hpp"
#include "routeflow/error.hpp"
#include "routeflow/io.hpp"
#include "routeflow/metrics.hpp"
#include "routeflow/pipeline.hpp"
#include "routeflow/synthgen.hpp"

namespace {

using namespace routeflow;

struct CommonOpts {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<int> frames;
};

PipelineConfig resolve_config(const CommonOpts& opts) {
    PipelineConfig cfg = opts.config_path.empty() ? default_config() : load_config(opts.config_path);
    if (opts.seed) cfg.seed = *opts.seed;
    if (opts.frames) cfg.frame_count = *opts.frames;
    cfg.propagate();
    return cfg;
}

void add_common(CLI::App* cmd, CommonOpts& opts, bool frame_count_flag = true) {
    cmd->add_option("--config", opts.config_path, "pipeline config file (JSON)");
    cmd->add_option("--seed", opts.seed, "override the config seed");
    // The metrics subcommand reuses --frames for its input file.
    if (frame_count_flag) cmd->add_option("--frames", opts.frames, "override the frame count");
}

int cmd_defaults(const std::string& out) {
    std::string text = config_to_json(default_config());
    if (out.empty()) std::cout << text;
    else write_file_atomic(out, text);
    return 0;
}

int cmd_synth(const CommonOpts& opts, const std::string& bends, const std::string& assignment,
              std::optional<int> count, std::optional<double> perturbation, const std::string& out) {
    PipelineConfig cfg = resolve_config(opts);
    if (!bends.empty()) {
        if (bends != "1" && bends != "2") throw Error(ErrorCode::UsageError, "--bends must be 1 or 2");
        cfg.synth.trend_bends = bends == "1" ? 1 : 2;
    }
    if (!assignment.empty() && !parse_assignment(assignment, cfg.synth.assignment))
        throw Error(ErrorCode::UsageError, "bad --assignment '" + assignment +
                                               "' (expected 1conv+1div, 2conv+1div or 1conv+2div)");
    if (count) cfg.synth.trajectory_count = *count;
    if (perturbation) cfg.synth.perturbation_scale = *perturbation;
    cfg.synth.seed = cfg.seed;

    SynthDataset dataset = generate(cfg.synth);
    TrajectoryFile file;
    file.set = dataset.trajectories;
    file.truth_trend = dataset.truth_trend;
    file.truth_hotspots = dataset.truth_hotspots;
    save_trajectories(file, out);
    return 0;
}

int cmd_preprocess(const CommonOpts& opts, const std::string& in, const std::string& out) {
    PipelineConfig cfg = resolve_config(opts);
    TrajectoryFile file = load_trajectories(in);
    TrajectorySet set = file.set.normalized ? file.set : normalize(file.set);
    file.set = preprocess(set, cfg.preprocess, cfg.control_points);
    save_trajectories(file, out);
    return 0;
}

int cmd_animate(const CommonOpts& opts, const std::string& in, const std::string& out,
                const std::string& baseline, const std::string& paths_out,
                const std::string& dump_levels, const std::string& dump_graph,
                const std::string& dump_layout) {
    PipelineConfig cfg = resolve_config(opts);
    if (!baseline.empty() && baseline != "straight")
        throw Error(ErrorCode::UsageError, "unknown baseline '" + baseline + "'");

    TrajectoryFile file = load_trajectories(in);
    AnimateResult result = baseline == "straight" ? animate_straight_baseline(file.set, cfg)
                                                  : animate(file.set, cfg);
    result.manifest.input_hash = fnv1a_hex(read_file(in));

    for (const auto& w : result.warnings) std::cerr << "routeflow: warning: " << w << "\n";
    save_frames(result.frames, out);
    write_file_atomic(out + ".manifest.json", manifest_to_json(result.manifest));

    if (!paths_out.empty()) {
        TrajectoryFile bundled;
        bundled.set.normalized = true;
        for (const auto& [id, path] : result.hierarchy.final_paths) {
            Trajectory t;
            t.id = id;
            t.points = path;
            dedupe_points(t.points);
            if (t.points.size() < 2) t.points.push_back(path.back());
            bundled.set.trajectories.push_back(std::move(t));
        }
        save_trajectories(bundled, paths_out);
    }
    if (!dump_levels.empty()) {
        nlohmann::ordered_json j = nlohmann::ordered_json::array();
        for (const auto& level : result.hierarchy.levels) {
            nlohmann::ordered_json lj;
            lj["level"] = level.level;
            for (const auto& poly : level.polylines) {
                nlohmann::ordered_json pts = nlohmann::ordered_json::array();
                for (const auto& p : poly.current) pts.push_back({p.x, p.y});
                lj["polylines"][poly.trajectory_id] = std::move(pts);
            }
            for (const auto& ev : level.events) {
                nlohmann::ordered_json ej;
                ej["members"] = ev.members;
                ej["range"] = {ev.range.lo, ev.range.hi};
                lj["events"].push_back(std::move(ej));
            }
            j.push_back(std::move(lj));
        }
        write_file_atomic(dump_levels, j.dump(2) + "\n");
    }
    if (!dump_graph.empty()) write_file_atomic(dump_graph, to_dot(result.graph));
    if (!dump_layout.empty()) {
        nlohmann::ordered_json j;
        for (const auto& [node, layout] : result.plan.node_layouts) {
            nlohmann::ordered_json lj;
            for (const auto& [obj, off] : layout.offsets) lj[obj] = {off.x, off.y};
            j[node] = std::move(lj);
        }
        write_file_atomic(dump_layout, j.dump(2) + "\n");
    }
    return 0;
}

int cmd_metrics(const CommonOpts& opts, const std::string& frames_path, const std::string& original_path,
                const std::string& bundled_path, const std::string& out) {
    PipelineConfig cfg = resolve_config(opts);
    if (frames_path.empty() && (original_path.empty() || bundled_path.empty()))
        throw Error(ErrorCode::UsageError, "metrics needs --frames and/or both --original and --bundled");

    MetricsReport report;
    std::string dataset_id;

    if (!frames_path.empty()) {
        FramesFile frames = load_frames(frames_path);
        dataset_id = frames_path;
        report.occlusion_overall = occlusion_overall(frames.frames, frames.frames.radius);
        report.occlusion_within =
            occlusion_within(frames.frames, frames.groups, frames.frames.radius, &report.warnings);
        report.deformation = deformation(frames.frames, frames.groups);
        report.dispersion = dispersion(frames.frames, frames.groups);
    }
    if (!original_path.empty() && !bundled_path.empty()) {
        TrajectoryFile original = load_trajectories(original_path);
        TrajectoryFile bundled = load_trajectories(bundled_path);
        if (dataset_id.empty()) dataset_id = original_path;
        std::map<std::string, std::vector<Point2>> bundled_paths;
        for (const auto& t : bundled.set.trajectories) bundled_paths[t.id] = t.points;
        TrajectorySet orig_set = original.set.normalized ? original.set : normalize(original.set);
        report.deviation = deviation(orig_set, bundled_paths);
        report.ink_ratio = ink_ratio(orig_set, bundled_paths, cfg.raster);
    }

    std::string text = report_to_json(report, dataset_id, config_hash(cfg), cfg.seed);
    if (out.empty()) std::cout << text;
    else write_file_atomic(out, text);
    return 0;
}

int cmd_export(const std::string& frames_path, const std::string& format, const std::string& out) {
    FramesFile frames = load_frames(frames_path);
    if (frames.frames.frame_count <= 0 || frames.frames.object_ids.empty())
        throw Error(ErrorCode::UsageError, "export: frames file is empty");
    if (format == "svg") export_svg(frames, out);
    else if (format == "html") export_html(frames, out);
    else throw Error(ErrorCode::UsageError, "unknown format '" + format + "' (svg or html)");
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"trajectory-aware animated transitions"};
    app.require_subcommand(1);

    CommonOpts opts;
    std::string in, out, bends, assignment, baseline, format;
    std::string paths_out, dump_levels, dump_graph, dump_layout;
    std::string frames_path, original_path, bundled_path;
    std::optional<int> count;
    std::optional<double> perturbation;

    CLI::App* defaults = app.add_subcommand("defaults", "print the default config");
    defaults->add_option("--out", out, "write to a file instead of stdout");

    CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
    add_common(synth, opts);
    synth->add_option("--bends", bends, "global trend bends (1 or 2)");
    synth->add_option("--assignment", assignment, "hotspot assignment (1conv+1div, 2conv+1div, 1conv+2div)");
    synth->add_option("--count", count, "trajectory count");
    synth->add_option("--perturbation", perturbation, "perturbation scale");
    synth->add_option("--out", out, "output trajectory JSON")->required();

    CLI::App* preprocess = app.add_subcommand("preprocess", "normalize and clean a trajectory set");
    add_common(preprocess, opts);
    preprocess->add_option("--in", in, "input trajectory JSON")->required();
    preprocess->add_option("--out", out, "output trajectory JSON")->required();

    CLI::App* animate = app.add_subcommand("animate", "run the full animation pipeline");
    add_common(animate, opts);
    animate->add_option("--in", in, "input trajectory JSON")->required();
    animate->add_option("--out", out, "output frames JSON")->required();
    animate->add_option("--baseline", baseline, "straight: no bundling control condition");
    animate->add_option("--paths-out", paths_out, "also write the bundled paths");
    animate->add_option("--dump-levels", dump_levels, "debug: per-level polylines JSON");
    animate->add_option("--dump-graph", dump_graph, "debug: hotspot graph as DOT");
    animate->add_option("--dump-layout", dump_layout, "debug: per-node layouts JSON");

    CLI::App* metrics = app.add_subcommand("metrics", "evaluate animation and bundling metrics");
    add_common(metrics, opts, /*frame_count_flag=*/false);
    metrics->add_option("--frames", frames_path, "frames JSON (animation metrics)");
    metrics->add_option("--original", original_path, "original trajectory JSON (bundling metrics)");
    metrics->add_option("--bundled", bundled_path, "bundled trajectory JSON (bundling metrics)");
    metrics->add_option("--out", out, "write the report to a file instead of stdout");

    CLI::App* exp = app.add_subcommand("export", "export frames as SVG files or an HTML player");
    exp->add_option("--frames", frames_path, "frames JSON")->required();
    exp->add_option("--format", format, "svg or html")->required();
    exp->add_option("--out", out, "output directory (svg) or file (html)")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        std::cerr << "routeflow: error: UsageError: " << e.what() << "\n";
        return 2;
    }

    try {
        if (defaults->parsed()) return cmd_defaults(out);
        if (synth->parsed()) return cmd_synth(opts, bends, assignment, count, perturbation, out);
        if (preprocess->parsed()) return cmd_preprocess(opts, in, out);
        if (animate->parsed())
            return cmd_animate(opts, in, out, baseline, paths_out, dump_levels, dump_graph, dump_layout);
        if (metrics->parsed()) return cmd_metrics(opts, frames_path, original_path, bundled_path, out);
        if (exp->parsed()) return cmd_export(frames_path, format, out);
    } catch (const Error& e) {
        std::cerr << "routeflow: error: " << e.what() << "\n";
        switch (e.code()) {
        case ErrorCode::UsageError: return 2;
        case ErrorCode::ParseError: return 3;
        default: return 4;
        }
    } catch (const std::exception& e) {
        std::cerr << "routeflow: error: Internal: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
