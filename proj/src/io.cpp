#include "routeflow/io.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "routeflow/config.hpp"
#include "routeflow/error.hpp"

namespace routeflow {

namespace fs = std::filesystem;
using nlohmann::ordered_json;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
    fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
    }
    fs::path tmp = target;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error(ErrorCode::IoError, "cannot write " + tmp.string());
        out << content;
        if (!out) throw Error(ErrorCode::IoError, "write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw Error(ErrorCode::IoError, "rename failed for " + path + ": " + ec.message());
}

namespace {

ordered_json parse_json(const std::string& text, const std::string& what) {
    try {
        return ordered_json::parse(text);
    } catch (const std::exception& e) {
        throw Error(ErrorCode::ParseError, what + ": " + e.what());
    }
}

ordered_json point_to_json(const Point2& p) { return ordered_json::array({p.x, p.y}); }

Point2 point_from_json(const ordered_json& j, const std::string& where) {
    if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
        throw Error(ErrorCode::ParseError, where + ": point must be [x, y]");
    Point2 p{j[0].get<double>(), j[1].get<double>()};
    if (!finite(p)) throw Error(ErrorCode::ParseError, where + ": non-finite coordinate");
    return p;
}

} // namespace

TrajectoryFile load_trajectories(const std::string& path) {
    ordered_json j = parse_json(read_file(path), "trajectories " + path);
    TrajectoryFile file;

    if (!j.is_object() || !j.contains("trajectories") || !j.at("trajectories").is_array())
        throw Error(ErrorCode::ParseError, path + ": missing 'trajectories' array");
    if (j.contains("normalized")) file.set.normalized = j.at("normalized").get<bool>();

    std::set<std::string> seen;
    for (std::size_t i = 0; i < j.at("trajectories").size(); ++i) {
        const auto& tj = j.at("trajectories")[i];
        Trajectory t;
        if (!tj.contains("id") || !tj.at("id").is_string())
            throw Error(ErrorCode::ParseError, path + ": trajectory " + std::to_string(i) + " missing id");
        t.id = tj.at("id").get<std::string>();
        if (seen.count(t.id))
            throw Error(ErrorCode::ParseError, path + ": duplicate trajectory id '" + t.id + "'");
        seen.insert(t.id);
        if (tj.contains("weight")) {
            t.weight = tj.at("weight").get<int>();
            if (t.weight < 1)
                throw Error(ErrorCode::ParseError, path + ": trajectory '" + t.id + "' weight < 1");
        }
        if (!tj.contains("points") || !tj.at("points").is_array())
            throw Error(ErrorCode::ParseError, path + ": trajectory '" + t.id + "' missing points");
        for (const auto& pj : tj.at("points")) t.points.push_back(point_from_json(pj, path));
        dedupe_points(t.points);
        if (t.points.size() < 2)
            throw Error(ErrorCode::ParseError, path + ": trajectory '" + t.id + "' has fewer than 2 distinct points");
        file.set.trajectories.push_back(std::move(t));
    }
    if (file.set.normalized) file.set.scene_bounds = {0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0};

    if (j.contains("truth")) {
        const auto& truth = j.at("truth");
        if (truth.contains("trend")) {
            std::vector<Point2> trend;
            for (const auto& pj : truth.at("trend")) trend.push_back(point_from_json(pj, path));
            file.truth_trend = std::move(trend);
        }
        if (truth.contains("hotspots")) {
            std::vector<TruthHotspot> hs;
            for (const auto& hj : truth.at("hotspots")) {
                TruthHotspot h;
                h.position = point_from_json(hj.at("position"), path);
                h.convergence = hj.at("kind").get<std::string>() == "convergence";
                if (hj.contains("arc_fraction")) h.arc_fraction = hj.at("arc_fraction").get<double>();
                hs.push_back(h);
            }
            file.truth_hotspots = std::move(hs);
        }
    }
    return file;
}

std::string trajectories_to_json(const TrajectoryFile& file) {
    ordered_json j;
    j["normalized"] = file.set.normalized;
    j["trajectories"] = ordered_json::array();
    for (const auto& t : file.set.trajectories) {
        ordered_json tj;
        tj["id"] = t.id;
        tj["weight"] = t.weight;
        tj["points"] = ordered_json::array();
        for (const auto& p : t.points) tj["points"].push_back(point_to_json(p));
        j["trajectories"].push_back(std::move(tj));
    }
    if (file.truth_trend || file.truth_hotspots) {
        ordered_json truth;
        if (file.truth_trend) {
            truth["trend"] = ordered_json::array();
            for (const auto& p : *file.truth_trend) truth["trend"].push_back(point_to_json(p));
        }
        if (file.truth_hotspots) {
            truth["hotspots"] = ordered_json::array();
            for (const auto& h : *file.truth_hotspots) {
                truth["hotspots"].push_back({{"position", point_to_json(h.position)},
                                             {"kind", h.convergence ? "convergence" : "divergence"},
                                             {"arc_fraction", h.arc_fraction}});
            }
        }
        j["truth"] = std::move(truth);
    }
    return j.dump(2) + "\n";
}

void save_trajectories(const TrajectoryFile& file, const std::string& path) {
    write_file_atomic(path, trajectories_to_json(file));
}

FramesFile load_frames(const std::string& path) {
    ordered_json j = parse_json(read_file(path), "frames " + path);
    FramesFile file;
    if (!j.contains("frames") || !j.at("frames").is_array() || j.at("frames").empty())
        throw Error(ErrorCode::ParseError, path + ": missing 'frames' array");

    file.frames.radius = j.at("radius").get<double>();
    file.frames.frame_count = j.at("frame_count").get<int>();

    const auto& first = j.at("frames")[0];
    for (auto it = first.at("objects").begin(); it != first.at("objects").end(); ++it)
        file.frames.object_ids.push_back(it.key());
    std::sort(file.frames.object_ids.begin(), file.frames.object_ids.end());

    for (const auto& fj : j.at("frames")) {
        file.frames.times.push_back(fj.at("t").get<double>());
        std::vector<Point2> row;
        for (const auto& id : file.frames.object_ids) {
            if (!fj.at("objects").contains(id))
                throw Error(ErrorCode::ParseError, path + ": object '" + id + "' missing from a frame");
            row.push_back(point_from_json(fj.at("objects").at(id), path));
        }
        file.frames.positions.push_back(std::move(row));
    }
    if (static_cast<int>(file.frames.positions.size()) != file.frames.frame_count)
        throw Error(ErrorCode::ParseError, path + ": frame_count does not match frames");

    if (j.contains("groups")) {
        for (const auto& gj : j.at("groups")) {
            Group g;
            for (const auto& m : gj.at("members")) g.members.insert(m.get<std::string>());
            g.first_frame = gj.at("first_frame").get<int>();
            g.last_frame = gj.at("last_frame").get<int>();
            if (gj.contains("hotspot_times"))
                for (const auto& t : gj.at("hotspot_times")) g.hotspot_times.push_back(t.get<double>());
            file.groups.groups.push_back(std::move(g));
        }
    }
    return file;
}

std::string frames_to_json(const FramesFile& file) {
    ordered_json j;
    j["radius"] = file.frames.radius;
    j["frame_count"] = file.frames.frame_count;
    j["frames"] = ordered_json::array();
    for (int f = 0; f < file.frames.frame_count; ++f) {
        ordered_json fj;
        fj["t"] = file.frames.times[static_cast<std::size_t>(f)];
        ordered_json objs = ordered_json::object();
        for (std::size_t o = 0; o < file.frames.object_ids.size(); ++o)
            objs[file.frames.object_ids[o]] = point_to_json(file.frames.positions[static_cast<std::size_t>(f)][o]);
        fj["objects"] = std::move(objs);
        j["frames"].push_back(std::move(fj));
    }
    j["groups"] = ordered_json::array();
    for (const auto& g : file.groups.groups) {
        ordered_json gj;
        gj["members"] = ordered_json::array();
        for (const auto& m : g.members) gj["members"].push_back(m);
        gj["first_frame"] = g.first_frame;
        gj["last_frame"] = g.last_frame;
        gj["hotspot_times"] = g.hotspot_times;
        j["groups"].push_back(std::move(gj));
    }
    return j.dump() + "\n";
}

void save_frames(const FramesFile& file, const std::string& path) {
    write_file_atomic(path, frames_to_json(file));
}

std::string report_to_json(const MetricsReport& report, const std::string& dataset_id,
                           const std::string& params_hash, std::uint64_t seed) {
    ordered_json j;
    auto put = [&](const char* key, const std::optional<double>& v) {
        if (v) j[key] = *v;
    };
    put("occlusion_overall", report.occlusion_overall);
    put("occlusion_within", report.occlusion_within);
    put("deformation", report.deformation);
    put("dispersion", report.dispersion);
    put("deviation", report.deviation);
    put("ink_ratio", report.ink_ratio);
    j["provenance"] = {{"dataset", dataset_id}, {"params_hash", params_hash}, {"seed", seed}};
    if (!report.warnings.empty()) j["warnings"] = report.warnings;
    return j.dump(2) + "\n";
}

void export_svg(const FramesFile& file, const std::string& out_dir) {
    fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);

    for (int f = 0; f < file.frames.frame_count; ++f) {
        std::ostringstream os;
        os << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 1 1\">\n";
        os << "  <rect width=\"1\" height=\"1\" fill=\"white\"/>\n";
        for (std::size_t o = 0; o < file.frames.object_ids.size(); ++o) {
            const Point2& p = file.frames.positions[static_cast<std::size_t>(f)][o];
            os << "  <circle cx=\"" << p.x << "\" cy=\"" << p.y << "\" r=\"" << file.frames.radius
               << "\" fill=\"black\"/>\n";
        }
        os << "</svg>\n";
        char name[32];
        std::snprintf(name, sizeof(name), "frame_%04d.svg", f);
        write_file_atomic((dir / name).string(), os.str());
    }
}

void export_html(const FramesFile& file, const std::string& out_path) {
    std::ostringstream os;
    os << "<!DOCTYPE html>\n<html>\n<head>\n<meta charset=\"utf-8\">\n<title>routeflow player</title>\n"
       << "<style>body{margin:0;background:#222;display:flex;align-items:center;justify-content:center;"
       << "height:100vh}canvas{background:#fff}</style>\n</head>\n<body>\n"
       << "<canvas id=\"c\" width=\"800\" height=\"800\"></canvas>\n"
       << "<script>\nconst data = " << frames_to_json(file) << ";\n"
       << "const ctx = document.getElementById('c').getContext('2d');\n"
       << "const ids = Object.keys(data.frames[0].objects);\n"
       << "let frame = 0;\n"
       << "function draw() {\n"
       << "  ctx.clearRect(0, 0, 800, 800);\n"
       << "  const objs = data.frames[frame].objects;\n"
       << "  ctx.fillStyle = '#000';\n"
       << "  for (const id of ids) {\n"
       << "    const p = objs[id];\n"
       << "    ctx.beginPath();\n"
       << "    ctx.arc(p[0] * 800, p[1] * 800, data.radius * 800, 0, 2 * Math.PI);\n"
       << "    ctx.fill();\n"
       << "  }\n"
       << "  frame = (frame + 1) % data.frames.length;\n"
       << "  requestAnimationFrame(draw);\n"
       << "}\ndraw();\n</script>\n</body>\n</html>\n";
    write_file_atomic(out_path, os.str());
}

} // namespace routeflow
