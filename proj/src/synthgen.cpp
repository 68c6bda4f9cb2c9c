#include "routeflow/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "routeflow/error.hpp"

namespace routeflow {

const char* assignment_name(HotspotAssignment a) {
    switch (a) {
    case HotspotAssignment::OneConvOneDiv: return "1conv+1div";
    case HotspotAssignment::TwoConvOneDiv: return "2conv+1div";
    case HotspotAssignment::OneConvTwoDiv: return "1conv+2div";
    }
    return "?";
}

bool parse_assignment(const std::string& text, HotspotAssignment& out) {
    if (text == "1conv+1div" || text == "1c1d") {
        out = HotspotAssignment::OneConvOneDiv;
        return true;
    }
    if (text == "2conv+1div" || text == "2c1d") {
        out = HotspotAssignment::TwoConvOneDiv;
        return true;
    }
    if (text == "1conv+2div" || text == "1c2d") {
        out = HotspotAssignment::OneConvTwoDiv;
        return true;
    }
    return false;
}

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kDiscRadius = 9.0 / 1250.0;
constexpr double kBranchOffset = 0.15;  // lateral distance of a branch from the trend
constexpr double kTaperWindow = 0.08;   // arc fraction over which a branch meets the trend
constexpr double kBlendWindow = 0.06;   // start/end jitter decay window
constexpr double kNoiseWindow = 0.04;   // noise fades to zero at the path ends

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 step, so the sub-generators draw from independent streams
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

double smooth01(double t) {
    t = std::clamp(t, 0.0, 1.0);
    return t * t * (3.0 - 2.0 * t);
}

// Clamped uniform B-spline of degree min(3, n-1) through the de Boor points,
// evaluated with de Boor's algorithm.
Point2 bspline_eval(const std::vector<Point2>& ctrl, int degree, double u) {
    const int n = static_cast<int>(ctrl.size());
    const int knot_count = n + degree + 1;
    auto knot = [&](int i) -> double {
        if (i <= degree) return 0.0;
        if (i >= knot_count - degree - 1) return 1.0;
        return static_cast<double>(i - degree) / static_cast<double>(n - degree);
    };

    u = std::clamp(u, 0.0, 1.0);
    int k = degree;
    while (k < n - 1 && u >= knot(k + 1)) ++k;

    std::vector<Point2> d(static_cast<std::size_t>(degree) + 1);
    for (int j = 0; j <= degree; ++j) d[static_cast<std::size_t>(j)] = ctrl[static_cast<std::size_t>(j + k - degree)];
    for (int r = 1; r <= degree; ++r) {
        for (int j = degree; j >= r; --j) {
            int i = j + k - degree;
            double denom = knot(i + degree + 1 - r) - knot(i);
            double alpha = denom > 0.0 ? (u - knot(i)) / denom : 0.0;
            d[static_cast<std::size_t>(j)] =
                d[static_cast<std::size_t>(j - 1)] * (1.0 - alpha) + d[static_cast<std::size_t>(j)] * alpha;
        }
    }
    return d[static_cast<std::size_t>(degree)];
}

std::vector<Point2> sample_bspline(const std::vector<Point2>& ctrl, int samples) {
    int degree = std::min<int>(3, static_cast<int>(ctrl.size()) - 1);
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(samples));
    for (int i = 0; i < samples; ++i)
        out.push_back(bspline_eval(ctrl, degree, static_cast<double>(i) / static_cast<double>(samples - 1)));
    dedupe_points(out);
    return out;
}

bool angles_ok(const std::vector<Point2>& ctrl) {
    for (std::size_t i = 1; i + 1 < ctrl.size(); ++i) {
        Point2 a = ctrl[i - 1] - ctrl[i];
        Point2 b = ctrl[i + 1] - ctrl[i];
        double na = norm(a), nb = norm(b);
        if (na < 1e-9 || nb < 1e-9) return false;
        double angle = std::acos(std::clamp(dot(a, b) / (na * nb), -1.0, 1.0));
        if (angle <= 135.0 * kPi / 180.0) return false;
    }
    return true;
}

// Arc-length parameterized view of a polyline.
struct ArcCurve {
    std::vector<Point2> points;
    std::vector<double> cumulative; // cumulative[i] = length up to points[i]
    double total = 0.0;

    explicit ArcCurve(std::vector<Point2> pts) : points(std::move(pts)) {
        cumulative.resize(points.size(), 0.0);
        for (std::size_t i = 1; i < points.size(); ++i)
            cumulative[i] = cumulative[i - 1] + dist(points[i - 1], points[i]);
        total = cumulative.back();
    }

    Point2 at(double frac) const {
        double target = std::clamp(frac, 0.0, 1.0) * total;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
        std::size_t hi = std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                               points.size() - 1);
        if (hi == 0) return points.front();
        std::size_t lo = hi - 1;
        double seg = cumulative[hi] - cumulative[lo];
        double t = seg > 0.0 ? (target - cumulative[lo]) / seg : 0.0;
        return lerp(points[lo], points[hi], t);
    }

    Point2 tangent(double frac) const {
        double target = std::clamp(frac, 0.0, 1.0) * total;
        auto it = std::lower_bound(cumulative.begin(), cumulative.end(), target);
        std::size_t hi = std::min<std::size_t>(std::max<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()), 1),
                                               points.size() - 1);
        return normalized(points[hi] - points[hi - 1]);
    }

    Point2 normal(double frac) const {
        Point2 t = tangent(frac);
        return {-t.y, t.x};
    }
};

} // namespace

std::vector<Point2> gen_trend(int bends, std::uint64_t seed) {
    if (bends != 1 && bends != 2)
        throw Error(ErrorCode::GenerationFailed, "gen_trend: bends must be 1 or 2");
    std::mt19937_64 rng(mix_seed(seed, 0));

    for (int attempt = 0; attempt < 1000; ++attempt) {
        Point2 start{uniform(rng, 0.22, 0.78), uniform(rng, 0.22, 0.78)};
        Point2 end{uniform(rng, 0.22, 0.78), uniform(rng, 0.22, 0.78)};
        if (dist(start, end) < 0.5) continue;

        Point2 axis = normalized(end - start);
        Point2 perp{-axis.y, axis.x};
        double span = dist(start, end);

        std::vector<Point2> ctrl{start};
        int interior = bends;
        for (int b = 0; b < interior; ++b) {
            double at = interior == 1 ? 0.5 : (b == 0 ? 1.0 / 3.0 : 2.0 / 3.0);
            double along = uniform(rng, -0.06, 0.06);
            double side = uniform(rng, 0.0, 1.0) < 0.5 ? -1.0 : 1.0;
            double off = side * uniform(rng, 0.04, 0.11) * span / 0.5;
            ctrl.push_back(start + axis * ((at + along) * span) + perp * off);
        }
        ctrl.push_back(end);

        if (!angles_ok(ctrl)) continue;
        std::vector<Point2> curve = sample_bspline(ctrl, 240);
        bool inside = true;
        for (const auto& p : curve)
            if (p.x < 0.18 || p.x > 0.82 || p.y < 0.18 || p.y > 0.82) inside = false;
        if (!inside) continue;
        return curve;
    }
    throw Error(ErrorCode::GenerationFailed, "gen_trend: rejection cap exceeded");
}

std::vector<TruthHotspot> gen_hotspots(const std::vector<Point2>& trend, HotspotAssignment assignment,
                                       std::uint64_t seed) {
    if (trend.size() < 2 || polyline_length(trend) <= 0.0)
        throw Error(ErrorCode::GenerationFailed, "gen_hotspots: degenerate trend");
    std::mt19937_64 rng(mix_seed(seed, 1));
    ArcCurve curve(trend);

    int count = assignment == HotspotAssignment::OneConvOneDiv ? 2 : 3;
    const double min_gap = count == 2 ? 0.22 : 0.18;

    std::vector<double> fracs;
    for (int attempt = 0; attempt < 1000 && static_cast<int>(fracs.size()) < count; ++attempt) {
        fracs.clear();
        for (int i = 0; i < count; ++i) fracs.push_back(uniform(rng, 0.28, 0.72));
        std::sort(fracs.begin(), fracs.end());
        bool ok = true;
        for (int i = 1; i < count; ++i)
            if (fracs[static_cast<std::size_t>(i)] - fracs[static_cast<std::size_t>(i - 1)] < min_gap) ok = false;
        if (!ok) fracs.clear();
    }
    if (static_cast<int>(fracs.size()) < count)
        throw Error(ErrorCode::GenerationFailed, "gen_hotspots: could not separate hotspots");

    // Kinds per assignment, a convergence always ahead of its divergence.
    std::vector<bool> conv;
    switch (assignment) {
    case HotspotAssignment::OneConvOneDiv: conv = {true, false}; break;
    case HotspotAssignment::TwoConvOneDiv: conv = {true, true, false}; break;
    case HotspotAssignment::OneConvTwoDiv: conv = {true, false, false}; break;
    }

    std::vector<TruthHotspot> out;
    for (int i = 0; i < count; ++i) {
        TruthHotspot h;
        h.arc_fraction = fracs[static_cast<std::size_t>(i)];
        h.position = curve.at(h.arc_fraction);
        h.convergence = conv[static_cast<std::size_t>(i)];
        out.push_back(h);
    }
    return out;
}

namespace {

// Sunflower lattice of `count` points with the given spacing, centered at c.
std::vector<Point2> sunflower(const Point2& c, int count, double spacing, double rotation) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    std::vector<Point2> out;
    out.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        double r = spacing * std::sqrt(static_cast<double>(i) + 0.5);
        double a = rotation + golden * static_cast<double>(i);
        out.push_back(c + Point2{std::cos(a), std::sin(a)} * r);
    }
    return out;
}

// Greedy nearest assignment of lattice points to cohorts with quotas.
std::vector<std::vector<Point2>> assign_lattice(const std::vector<Point2>& lattice,
                                                const std::vector<Point2>& origins,
                                                const std::vector<int>& quotas) {
    struct Entry {
        double d;
        std::size_t point, cohort;
    };
    std::vector<Entry> entries;
    for (std::size_t p = 0; p < lattice.size(); ++p)
        for (std::size_t c = 0; c < origins.size(); ++c)
            entries.push_back({dist(lattice[p], origins[c]), p, c});
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.d != b.d) return a.d < b.d;
        if (a.point != b.point) return a.point < b.point;
        return a.cohort < b.cohort;
    });

    std::vector<std::vector<Point2>> result(origins.size());
    std::vector<char> taken(lattice.size(), 0);
    std::vector<int> left = quotas;
    for (const auto& e : entries) {
        if (taken[e.point] || left[e.cohort] == 0) continue;
        taken[e.point] = 1;
        result[e.cohort].push_back(lattice[e.point]);
        --left[e.cohort];
    }
    return result;
}

struct Branch {
    double frac = 0.5;      // attachment arc fraction
    bool convergence = true;
    double side = 1.0;
    std::vector<int> members;
};

} // namespace

SynthDataset gen_trajectories(const std::vector<Point2>& trend, const std::vector<TruthHotspot>& hotspots,
                              const SynthConfig& cfg) {
    if (cfg.trajectory_count < 2)
        throw Error(ErrorCode::GenerationFailed, "gen_trajectories: need at least 2 trajectories");
    std::mt19937_64 rng(mix_seed(cfg.seed, 2));
    ArcCurve curve(trend);

    const int n = cfg.trajectory_count;

    // Partition objects: one slice per branch, the rest ride the whole trend.
    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);

    std::vector<Branch> branches;
    for (std::size_t h = 0; h < hotspots.size(); ++h) {
        Branch b;
        b.frac = hotspots[h].arc_fraction;
        b.convergence = hotspots[h].convergence;
        b.side = (h % 2 == 0) ? 1.0 : -1.0;
        branches.push_back(b);
    }
    int slice = std::max(2, n / (static_cast<int>(branches.size()) + 1));
    std::size_t cursor = 0;
    for (auto& b : branches) {
        for (int i = 0; i < slice && cursor + static_cast<std::size_t>(slice) < order.size(); ++i)
            b.members.push_back(order[cursor++]);
    }

    // Branch geometry: the trend offset laterally, meeting it smoothly over
    // the taper window at the attachment point.
    auto branch_point = [&](const Branch& b, double a) -> Point2 {
        double factor;
        if (b.convergence) {
            factor = a >= b.frac ? 0.0 : smooth01((b.frac - a) / kTaperWindow);
        } else {
            factor = a <= b.frac ? 0.0 : smooth01((a - b.frac) / kTaperWindow);
        }
        return curve.at(a) + curve.normal(a) * (b.side * kBranchOffset * factor);
    };

    std::vector<int> object_branch(static_cast<std::size_t>(n), -1);
    for (std::size_t bi = 0; bi < branches.size(); ++bi)
        for (int m : branches[bi].members) object_branch[static_cast<std::size_t>(m)] = static_cast<int>(bi);

    auto route_point = [&](int obj, double a) -> Point2 {
        int bi = object_branch[static_cast<std::size_t>(obj)];
        if (bi < 0) return curve.at(a);
        return branch_point(branches[static_cast<std::size_t>(bi)], a);
    };

    // Start and end cohorts keyed by route geometry at the extremes.
    auto cohort_of = [&](int obj, bool at_start) -> int {
        int bi = object_branch[static_cast<std::size_t>(obj)];
        if (bi < 0) return 0;
        const Branch& b = branches[static_cast<std::size_t>(bi)];
        if (at_start) return b.convergence ? bi + 1 : 0;
        return b.convergence ? 0 : bi + 1;
    };

    // Endpoint lattice spacing: as roomy as the scene allows, never tighter
    // than 2.2 disc radii.
    const double spacing =
        std::clamp(0.14 / std::sqrt(static_cast<double>(n)), 2.2 * kDiscRadius, 4.0 * kDiscRadius);
    SynthDataset out;
    out.truth_trend = trend;
    out.truth_hotspots = hotspots;

    for (int attempt = 0; attempt < 1000; ++attempt) {
        double rotation = uniform(rng, 0.0, 2.0 * kPi);
        double grow = 1.0 + 0.02 * attempt;

        auto place = [&](bool at_start) -> std::vector<Point2> {
            std::vector<Point2> origins;                 // per cohort
            std::vector<int> quotas;
            std::map<int, std::size_t> cohort_index;
            std::vector<int> cohorts(static_cast<std::size_t>(n));
            for (int o = 0; o < n; ++o) {
                int c = cohort_of(o, at_start);
                if (!cohort_index.count(c)) {
                    cohort_index[c] = origins.size();
                    double a = at_start ? 0.0 : 1.0;
                    origins.push_back(c == 0 ? curve.at(a)
                                             : branch_point(branches[static_cast<std::size_t>(c - 1)], a));
                    quotas.push_back(0);
                }
                cohorts[static_cast<std::size_t>(o)] = static_cast<int>(cohort_index[c]);
                quotas[cohort_index[c]] += 1;
            }
            Point2 center;
            for (std::size_t c = 0; c < origins.size(); ++c)
                center += origins[c] * (static_cast<double>(quotas[c]) / static_cast<double>(n));
            // Keep the whole lattice inside the scene.
            double blob = spacing * grow * std::sqrt(static_cast<double>(n) + 0.5);
            double margin = std::min(0.49, blob + 0.01);
            center.x = std::clamp(center.x, margin, 1.0 - margin);
            center.y = std::clamp(center.y, margin, 1.0 - margin);
            std::vector<Point2> lattice = sunflower(center, n, spacing * grow, rotation);
            auto by_cohort = assign_lattice(lattice, origins, quotas);

            std::vector<Point2> positions(static_cast<std::size_t>(n));
            std::vector<std::size_t> next(origins.size(), 0);
            for (int o = 0; o < n; ++o) {
                auto c = static_cast<std::size_t>(cohorts[static_cast<std::size_t>(o)]);
                Point2 p = by_cohort[c][next[c]++];
                p.x = std::clamp(p.x, 0.005, 0.995);
                p.y = std::clamp(p.y, 0.005, 0.995);
                positions[static_cast<std::size_t>(o)] = p;
            }
            return positions;
        };

        std::vector<Point2> starts = place(true);
        std::vector<Point2> ends = place(false);

        bool separated = true;
        for (int a = 0; a < n && separated; ++a)
            for (int b = a + 1; b < n; ++b)
                if (dist(starts[static_cast<std::size_t>(a)], starts[static_cast<std::size_t>(b)]) < 2.0 * kDiscRadius ||
                    dist(ends[static_cast<std::size_t>(a)], ends[static_cast<std::size_t>(b)]) < 2.0 * kDiscRadius) {
                    separated = false;
                    break;
                }
        if (!separated) continue;

        // Assemble the trajectories.
        const int samples = 120;
        int width = n > 100 ? 3 : 2;
        for (int o = 0; o < n; ++o) {
            double fx = uniform(rng, 0.8, 1.6);
            double fy = uniform(rng, 0.8, 1.6);
            double px = uniform(rng, 0.0, 2.0 * kPi);
            double py = uniform(rng, 0.0, 2.0 * kPi);

            Point2 start_jitter = starts[static_cast<std::size_t>(o)] - route_point(o, 0.0);
            Point2 end_jitter = ends[static_cast<std::size_t>(o)] - route_point(o, 1.0);

            Trajectory traj;
            std::string num = std::to_string(o);
            while (static_cast<int>(num.size()) < width) num = "0" + num;
            traj.id = "t" + num;
            traj.weight = 1;
            for (int s = 0; s < samples; ++s) {
                double a = static_cast<double>(s) / static_cast<double>(samples - 1);
                Point2 p = route_point(o, a);
                p += start_jitter * (1.0 - smooth01(a / kBlendWindow));
                p += end_jitter * (1.0 - smooth01((1.0 - a) / kBlendWindow));
                double window = smooth01(a / kNoiseWindow) * smooth01((1.0 - a) / kNoiseWindow);
                p += Point2{std::sin(2.0 * kPi * fx * a + px), std::sin(2.0 * kPi * fy * a + py)} *
                     (cfg.perturbation_scale * window);
                p.x = std::clamp(p.x, 0.005, 0.995);
                p.y = std::clamp(p.y, 0.005, 0.995);
                traj.points.push_back(p);
            }
            dedupe_points(traj.points);
            out.trajectories.trajectories.push_back(std::move(traj));
        }
        out.trajectories.normalized = true;
        out.trajectories.scene_bounds = {0.0, 0.0, 1.0, 1.0, 1.0, 0.0, 0.0};
        return out;
    }
    throw Error(ErrorCode::GenerationFailed, "gen_trajectories: start/end separation not satisfiable");
}

SynthDataset generate(const SynthConfig& cfg) {
    std::vector<Point2> trend = gen_trend(cfg.trend_bends, cfg.seed);
    std::vector<TruthHotspot> hotspots = gen_hotspots(trend, cfg.assignment, cfg.seed);
    return gen_trajectories(trend, hotspots, cfg);
}

} // namespace routeflow
