#include "routeflow/bundling.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "routeflow/error.hpp"

namespace routeflow {

Point2 attraction_force(const Point2& u_i, const Point2& v_j, int cv, double eta) {
    Point2 diff = v_j - u_i;
    double d2 = norm2(diff);
    double denom = static_cast<double>(cv) * (eta * eta + d2) * (eta * eta + d2);
    return diff * (eta / denom);
}

Point2 spring_force(const Point2& u_prev, const Point2& u_i, const Point2& u_next, int cu) {
    return (u_next + u_prev - u_i * 2.0) * static_cast<double>(cu);
}

Point2 anchor_force(const Point2& u_i, const Point2& u_anchor) {
    // ||u'-u||^2 * (u'-u)/||u'-u|| collapses to ||u'-u|| * (u'-u), which is
    // well defined (zero) at u = u'.
    Point2 diff = u_anchor - u_i;
    return diff * norm(diff);
}

namespace {

// Internal bundling state: every original trajectory keeps its own C-point
// path for the whole run; units group trajectories that have been merged and
// carry the weighted-mean representative the forces act on.
struct Unit {
    std::string id; // smallest member id
    std::vector<int> members;
    double weight = 0.0;
    std::vector<Point2> rep;
    std::vector<Point2> rep_anchor;
    // Per-index bounding box over member paths, for run detection.
    std::vector<double> bb_min_x, bb_max_x, bb_min_y, bb_max_y;
};

struct BundleState {
    int c = 0;
    std::vector<std::string> ids;
    std::vector<double> weights;
    std::vector<std::vector<Point2>> paths;
    std::vector<std::vector<Point2>> anchors;
    // Per original, per index: 0 while movable, else the level that froze it.
    std::vector<std::vector<int>> frozen;
    std::vector<Unit> units;
};

void refresh_unit(const BundleState& st, Unit& u) {
    const int c = st.c;
    u.rep.assign(static_cast<std::size_t>(c), Point2{});
    u.rep_anchor.assign(static_cast<std::size_t>(c), Point2{});
    u.bb_min_x.assign(static_cast<std::size_t>(c), std::numeric_limits<double>::infinity());
    u.bb_max_x.assign(static_cast<std::size_t>(c), -std::numeric_limits<double>::infinity());
    u.bb_min_y = u.bb_min_x;
    u.bb_max_y = u.bb_max_x;
    double total = 0.0;
    for (int m : u.members) total += st.weights[static_cast<std::size_t>(m)];
    u.weight = total;
    for (int m : u.members) {
        double w = st.weights[static_cast<std::size_t>(m)] / total;
        const auto& path = st.paths[static_cast<std::size_t>(m)];
        const auto& anchor = st.anchors[static_cast<std::size_t>(m)];
        for (int i = 0; i < c; ++i) {
            const auto si = static_cast<std::size_t>(i);
            u.rep[si] += path[si] * w;
            u.rep_anchor[si] += anchor[si] * w;
            u.bb_min_x[si] = std::min(u.bb_min_x[si], path[si].x);
            u.bb_max_x[si] = std::max(u.bb_max_x[si], path[si].x);
            u.bb_min_y[si] = std::min(u.bb_min_y[si], path[si].y);
            u.bb_max_y[si] = std::max(u.bb_max_y[si], path[si].y);
        }
    }
}

BundleState make_state(const std::vector<ControlPolyline>& polylines, const std::vector<double>& weights) {
    BundleState st;
    st.c = polylines.empty() ? 0 : static_cast<int>(polylines.front().current.size());
    for (std::size_t i = 0; i < polylines.size(); ++i) {
        st.ids.push_back(polylines[i].trajectory_id);
        st.weights.push_back(weights.empty() ? 1.0 : weights[i]);
        st.paths.push_back(polylines[i].current);
        st.anchors.push_back(polylines[i].anchor);
        st.frozen.emplace_back(static_cast<std::size_t>(st.c), 0);  // level-0 = movable
        Unit u;
        u.id = polylines[i].trajectory_id;
        u.members = {static_cast<int>(i)};
        st.units.push_back(std::move(u));
    }
    for (auto& u : st.units) refresh_unit(st, u);
    return st;
}

// One synchronous force iteration: forces on unit representatives, evaluated
// on pre-step positions, then member paths moved by step * F. Endpoints are
// pinned and frozen indices do not move.
void force_iteration(BundleState& st, const CompatibilityIndex& compat, const BundlingParams& params,
                     double level_factor) {
    const int c = st.c;
    const std::size_t nu = st.units.size();

    std::map<std::string, int> unit_by_id;
    for (std::size_t ui = 0; ui < nu; ++ui) unit_by_id[st.units[ui].id] = static_cast<int>(ui);

    std::vector<std::vector<Point2>> deltas(nu);

#pragma omp parallel for schedule(dynamic, 1)
    for (long uil = 0; uil < static_cast<long>(nu); ++uil) {
        const auto ui = static_cast<std::size_t>(uil);
        const Unit& u = st.units[ui];
        auto nb_it = compat.neighbors.find(u.id);
        if (nb_it == compat.neighbors.end() || nb_it->second.empty()) continue;

        std::vector<const std::vector<Point2>*> neighbor_reps;
        for (const auto& [nid, _] : nb_it->second) {
            auto found = unit_by_id.find(nid);
            if (found != unit_by_id.end()) neighbor_reps.push_back(&st.units[static_cast<std::size_t>(found->second)].rep);
        }

        auto& delta = deltas[ui];
        delta.assign(static_cast<std::size_t>(c), Point2{});
        for (int i = 1; i < c - 1; ++i) {
            const auto si = static_cast<std::size_t>(i);
            bool movable = false;
            for (int m : u.members)
                if (!st.frozen[static_cast<std::size_t>(m)][si]) movable = true;
            if (!movable) continue;

            Point2 f;
            const Point2 ui_pt = u.rep[si];
            for (const auto* vrep : neighbor_reps) {
                Point2 att;
                for (const Point2& vj : *vrep) {
                    Point2 diff = vj - ui_pt;
                    double d2 = diff.x * diff.x + diff.y * diff.y;
                    double e2 = params.eta * params.eta + d2;
                    att += diff * (1.0 / (e2 * e2));
                }
                f += att * (params.eta / static_cast<double>(c));
            }
            // Only the component perpendicular to the local tangent bundles;
            // the tangential remainder would slide points along the polyline
            // and contract it toward its middle once neighbors nearly
            // coincide.
            Point2 tangent = normalized(u.rep[si + 1] - u.rep[si - 1], {0.0, 0.0});
            f -= tangent * dot(f, tangent);
            f = f * level_factor;
            f += spring_force(u.rep[si - 1], u.rep[si], u.rep[si + 1], c) * params.alpha;
            f += anchor_force(u.rep[si], u.rep_anchor[si]) * params.beta;
            Point2 d = f * params.step;
            // Cap the per-iteration move: the raw force blows up near contact
            // and would otherwise oscillate points straight past each other.
            double cap = 0.25 * params.merge_delta;
            double dn = norm(d);
            if (dn > cap) d = d * (cap / dn);
            delta[si] = d;
        }
    }

#pragma omp parallel for schedule(dynamic, 1)
    for (long uil = 0; uil < static_cast<long>(nu); ++uil) {
        const auto ui = static_cast<std::size_t>(uil);
        const auto& delta = deltas[ui];
        if (delta.empty()) continue;
        for (int m : st.units[ui].members) {
            auto& path = st.paths[static_cast<std::size_t>(m)];
            const auto& fr = st.frozen[static_cast<std::size_t>(m)];
            for (int i = 1; i < c - 1; ++i) {
                const auto si = static_cast<std::size_t>(i);
                if (!fr[si]) path[si] += delta[si];
            }
        }
        refresh_unit(st, st.units[ui]);
    }
}

// Longest index run (within [1, C-2]) over which the two units' members stay
// jointly within merge_delta, measured by the union bounding-box diagonal.
bool best_shared_run(const Unit& a, const Unit& b, const BundlingParams& params, IndexRange& out) {
    const int c = static_cast<int>(a.rep.size());
    const double delta2 = params.merge_delta * params.merge_delta;
    int best_lo = -1, best_len = 0;
    int run_lo = -1;
    for (int i = 1; i <= c - 2; ++i) {
        const auto si = static_cast<std::size_t>(i);
        double dx = std::max(a.bb_max_x[si], b.bb_max_x[si]) - std::min(a.bb_min_x[si], b.bb_min_x[si]);
        double dy = std::max(a.bb_max_y[si], b.bb_max_y[si]) - std::min(a.bb_min_y[si], b.bb_min_y[si]);
        bool close = dx * dx + dy * dy < delta2;
        if (close) {
            if (run_lo < 0) run_lo = i;
            int len = i - run_lo + 1;
            if (len > best_len) {
                best_len = len;
                best_lo = run_lo;
            }
        } else {
            run_lo = -1;
        }
    }
    if (best_len < params.min_run) return false;
    out = {best_lo, best_lo + best_len - 1};
    return true;
}

struct MergeCandidate {
    std::size_t a = 0, b = 0;
    IndexRange range;
};

bool candidate_less(const MergeCandidate& x, const MergeCandidate& y, const BundleState& st) {
    if (x.range.length() != y.range.length()) return x.range.length() > y.range.length();
    if (x.range.lo != y.range.lo) return x.range.lo < y.range.lo;
    const auto& xa = st.units[x.a].id;
    const auto& xb = st.units[x.b].id;
    const auto& ya = st.units[y.a].id;
    const auto& yb = st.units[y.b].id;
    if (xa != ya) return xa < ya;
    return xb < yb;
}

// Aligns a freshly detected range with the boundaries of earlier events
// among the same members: sub-min_run boundary jitter between sibling runs
// would otherwise split one corridor into near-duplicate hotspots.
void align_range_with_children(const std::vector<MergeEvent>& prior, const MergeEvent& ev,
                               IndexRange& range, int min_run) {
    int best_lo = range.lo, best_lo_gap = min_run + 1;
    int best_hi = range.hi, best_hi_gap = min_run + 1;
    for (const auto& child : prior) {
        if (!std::includes(ev.members.begin(), ev.members.end(), child.members.begin(),
                           child.members.end()))
            continue;
        int lo_gap = std::abs(child.range.lo - range.lo);
        if (lo_gap > 0 && lo_gap <= min_run && lo_gap < best_lo_gap) {
            best_lo = child.range.lo;
            best_lo_gap = lo_gap;
        }
        int hi_gap = std::abs(child.range.hi - range.hi);
        if (hi_gap > 0 && hi_gap <= min_run && hi_gap < best_hi_gap) {
            best_hi = child.range.hi;
            best_hi_gap = hi_gap;
        }
    }
    if (best_lo <= best_hi && best_hi - best_lo + 1 >= min_run) {
        range.lo = best_lo;
        range.hi = best_hi;
    }
}

// Detects bundled portions and merges them, tightest pair first, re-running
// detection against the freshly merged unit until nothing qualifies. Member
// geometry snaps to the weighted mean over indices not already frozen; frozen
// geometry is never modified.
std::vector<MergeEvent> merge_pass(BundleState& st, const BundlingParams& params, int level,
                                   const std::vector<MergeEvent>& earlier_events) {
    std::vector<MergeEvent> events;

    while (st.units.size() >= 2) {
        bool found = false;
        MergeCandidate best;
        for (std::size_t a = 0; a < st.units.size(); ++a) {
            for (std::size_t b = a + 1; b < st.units.size(); ++b) {
                MergeCandidate cand{a, b, {}};
                if (!best_shared_run(st.units[a], st.units[b], params, cand.range)) continue;
                if (!found || candidate_less(cand, best, st)) {
                    best = cand;
                    found = true;
                }
            }
        }
        if (!found) break;

        Unit& ua = st.units[best.a];
        Unit& ub = st.units[best.b];

        MergeEvent ev;
        ev.level = level;
        ev.range = best.range;
        for (int m : ua.members) ev.members.insert(st.ids[static_cast<std::size_t>(m)]);
        for (int m : ub.members) ev.members.insert(st.ids[static_cast<std::size_t>(m)]);
        align_range_with_children(earlier_events, ev, ev.range, params.min_run);
        align_range_with_children(events, ev, ev.range, params.min_run);
        ev.range.lo = std::max(ev.range.lo, 1);
        ev.range.hi = std::min(ev.range.hi, st.c - 2);

        std::vector<int> all_members = ua.members;
        all_members.insert(all_members.end(), ub.members.begin(), ub.members.end());
        std::sort(all_members.begin(), all_members.end());

        double total_w = 0.0;
        for (int m : all_members) total_w += st.weights[static_cast<std::size_t>(m)];

        for (int i = best.range.lo; i <= best.range.hi; ++i) {
            const auto si = static_cast<std::size_t>(i);
            // Geometry that took part in any earlier merge stays put.
            bool immutable = false;
            for (int m : all_members) {
                int fl = st.frozen[static_cast<std::size_t>(m)][si];
                if (fl != 0) immutable = true;
            }
            if (!immutable) {
                Point2 mean;
                for (int m : all_members)
                    mean += st.paths[static_cast<std::size_t>(m)][si] *
                            (st.weights[static_cast<std::size_t>(m)] / total_w);
                for (int m : all_members) st.paths[static_cast<std::size_t>(m)][si] = mean;
            }
            for (int m : all_members) {
                int& fl = st.frozen[static_cast<std::size_t>(m)][si];
                if (fl == 0) fl = level;
            }
        }

        Unit merged;
        merged.id = std::min(ua.id, ub.id);
        merged.members = std::move(all_members);
        std::size_t ia = std::min(best.a, best.b);
        std::size_t ib = std::max(best.a, best.b);
        st.units.erase(st.units.begin() + static_cast<long>(ib));
        st.units.erase(st.units.begin() + static_cast<long>(ia));
        st.units.push_back(std::move(merged));
        refresh_unit(st, st.units.back());
        std::sort(st.units.begin(), st.units.end(), [](const Unit& x, const Unit& y) { return x.id < y.id; });

        events.push_back(std::move(ev));
    }
    return events;
}

LevelResult state_to_level(const BundleState& st, int level, std::vector<MergeEvent> events) {
    LevelResult out;
    out.level = level;
    for (const auto& u : st.units) {
        ControlPolyline poly;
        poly.trajectory_id = u.id;
        poly.current = u.rep;
        poly.anchor = u.rep_anchor;
        out.polylines.push_back(std::move(poly));
        std::set<std::string> ids;
        for (int m : u.members) ids.insert(st.ids[static_cast<std::size_t>(m)]);
        out.membership[u.id] = std::move(ids);
    }
    for (const auto& ev : events) {
        // The unit owning this event is the one containing its members.
        for (const auto& u : st.units) {
            std::set<std::string> ids;
            for (int m : u.members) ids.insert(st.ids[static_cast<std::size_t>(m)]);
            if (std::includes(ids.begin(), ids.end(), ev.members.begin(), ev.members.end())) {
                out.merged_portions[u.id].push_back(ev.range);
                break;
            }
        }
    }
    out.events = std::move(events);
    return out;
}

int run_level(BundleState& st, const BundlingParams& params, int level, double level_factor,
              const std::vector<MergeEvent>& earlier_events, LevelResult& out) {
    if (st.units.size() >= 2) {
        std::vector<ControlPolyline> reps;
        for (const auto& u : st.units) {
            ControlPolyline p;
            p.trajectory_id = u.id;
            p.current = u.rep;
            p.anchor = u.rep_anchor;
            reps.push_back(std::move(p));
        }
        int k = std::min<int>(params.k, static_cast<int>(st.units.size()) - 1);
        CompatibilityIndex compat = build_compatibility(reps, k);
        for (int it = 0; it < params.iterations; ++it) force_iteration(st, compat, params, level_factor);
    }
    std::vector<MergeEvent> events = merge_pass(st, params, level, earlier_events);
    int count = static_cast<int>(events.size());
    out = state_to_level(st, level, std::move(events));
    return count;
}

} // namespace

std::vector<Point2> resultant_force(const std::vector<ControlPolyline>& polylines, int index,
                                    const CompatibilityIndex& compat, const BundlingParams& params,
                                    double level_factor) {
    const auto& u = polylines[static_cast<std::size_t>(index)];
    const int c = static_cast<int>(u.current.size());
    std::vector<Point2> forces(static_cast<std::size_t>(c));

    std::vector<const ControlPolyline*> neighbors;
    auto it = compat.neighbors.find(u.trajectory_id);
    if (it != compat.neighbors.end()) {
        for (const auto& [nid, _] : it->second)
            for (const auto& p : polylines)
                if (p.trajectory_id == nid) neighbors.push_back(&p);
    }

    for (int i = 1; i < c - 1; ++i) {
        const auto si = static_cast<std::size_t>(i);
        Point2 att;
        for (const auto* v : neighbors) {
            int cv = static_cast<int>(v->current.size());
            for (const auto& vj : v->current) att += attraction_force(u.current[si], vj, cv, params.eta);
        }
        forces[si] = att * level_factor +
                     spring_force(u.current[si - 1], u.current[si], u.current[si + 1], c) * params.alpha +
                     anchor_force(u.current[si], u.anchor[si]) * params.beta;
    }
    return forces;
}

LevelResult bundle_level(const std::vector<ControlPolyline>& polylines, const BundlingParams& params,
                         int level) {
    if (polylines.empty()) throw Error(ErrorCode::EmptyInput, "bundle_level: no polylines");
    BundleState st = make_state(polylines, {});
    double factor = std::pow(params.level_attraction_factor, static_cast<double>(level - 1));
    LevelResult out;
    run_level(st, params, level, factor, {}, out);
    return out;
}

// Drops events that carry no structure of their own: while units grow one
// merge at a time, each step records an event, but only the outermost event
// of every distinct traveling group marks real convergence and divergence
// points. An event is redundant when some other event bundles a superset of
// its members over a superset of its index range.
std::vector<MergeEvent> consolidate_events(const std::vector<MergeEvent>& events) {
    std::vector<MergeEvent> kept;
    for (std::size_t i = 0; i < events.size(); ++i) {
        const auto& a = events[i];
        bool redundant = false;
        for (std::size_t j = 0; j < events.size() && !redundant; ++j) {
            if (i == j) continue;
            const auto& b = events[j];
            bool members_covered =
                std::includes(b.members.begin(), b.members.end(), a.members.begin(), a.members.end());
            bool range_covered = b.range.lo <= a.range.lo && a.range.hi <= b.range.hi;
            if (!members_covered || !range_covered) continue;
            if (b.members.size() > a.members.size() || b.range.length() > a.range.length() ||
                (b.members == a.members && b.range.lo == a.range.lo && b.range.hi == a.range.hi && j < i))
                redundant = true;
        }
        if (!redundant) kept.push_back(a);
    }
    return kept;
}

BundleHierarchy bundle_hierarchy(const TrajectorySet& set, const BundlingParams& params) {
    if (set.trajectories.empty()) throw Error(ErrorCode::EmptyInput, "bundle_hierarchy: empty set");

    std::vector<Trajectory> sorted = set.trajectories;
    std::sort(sorted.begin(), sorted.end(),
              [](const Trajectory& a, const Trajectory& b) { return a.id < b.id; });

    std::vector<ControlPolyline> polylines;
    std::vector<double> weights;
    for (const auto& t : sorted) {
        polylines.push_back(resample(t, params.control_points));
        weights.push_back(static_cast<double>(t.weight));
    }

    BundleState st = make_state(polylines, weights);
    BundleHierarchy hierarchy;
    hierarchy.merge_delta = params.merge_delta;
    hierarchy.min_run = params.min_run;

    double factor = 1.0;
    for (int level = 1; level <= params.max_levels; ++level) {
        LevelResult result;
        int merges = run_level(st, params, level, factor, hierarchy.events, result);
        hierarchy.levels.push_back(result);
        for (const auto& ev : result.events) hierarchy.events.push_back(ev);
        if (merges == 0 || st.units.size() <= 1) break;
        factor *= params.level_attraction_factor;
    }

    hierarchy.events = consolidate_events(hierarchy.events);
    for (std::size_t i = 0; i < st.ids.size(); ++i) {
        hierarchy.final_paths[st.ids[i]] = st.paths[i];
        hierarchy.anchors[st.ids[i]] = st.anchors[i];
    }
    return hierarchy;
}

} // namespace routeflow
