#include "routeflow/layout.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "routeflow/error.hpp"

namespace routeflow {

namespace {

Point2 local_centroid(const PackBody& body) {
    Point2 c;
    for (const auto& [_, off] : body.members) c += off;
    return c * (1.0 / static_cast<double>(body.members.size()));
}

Point2 body_centroid(const PackBody& body) { return body.translation + local_centroid(body); }

double body_radius(const PackBody& body, double disc_radius) {
    Point2 c = local_centroid(body);
    double r = 0.0;
    for (const auto& [_, off] : body.members) r = std::max(r, dist(off, c));
    return r + disc_radius;
}

// One full pass over all body pairs, translating each penetrating pair apart
// along their center line, split inversely to body size. Separating along
// the body centers (not the disc centers) keeps the push direction
// consistent, so a disc caught between two members of a rigid body escapes
// instead of oscillating. Returns the largest translation applied.
double resolve_penetrations_once(std::vector<PackBody>& bodies, double disc_radius,
                                 const std::vector<double>& radii) {
    const double min_sep = 2.0 * disc_radius;
    double moved = 0.0;
    for (std::size_t a = 0; a < bodies.size(); ++a) {
        for (std::size_t b = a + 1; b < bodies.size(); ++b) {
            // Bounding circles first: most pairs are nowhere near each other.
            double reach = radii[a] + radii[b];
            if (dist2(body_centroid(bodies[a]), body_centroid(bodies[b])) >= reach * reach) continue;
            double depth = 0.0;
            Point2 contact_dir{1.0, 0.0};
            for (const auto& [ida, offa] : bodies[a].members) {
                for (const auto& [idb, offb] : bodies[b].members) {
                    Point2 pa = bodies[a].translation + offa;
                    Point2 pb = bodies[b].translation + offb;
                    double d = dist(pa, pb);
                    if (min_sep - d > depth) {
                        depth = min_sep - d;
                        if (d > 1e-12) contact_dir = (pb - pa) * (1.0 / d);
                    }
                }
            }
            if (depth <= 0.0) continue;
            Point2 dir = body_centroid(bodies[b]) - body_centroid(bodies[a]);
            dir = normalized(dir, contact_dir);
            double na = static_cast<double>(bodies[a].members.size());
            double nb = static_cast<double>(bodies[b].members.size());
            Point2 shift_a = dir * (-depth * nb / (na + nb));
            Point2 shift_b = dir * (depth * na / (na + nb));
            bodies[a].translation += shift_a;
            bodies[b].translation += shift_b;
            moved = std::max({moved, norm(shift_a), norm(shift_b)});
        }
    }
    return moved;
}

void resolve_penetrations(std::vector<PackBody>& bodies, double disc_radius, int max_sweeps) {
    std::vector<double> radii(bodies.size());
    for (std::size_t i = 0; i < bodies.size(); ++i) radii[i] = body_radius(bodies[i], disc_radius);
    for (int s = 0; s < max_sweeps; ++s) {
        if (resolve_penetrations_once(bodies, disc_radius, radii) <= 0.0) return;
    }
}

// Shared relaxation behind pack_group and the layout planner. Each incoming
// body starts on its own exit ray (rank 0 farthest out); every iteration
// pulls bodies toward the reference point and their nearest neighbor, then
// clears all penetrations by translation.
GroupLayout pack_bodies(std::vector<PackBody> bodies, const std::vector<Point2>& exits,
                        const LayoutParams& params, const std::string& hotspot_id) {
    GroupLayout layout;
    layout.hotspot_id = hotspot_id;
    if (bodies.empty()) return layout;

    double front = 0.0;
    bool any_preplaced = false;
    for (std::size_t i = 0; i < bodies.size(); ++i) {
        if (!bodies[i].preplaced) continue;
        any_preplaced = true;
        front = std::max(front, norm(body_centroid(bodies[i])) + body_radius(bodies[i], params.radius));
    }

    // Queue incoming bodies along their rays, earliest rank in front.
    std::map<std::pair<double, double>, std::vector<std::size_t>> rays;
    for (std::size_t i = 0; i < bodies.size(); ++i)
        if (!bodies[i].preplaced) rays[{exits[i].x, exits[i].y}].push_back(i);

    for (auto& [key, list] : rays) {
        Point2 exit{key.first, key.second};
        Point2 perp{-exit.y, exit.x};
        std::sort(list.begin(), list.end(), [&](std::size_t a, std::size_t b) {
            if (bodies[a].rank != bodies[b].rank) return bodies[a].rank < bodies[b].rank;
            return bodies[a].members.front().first < bodies[b].members.front().first;
        });
        double chain = 0.0;
        for (std::size_t i : list) chain += 2.0 * body_radius(bodies[i], params.radius);
        double cursor = (any_preplaced ? front : 0.0) + chain;
        int slot = 0;
        for (std::size_t i : list) {
            double r = body_radius(bodies[i], params.radius);
            cursor -= r;
            // A small alternating lateral stagger breaks the collinear
            // symmetry so the chain can fold into a compact cluster.
            double lateral = 0.3 * params.radius * (slot % 2 == 0 ? 1.0 : -1.0);
            bodies[i].translation = exit * cursor + perp * lateral - local_centroid(bodies[i]);
            cursor -= r;
            ++slot;
        }
    }

    for (int iter = 0; iter < params.max_iterations; ++iter) {
        std::vector<Point2> centers(bodies.size());
        for (std::size_t i = 0; i < bodies.size(); ++i) centers[i] = body_centroid(bodies[i]);
        std::vector<Point2> before(bodies.size());
        for (std::size_t i = 0; i < bodies.size(); ++i) before[i] = bodies[i].translation;

        std::vector<Point2> deltas(bodies.size());
        for (std::size_t i = 0; i < bodies.size(); ++i) {
            deltas[i] = centers[i] * -params.ref_gain;
            if (bodies.size() > 1) {
                double best = std::numeric_limits<double>::infinity();
                std::size_t nearest = i;
                for (std::size_t j = 0; j < bodies.size(); ++j) {
                    if (j == i) continue;
                    double d = dist(centers[i], centers[j]);
                    if (d < best) {
                        best = d;
                        nearest = j;
                    }
                }
                deltas[i] += (centers[nearest] - centers[i]) * params.neighbor_gain;
            }
        }
        for (std::size_t i = 0; i < bodies.size(); ++i) bodies[i].translation += deltas[i];

        resolve_penetrations(bodies, params.radius, 64);

        double max_disp = 0.0;
        for (std::size_t i = 0; i < bodies.size(); ++i)
            max_disp = std::max(max_disp, dist(before[i], bodies[i].translation));
        if (max_disp < params.tolerance) break;
    }

    // The non-overlap guarantee is hard: keep sweeping until clean.
    resolve_penetrations(bodies, params.radius, 10000);

    Point2 center;
    int count = 0;
    for (const auto& b : bodies)
        for (const auto& [_, off] : b.members) {
            center += b.translation + off;
            ++count;
        }
    center = center * (1.0 / static_cast<double>(count));

    for (const auto& b : bodies) {
        std::set<std::string> group;
        for (const auto& [id, off] : b.members) {
            layout.offsets[id] = b.translation + off - center;
            group.insert(id);
        }
        layout.rigid_subgroups.push_back(std::move(group));
    }
    return layout;
}

} // namespace

GroupLayout pack_group(std::vector<PackBody> bodies, const Point2& exit_direction,
                       const LayoutParams& params, const std::string& hotspot_id) {
    std::vector<Point2> exits(bodies.size(), normalized(exit_direction));
    return pack_bodies(std::move(bodies), exits, params, hotspot_id);
}

namespace {

// Scan direction shared with the timing module: from the mean of all start
// positions toward the mean of all end positions.
Point2 journey_direction(const HotspotGraph& graph) {
    Point2 start_mean, end_mean;
    int n = 0;
    for (const auto& node : graph.nodes) {
        if (node.role == NodeRole::Source) {
            start_mean += node.position;
            ++n;
        } else if (node.role == NodeRole::Sink) {
            end_mean += node.position;
        }
    }
    if (n == 0) return {1.0, 0.0};
    return normalized(end_mean * (1.0 / n) - start_mean * (1.0 / n));
}

} // namespace

LayoutPlan build_layout_plan(const HotspotGraph& graph, const LayoutOrder& order,
                             const LayoutParams& params) {
    LayoutPlan plan;
    plan.radius = params.radius;

    Point2 scan_dir = journey_direction(graph);

    std::map<std::string, std::vector<const GraphEdge*>> out_edges;
    for (const auto& e : graph.edges) out_edges[e.from].push_back(&e);
    for (auto& [_, list] : out_edges)
        std::sort(list.begin(), list.end(),
                  [](const GraphEdge* a, const GraphEdge* b) { return a->id < b->id; });

    for (const auto& node_id : order.node_ids) {
        const GraphNode* node = graph.find_node(node_id);

        if (node->role == NodeRole::Source || node->role == NodeRole::Sink) {
            // Per-object virtual nodes sit exactly on the object's own start
            // or end; the offset is zero by construction.
            GroupLayout layout;
            layout.hotspot_id = node_id;
            std::string obj = node_id.substr(4);
            layout.offsets[obj] = {0.0, 0.0};
            layout.rigid_subgroups.push_back({obj});
            plan.node_layouts[node_id] = std::move(layout);
            continue;
        }

        // One rigid body per outgoing edge, its formation inherited from the
        // head node's layout so co-travelers keep their arrangement. Bodies
        // whose members leave the ensemble earliest get the lowest rank.
        std::vector<PackBody> bodies;
        std::vector<Point2> exits;
        std::vector<double> rank_keys;
        for (const GraphEdge* e : out_edges[node_id]) {
            const GroupLayout& head = plan.node_layouts.at(e->to);
            PackBody body;
            Point2 mean;
            for (const auto& m : e->members) mean += head.offsets.at(m);
            mean = mean * (1.0 / static_cast<double>(e->members.size()));
            for (const auto& m : e->members) body.members.emplace_back(m, head.offsets.at(m) - mean);

            Point2 exit = e->geometry.size() >= 2 ? normalized(e->geometry[1] - e->geometry[0])
                                                  : normalized(graph.find_node(e->to)->position - node->position);
            bodies.push_back(std::move(body));
            exits.push_back(exit);
            rank_keys.push_back(dot(graph.find_node(e->to)->position, scan_dir));
        }

        std::vector<std::size_t> by_rank(bodies.size());
        for (std::size_t i = 0; i < by_rank.size(); ++i) by_rank[i] = i;
        std::sort(by_rank.begin(), by_rank.end(), [&](std::size_t a, std::size_t b) {
            if (rank_keys[a] != rank_keys[b]) return rank_keys[a] < rank_keys[b];
            return bodies[a].members.front().first < bodies[b].members.front().first;
        });
        for (std::size_t r = 0; r < by_rank.size(); ++r) bodies[by_rank[r]].rank = static_cast<int>(r);

        GroupLayout layout = pack_bodies(std::move(bodies), exits, params, node_id);
        layout.hotspot_id = node_id;
        plan.node_layouts[node_id] = std::move(layout);
    }

    // In-transit offsets: the tail layout restricted to the edge members,
    // recentered on their centroid so the formation rides the edge geometry.
    for (const auto& e : graph.edges) {
        const GroupLayout& tail = plan.node_layouts.at(e.from);
        Point2 mean;
        for (const auto& m : e.members) mean += tail.offsets.at(m);
        mean = mean * (1.0 / static_cast<double>(e.members.size()));
        auto& offsets = plan.edge_offsets[e.id];
        for (const auto& m : e.members) offsets[m] = tail.offsets.at(m) - mean;
    }
    return plan;
}

} // namespace routeflow
