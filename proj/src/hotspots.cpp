#include "routeflow/hotspots.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>

#include "routeflow/error.hpp"

namespace routeflow {

const GraphNode* HotspotGraph::find_node(const std::string& id) const {
    for (const auto& n : nodes)
        if (n.id == id) return &n;
    return nullptr;
}

const GraphEdge* HotspotGraph::find_edge(const std::string& id) const {
    for (const auto& e : edges)
        if (e.id == id) return &e;
    return nullptr;
}

namespace {

struct Candidate {
    Point2 position;
    bool convergence = true;
    int event = 0; // index into hierarchy.events
    int index = 0; // control-point index of the boundary
};

struct DisjointSet {
    std::vector<int> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = static_cast<int>(i);
    }
    int find(int x) {
        while (parent[static_cast<std::size_t>(x)] != x) {
            parent[static_cast<std::size_t>(x)] = parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
            x = parent[static_cast<std::size_t>(x)];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[static_cast<std::size_t>(std::max(a, b))] = std::min(a, b);
    }
};

std::string format_index(const char* prefix, int i) {
    std::ostringstream os;
    os << prefix;
    if (i < 10) os << "00";
    else if (i < 100) os << "0";
    os << i;
    return os.str();
}

} // namespace

HotspotGraph extract_hotspots(const BundleHierarchy& hierarchy) {
    std::vector<std::string> object_ids;
    for (const auto& [id, _] : hierarchy.final_paths) object_ids.push_back(id);
    std::sort(object_ids.begin(), object_ids.end());

    // Boundary candidates: the first shared control point of every merge
    // event becomes a convergence, the last a divergence. Positions are the
    // mean of the member paths at the boundary.
    std::vector<Candidate> candidates;
    for (std::size_t e = 0; e < hierarchy.events.size(); ++e) {
        const auto& ev = hierarchy.events[e];
        Point2 lo_pos, hi_pos;
        for (const auto& m : ev.members) {
            const auto& path = hierarchy.final_paths.at(m);
            lo_pos += path[static_cast<std::size_t>(ev.range.lo)];
            hi_pos += path[static_cast<std::size_t>(ev.range.hi)];
        }
        double inv = 1.0 / static_cast<double>(ev.members.size());
        candidates.push_back({lo_pos * inv, true, static_cast<int>(e), ev.range.lo});
        candidates.push_back({hi_pos * inv, false, static_cast<int>(e), ev.range.hi});
    }

    // Unify coincident candidates. Complete linkage keeps cluster diameters
    // under merge_delta (no daisy-chaining along a corridor), and the index
    // window keeps candidates from different journey stages apart: an event
    // boundary carries one control-point index shared by all its members, so
    // same-index clusters can never reorder anyone's journey. A window of
    // zero is therefore always cycle-free; the wider window is tried first
    // and only narrowed if it folds the graph.
    auto cluster_candidates = [&](int index_window) {
        DisjointSet ds(candidates.size());
        struct PairDist {
            double d;
            std::size_t i, j;
        };
        std::vector<PairDist> pairs;
        for (std::size_t i = 0; i < candidates.size(); ++i)
            for (std::size_t j = i + 1; j < candidates.size(); ++j) {
                if (std::abs(candidates[i].index - candidates[j].index) > index_window) continue;
                double d = dist(candidates[i].position, candidates[j].position);
                if (d < hierarchy.merge_delta) pairs.push_back({d, i, j});
            }
        std::sort(pairs.begin(), pairs.end(), [](const PairDist& a, const PairDist& b) {
            if (a.d != b.d) return a.d < b.d;
            if (a.i != b.i) return a.i < b.i;
            return a.j < b.j;
        });
        for (const auto& pr : pairs) {
            int ra = ds.find(static_cast<int>(pr.i));
            int rb = ds.find(static_cast<int>(pr.j));
            if (ra == rb) continue;
            bool compatible = true;
            for (std::size_t a = 0; a < candidates.size() && compatible; ++a) {
                if (ds.find(static_cast<int>(a)) != ra) continue;
                for (std::size_t b = 0; b < candidates.size() && compatible; ++b) {
                    if (ds.find(static_cast<int>(b)) != rb) continue;
                    if (dist(candidates[a].position, candidates[b].position) >= hierarchy.merge_delta ||
                        std::abs(candidates[a].index - candidates[b].index) > index_window)
                        compatible = false;
                }
            }
            if (compatible) ds.unite(ra, rb);
        }
        return ds;
    };
    auto assemble = [&](DisjointSet ds) {
    HotspotGraph graph;

    std::map<int, std::vector<int>> clusters; // root -> candidate indices
    for (std::size_t i = 0; i < candidates.size(); ++i)
        clusters[ds.find(static_cast<int>(i))].push_back(static_cast<int>(i));

    struct Cluster {
        Point2 position;
        std::vector<int> members;
    };
    std::vector<Cluster> ordered;
    for (const auto& [root, members] : clusters) {
        Point2 pos;
        for (int c : members) pos += candidates[static_cast<std::size_t>(c)].position;
        ordered.push_back({pos * (1.0 / static_cast<double>(members.size())), members});
    }
    std::sort(ordered.begin(), ordered.end(), [](const Cluster& a, const Cluster& b) {
        if (a.position.x != b.position.x) return a.position.x < b.position.x;
        return a.position.y < b.position.y;
    });

    std::vector<std::string> candidate_node(candidates.size());
    for (std::size_t c = 0; c < ordered.size(); ++c) {
        GraphNode node;
        node.id = format_index("h", static_cast<int>(c));
        node.position = ordered[c].position;
        node.role = NodeRole::Hotspot;
        graph.nodes.push_back(node);
        for (int m : ordered[c].members) candidate_node[static_cast<std::size_t>(m)] = node.id;
    }

    // Per-object journey: source, event boundaries in index order, sink.
    struct Visit {
        int index;
        int kind; // 0 convergence, 1 divergence
        std::string node;
    };
    std::map<std::string, std::vector<Visit>> visits;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const auto& cand = candidates[c];
        const auto& ev = hierarchy.events[static_cast<std::size_t>(cand.event)];
        for (const auto& m : ev.members)
            visits[m].push_back({cand.index, cand.convergence ? 0 : 1, candidate_node[c]});
    }

    struct Segment {
        std::string from, to;
        int lo = 0, hi = 0; // path slice of this traversal
    };
    std::map<std::string, std::vector<Segment>> segments;

    for (const auto& id : object_ids) {
        const auto& path = hierarchy.final_paths.at(id);
        GraphNode src;
        src.id = "src:" + id;
        src.position = path.front();
        src.role = NodeRole::Source;
        graph.nodes.push_back(src);
        GraphNode snk;
        snk.id = "snk:" + id;
        snk.position = path.back();
        snk.role = NodeRole::Sink;
        graph.nodes.push_back(snk);

        auto& vs = visits[id];
        std::sort(vs.begin(), vs.end(), [](const Visit& a, const Visit& b) {
            if (a.index != b.index) return a.index < b.index;
            if (a.kind != b.kind) return a.kind < b.kind;
            return a.node < b.node;
        });

        std::vector<std::pair<std::string, int>> seq; // node id, path index
        seq.emplace_back(src.id, 0);
        for (const auto& v : vs)
            if (seq.back().first != v.node) seq.emplace_back(v.node, v.index);
        if (seq.back().first != snk.id) seq.emplace_back(snk.id, static_cast<int>(path.size()) - 1);

        std::vector<std::string> node_seq;
        for (const auto& [n, _] : seq) node_seq.push_back(n);
        graph.object_nodes[id] = std::move(node_seq);

        for (std::size_t s = 0; s + 1 < seq.size(); ++s)
            segments[id].push_back({seq[s].first, seq[s + 1].first, seq[s].second, seq[s + 1].second});
    }

    // Group consecutive node pairs into edges.
    struct EdgeAccum {
        std::set<std::string> members;
        std::string first_member;
        int lo = 0, hi = 0;
    };
    std::map<std::pair<std::string, std::string>, EdgeAccum> accum;
    for (const auto& id : object_ids) {
        for (const auto& seg : segments[id]) {
            auto& acc = accum[{seg.from, seg.to}];
            if (acc.members.empty()) {
                acc.first_member = id;
                acc.lo = seg.lo;
                acc.hi = seg.hi;
            }
            acc.members.insert(id);
        }
    }

    int edge_counter = 0;
    std::map<std::pair<std::string, std::string>, std::string> edge_ids;
    for (auto& [key, acc] : accum) {
        GraphEdge edge;
        edge.id = format_index("e", edge_counter++);
        edge.from = key.first;
        edge.to = key.second;
        edge.members = acc.members;
        const auto& path = hierarchy.final_paths.at(acc.first_member);
        for (int i = acc.lo; i <= acc.hi; ++i) edge.geometry.push_back(path[static_cast<std::size_t>(i)]);
        if (edge.geometry.empty()) edge.geometry.push_back(path[static_cast<std::size_t>(acc.lo)]);
        edge_ids[key] = edge.id;
        graph.edges.push_back(std::move(edge));
    }

    for (const auto& id : object_ids) {
        auto& list = graph.object_edges[id];
        const auto& nodes = graph.object_nodes[id];
        for (std::size_t s = 0; s + 1 < nodes.size(); ++s) list.push_back(edge_ids.at({nodes[s], nodes[s + 1]}));
    }

    // Arriving/departing groups and hotspot kinds.
    for (auto& node : graph.nodes) {
        for (const auto& e : graph.edges) {
            if (e.to == node.id) node.arriving_groups.push_back(e.members);
            if (e.from == node.id) node.departing_groups.push_back(e.members);
        }
        if (node.role == NodeRole::Hotspot) {
            if (node.arriving_groups.size() > node.departing_groups.size())
                node.kind = HotspotKind::Convergence;
            else if (node.arriving_groups.size() < node.departing_groups.size())
                node.kind = HotspotKind::Divergence;
            else
                node.kind = HotspotKind::Transfer;
        }
    }

    return graph;
    };

    HotspotGraph graph = assemble(cluster_candidates(hierarchy.min_run));
    try {
        layout_order(graph); // validates acyclicity at construction
        return graph;
    } catch (const Error&) {
        // Same-index-only unification cannot reorder any journey.
        graph = assemble(cluster_candidates(0));
        layout_order(graph);
        return graph;
    }
}

LayoutOrder layout_order(const HotspotGraph& graph) {
    // Kahn on the reversed graph: sinks first, ascending-id ties.
    std::map<std::string, int> pending; // outgoing edges not yet consumed
    std::map<std::string, std::vector<std::string>> incoming; // to -> froms
    for (const auto& n : graph.nodes) pending[n.id] = 0;
    for (const auto& e : graph.edges) {
        pending[e.from] += 1;
        incoming[e.to].push_back(e.from);
    }

    std::priority_queue<std::string, std::vector<std::string>, std::greater<>> ready;
    for (const auto& [id, count] : pending)
        if (count == 0) ready.push(id);

    LayoutOrder order;
    while (!ready.empty()) {
        std::string id = ready.top();
        ready.pop();
        order.node_ids.push_back(id);
        for (const auto& from : incoming[id]) {
            if (--pending[from] == 0) ready.push(from);
        }
    }

    if (order.node_ids.size() != graph.nodes.size()) {
        std::ostringstream os;
        os << "cycle through nodes:";
        for (const auto& [id, count] : pending)
            if (count > 0) os << " " << id;
        throw Error(ErrorCode::CyclicGraph, os.str());
    }
    return order;
}

std::string to_dot(const HotspotGraph& graph) {
    std::ostringstream os;
    os << "digraph hotspots {\n";
    for (const auto& n : graph.nodes) {
        const char* shape = n.role == NodeRole::Hotspot ? "ellipse" : "point";
        const char* kind = n.role != NodeRole::Hotspot          ? ""
                           : n.kind == HotspotKind::Convergence ? " conv"
                           : n.kind == HotspotKind::Divergence  ? " div"
                                                                : " transfer";
        os << "  \"" << n.id << "\" [shape=" << shape << ", label=\"" << n.id << kind << "\", pos=\""
           << n.position.x << "," << n.position.y << "!\"];\n";
    }
    for (const auto& e : graph.edges) {
        os << "  \"" << e.from << "\" -> \"" << e.to << "\" [label=\"" << e.members.size() << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

} // namespace routeflow
