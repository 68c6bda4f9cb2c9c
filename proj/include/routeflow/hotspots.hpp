#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "routeflow/bundling.hpp"

namespace routeflow {

enum class HotspotKind { Convergence, Divergence, Transfer };

enum class NodeRole { Source, Hotspot, Sink };

struct GraphNode {
    std::string id;
    Point2 position;
    NodeRole role = NodeRole::Hotspot;
    HotspotKind kind = HotspotKind::Transfer; // meaningful for hotspots only
    std::vector<std::set<std::string>> arriving_groups;
    std::vector<std::set<std::string>> departing_groups;
};

struct GraphEdge {
    std::string id;
    std::string from;
    std::string to;
    std::set<std::string> members;
    std::vector<Point2> geometry; // polyline from `from` to `to`
};

// Local hotspots as DAG nodes plus per-object virtual sources and sinks;
// edges are the shared path segments between them.
struct HotspotGraph {
    std::vector<GraphNode> nodes;
    std::vector<GraphEdge> edges;
    // Per object, its node journey from source to sink and, aligned with it,
    // the edge ids between consecutive nodes.
    std::map<std::string, std::vector<std::string>> object_nodes;
    std::map<std::string, std::vector<std::string>> object_edges;

    const GraphNode* find_node(const std::string& id) const;
    const GraphEdge* find_edge(const std::string& id) const;
};

struct LayoutOrder {
    std::vector<std::string> node_ids; // reverse topological: sinks first
};

// Builds the hotspot DAG from the hierarchy's merge events: the first shared
// control point of every maximal shared range becomes a convergence, the last
// a divergence; coincident hotspots (closer than merge_delta) are unified.
HotspotGraph extract_hotspots(const BundleHierarchy& hierarchy);

// Deterministic reverse topological order (Kahn with ascending-id ties).
// Throws CyclicGraph with the offending node set when the graph has a cycle.
LayoutOrder layout_order(const HotspotGraph& graph);

// DOT-format debug dump.
std::string to_dot(const HotspotGraph& graph);

} // namespace routeflow
