#pragma once

#include <map>
#include <string>
#include <vector>

#include "routeflow/hotspots.hpp"

namespace routeflow {

struct LayoutParams {
    double radius = 9.0 / 1250.0; // disc radius, scene fraction
    double ref_gain = 0.1;        // per-iteration pull toward the reference point
    double neighbor_gain = 0.05;  // per-iteration pull toward the nearest body
    int max_iterations = 500;
    double tolerance = 1e-6;      // stop when max displacement falls below this
};

// A movable rigid body in the packer: one disc or a subgroup whose internal
// offsets are fixed. Only translations are applied, never rotations.
struct PackBody {
    std::vector<std::pair<std::string, Point2>> members; // object id, local offset
    int rank = 0;          // departure rank: 0 leaves first
    bool preplaced = false; // keeps its translation at initialization
    Point2 translation;     // world placement of the local origin
};

struct GroupLayout {
    std::string hotspot_id;
    std::map<std::string, Point2> offsets; // object id -> offset from the node
    std::vector<std::set<std::string>> rigid_subgroups;
};

struct LayoutPlan {
    double radius = 9.0 / 1250.0;
    std::map<std::string, GroupLayout> node_layouts; // per graph node
    // Per edge id, per member object, its constant in-transit offset.
    std::map<std::string, std::map<std::string, Point2>> edge_offsets;
};

// Force-directed equal-disc packing. New bodies start on a line along
// exit_direction ordered by ascending rank (rank 0 farthest along it); each
// iteration pulls bodies toward the origin and their nearest neighbor, then
// resolves every penetration by translating the pair apart proportionally to
// inverse size. The result is recentered on its centroid and guarantees
// pairwise center distance >= 2*radius - 1e-9.
GroupLayout pack_group(std::vector<PackBody> bodies, const Point2& exit_direction,
                       const LayoutParams& params, const std::string& hotspot_id = "");

// Walks the graph in LayoutOrder (sinks first). Each node packs one rigid
// body per outgoing edge, the body formation inherited from that edge's head
// layout, placed toward its own exit direction. Edge offsets are the tail
// layout restricted to the edge members and recentered on their centroid.
LayoutPlan build_layout_plan(const HotspotGraph& graph, const LayoutOrder& order,
                             const LayoutParams& params);

} // namespace routeflow
