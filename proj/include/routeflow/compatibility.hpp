#pragma once

#include <map>
#include <string>
#include <vector>

#include "routeflow/model.hpp"

namespace routeflow {

// Per trajectory, its most similar peers: 1 - minmax-normalized DTW, the top
// k kept, sorted by descending compatibility with ties broken by ascending id.
struct CompatibilityIndex {
    std::map<std::string, std::vector<std::pair<std::string, double>>> neighbors;
};

// Builds the index over the polylines' current positions. All pairwise DTW
// distances are min-max normalized over the unordered pairs of the set; when
// all distances are equal every compatibility is defined as 1.0. A single
// polyline yields an index with an empty neighbor list.
CompatibilityIndex build_compatibility(const std::vector<ControlPolyline>& polylines, int k);

} // namespace routeflow
