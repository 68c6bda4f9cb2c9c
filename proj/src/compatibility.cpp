#include "routeflow/compatibility.hpp"

#include <algorithm>
#include <limits>

#include "routeflow/error.hpp"
#include "routeflow/kernels.hpp"

namespace routeflow {

CompatibilityIndex build_compatibility(const std::vector<ControlPolyline>& polylines, int k) {
    if (polylines.empty()) throw Error(ErrorCode::EmptyInput, "build_compatibility: no polylines");

    CompatibilityIndex index;
    const std::size_t n = polylines.size();
    for (const auto& p : polylines) index.neighbors[p.trajectory_id] = {};
    if (n == 1) return index;

    std::vector<std::vector<Point2>> seqs(n);
    for (std::size_t i = 0; i < n; ++i) seqs[i] = polylines[i].current;
    std::vector<double> d = dtw_pairwise(seqs);

    double dmin = std::numeric_limits<double>::infinity();
    double dmax = -std::numeric_limits<double>::infinity();
    for (double v : d) {
        dmin = std::min(dmin, v);
        dmax = std::max(dmax, v);
    }
    const double range = dmax - dmin;

    for (std::size_t i = 0; i < n; ++i) {
        std::vector<std::pair<std::string, double>> list;
        list.reserve(n - 1);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            double dij = d[pair_index(std::min(i, j), std::max(i, j), n)];
            // All pairs equally distant: every pair is maximally similar.
            double compat = range > 0.0 ? 1.0 - (dij - dmin) / range : 1.0;
            list.emplace_back(polylines[j].trajectory_id, compat);
        }
        std::sort(list.begin(), list.end(), [](const auto& a, const auto& b) {
            if (a.second != b.second) return a.second > b.second;
            return a.first < b.first;
        });
        if (static_cast<int>(list.size()) > k) list.resize(static_cast<std::size_t>(k));
        index.neighbors[polylines[i].trajectory_id] = std::move(list);
    }
    return index;
}

} // namespace routeflow
