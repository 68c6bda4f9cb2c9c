#include "routeflow/dtw.hpp"

#include <algorithm>
#include <limits>

#include "routeflow/error.hpp"

namespace routeflow {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Rolling-row DP. When `threshold` is finite, bails out as soon as the
// minimum of the current row exceeds it (row minima are nondecreasing).
double dtw_impl(const std::vector<Point2>& a, const std::vector<Point2>& b, double threshold) {
    if (a.empty() || b.empty()) throw Error(ErrorCode::EmptyInput, "dtw: empty sequence");

    const std::size_t n = a.size();
    const std::size_t m = b.size();
    std::vector<double> prev(m), cur(m);

    prev[0] = dist(a[0], b[0]);
    for (std::size_t j = 1; j < m; ++j) prev[j] = prev[j - 1] + dist(a[0], b[j]);

    for (std::size_t i = 1; i < n; ++i) {
        cur[0] = prev[0] + dist(a[i], b[0]);
        double row_min = cur[0];
        for (std::size_t j = 1; j < m; ++j) {
            double best = std::min({prev[j], prev[j - 1], cur[j - 1]});
            cur[j] = best + dist(a[i], b[j]);
            row_min = std::min(row_min, cur[j]);
        }
        if (row_min > threshold) return kInf;
        std::swap(prev, cur);
    }
    return prev[m - 1];
}

} // namespace

double dtw(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    return dtw_impl(a, b, kInf);
}

double dtw_bounded(const std::vector<Point2>& a, const std::vector<Point2>& b, double threshold) {
    return dtw_impl(a, b, threshold);
}

} // namespace routeflow
