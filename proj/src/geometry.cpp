#include "routeflow/geometry.hpp"

#include <algorithm>

namespace routeflow {

double polyline_length(const std::vector<Point2>& pts) {
    double total = 0.0;
    for (std::size_t i = 1; i < pts.size(); ++i) total += dist(pts[i - 1], pts[i]);
    return total;
}

double point_segment_distance(const Point2& p, const Point2& a, const Point2& b) {
    Point2 ab = b - a;
    double len2 = norm2(ab);
    if (len2 < 1e-24) return dist(p, a);
    double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
    return dist(p, a + ab * t);
}

double enclosing_radius(const std::vector<Point2>& pts, const Point2& center) {
    double r = 0.0;
    for (const auto& p : pts) r = std::max(r, dist(p, center));
    return r;
}

Point2 centroid(const std::vector<Point2>& pts) {
    Point2 c;
    if (pts.empty()) return c;
    for (const auto& p : pts) c += p;
    return c * (1.0 / static_cast<double>(pts.size()));
}

} // namespace routeflow
