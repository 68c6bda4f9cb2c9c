#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace routeflow {

// Scene-normalized 2-D point. Coordinates live in [0,1]^2 after normalize().
struct Point2 {
    double x = 0.0;
    double y = 0.0;

    Point2() = default;
    Point2(double px, double py) : x(px), y(py) {}

    Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
    Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
    Point2 operator*(double s) const { return {x * s, y * s}; }
    Point2& operator+=(const Point2& o) {
        x += o.x;
        y += o.y;
        return *this;
    }
    Point2& operator-=(const Point2& o) {
        x -= o.x;
        y -= o.y;
        return *this;
    }
    bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Point2& o) const { return !(*this == o); }
};

inline double dot(const Point2& a, const Point2& b) { return a.x * b.x + a.y * b.y; }
inline double norm2(const Point2& a) { return a.x * a.x + a.y * a.y; }
inline double norm(const Point2& a) { return std::sqrt(norm2(a)); }
inline double dist(const Point2& a, const Point2& b) { return norm(a - b); }
inline double dist2(const Point2& a, const Point2& b) { return norm2(a - b); }

inline Point2 lerp(const Point2& a, const Point2& b, double t) {
    return {a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
}

// Unit vector of a; falls back to fallback when |a| is numerically zero.
inline Point2 normalized(const Point2& a, const Point2& fallback = {1.0, 0.0}) {
    double n = norm(a);
    if (n < 1e-12) return fallback;
    return {a.x / n, a.y / n};
}

inline bool finite(const Point2& a) { return std::isfinite(a.x) && std::isfinite(a.y); }

// Total arc length of a polyline.
double polyline_length(const std::vector<Point2>& pts);

// Perpendicular distance from p to segment [a,b].
double point_segment_distance(const Point2& p, const Point2& a, const Point2& b);

// Smallest circle radius about `center` covering all points.
double enclosing_radius(const std::vector<Point2>& pts, const Point2& center);

// Area centroid of a point set (uniform weights).
Point2 centroid(const std::vector<Point2>& pts);

} // namespace routeflow
