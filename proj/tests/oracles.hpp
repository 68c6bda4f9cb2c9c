#pragma once

// Independent reference implementations used only by the tests. These stay
// deliberately naive so they can be checked by eye; the library must agree
// with them, never the other way around.

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <set>
#include <vector>

#include "routeflow/geometry.hpp"
#include "routeflow/metrics.hpp"
#include "routeflow/timing.hpp"

namespace oracle {

using routeflow::FrameSet;
using routeflow::Group;
using routeflow::GroupAssignment;
using routeflow::Point2;

// DTW by exhaustive enumeration of every monotone warping path. Exponential;
// keep sequences short.
inline double dtw_enumerate(const std::vector<Point2>& a, const std::vector<Point2>& b) {
    double best = std::numeric_limits<double>::infinity();
    struct State {
        std::size_t i, j;
        double cost;
    };
    std::vector<State> stack{{0, 0, routeflow::dist(a[0], b[0])}};
    while (!stack.empty()) {
        State s = stack.back();
        stack.pop_back();
        if (s.i == a.size() - 1 && s.j == b.size() - 1) {
            best = std::min(best, s.cost);
            continue;
        }
        if (s.i + 1 < a.size())
            stack.push_back({s.i + 1, s.j, s.cost + routeflow::dist(a[s.i + 1], b[s.j])});
        if (s.j + 1 < b.size())
            stack.push_back({s.i, s.j + 1, s.cost + routeflow::dist(a[s.i], b[s.j + 1])});
        if (s.i + 1 < a.size() && s.j + 1 < b.size())
            stack.push_back({s.i + 1, s.j + 1, s.cost + routeflow::dist(a[s.i + 1], b[s.j + 1])});
    }
    return best;
}

inline int naive_overlap(const Point2& p, const Point2& q, double radius) {
    return routeflow::dist(p, q) < 2.0 * radius - 1e-9 ? 1 : 0;
}

// The four animation metrics written directly from their definitions, one
// ordered pair at a time.
inline double naive_occlusion_overall(const FrameSet& f, double radius) {
    const std::size_t n = f.object_ids.size();
    double total = 0.0;
    for (int t = 0; t < f.frame_count; ++t) {
        double count = 0.0;
        for (std::size_t p = 0; p < n; ++p)
            for (std::size_t q = 0; q < n; ++q)
                if (p != q)
                    count += naive_overlap(f.positions[static_cast<std::size_t>(t)][p],
                                           f.positions[static_cast<std::size_t>(t)][q], radius);
        total += count / (static_cast<double>(n) * static_cast<double>(n - 1));
    }
    return total / static_cast<double>(f.frame_count);
}

inline double naive_occlusion_within(const FrameSet& f, const GroupAssignment& groups, double radius) {
    double sum = 0.0;
    int k = 0;
    for (const auto& g : groups.groups) {
        if (g.members.size() < 2) continue;
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < f.object_ids.size(); ++i)
            if (g.members.count(f.object_ids[i])) cols.push_back(i);
        double group_total = 0.0;
        int frames = 0;
        for (int t = g.first_frame; t <= g.last_frame && t < f.frame_count; ++t) {
            double count = 0.0;
            for (std::size_t p : cols)
                for (std::size_t q : cols)
                    if (p != q)
                        count += naive_overlap(f.positions[static_cast<std::size_t>(t)][p],
                                               f.positions[static_cast<std::size_t>(t)][q], radius);
            group_total +=
                count / (static_cast<double>(cols.size()) * static_cast<double>(cols.size() - 1));
            ++frames;
        }
        if (frames > 0) {
            sum += group_total / frames;
            ++k;
        }
    }
    return k > 0 ? sum / k : 0.0;
}

inline double naive_deformation(const FrameSet& f, const GroupAssignment& groups) {
    double sum = 0.0;
    int k = 0;
    for (const auto& g : groups.groups) {
        if (g.members.size() < 2) continue;
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < f.object_ids.size(); ++i)
            if (g.members.count(f.object_ids[i])) cols.push_back(i);
        double group_total = 0.0;
        int frames = 0;
        for (int t = g.first_frame; t <= g.last_frame && t < f.frame_count; ++t) {
            ++frames;
            if (t == 0) continue;
            double change = 0.0;
            for (std::size_t p : cols)
                for (std::size_t q : cols)
                    if (p != q)
                        change += std::abs(
                            routeflow::dist(f.positions[static_cast<std::size_t>(t)][p],
                                            f.positions[static_cast<std::size_t>(t)][q]) -
                            routeflow::dist(f.positions[static_cast<std::size_t>(t - 1)][p],
                                            f.positions[static_cast<std::size_t>(t - 1)][q]));
            group_total +=
                change / (static_cast<double>(cols.size()) * static_cast<double>(cols.size() - 1));
        }
        if (frames > 0) {
            sum += group_total / frames;
            ++k;
        }
    }
    return k > 0 ? sum / k : 0.0;
}

inline double naive_dispersion(const FrameSet& f, const GroupAssignment& groups) {
    double sum = 0.0;
    int k = 0;
    for (const auto& g : groups.groups) {
        if (g.members.size() < 2) continue;
        std::vector<std::size_t> cols;
        for (std::size_t i = 0; i < f.object_ids.size(); ++i)
            if (g.members.count(f.object_ids[i])) cols.push_back(i);
        double group_total = 0.0;
        int frames = 0;
        for (int t = g.first_frame; t <= g.last_frame && t < f.frame_count; ++t) {
            double d = 0.0;
            for (std::size_t p : cols)
                for (std::size_t q : cols)
                    if (p != q)
                        d += routeflow::dist(f.positions[static_cast<std::size_t>(t)][p],
                                             f.positions[static_cast<std::size_t>(t)][q]);
            group_total += d / (static_cast<double>(cols.size()) * static_cast<double>(cols.size() - 1));
            ++frames;
        }
        if (frames > 0) {
            sum += group_total / frames;
            ++k;
        }
    }
    return k > 0 ? sum / k : 0.0;
}

// Random small FrameSets for the oracle-equivalence checks.
inline FrameSet random_frameset(std::mt19937_64& rng, int max_objects = 5, int max_frames = 10) {
    std::uniform_int_distribution<int> objs(2, max_objects);
    std::uniform_int_distribution<int> frames(2, max_frames);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    FrameSet f;
    int n = objs(rng);
    f.frame_count = frames(rng);
    f.radius = 9.0 / 1250.0 * 10.0; // large enough that overlaps actually happen
    for (int o = 0; o < n; ++o) f.object_ids.push_back("o" + std::to_string(o));
    for (int t = 0; t < f.frame_count; ++t) {
        f.times.push_back(f.frame_count > 1 ? static_cast<double>(t) / (f.frame_count - 1) : 0.0);
        std::vector<Point2> row;
        for (int o = 0; o < n; ++o) row.push_back({coord(rng), coord(rng)});
        f.positions.push_back(std::move(row));
    }
    return f;
}

inline GroupAssignment random_groups(std::mt19937_64& rng, const FrameSet& f) {
    GroupAssignment groups;
    std::uniform_int_distribution<int> pick(0, 1);
    Group a, b;
    for (const auto& id : f.object_ids) (pick(rng) == 0 ? a : b).members.insert(id);
    for (Group* g : {&a, &b}) {
        if (g->members.empty()) continue;
        g->first_frame = 0;
        g->last_frame = f.frame_count - 1;
        if (f.frame_count > 3) {
            std::uniform_int_distribution<int> lo(0, f.frame_count / 2);
            g->first_frame = lo(rng);
            std::uniform_int_distribution<int> hi(g->first_frame, f.frame_count - 1);
            g->last_frame = hi(rng);
        }
        groups.groups.push_back(*g);
    }
    return groups;
}

} // namespace oracle
