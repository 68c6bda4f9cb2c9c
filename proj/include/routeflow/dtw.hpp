#pragma once

#include <vector>

#include "routeflow/geometry.hpp"

namespace routeflow {

// Classic dynamic time warping with Euclidean point cost and sum aggregation
// over the optimal monotone alignment. No warping window. Symmetric,
// nonnegative, dtw(a,a) == 0. Throws EmptyInput on an empty sequence.
double dtw(const std::vector<Point2>& a, const std::vector<Point2>& b);

// Same recurrence, but abandons once the result provably exceeds `threshold`
// and returns +inf in that case. Used where only "dtw < threshold" matters.
double dtw_bounded(const std::vector<Point2>& a, const std::vector<Point2>& b, double threshold);

} // namespace routeflow
