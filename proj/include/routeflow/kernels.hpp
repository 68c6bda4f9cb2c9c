#pragma once

#include <vector>

#include "routeflow/geometry.hpp"

namespace routeflow {

// Data-parallel inner loops, each with a serial reference twin used by the
// tests and the benchmark. The parallel versions write per-element results
// into preallocated slots and reduce in fixed order, so their output is
// bit-identical to the serial ones regardless of thread count.

// Condensed upper-triangle pairwise DTW: result[p] for pair p = (i,j), i<j,
// in lexicographic order.
std::vector<double> dtw_pairwise(const std::vector<std::vector<Point2>>& seqs);
std::vector<double> dtw_pairwise_serial(const std::vector<std::vector<Point2>>& seqs);

// Condensed pair index helpers.
inline std::size_t pair_count(std::size_t n) { return n * (n - 1) / 2; }
std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n);

// Per-frame ordered-pair overlap counts for equal discs.
std::vector<long> overlap_counts_per_frame(const std::vector<std::vector<Point2>>& positions,
                                           double radius);
std::vector<long> overlap_counts_per_frame_serial(const std::vector<std::vector<Point2>>& positions,
                                                  double radius);

} // namespace routeflow
