#include "routeflow/kernels.hpp"

#include "routeflow/dtw.hpp"

namespace routeflow {

std::size_t pair_index(std::size_t i, std::size_t j, std::size_t n) {
    // (i,j), i<j, lexicographic over the upper triangle.
    return i * n - i * (i + 1) / 2 + (j - i - 1);
}

std::vector<double> dtw_pairwise_serial(const std::vector<std::vector<Point2>>& seqs) {
    const std::size_t n = seqs.size();
    std::vector<double> out(pair_count(n), 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) out[pair_index(i, j, n)] = dtw(seqs[i], seqs[j]);
    return out;
}

std::vector<double> dtw_pairwise(const std::vector<std::vector<Point2>>& seqs) {
    const std::size_t n = seqs.size();
    const std::size_t pairs = pair_count(n);
    std::vector<double> out(pairs, 0.0);

    // Flatten the triangle so the parallel loop balances evenly.
    std::vector<std::pair<std::uint32_t, std::uint32_t>> idx(pairs);
    std::size_t p = 0;
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) idx[p++] = {static_cast<std::uint32_t>(i), static_cast<std::uint32_t>(j)};

#pragma omp parallel for schedule(dynamic, 16)
    for (long k = 0; k < static_cast<long>(pairs); ++k) {
        out[static_cast<std::size_t>(k)] = dtw(seqs[idx[static_cast<std::size_t>(k)].first],
                                               seqs[idx[static_cast<std::size_t>(k)].second]);
    }
    return out;
}

namespace {

long frame_overlap_count(const std::vector<Point2>& pos, double radius) {
    const double limit = 2.0 * radius - 1e-9;
    const double limit2 = limit * limit;
    long count = 0;
    for (std::size_t p = 0; p < pos.size(); ++p)
        for (std::size_t q = p + 1; q < pos.size(); ++q)
            if (dist2(pos[p], pos[q]) < limit2) count += 2; // ordered pairs
    return count;
}

} // namespace

std::vector<long> overlap_counts_per_frame_serial(const std::vector<std::vector<Point2>>& positions,
                                                  double radius) {
    std::vector<long> out(positions.size(), 0);
    for (std::size_t t = 0; t < positions.size(); ++t) out[t] = frame_overlap_count(positions[t], radius);
    return out;
}

std::vector<long> overlap_counts_per_frame(const std::vector<std::vector<Point2>>& positions,
                                           double radius) {
    std::vector<long> out(positions.size(), 0);
#pragma omp parallel for schedule(static)
    for (long t = 0; t < static_cast<long>(positions.size()); ++t)
        out[static_cast<std::size_t>(t)] = frame_overlap_count(positions[static_cast<std::size_t>(t)], radius);
    return out;
}

} // namespace routeflow
