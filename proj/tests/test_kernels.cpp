#include "doctest.h"

#include <random>

#include "routeflow/kernels.hpp"

using namespace routeflow;

TEST_CASE("parallel pairwise DTW is bitwise identical to the serial reference") {
    std::mt19937_64 rng(321);
    std::uniform_int_distribution<int> len(2, 12);
    std::uniform_real_distribution<double> coord(0.0, 1.0);

    std::vector<std::vector<Point2>> seqs;
    for (int s = 0; s < 20; ++s) {
        std::vector<Point2> seq;
        int l = len(rng);
        for (int i = 0; i < l; ++i) seq.push_back({coord(rng), coord(rng)});
        seqs.push_back(std::move(seq));
    }

    auto parallel = dtw_pairwise(seqs);
    auto serial = dtw_pairwise_serial(seqs);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < parallel.size(); ++i) CHECK(parallel[i] == serial[i]);
}

TEST_CASE("pair indexing is a bijection over the upper triangle") {
    const std::size_t n = 9;
    std::vector<char> hit(pair_count(n), 0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            std::size_t p = pair_index(i, j, n);
            REQUIRE(p < hit.size());
            CHECK(!hit[p]);
            hit[p] = 1;
        }
    }
    for (char h : hit) CHECK(h == 1);
}

TEST_CASE("parallel overlap counts are bitwise identical to the serial reference") {
    std::mt19937_64 rng(654);
    std::uniform_real_distribution<double> coord(0.0, 1.0);
    std::vector<std::vector<Point2>> positions;
    for (int t = 0; t < 24; ++t) {
        std::vector<Point2> row;
        for (int o = 0; o < 15; ++o) row.push_back({coord(rng), coord(rng)});
        positions.push_back(std::move(row));
    }
    double radius = 0.05;
    auto parallel = overlap_counts_per_frame(positions, radius);
    auto serial = overlap_counts_per_frame_serial(positions, radius);
    REQUIRE(parallel.size() == serial.size());
    for (std::size_t i = 0; i < parallel.size(); ++i) CHECK(parallel[i] == serial[i]);
}
