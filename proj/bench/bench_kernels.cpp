// Times the OpenMP kernels against their serial reference implementations
// and cross-checks that both produce identical bits.

#include <chrono>
#include <cstdio>
#include <random>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "routeflow/kernels.hpp"
#include "routeflow/model.hpp"
#include "routeflow/pipeline.hpp"
#include "routeflow/synthgen.hpp"

using namespace routeflow;
using clock_type = std::chrono::steady_clock;

namespace {

double seconds_since(clock_type::time_point start) {
    return std::chrono::duration<double>(clock_type::now() - start).count();
}

template <typename F>
double time_best_of(int repeats, F&& f) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        auto start = clock_type::now();
        f();
        best = std::min(best, seconds_since(start));
    }
    return best;
}

} // namespace

int main() {
#ifdef _OPENMP
    std::printf("openmp: %d threads\n", omp_get_max_threads());
#else
    std::printf("openmp: disabled (serial build)\n");
#endif

    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> coord(0.0, 1.0);

    // Pairwise DTW over resampled polylines, the bundling hot path.
    for (int n : {100, 200, 300}) {
        std::vector<std::vector<Point2>> seqs;
        for (int s = 0; s < n; ++s) {
            std::vector<Point2> seq;
            for (int i = 0; i < 32; ++i) seq.push_back({coord(rng), coord(rng)});
            seqs.push_back(std::move(seq));
        }
        std::vector<double> par, ser;
        double t_par = time_best_of(3, [&] { par = dtw_pairwise(seqs); });
        double t_ser = time_best_of(3, [&] { ser = dtw_pairwise_serial(seqs); });
        bool same = par == ser;
        std::printf("dtw_pairwise      n=%3d  serial %8.4fs  parallel %8.4fs  speedup %.2fx  %s\n", n,
                    t_ser, t_par, t_ser / t_par, same ? "bitwise-equal" : "MISMATCH");
    }

    // Per-frame overlap counting, the occlusion metric hot path.
    for (int frames : {240, 480}) {
        std::vector<std::vector<Point2>> positions;
        for (int t = 0; t < frames; ++t) {
            std::vector<Point2> row;
            for (int o = 0; o < 300; ++o) row.push_back({coord(rng), coord(rng)});
            positions.push_back(std::move(row));
        }
        std::vector<long> par, ser;
        double t_par = time_best_of(3, [&] { par = overlap_counts_per_frame(positions, 0.0072); });
        double t_ser = time_best_of(3, [&] { ser = overlap_counts_per_frame_serial(positions, 0.0072); });
        bool same = par == ser;
        std::printf("overlap_counts    T=%3d  serial %8.4fs  parallel %8.4fs  speedup %.2fx  %s\n",
                    frames, t_ser, t_par, t_ser / t_par, same ? "bitwise-equal" : "MISMATCH");
    }

    // End-to-end pipeline at the scale of the largest reported dataset.
    {
        SynthConfig synth;
        synth.seed = 42;
        synth.trajectory_count = 300;
        SynthDataset data = generate(synth);
        PipelineConfig cfg = default_config();
        auto start = clock_type::now();
        AnimateResult result = animate(data.trajectories, cfg);
        double total = seconds_since(start);
        std::printf("pipeline          n=300  total %7.3fs  (paths %.3fs, layout %.3fs)\n", total,
                    result.manifest.path_generation_seconds, result.manifest.layout_generation_seconds);
    }
    return 0;
}
