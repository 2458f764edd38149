#include <benchmark/benchmark.h>

#include <random>

#include "granmorph/cat.hpp"
#include "granmorph/contour.hpp"
#include "granmorph/segmentation.hpp"
#include "granmorph/tessellate.hpp"

namespace {

using namespace granmorph;

BinaryImage random_mask(int side, unsigned seed) {
    std::mt19937 rng(seed);
    BinaryImage m;
    m.width = side;
    m.height = side;
    m.mask.assign(std::size_t(side) * side, 0);
    // Blobby coverage: a few dozen random filled rectangles.
    std::uniform_int_distribution<int> pos(0, side - 1), len(2, side / 4);
    for (int r = 0; r < 40; ++r) {
        const int x0 = pos(rng), y0 = pos(rng), w = len(rng), h = len(rng);
        for (int y = y0; y < std::min(side, y0 + h); ++y)
            for (int x = x0; x < std::min(side, x0 + w); ++x)
                m.mask[std::size_t(y) * side + x] = 1;
    }
    return m;
}

void BM_ExtractContours(benchmark::State& state) {
    const BinaryImage m = random_mask(int(state.range(0)), 7);
    for (auto _ : state) benchmark::DoNotOptimize(extract_contours(m));
}
BENCHMARK(BM_ExtractContours)->Arg(64)->Arg(128)->Arg(256);

void BM_ConstrainedDelaunay(benchmark::State& state) {
    const ContourSet cs = extract_contours(random_mask(int(state.range(0)), 7));
    for (auto _ : state) benchmark::DoNotOptimize(constrained_delaunay(cs));
}
BENCHMARK(BM_ConstrainedDelaunay)->Arg(64)->Arg(128)->Arg(256);

void BM_Skeleton(benchmark::State& state) {
    const TriMesh mesh =
        constrained_delaunay(extract_contours(random_mask(int(state.range(0)), 7)));
    for (auto _ : state)
        benchmark::DoNotOptimize(build_skeleton(mesh, classify_triangles(mesh)));
}
BENCHMARK(BM_Skeleton)->Arg(64)->Arg(128)->Arg(256);

}  // namespace

BENCHMARK_MAIN();
