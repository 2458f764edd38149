#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace granmorph {

// Runs fn(i) for i in [0, n) on `workers` threads in contiguous blocks. Each
// call must write only to its own output slot, so results are identical for
// any worker count.
template <typename Fn>
void parallel_for(int n, int workers, Fn&& fn) {
    workers = std::clamp(workers, 1, std::max(n, 1));
    if (workers == 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(std::size_t(workers));
    const int block = (n + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = w * block, hi = std::min(n, lo + block);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace granmorph
