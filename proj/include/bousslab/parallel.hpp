// parallel.hpp
// Minimal block-parallel loop. Each index is processed exactly once by one
// worker; callers must write to disjoint outputs (no reductions), which keeps
// results bit-identical for any width.

#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace bousslab {

template <typename Fn> void parallel_for(int n, int threads, Fn&& fn)
{
    if (threads <= 1 || n <= 1) {
        for (int i = 0; i < n; ++i) fn(i);
        return;
    }
    const int width = std::min(threads, n);
    std::vector<std::thread> pool;
    pool.reserve(width);
    const int chunk = (n + width - 1) / width;
    for (int w = 0; w < width; ++w) {
        const int lo = w * chunk, hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &fn] {
            for (int i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace bousslab
