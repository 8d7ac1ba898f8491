#pragma once

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace levycross {

inline int resolve_threads(int requested) {
    if (requested == 1) return 1;
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (requested <= 0) return hw;
    return std::min(requested, 64);
}

// Chunked index loop. Worker i owns a contiguous range, so per-index results
// written to preallocated storage are identical for any thread count.
template <class F>
void parallel_for(std::size_t n, int threads, F&& f) {
    threads = resolve_threads(threads);
    if (threads == 1 || n < 2048) {
        for (std::size_t i = 0; i < n; ++i) f(i);
        return;
    }
    std::size_t chunk = (n + threads - 1) / threads;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t) {
        std::size_t lo = t * chunk;
        std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &f] {
            for (std::size_t i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace levycross
