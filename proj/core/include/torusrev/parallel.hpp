#pragma once

#include <algorithm>
#include <cstdint>
#include <thread>
#include <vector>

namespace torusrev {

// Chunked parallel loop over [0, n). Each index writes only its own outputs
// and every per-output reduction runs in a fixed serial order, so results are
// byte-identical for any thread count. threads == 0 means hardware count,
// threads == 1 runs inline.
template <typename F>
void parallel_for(std::int64_t n, int threads, F&& body) {
    if (n <= 0) return;
    unsigned t = threads == 0 ? std::thread::hardware_concurrency()
                              : static_cast<unsigned>(threads);
    if (t <= 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) body(i);
        return;
    }
    t = std::min<unsigned>(t, static_cast<unsigned>(n));
    std::vector<std::thread> pool;
    pool.reserve(t);
    const std::int64_t chunk = (n + t - 1) / t;
    for (unsigned w = 0; w < t; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([lo, hi, &body] {
            for (std::int64_t i = lo; i < hi; ++i) body(i);
        });
    }
    for (auto& th : pool) th.join();
}

} // namespace torusrev
