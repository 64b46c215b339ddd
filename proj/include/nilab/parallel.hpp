#pragma once

#include <cstdint>
#include <thread>
#include <vector>

namespace nilab {

inline unsigned hardware_threads() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1 : n;
}

/// Run body(lo, hi) over a partition of [begin, end) on nthreads threads.
/// body must be safe on disjoint ranges.
template <class Body>
void parallel_for_chunks(std::int64_t begin, std::int64_t end, const Body& body,
                         unsigned nthreads = 0) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;
    if (nthreads == 0) nthreads = hardware_threads();
    if (nthreads > static_cast<unsigned>(count)) nthreads = static_cast<unsigned>(count);
    if (nthreads <= 1) {
        body(begin, end);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(nthreads);
    const std::int64_t chunk = (count + nthreads - 1) / nthreads;
    for (unsigned k = 0; k < nthreads; ++k) {
        const std::int64_t lo = begin + static_cast<std::int64_t>(k) * chunk;
        const std::int64_t hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

}  // namespace nilab
