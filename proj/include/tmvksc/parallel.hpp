#pragma once

#include <cstdlib>
#include <thread>
#include <vector>

namespace tmvksc {

// Worker count: TMVKSC_THREADS if set (>0), else hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("TMVKSC_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(begin, end) over contiguous index blocks. Each index is touched by
// exactly one worker, so results are identical to a sequential pass as long
// as fn does not reduce across indices.
template <typename Fn>
void parallel_for_blocks(std::int64_t n, Fn&& fn, std::int64_t min_per_thread = 64) {
    const int workers = thread_count();
    if (n <= 0) return;
    if (workers <= 1 || n < 2 * min_per_thread) {
        fn(std::int64_t{0}, n);
        return;
    }
    const auto blocks = std::min<std::int64_t>(workers, (n + min_per_thread - 1) / min_per_thread);
    const std::int64_t chunk = (n + blocks - 1) / blocks;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(blocks));
    for (std::int64_t b = 0; b < blocks; ++b) {
        const std::int64_t lo = b * chunk;
        const std::int64_t hi = std::min(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

}  // namespace tmvksc
