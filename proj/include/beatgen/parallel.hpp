#pragma once

#include <atomic>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace beatgen {

/// Number of workers to use: `requested` when nonzero, otherwise the value of
/// the BEATGEN_THREADS environment variable, otherwise all hardware threads.
unsigned resolve_worker_count(unsigned requested = 0);

/// Run fn(i) for i in [0, n) on a small thread pool. Work items are claimed
/// from an atomic counter; each item writes only to its own slot, so results
/// are identical for any worker count.
template <typename Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    unsigned workers = resolve_worker_count(threads);
    if (workers <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    if (workers > n) workers = static_cast<unsigned>(n);
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1, std::memory_order_relaxed);
                if (i >= n) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace beatgen
