#pragma once

// Chunked parallel-for over an index range.  Worker count is capped by the
// SUPERSPACE_THREADS environment variable (default: hardware concurrency).
// Results must be written to disjoint slots so the outcome is independent of
// the partitioning.

#include <atomic>
#include <cstdlib>
#include <functional>
#include <thread>
#include <vector>

namespace superspace {

inline unsigned worker_count() {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("SUPERSPACE_THREADS")) {
        long v = std::strtol(env, nullptr, 10);
        if (v >= 1 && v <= 1024) return static_cast<unsigned>(std::min<long>(v, hw * 4));
    }
    return hw;
}

inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    unsigned workers = std::min<std::size_t>(worker_count(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::atomic<std::size_t> next{0};
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= count) return;
                fn(i);
            }
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace superspace
