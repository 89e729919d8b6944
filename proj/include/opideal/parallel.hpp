#pragma once

// Minimal index-parallel map. Tasks write to disjoint pre-sized slots, so the
// assembled result is identical for any thread count.

#include <atomic>
#include <cstdlib>
#include <cstddef>
#include <thread>
#include <vector>

namespace opideal {

inline std::size_t threads_from_env() {
    if (const char* env = std::getenv("OPIDEAL_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v > 1)
            return static_cast<std::size_t>(v);
    }
    return 1;
}

template <typename Body>
void parallel_for_index(std::size_t count, std::size_t threads, Body&& body) {
    if (threads <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    const std::size_t workers = std::min(threads, count);
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&]() {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                body(i);
        });
    }
    for (std::thread& th : pool)
        th.join();
}

} // namespace opideal
