#ifndef CAVITYNOON_SRC_PARALLEL_HPP
#define CAVITYNOON_SRC_PARALLEL_HPP

#include <atomic>
#include <cstdlib>
#include <functional>
#include <string>
#include <thread>
#include <vector>

namespace cavitynoon::detail {

// Worker cap: CAVITY_NOON_THREADS when set (>=1), hardware concurrency
// otherwise.
inline int thread_budget() {
    if (const char* env = std::getenv("CAVITY_NOON_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v >= 1) return v;
        } catch (...) {
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Index-parallel loop; results keyed by index stay deterministic regardless
// of the worker count.
inline void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn) {
    const int workers = std::min<std::size_t>(thread_budget(), count);
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
        });
    for (auto& t : pool) t.join();
}

} // namespace cavitynoon::detail

#endif
