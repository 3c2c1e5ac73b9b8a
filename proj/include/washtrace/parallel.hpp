#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace washtrace {

// 0 -> hardware concurrency (at least 1).
inline unsigned resolve_workers(unsigned requested) noexcept {
    if (requested)
        return requested;
    return std::max(1u, std::thread::hardware_concurrency());
}

// Calls fn(worker, i) for every i in [0, n) using up to `workers` threads.
// Indices are handed out dynamically; fn must only touch state owned by i or
// by its worker slot.
template <class Fn>
void parallel_for(std::size_t n, unsigned workers, Fn&& fn) {
    workers = static_cast<unsigned>(std::min<std::size_t>(resolve_workers(workers), std::max<std::size_t>(n, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i)
            fn(0u, i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&, w] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1))
                fn(w, i);
        });
}

} // namespace washtrace
