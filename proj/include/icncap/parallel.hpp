#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace icncap {

inline unsigned resolve_workers(unsigned requested) {
    if (requested != 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

/// Runs body(index, worker) for every index in [0, count). Work is pulled
/// from a shared counter, so callers must write results into per-index slots
/// and reduce them afterwards in index order.
template <class Body>
void parallel_for(std::size_t count, unsigned workers, Body&& body) {
    workers = std::min<unsigned>(resolve_workers(workers),
                                 static_cast<unsigned>(std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i, 0u);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) {
                    body(i, w);
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(count);
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace icncap
