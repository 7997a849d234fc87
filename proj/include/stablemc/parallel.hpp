#pragma once

#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace stablemc {

inline unsigned effective_workers(unsigned requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? hw : 1;
}

// Runs fn(index) for index in [0, count) across workers in contiguous chunks.
// The first exception thrown by any worker is rethrown after all join.
inline void parallel_for(std::uint64_t count, unsigned workers,
                         const std::function<void(std::uint64_t)>& fn) {
    const unsigned w = effective_workers(workers);
    if (w <= 1 || count < 2) {
        for (std::uint64_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> threads;
    std::exception_ptr first_error;
    std::mutex error_mutex;
    const std::uint64_t chunk = (count + w - 1) / w;
    for (unsigned t = 0; t < w; ++t) {
        const std::uint64_t begin = static_cast<std::uint64_t>(t) * chunk;
        if (begin >= count) break;
        const std::uint64_t end = std::min(count, begin + chunk);
        threads.emplace_back([&, begin, end] {
            try {
                for (std::uint64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& th : threads) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

}  // namespace stablemc
