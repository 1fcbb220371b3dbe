#pragma once

#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace mlbels {

/// Worker cap: MLBELS_THREADS when set (0 or 1 means serial), else serial.
inline std::size_t worker_cap() {
    const char* env = std::getenv("MLBELS_THREADS");
    if (env == nullptr) return 1;
    const long v = std::atol(env);
    return v <= 1 ? 1 : static_cast<std::size_t>(v);
}

/// Run fn(i) for i in [0, n). Results must be independent per index; the
/// outcome is identical whatever the worker count. The first exception is
/// rethrown on the calling thread after all workers join.
template <typename Fn>
void parallel_for(std::size_t n, Fn&& fn) {
    const std::size_t workers = std::min(worker_cap(), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
            try {
                for (std::size_t i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (std::thread& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

} // namespace mlbels
