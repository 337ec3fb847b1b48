#ifndef SEMICLASSIC_PARALLEL_HPP
#define SEMICLASSIC_PARALLEL_HPP

#include <cstdlib>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace semiclassic {

/// Worker count: SEMICLASSIC_THREADS env var, else hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("SEMICLASSIC_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(i) for i in [0, n) across threads; fn must be data-parallel.
/// The first exception thrown by any worker is rethrown in the caller.
inline void parallel_for(long n, const std::function<void(long)>& fn) {
    const int workers = std::min<long>(thread_count(), n);
    if (workers <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    std::mutex mu;
    std::exception_ptr first_error;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([=, &fn, &mu, &first_error] {
            try {
                for (long i = w; i < n; i += workers) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(mu);
                if (!first_error) first_error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

} // namespace semiclassic

#endif
