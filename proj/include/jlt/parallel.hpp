#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace jlt {

/// Worker count: JACOBI_LT_THREADS if set to a positive integer, else the hardware concurrency.
inline unsigned worker_count() {
    if (const char* env = std::getenv("JACOBI_LT_THREADS")) {
        try {
            const long n = std::stol(env);
            if (n > 0) return static_cast<unsigned>(n);
        } catch (const std::exception&) {
        }
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

/**
 * out[i] = fn(i) for i < n, spread over worker_count() threads with a static
 * interleaved schedule. Results keep index order; if any call throws, the
 * exception of the lowest failing index is rethrown after all workers join.
 */
template <class Result, class Fn>
std::vector<Result> parallel_map(std::size_t n, Fn&& fn) {
    std::vector<Result> out(n);
    std::vector<std::exception_ptr> errors(n);
    const std::size_t workers = std::min<std::size_t>(worker_count(), std::max<std::size_t>(n, 1));
    auto work = [&](std::size_t first) {
        for (std::size_t i = first; i < n; i += workers) {
            try {
                out[i] = fn(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers <= 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (auto& t : pool) t.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

}  // namespace jlt
