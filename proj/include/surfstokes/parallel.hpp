#pragma once

#include <algorithm>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace surfstokes {

/// Runs body(begin, end) over contiguous chunks of [0, n) on `threads`
/// workers. The partition depends only on n and threads. The first
/// exception thrown by any worker is rethrown on the caller's thread.
template <class Body>
void parallel_for(int n, int threads, Body&& body) {
    threads = std::max(1, std::min(threads, n));
    if (threads <= 1) {
        if (n > 0) body(0, n);
        return;
    }
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int w = 0; w < threads; ++w) {
        const int begin = static_cast<int>(static_cast<long long>(n) * w / threads);
        const int end = static_cast<int>(static_cast<long long>(n) * (w + 1) / threads);
        pool.emplace_back([&, begin, end] {
            try {
                body(begin, end);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace surfstokes
