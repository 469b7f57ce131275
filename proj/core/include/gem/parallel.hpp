#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace gem {

/// Default pool size: GEM_SIM_WORKERS if set to a positive integer,
/// otherwise 1.
std::size_t default_workers();

/// Runs task(i) for i in [0, count) on up to `workers` threads. Tasks are
/// claimed in index order; the first exception is rethrown after all
/// threads have joined.
template <typename Task>
void parallel_for(std::size_t count, std::size_t workers, Task&& task)
{
    if (workers <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            task(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count)
                return;
            try {
                task(i);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error)
                    error = std::current_exception();
                next.store(count);
            }
        }
    };
    std::vector<std::thread> threads;
    const std::size_t n = std::min(workers, count);
    threads.reserve(n);
    for (std::size_t w = 0; w < n; ++w)
        threads.emplace_back(body);
    for (auto& t : threads)
        t.join();
    if (error)
        std::rethrow_exception(error);
}

} // namespace gem
