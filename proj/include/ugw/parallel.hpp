#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace ugw {

/// Worker-count capability handed to the Monte Carlo kernels. Work is split in
/// contiguous index ranges; kernels must make each index's result a function of
/// the index alone, so the split never changes results.
class Workers {
public:
    explicit Workers(unsigned threads = 1) : threads_(std::max(1u, threads)) {}

    unsigned threads() const noexcept { return threads_; }

    /// Calls body(begin, end) over a partition of [0, n).
    template <typename Body>
    void for_ranges(std::size_t n, Body&& body) const {
        const std::size_t workers = std::min<std::size_t>(threads_, std::max<std::size_t>(n / 1024, 1));
        if (workers <= 1) {
            body(std::size_t{0}, n);
            return;
        }
        std::vector<std::thread> pool;
        pool.reserve(workers);
        std::exception_ptr failure;
        std::mutex failure_mutex;
        const std::size_t chunk = (n + workers - 1) / workers;
        for (std::size_t w = 0; w < workers; ++w) {
            const std::size_t begin = w * chunk;
            const std::size_t end = std::min(n, begin + chunk);
            if (begin >= end) break;
            pool.emplace_back([&, begin, end] {
                try {
                    body(begin, end);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            });
        }
        for (auto& t : pool) t.join();
        if (failure) std::rethrow_exception(failure);
    }

    /// Calls body(i) for every i in [0, n).
    template <typename Body>
    void for_each_index(std::size_t n, Body&& body) const {
        for_ranges(n, [&](std::size_t begin, std::size_t end) {
            for (std::size_t i = begin; i < end; ++i) body(i);
        });
    }

    /// Maps i -> f(i) into a vector, results ordered by index.
    template <typename T, typename F>
    std::vector<T> map(std::size_t n, F&& f) const {
        std::vector<T> out(n);
        for_each_index(n, [&](std::size_t i) { out[i] = f(i); });
        return out;
    }

private:
    unsigned threads_;
};

}  // namespace ugw
