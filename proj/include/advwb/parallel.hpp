#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace advwb {

/// Worker count used by the scans in this library. Defaults to the
/// ADVWB_THREADS environment variable, else the hardware concurrency.
unsigned thread_count();
void set_thread_count(unsigned n);

/// Runs body(begin, end) over contiguous chunks of [0, n) on up to
/// thread_count() threads. Bodies must only write to disjoint state.
template <typename Body>
void parallel_chunks(std::size_t n, Body&& body) {
    const std::size_t workers = std::min<std::size_t>(thread_count(), std::max<std::size_t>(n / 256, 1));
    if (workers <= 1) {
        body(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> errors(workers);
    const std::size_t chunk = (n + workers - 1) / workers;
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        threads.emplace_back([&, w, lo, hi] {
            try {
                body(lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : threads) t.join();
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace advwb
