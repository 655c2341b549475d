// parallel.hpp — deterministic fork/join loop used by the fragment averagers.
//
// Work item i always writes into caller-owned slot i, so reductions performed
// afterwards run in index order and the result is independent of the thread
// count.  Exceptions thrown by workers are captured and rethrown on the
// calling thread (lowest thread index wins, which is stable for a fixed
// thread count).
#pragma once

#include <cstddef>
#include <exception>
#include <thread>
#include <utility>
#include <vector>

namespace qpip {

template <typename Fn>
void parallel_for(std::size_t count, int threads, Fn&& fn) {
    if (count == 0) return;
    const std::size_t max_workers =
        threads < 1 ? 1 : std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    if (max_workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }

    std::vector<std::exception_ptr> errors(max_workers);
    std::vector<std::thread> pool;
    pool.reserve(max_workers);
    for (std::size_t w = 0; w < max_workers; ++w) {
        const std::size_t begin = count * w / max_workers;
        const std::size_t end = count * (w + 1) / max_workers;
        pool.emplace_back([&, w, begin, end] {
            try {
                for (std::size_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace qpip
