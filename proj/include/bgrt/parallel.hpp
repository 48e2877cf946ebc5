#pragma once

#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace bgrt {

/// Worker count: BGRT_THREADS when set, else hardware concurrency.
inline int thread_count() {
    if (const char* env = std::getenv("BGRT_THREADS")) {
        const int n = std::atoi(env);
        if (n >= 1) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

/// Runs fn(row) for row in [0, n_rows). Rows are independent units of work;
/// callers that reduce must combine per-row results in row order so the output
/// does not depend on the worker count.
template <class Fn>
void parallel_rows(int n_rows, Fn&& fn) {
    const int workers = std::min(thread_count(), n_rows > 0 ? n_rows : 1);
    if (workers <= 1) {
        for (int r = 0; r < n_rows; ++r) fn(r);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int r = w; r < n_rows; r += workers) fn(r);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace bgrt
