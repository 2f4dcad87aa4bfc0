#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <functional>
#include <thread>
#include <vector>

namespace zqlab {

/// Splits [0, n) into contiguous chunks, one per worker, and returns the
/// per-chunk results in chunk order. Integer reductions over the returned
/// vector are therefore independent of the worker count.
template <class Result, class ChunkFn>
std::vector<Result> chunked_map(std::size_t n, unsigned threads, ChunkFn&& fn) {
    const std::size_t workers = std::max<std::size_t>(1, std::min<std::size_t>(threads == 0 ? 1 : threads, n == 0 ? 1 : n));
    std::vector<Result> out(workers);
    const std::size_t step = (n + workers - 1) / workers;
    if (workers == 1) {
        out[0] = fn(std::size_t{0}, n);
        return out;
    }
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(n, w * step);
        const std::size_t hi = std::min(n, lo + step);
        pool.emplace_back([&, w, lo, hi] {
            try {
                out[w] = fn(lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    // The lowest failing chunk wins, so the reported error does not depend on timing.
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    return out;
}

/// Runs fn(i) for every i in [0, n) on a pool of workers. fn must write only
/// to slot i of its own output.
template <class Fn>
void parallel_for(std::size_t n, unsigned threads, Fn&& fn) {
    chunked_map<int>(n, threads, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) fn(i);
        return 0;
    });
}

}  // namespace zqlab
