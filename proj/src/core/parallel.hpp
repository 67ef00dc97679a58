#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace noma::par {

inline unsigned default_workers() {
    if (const char* env = std::getenv("NOMA_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<unsigned>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Splits [0, trials) into fixed-size chunks, evaluates each chunk with
// `body(begin, end, acc)`, and merges chunk accumulators in chunk-index
// order. Chunk geometry does not depend on the worker count, so results
// are bit-identical for any number of workers.
template <class Acc, class Body, class Merge>
Acc run_chunked(std::uint64_t trials, const Acc& init, Body body, Merge merge,
                unsigned workers = 0, std::uint64_t chunk_size = 1u << 16) {
    if (trials == 0) return init;
    if (workers == 0) workers = default_workers();
    const std::uint64_t nchunks = (trials + chunk_size - 1) / chunk_size;
    if (workers > nchunks) workers = static_cast<unsigned>(nchunks);

    std::vector<Acc> partial(nchunks, init);
    std::atomic<std::uint64_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::uint64_t c = next.fetch_add(1, std::memory_order_relaxed);
            if (c >= nchunks) return;
            const std::uint64_t lo = c * chunk_size;
            const std::uint64_t hi = lo + chunk_size < trials ? lo + chunk_size : trials;
            body(lo, hi, partial[c]);
        }
    };

    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    Acc total = init;
    for (const Acc& p : partial) merge(total, p);
    return total;
}

}  // namespace noma::par
