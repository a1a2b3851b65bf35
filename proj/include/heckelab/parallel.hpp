#pragma once

#include <atomic>
#include <exception>
#include <cstdint>
#include <cstdlib>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace heckelab {

// Thread count resolution: explicit argument > HECKE_LAB_THREADS > hardware.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("HECKE_LAB_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hw = std::thread::hardware_concurrency();
    return hw ? static_cast<int>(hw) : 1;
}

// Runs fn(chunk_index, begin, end) over [0, count) split into fixed-size
// chunks. Chunk boundaries depend only on count, never on the thread count,
// so per-chunk results can be combined in chunk order for bit-stable output.
inline void parallel_chunks(int64_t count, int threads,
                            const std::function<void(int64_t, int64_t, int64_t)>& fn,
                            int64_t chunk_size = 4096) {
    if (count <= 0) return;
    const int64_t nchunks = (count + chunk_size - 1) / chunk_size;
    threads = resolve_threads(threads);
    if (threads <= 1 || nchunks == 1) {
        for (int64_t c = 0; c < nchunks; ++c)
            fn(c, c * chunk_size, std::min(count, (c + 1) * chunk_size));
        return;
    }
    std::atomic<int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mu;
    auto worker = [&] {
        try {
            for (;;) {
                int64_t c = next.fetch_add(1);
                if (c >= nchunks) return;
                fn(c, c * chunk_size, std::min(count, (c + 1) * chunk_size));
            }
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mu);
            if (!error) error = std::current_exception();
        }
    };
    std::vector<std::thread> pool;
    const int nworkers = static_cast<int>(std::min<int64_t>(threads, nchunks));
    pool.reserve(nworkers);
    for (int t = 0; t < nworkers; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

// Deterministic parallel sum of per-index doubles: partials are accumulated
// within fixed chunks and combined in chunk order.
inline double parallel_sum(int64_t count, int threads, const std::function<double(int64_t)>& term,
                           int64_t chunk_size = 4096) {
    if (count <= 0) return 0.0;
    const int64_t nchunks = (count + chunk_size - 1) / chunk_size;
    std::vector<double> partials(static_cast<size_t>(nchunks), 0.0);
    parallel_chunks(
        count, threads,
        [&](int64_t c, int64_t b, int64_t e) {
            double s = 0.0;
            for (int64_t i = b; i < e; ++i) s += term(i);
            partials[static_cast<size_t>(c)] = s;
        },
        chunk_size);
    double total = 0.0;
    for (double s : partials) total += s;
    return total;
}

}  // namespace heckelab
