#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace pslepian {

struct McEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t n = 0;
    std::uint64_t seed = 0;
};

// Welford accumulator with Chan's merge.
struct RunningStats {
    std::size_t n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        const double d = x - mean;
        mean += d / static_cast<double>(n);
        m2 += d * (x - mean);
    }

    void merge(const RunningStats& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        const double total = static_cast<double>(n + o.n);
        const double d = o.mean - mean;
        mean += d * static_cast<double>(o.n) / total;
        m2 += o.m2 + d * d * static_cast<double>(n) * static_cast<double>(o.n) / total;
        n += o.n;
    }

    double variance() const { return n > 1 ? m2 / static_cast<double>(n - 1) : 0.0; }

    McEstimate estimate(std::uint64_t seed) const {
        return {mean, n > 1 ? std::sqrt(variance() / static_cast<double>(n)) : 0.0, n, seed};
    }
};

struct StatsVector {
    std::vector<RunningStats> items;

    void merge(const StatsVector& o) {
        if (items.empty()) items.resize(o.items.size());
        for (std::size_t i = 0; i < o.items.size(); ++i) items[i].merge(o.items[i]);
    }
};

inline constexpr std::size_t kMcBlockSize = 1024;

/**
 * Runs body(acc, begin, end) over fixed blocks of kMcBlockSize path indices
 * and merges the block accumulators in block order. The result is bitwise
 * independent of `workers`. Acc needs merge(const Acc&).
 */
template <class Acc, class Body>
Acc map_reduce_paths(std::size_t n, unsigned workers, const Acc& zero, Body&& body) {
    const std::size_t blocks = (n + kMcBlockSize - 1) / kMcBlockSize;
    std::vector<Acc> partial(blocks, zero);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto run = [&] {
        for (;;) {
            const std::size_t b = next.fetch_add(1);
            if (b >= blocks) return;
            try {
                body(partial[b], b * kMcBlockSize, std::min(n, (b + 1) * kMcBlockSize));
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(blocks);
                return;
            }
        }
    };

    const unsigned threads = static_cast<unsigned>(std::clamp<std::size_t>(workers == 0 ? 1 : workers, 1, std::max<std::size_t>(blocks, 1)));
    if (threads <= 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(threads);
        for (unsigned t = 0; t < threads; ++t) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    Acc total = zero;
    for (const Acc& part : partial) total.merge(part);
    return total;
}

} // namespace pslepian
