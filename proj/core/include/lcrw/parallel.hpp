#pragma once

#include <atomic>
#include <cstdint>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace lcrw {

// Thread budget: explicit argument > LCRW_THREADS env var > hardware count.
inline int resolve_threads(int requested = 0) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("LCRW_THREADS")) {
        int v = std::atoi(env);
        if (v > 0) return v;
    }
    unsigned hc = std::thread::hardware_concurrency();
    return hc == 0 ? 1 : static_cast<int>(hc);
}

// Deterministic block-parallel reduction.  Work items [0, n) are split into
// fixed-size blocks; each block is accumulated sequentially by whichever
// worker claims it, and block results are merged in block order afterwards.
// The result is therefore independent of the thread count, including the
// floating-point rounding of the merge.
//
// Acc requirements: default-constructible; combined via merge(Acc&, const Acc&).
template <class Acc, class BlockFn, class MergeFn>
Acc block_reduce(std::int64_t n, std::int64_t block_size, int threads, BlockFn&& block_fn, MergeFn&& merge) {
    if (n <= 0) return Acc{};
    if (block_size <= 0) block_size = 1;
    const std::int64_t n_blocks = (n + block_size - 1) / block_size;
    std::vector<Acc> partial(static_cast<size_t>(n_blocks));

    threads = resolve_threads(threads);
    if (threads > n_blocks) threads = static_cast<int>(n_blocks);

    auto run_block = [&](std::int64_t b) {
        const std::int64_t lo = b * block_size;
        const std::int64_t hi = std::min(n, lo + block_size);
        block_fn(lo, hi, partial[static_cast<size_t>(b)]);
    };

    if (threads <= 1) {
        for (std::int64_t b = 0; b < n_blocks; ++b) run_block(b);
    } else {
        std::atomic<std::int64_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(static_cast<size_t>(threads));
        for (int w = 0; w < threads; ++w) {
            pool.emplace_back([&] {
                for (;;) {
                    const std::int64_t b = next.fetch_add(1, std::memory_order_relaxed);
                    if (b >= n_blocks) return;
                    run_block(b);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    Acc total{};
    for (std::int64_t b = 0; b < n_blocks; ++b) merge(total, partial[static_cast<size_t>(b)]);
    return total;
}

// Compensated accumulator for long Monte Carlo sums.
struct KahanSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) {
        const double y = x - carry;
        const double t = sum + y;
        carry = (t - sum) - y;
        sum = t;
    }
    void add(const KahanSum& o) {
        add(o.sum);
        add(-o.carry);
    }
    double value() const { return sum - carry; }
};

}  // namespace lcrw
