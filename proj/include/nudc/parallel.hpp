#ifndef NUDC_PARALLEL_HPP
#define NUDC_PARALLEL_HPP

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace nudc {

// Intra-op worker count. Work is split by static partition so results are
// bitwise identical run-to-run for a fixed thread count; deterministic mode
// sets this to 1.
inline std::atomic<int>& compute_threads_slot() {
    static std::atomic<int> n{0};
    return n;
}

inline int compute_threads() {
    int n = compute_threads_slot().load(std::memory_order_relaxed);
    if (n <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = static_cast<int>(hw == 0 ? 1 : std::min(hw, 8u));
        compute_threads_slot().store(n, std::memory_order_relaxed);
    }
    return n;
}

inline void set_compute_threads(int n) {
    compute_threads_slot().store(std::clamp(n, 1, 64), std::memory_order_relaxed);
}

/// Runs fn(i) for i in [0, count). Splits the index range into contiguous
/// chunks, one per worker; chunk boundaries depend only on (count, threads),
/// never on scheduling, so floating-point results are reproducible.
/// cost_hint is the approximate total flop count; small jobs stay serial.
template <typename Fn>
void parallel_for(int count, std::size_t cost_hint, Fn&& fn) {
    int threads = std::min(compute_threads(), count);
    if (threads <= 1 || cost_hint < (1u << 20)) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads) - 1);
    auto run_chunk = [&fn, count, threads](int k) {
        int lo = static_cast<int>(static_cast<long long>(count) * k / threads);
        int hi = static_cast<int>(static_cast<long long>(count) * (k + 1) / threads);
        for (int i = lo; i < hi; ++i) fn(i);
    };
    for (int k = 1; k < threads; ++k) pool.emplace_back(run_chunk, k);
    run_chunk(0);
    for (auto& t : pool) t.join();
}

} // namespace nudc

#endif // NUDC_PARALLEL_HPP
