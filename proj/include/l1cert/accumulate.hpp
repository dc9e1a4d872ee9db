#pragma once

#include <cmath>
#include <cstddef>
#include <thread>
#include <vector>

namespace l1cert {

// Neumaier-compensated accumulator.  Prefix sums of Lambda(n)/n must stay
// trustworthy to ~1e-12 over 10^7 additions, which plain running sums do
// not guarantee.
struct KahanSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::abs(sum) >= std::abs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }

    void add(const KahanSum& other) {
        add(other.sum);
        add(other.comp);
    }

    double value() const { return sum + comp; }
};

// Conservative rounding policy: every quantity on the bound side of an
// inequality is nudged in the direction that can only weaken the final
// claim.  1e-12 relative dominates double round-off over all accumulation
// lengths used here.
inline constexpr double kRoundingSlack = 1e-12;

inline double round_up(double x) { return x + std::abs(x) * kRoundingSlack; }
inline double round_down(double x) { return x - std::abs(x) * kRoundingSlack; }

// Runs fn(chunk_index, begin, end) over [0, n) split into fixed-size chunks.
// Chunk boundaries do not depend on the thread count, so per-chunk results
// merged in index order are identical for any number of workers.
template <typename Fn>
void for_each_chunk(std::size_t n, std::size_t chunk, unsigned threads, Fn&& fn) {
    if (n == 0) return;
    if (chunk == 0) chunk = 1;
    const std::size_t n_chunks = (n + chunk - 1) / chunk;
    if (threads <= 1 || n_chunks == 1) {
        for (std::size_t c = 0; c < n_chunks; ++c)
            fn(c, c * chunk, std::min(n, (c + 1) * chunk));
        return;
    }
    std::vector<std::thread> pool;
    const unsigned nw = std::min<std::size_t>(threads, n_chunks);
    // static striping keeps the work distribution deterministic as well
    for (unsigned w = 0; w < nw; ++w) {
        pool.emplace_back([=, &fn]() {
            for (std::size_t c = w; c < n_chunks; c += nw)
                fn(c, c * chunk, std::min(n, (c + 1) * chunk));
        });
    }
    for (auto& t : pool) t.join();
}

}  // namespace l1cert
