#pragma once

#include <cstdint>
#include <vector>

#include "l1cert/numtheory.hpp"

namespace l1cert::charsum {

enum class Parity { even, odd };

inline Parity parity_of(const numtheory::QuadChar& chi) {
    return chi.odd ? Parity::odd : Parity::even;
}

enum class BoundKind {
    frolenkov_soundararajan,
    lapkova_even,
    lapkova_odd,
    smoothed_tent,
    window_odd,
    window_even,
};

struct CharSumBound {
    BoundKind kind;
    double value;
    double q;
    double N = 0.0;
    double M = 0.0;
    bool from_zero = false;
};

// V = (1/(pi sqrt 2)) sqrt(q) (log q + 6) + sqrt(q), q >= 100.
double pv_bound_fs(double q);
// Same bound fed with precomputed sqrt(q), log(q) so moduli far above the
// double range (q ~ 1e300) evaluate without forming q itself.
double pv_bound_fs_logs(double sqrt_q, double log_q);

// Lapkova's refinement: (2/pi^2) sqrt(q) log q + 0.9467 sqrt(q) + 1.668
// (even) or (1/(2 pi)) sqrt(q) log q + 0.8204 sqrt(q) + 1.0286 (odd);
// prefix sums of an even character (from_zero) may halve the bound.
double pv_bound_lapkova(double q, Parity parity, bool from_zero = false);

// Smoothed tent-weight bound sqrt(q) - N/sqrt(q), 0 < N <= q.
double smoothed_pv_bound(double q, double N);

// Window bounds: odd characters, any window (M, M+N]:
// sqrt(2N) q^{1/4} + sqrt(q); even characters, prefixes [1, N]:
// sqrt(N) q^{1/4} + sqrt(q)/2.
double window_bound(double q, double N, Parity parity);

// Intermediate K-block bound from the tent decomposition:
// K sqrt(q) - N/sqrt(q) + N/(2K) + 1, with the canonical block count
// K = 1 + floor(q^{-1/4} sqrt(N/2)).
double window_block_bound(double q, double N, std::uint64_t K);
std::uint64_t window_block_count(double q, double N);

// Exact maximum of |sum_{A<=n<=B} chi_d(n)| over all 0 <= A <= B < q,
// via one-period prefix min/max (periodicity makes this exhaustive).
struct IntervalMax {
    long long max_abs = 0;
    std::uint64_t arg_a = 0;   // closed interval [arg_a, arg_b]
    std::uint64_t arg_b = 0;
};
IntervalMax brute_max_interval_sum(long long d, std::uint64_t cap = 3000);

// Oracle pieces shared by the audit commands and the lemma sweeps.
// Tent-weighted sum over integers M <= n <= M+2N with weight
// max(0, 1 - |(n-M)/N - 1|); weight is exactly 0 at both support endpoints.
double tent_weighted_sum(const std::vector<signed char>& chi, std::uint64_t q, double M, double N);
// max over integer M in [0, q) of |sum_{M < n <= M+N} chi(n)|.
long long window_max_abs(const std::vector<signed char>& chi, std::uint64_t q, std::uint64_t N);
// |sum_{1 <= n <= N} chi(n)| for N <= q.
long long prefix_abs(const std::vector<signed char>& chi, std::uint64_t q, std::uint64_t N);

// One audit row per discriminant: the exhaustive interval maximum against
// both explicit Polya-Vinogradov constants.
struct CharSumAuditRow {
    long long d;
    std::uint64_t q;
    Parity parity;
    long long oracle_max;
    double v_fs;       // NaN when q < 100 (bound out of domain)
    double v_lapkova;
    double margin;     // min applicable V - oracle_max
};
std::vector<CharSumAuditRow> charsum_audit(std::uint64_t d_max, unsigned threads = 1);

}  // namespace l1cert::charsum
