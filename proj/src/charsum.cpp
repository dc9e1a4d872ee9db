#include "l1cert/charsum.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "l1cert/accumulate.hpp"

namespace l1cert::charsum {

double pv_bound_fs_logs(double sqrt_q, double log_q) {
    return round_up(sqrt_q * (log_q + 6.0) / (M_PI * std::sqrt(2.0)) + sqrt_q);
}

double pv_bound_fs(double q) {
    if (!(q >= 100.0)) throw std::domain_error("pv_bound_fs: requires q >= 100");
    return pv_bound_fs_logs(std::sqrt(q), std::log(q));
}

double pv_bound_lapkova(double q, Parity parity, bool from_zero) {
    if (!(q >= 2.0)) throw std::domain_error("pv_bound_lapkova: requires q >= 2");
    if (from_zero && parity == Parity::odd)
        throw std::invalid_argument("pv_bound_lapkova: the halving rule applies to even characters only");
    const double sq = std::sqrt(q);
    double v;
    if (parity == Parity::even)
        v = (2.0 / (M_PI * M_PI)) * sq * std::log(q) + 0.9467 * sq + 1.668;
    else
        v = (1.0 / (2.0 * M_PI)) * sq * std::log(q) + 0.8204 * sq + 1.0286;
    if (from_zero) v /= 2.0;
    return round_up(v);
}

double smoothed_pv_bound(double q, double N) {
    if (!(q >= 2.0)) throw std::domain_error("smoothed_pv_bound: requires q >= 2");
    if (!(N > 0.0) || !(N <= q))
        throw std::invalid_argument("smoothed_pv_bound: N must lie in (0, q]");
    return round_up(std::sqrt(q) - N / std::sqrt(q));
}

double window_bound(double q, double N, Parity parity) {
    if (!(q >= 2.0)) throw std::domain_error("window_bound: requires q >= 2");
    if (!(N > 0.0) || !(N <= q))
        throw std::invalid_argument("window_bound: N must lie in (0, q]");
    const double q4 = std::pow(q, 0.25);
    if (parity == Parity::odd) return round_up(std::sqrt(2.0 * N) * q4 + std::sqrt(q));
    return round_up(std::sqrt(N) * q4 + 0.5 * std::sqrt(q));
}

std::uint64_t window_block_count(double q, double N) {
    return 1 + static_cast<std::uint64_t>(std::floor(std::sqrt(N / 2.0) / std::pow(q, 0.25)));
}

double window_block_bound(double q, double N, std::uint64_t K) {
    if (K == 0) throw std::invalid_argument("window_block_bound: K must be >= 1");
    const double k = static_cast<double>(K);
    return k * std::sqrt(q) - N / std::sqrt(q) + N / (2.0 * k) + 1.0;
}

IntervalMax brute_max_interval_sum(long long d, std::uint64_t cap) {
    const numtheory::QuadChar chi(d);
    if (chi.q > cap)
        throw std::domain_error("brute_max_interval_sum: |d| exceeds the oracle cap");
    const auto table = chi.period_table();
    // P(k) = sum_{n=0..k} chi(n); with the empty prefix P(-1)=0 the maximal
    // |interval sum| equals max P - min P.
    long long run = 0, mn = 0, mx = 0;
    std::uint64_t mn_at = 0, mx_at = 0;  // index+1 convention, 0 = empty prefix
    for (std::uint64_t n = 0; n < chi.q; ++n) {
        run += table[n];
        if (run < mn) { mn = run; mn_at = n + 1; }
        if (run > mx) { mx = run; mx_at = n + 1; }
    }
    IntervalMax r;
    r.max_abs = mx - mn;
    const std::uint64_t lo = std::min(mn_at, mx_at);
    const std::uint64_t hi = std::max(mn_at, mx_at);
    r.arg_a = lo;            // interval [lo, hi-1] realizes |P(hi-1) - P(lo-1)|
    r.arg_b = hi == 0 ? 0 : hi - 1;
    return r;
}

double tent_weighted_sum(const std::vector<signed char>& chi, std::uint64_t q, double M, double N) {
    const auto n0 = static_cast<long long>(std::ceil(M));
    const auto n1 = static_cast<long long>(std::floor(M + 2.0 * N));
    KahanSum s;
    for (long long n = n0; n <= n1; ++n) {
        const double t = (static_cast<double>(n) - M) / N;
        const double w = std::max(0.0, 1.0 - std::abs(t - 1.0));
        if (w == 0.0) continue;
        const auto idx = static_cast<std::uint64_t>(((n % static_cast<long long>(q)) + static_cast<long long>(q)) % static_cast<long long>(q));
        s.add(w * chi[idx]);
    }
    return s.value();
}

long long window_max_abs(const std::vector<signed char>& chi, std::uint64_t q, std::uint64_t N) {
    // prefix over two periods so every window start M in [0, q) is covered
    long long best = 0;
    long long run = 0;
    std::vector<long long> pref(2 * q + 1, 0);
    for (std::uint64_t i = 0; i < 2 * q; ++i) {
        run += chi[i % q];
        pref[i + 1] = run;
    }
    for (std::uint64_t M = 0; M < q; ++M) {
        const long long s = pref[M + N] - pref[M];
        best = std::max(best, s < 0 ? -s : s);
    }
    return best;
}

long long prefix_abs(const std::vector<signed char>& chi, std::uint64_t q, std::uint64_t N) {
    long long run = 0;
    for (std::uint64_t n = 1; n <= N; ++n) run += chi[n % q];
    return run < 0 ? -run : run;
}

std::vector<CharSumAuditRow> charsum_audit(std::uint64_t d_max, unsigned threads) {
    const auto ds = numtheory::fundamental_discriminants(d_max);
    std::vector<CharSumAuditRow> rows(ds.size());
    for_each_chunk(ds.size(), 16, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            const long long d = ds[i];
            const numtheory::QuadChar chi(d);
            const auto om = brute_max_interval_sum(d, d_max).max_abs;
            CharSumAuditRow& r = rows[i];
            r.d = d;
            r.q = chi.q;
            r.parity = parity_of(chi);
            r.oracle_max = om;
            r.v_fs = chi.q >= 100 ? pv_bound_fs(static_cast<double>(chi.q))
                                  : std::numeric_limits<double>::quiet_NaN();
            r.v_lapkova = pv_bound_lapkova(static_cast<double>(chi.q), r.parity);
            double v = r.v_lapkova;
            if (chi.q >= 100) v = std::min(v, r.v_fs);
            r.margin = v - static_cast<double>(om);
        }
    });
    return rows;
}

}  // namespace l1cert::charsum
