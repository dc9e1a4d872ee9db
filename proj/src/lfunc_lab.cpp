#include "l1cert/lfunc_lab.hpp"

#include <cmath>
#include <stdexcept>

#include "l1cert/accumulate.hpp"
#include "l1cert/charsum.hpp"
#include "l1cert/explicit_psi.hpp"

namespace l1cert::lfunc {

namespace {
// relative snap when flooring H^x: keeps thresholds that are mathematically
// integers (H^{x_m} = H/m) from falling one short after exp/log round trips
constexpr double kFloorSnap = 1e-12;

std::uint64_t snapped_floor(double t) {
    return static_cast<std::uint64_t>(std::floor(t * (1.0 + kFloorSnap)));
}
}  // namespace

double SmoothingContext::x_m(std::uint64_t m) const {
    return 1.0 - std::log(static_cast<double>(m)) / log_H;
}

std::uint64_t SmoothingContext::threshold(double x) const {
    return snapped_floor(std::exp(x * log_H));
}

SmoothingContext make_context(const numtheory::QuadChar& chi, double H, std::uint64_t cap) {
    if (!(H > 1.0)) throw std::invalid_argument("make_context: H must exceed 1");
    SmoothingContext ctx{chi, H, std::log(H), cap, chi.period_table()};
    return ctx;
}

namespace {
void require_within_cap(const SmoothingContext& ctx, std::uint64_t K) {
    if (K > ctx.cap) throw std::domain_error("lfunc: H^x exceeds the oracle cap");
}
}  // namespace

double f_value(const SmoothingContext& ctx, double x) {
    const std::uint64_t K = ctx.threshold(x);
    require_within_cap(ctx, K);
    long long s = 0;
    for (std::uint64_t n = 1; n <= K; ++n) s += ctx.chi_at(n);
    return static_cast<double>(s) / std::exp(x * ctx.log_H);
}

double F_value(const SmoothingContext& ctx, double x) {
    const std::uint64_t K = ctx.threshold(x);
    require_within_cap(ctx, K);
    KahanSum s;
    long long c = 0;
    for (std::uint64_t n = 1; n <= K; ++n) {
        const int v = ctx.chi_at(n);
        if (v == 0) continue;
        s.add(static_cast<double>(v) / static_cast<double>(n));
        c += v;
    }
    const double f = static_cast<double>(c) / std::exp(x * ctx.log_H);
    return (s.value() - f) / ctx.log_H;
}

double ell_value(const SmoothingContext& ctx, double y) {
    const std::uint64_t K = ctx.threshold(y);
    require_within_cap(ctx, K);
    KahanSum s;
    for (std::uint64_t n = 2; n <= K; ++n) {
        const int v = ctx.chi_at(n);
        if (v != 0) s.add(v * std::log(static_cast<double>(n)));
    }
    return s.value() * std::exp(-y * ctx.log_H);
}

double h_value(const SmoothingContext& ctx, const numtheory::SieveTable& table, double y) {
    const std::uint64_t K = ctx.threshold(y);
    require_within_cap(ctx, K);
    if (K > table.limit) throw std::out_of_range("h_value: H^y exceeds the sieve limit");
    KahanSum s;
    for (std::uint64_t n = 2; n <= K; ++n) {
        if (table.mangoldt[n] == 0.0) continue;
        const int v = ctx.chi_at(n);
        if (v != 0) s.add(v * table.mangoldt[n] / static_cast<double>(n));
    }
    return s.value();
}

double h1_value(const numtheory::SieveTable& table, double H, double y) {
    if (!(H > 1.0)) throw std::invalid_argument("h1_value: H must exceed 1");
    const std::uint64_t K = snapped_floor(std::exp(y * std::log(H)));
    if (K > table.limit) throw std::out_of_range("h1_value: H^y exceeds the sieve limit");
    if (K < 1) return 0.0;
    return table.psitilde_prefix[K];
}

double check_identity_opt1(const SmoothingContext& ctx, double x) {
    const std::uint64_t K = ctx.threshold(x);
    require_within_cap(ctx, K);
    // int_0^x f(u) H^u du = (1/log H)(sum_{n<K} S(n)(log(n+1)-log n)
    //                        + S(K)(x log H - log K));  S(n) = sum_{m<=n} chi(m)
    KahanSum integral;
    long long S = 0;
    for (std::uint64_t n = 1; n < K; ++n) {
        S += ctx.chi_at(n);
        if (S != 0)
            integral.add(static_cast<double>(S) *
                         (std::log(static_cast<double>(n + 1)) - std::log(static_cast<double>(n))));
    }
    if (K >= 1) {
        S += ctx.chi_at(K);
        integral.add(static_cast<double>(S) * (x * ctx.log_H - std::log(static_cast<double>(K))));
    }
    const double f = static_cast<double>(S) / std::exp(x * ctx.log_H);
    const double rhs = x * f - integral.value() / ctx.log_H * std::exp(-x * ctx.log_H);
    const double lhs = ell_value(ctx, x) / ctx.log_H;
    return std::abs(lhs - rhs);
}

LValueResult l1_truncated(const numtheory::QuadChar& chi, std::uint64_t T) {
    if (T < chi.q)
        throw std::domain_error("l1_truncated: T below one period makes the tail bound invalid");
    const auto period = chi.period_table();
    KahanSum s;
    for (std::uint64_t n = 1; n <= T; ++n) {
        const int v = period[n % chi.q];
        if (v != 0) s.add(static_cast<double>(v) / static_cast<double>(n));
    }
    const double q = static_cast<double>(chi.q);
    const double V = chi.q >= 100
                         ? charsum::pv_bound_fs(q)
                         : charsum::pv_bound_lapkova(q, charsum::parity_of(chi));
    LValueResult r;
    r.value = s.value();
    r.tail_bound = round_up(V / static_cast<double>(T));
    r.method = LMethod::truncated_series;
    return r;
}

LValueResult l1_closed_form(const numtheory::QuadChar& chi, std::uint64_t cap) {
    if (chi.q > cap) throw std::domain_error("l1_closed_form: q exceeds the oracle cap");
    const auto period = chi.period_table();
    LValueResult r;
    r.method = LMethod::gauss_sum_closed_form;
    const double q = static_cast<double>(chi.q);
    if (chi.odd) {
        long long s = 0;   // sum a*chi(a) is an exact integer, |s| < q^2
        for (std::uint64_t a = 1; a < chi.q; ++a) s += static_cast<long long>(a) * period[a];
        r.value = -M_PI * static_cast<double>(s) / (q * std::sqrt(q));
    } else {
        KahanSum s;
        for (std::uint64_t a = 1; a < chi.q; ++a) {
            if (period[a] == 0) continue;
            s.add(period[a] * std::log(2.0 * std::sin(M_PI * static_cast<double>(a) / q)));
        }
        r.value = -s.value() / std::sqrt(q);
    }
    r.tail_bound = std::abs(r.value) * 1e-12 + 1e-13;  // floating point only
    return r;
}

double check_lemma_l1chi(const numtheory::QuadChar& chi, double H, std::uint64_t cap) {
    if (chi.q < 100) throw std::domain_error("check_lemma_l1chi: requires q >= 100");
    const auto ctx = make_context(chi, H, cap);
    const double F1_logH = F_value(ctx, 1.0) * ctx.log_H;
    const double L = l1_closed_form(chi, cap).value;
    const double V = charsum::pv_bound_fs(static_cast<double>(chi.q));
    return V / H - std::abs(L - F1_logH);
}

double check_lemma_l7(const numtheory::QuadChar& chi, const numtheory::SieveTable& table,
                      double H, std::span<const double> x_samples, std::uint64_t cap) {
    const auto ctx = make_context(chi, H, cap);
    const std::uint64_t KH = ctx.threshold(1.0);
    require_within_cap(ctx, KH);
    if (KH > table.limit) throw std::out_of_range("check_lemma_l7: H exceeds the sieve limit");

    // prefix arrays make every F(y) evaluation O(1)
    std::vector<double> chi_over_n(KH + 1, 0.0);
    std::vector<long long> chi_pref(KH + 1, 0);
    KahanSum acc;
    long long c = 0;
    for (std::uint64_t n = 1; n <= KH; ++n) {
        const int v = ctx.chi_at(n);
        if (v != 0) {
            acc.add(static_cast<double>(v) / static_cast<double>(n));
            c += v;
        }
        chi_over_n[n] = acc.value();
        chi_pref[n] = c;
    }
    const auto F_of = [&](double y) {
        if (y <= 0.0) return 0.0;
        const std::uint64_t K = std::min<std::uint64_t>(KH, ctx.threshold(y));
        const double f = static_cast<double>(chi_pref[K]) / std::exp(y * ctx.log_H);
        return (chi_over_n[K] - f) / ctx.log_H;
    };

    double worst = HUGE_VAL;
    const double budget = 1.411 / (ctx.log_H * ctx.log_H);
    for (double x : x_samples) {
        if (x < 0.0 || x > 1.0)
            throw std::invalid_argument("check_lemma_l7: x must lie in [0, 1]");
        const std::uint64_t Kx = ctx.threshold(x);
        require_within_cap(ctx, Kx);
        KahanSum conv;
        for (std::uint64_t m = 2; m <= Kx; ++m) {
            if (table.mangoldt[m] == 0.0) continue;
            const double um = table.mangoldt[m] * (1.0 + ctx.chi_at(m));
            if (um == 0.0) continue;
            conv.add(um / static_cast<double>(m) * F_of(x - std::log(static_cast<double>(m)) / ctx.log_H));
        }
        const double Fx = F_of(x);
        const double rhs = conv.value() / ctx.log_H +
                           Fx * (1.0 - explicit_psi::kEulerGamma) / ctx.log_H;
        const double margin = budget - std::abs(x * Fx - rhs);
        worst = std::min(worst, margin);
    }
    return worst;
}

}  // namespace l1cert::lfunc
