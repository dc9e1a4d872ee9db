#include "l1cert/explicit_psi.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "l1cert/accumulate.hpp"

namespace l1cert::explicit_psi {

namespace {
constexpr double kRamareR = 5.69693;
constexpr double kRamareT0 = 2.44e12;
constexpr double kLog2Pi = 1.8378770664093454836;  // log(2 pi)
const double kSplitLogX = 2.0 * kRamareR * std::pow(std::log(kRamareT0), 2.0);
}  // namespace

std::array<PsiErrorBound, 4> psi_error_bounds() {
    return {{
        {0.0, HUGE_VAL, PsiBoundForm::linear_coefficient, 1.04},
        {1e5, HUGE_VAL, PsiBoundForm::inverse_log_squared, 0.64673},
        {11.0, 1e19, PsiBoundForm::sqrt_coefficient, 0.94},
        {std::exp(40.0), HUGE_VAL, PsiBoundForm::tiny_linear, 1.994e-8},
    }};
}

double psi_upper_classical(double x) {
    if (!(x >= 0.0)) throw std::invalid_argument("psi_upper_classical: x must be >= 0");
    return round_up(1.04 * x);
}

double psi_error_bound(double x) {
    if (!(x > 11.0)) throw std::domain_error("psi_error_bound: no two-sided bound for x <= 11");
    double best = std::numeric_limits<double>::infinity();
    if (x >= 1e5) best = std::min(best, 0.64673 * x / (std::log(x) * std::log(x)));
    if (x <= 1e19) best = std::min(best, 0.94 * std::sqrt(x));
    if (x >= std::exp(40.0)) best = std::min(best, 1.994e-8 * x);
    return round_up(best);
}

double ramare_E_zero_free_form(double log_x) {
    const double s = std::sqrt(log_x / kRamareR);
    return (1.0 + 2.0 * s) / (2.0 * M_PI) * std::exp(-2.0 * s);
}

double ramare_E_split_log_x() { return kSplitLogX; }

double ramare_E(double x) {
    if (!(x >= 71.0)) throw std::domain_error("ramare_E: requires x >= 71");
    const double lx = std::log(x);
    if (lx < kSplitLogX) return round_up(1.75e-12);
    return round_up(ramare_E_zero_free_form(lx));
}

double psitilde_expansion_bound(double x) {
    if (!(x >= 71.0)) throw std::domain_error("psitilde_expansion_bound: requires x >= 71");
    return round_up(0.047 / std::sqrt(x) + (kLog2Pi + 1e-4) / x + ramare_E(x));
}

double psitilde_error(double x) {
    if (!(x > 1.0)) throw std::domain_error("psitilde_error: requires x > 1");
    const double lx = std::log(x);
    double best = 1.3 / (lx * lx);
    if (x <= 1e19) best = std::min(best, 1.0 / std::sqrt(x));
    return round_up(best);
}

double delta_integral_interval(double tau, std::uint64_t n) {
    const double l1 = std::log(static_cast<double>(n));
    const double l2 = std::log(static_cast<double>(n + 1));
    if (tau <= l1) return (l2 * l2 - l1 * l1) / 2.0 - tau * (l2 - l1);
    if (tau >= l2) return tau * (l2 - l1) - (l2 * l2 - l1 * l1) / 2.0;
    const double a = tau - l1;
    const double b = l2 - tau;
    return (a * a + b * b) / 2.0;
}

DeltaIntegralResult delta_integral(const numtheory::SieveTable& table, std::uint64_t u_max,
                                   unsigned threads) {
    if (u_max > table.limit) throw std::out_of_range("delta_integral: u_max exceeds sieve limit");
    if (u_max < 2) throw std::invalid_argument("delta_integral: u_max must be >= 2");

    const std::uint64_t n_intervals = u_max - 1;
    constexpr std::size_t kChunk = 1u << 16;
    const std::size_t n_chunks = (n_intervals + kChunk - 1) / kChunk;
    std::vector<KahanSum> parts(n_chunks);
    for_each_chunk(n_intervals, kChunk, threads, [&](std::size_t c, std::size_t b, std::size_t e) {
        KahanSum acc;
        for (std::size_t i = b; i < e; ++i) {
            const std::uint64_t n = i + 1;
            const double tau = table.psitilde_prefix[n] + kEulerGamma;
            acc.add(delta_integral_interval(tau, n));
        }
        parts[c] = acc;
    });
    KahanSum total;
    for (const auto& p : parts) total.add(p);

    DeltaIntegralResult r;
    r.u_max = static_cast<double>(u_max);
    r.partial_value = round_up(total.value());
    r.total = r.partial_value;
    return r;
}

double delta_integral_tail_log(double log_x1) {
    const double floor_log = 19.0 * std::log(10.0);
    if (!(log_x1 >= floor_log))
        throw std::domain_error("delta_integral_tail: requires x1 >= 1e19");
    const double v = 0.002 + 2e-8 * (log_x1 - floor_log) + 0.2 / std::sqrt(1e19) -
                     0.2 * std::exp(-log_x1 / 2.0) + 1.3 / log_x1;
    return round_up(v);
}

double delta_integral_tail(double x1) { return delta_integral_tail_log(std::log(x1)); }

DeltaIntegralResult delta_integral_with_tail(const numtheory::SieveTable& table,
                                             std::uint64_t u_max, double log_x1,
                                             unsigned threads) {
    // the tail's 0.002 term starts at 1e6, so a smaller u_max would leave
    // [u_max, 1e6] uncovered
    if (u_max < 1'000'000)
        throw std::invalid_argument("delta_integral_with_tail: u_max must be >= 1e6");
    DeltaIntegralResult r = delta_integral(table, u_max, threads);
    r.x1 = log_x1;
    r.tail_bound = delta_integral_tail_log(log_x1);
    r.total = round_up(r.partial_value + r.tail_bound);
    return r;
}

}  // namespace l1cert::explicit_psi
