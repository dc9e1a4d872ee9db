#pragma once

#include <array>
#include <cstdint>

#include "l1cert/numtheory.hpp"

namespace l1cert::explicit_psi {

// Euler-Mascheroni constant, 30 significant digits; it sits inside certified
// inequalities, so it is pinned rather than computed.
inline constexpr double kEulerGamma = 0.577215664901532860606512090082;

// Piecewise |psi(x) - x| bounds in force.
enum class PsiBoundForm { linear_coefficient, inverse_log_squared, sqrt_coefficient, tiny_linear };

struct PsiErrorBound {
    double x_low;
    double x_high;           // +inf encoded as HUGE_VAL
    PsiBoundForm form;
    double coefficient;
};

// The four instances: 1.04x (all x >= 0, one-sided), 0.64673 x/log^2 x
// (x >= 1e5), 0.94 sqrt(x) (11 < x <= 1e19), 1.994e-8 x (x >= e^40).
std::array<PsiErrorBound, 4> psi_error_bounds();

// One-sided classical bound psi(x) <= 1.04 x.
double psi_upper_classical(double x);

// min over the two-sided bounds whose range contains x; requires x > 11.
double psi_error_bound(double x);

// Zero-sum remainder in the corrected psitilde expansion, with
// R = 5.69693 and T0 = 2.44e12.  The flat 1.75e-12 branch applies while
// log x < 2 R log^2 T0; beyond that the zero-free-region form
// (1 + 2 sqrt(log x / R)) / (2 pi) * exp(-2 sqrt(log x / R)) takes over.
// (The branch condition must be read on log x: the flat branch at x = 1e5
// is what makes the 0.67/log^2 x consequence and the tail integrand
// 2e-8/u + 0.05/u^{3/2} on [1e19, x1] come out, and both fail if the
// split is taken on x itself.)
double ramare_E(double x);

// The zero-free-region branch as a pure formula of log x (exposed so the
// branch value can be inspected on either side of the split).
double ramare_E_zero_free_form(double log_x);
double ramare_E_split_log_x();   // = 2 R log^2 T0

// Certified bound on |psitilde(x) - log x + gamma - (psi(x)-x)/x| for x >= 71:
// 0.047/sqrt(x) + (log 2pi + 1e-4)/x + E(x).
double psitilde_expansion_bound(double x);

// Certified bound on |psitilde(x) - log x + gamma| for x > 1:
// min(1.3/log^2 x, 1/sqrt(x) when x <= 1e19).
double psitilde_error(double x);

// Weighted remainder integral int |Delta(u)| du/u with
// Delta(u) = psitilde(u) - log u + gamma.
struct DeltaIntegralResult {
    double u_max = 0.0;
    double partial_value = 0.0;   // certified bound of int_1^{u_max}
    double x1 = 0.0;              // tail split point, stored as log(x1)
    double tail_bound = 0.0;      // certified bound of int_{u_max}^infty
    double total = 0.0;           // partial_value + tail_bound
};

// Exact value of int_n^{n+1} |tau - log u| du/u for tau = psitilde(n)+gamma;
// psitilde is constant on [n, n+1), so substituting v = log u gives the
// three closed-form cases (the middle one splits at v = tau).
double delta_integral_interval(double tau, std::uint64_t n);

// Sum of the per-interval closed forms over n = 1 .. u_max-1, compensated,
// chunked deterministically, inflated by the rounding policy.  Only the
// partial fields are populated.
DeltaIntegralResult delta_integral(const numtheory::SieveTable& table, std::uint64_t u_max,
                                   unsigned threads = 1);

// Tail bound for int_{1e6}^infty, parameterized by the switch point x1 where
// the integrand bound changes from (2e-8 + 0.05/sqrt(u))/u to 1.3/(u log^2 u):
// 0.002 + 2e-8 (log x1 - 19 log 10) + 0.2/sqrt(1e19) - 0.2/sqrt(x1) + 1.3/log x1.
// The leading 0.002 covers [1e6, 1e19] via |Delta| <= 1/sqrt(u).
// x1 enters as log x1 (valid split points reach e^8000); requires
// log x1 >= 19 log 10.
double delta_integral_tail_log(double log_x1);
double delta_integral_tail(double x1);   // convenience for x1 <= ~1e308

// Partial + tail combined for the report record.
DeltaIntegralResult delta_integral_with_tail(const numtheory::SieveTable& table,
                                             std::uint64_t u_max, double log_x1,
                                             unsigned threads = 1);

}  // namespace l1cert::explicit_psi
