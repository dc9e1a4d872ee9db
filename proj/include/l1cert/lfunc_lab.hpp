#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "l1cert/numtheory.hpp"

namespace l1cert::lfunc {

// Smoothed partial-sum laboratory for one character:
//   f(x) = H^{-x} sum_{n<=H^x} chi(n)
//   F(x) = int_0^x f = sum_{n<=H^x} chi(n)/(n log H) - f(x)/log H
//   ell(y) = H^{-y} sum_{n<=H^y} chi(n) log n
//   h(chi,y) = sum_{n<=H^y} chi(n) Lambda(n)/n
// All sums truncate at floor(H^x) with a tiny relative snap so that
// thresholds landing on integers stay consistent across the identities.
struct SmoothingContext {
    numtheory::QuadChar chi;
    double H = 0.0;
    double log_H = 0.0;
    std::uint64_t cap = 0;
    std::vector<signed char> period;   // chi(0..q-1)

    double x_m(std::uint64_t m) const;             // 1 - log m / log H
    std::uint64_t threshold(double x) const;       // floor(H^x), snapped
    int chi_at(std::uint64_t n) const { return period[n % chi.q]; }
};

SmoothingContext make_context(const numtheory::QuadChar& chi, double H,
                              std::uint64_t cap = 10'000'000);

double f_value(const SmoothingContext& ctx, double x);
double F_value(const SmoothingContext& ctx, double x);
double ell_value(const SmoothingContext& ctx, double y);
double h_value(const SmoothingContext& ctx, const numtheory::SieveTable& table, double y);
// h(1, y) = psitilde(H^y); cross-module equality with the sieve prefix.
double h1_value(const numtheory::SieveTable& table, double H, double y);

// |ell(x)/log H - (x f(x) - int_0^x f(u) H^u du / H^x)| with the integral
// taken exactly over the breakpoints of the step function f.
double check_identity_opt1(const SmoothingContext& ctx, double x);

enum class LMethod { truncated_series, gauss_sum_closed_form };

struct LValueResult {
    double value = 0.0;
    double tail_bound = 0.0;
    LMethod method = LMethod::truncated_series;
};

// sum_{n<=T} chi(n)/n with tail bound V(q)/T; requires T >= q.
LValueResult l1_truncated(const numtheory::QuadChar& chi, std::uint64_t T);

// Finite closed forms:
//   odd chi:  L(1,chi) = -(pi/q^{3/2}) sum_{a=1}^{q-1} a chi(a)
//   even chi: L(1,chi) = -(1/sqrt q) sum_{a=1}^{q-1} chi(a) log(2 sin(pi a/q))
// Exact up to floating point; validate against l1_truncated before use.
LValueResult l1_closed_form(const numtheory::QuadChar& chi, std::uint64_t cap = 1'000'000);

// V/H - |L(1,chi) - F(1) log H| with L from the closed form; >= 0 iff the
// smoothing relation holds with the claimed constant.  Requires q >= 100.
double check_lemma_l1chi(const numtheory::QuadChar& chi, double H,
                         std::uint64_t cap = 10'000'000);

// Worst margin of
//   1.411/log^2 H - |x F(x) - sum_{m<=H^x} Lambda(m)(1+chi(m))/(m log H)
//                      F(x - log m/log H) - F(x)(1-gamma)/log H|
// over the sample points.
double check_lemma_l7(const numtheory::QuadChar& chi, const numtheory::SieveTable& table,
                      double H, std::span<const double> x_samples,
                      std::uint64_t cap = 10'000'000);

}  // namespace l1cert::lfunc
