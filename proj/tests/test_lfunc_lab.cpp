#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "l1cert/charsum.hpp"
#include "l1cert/explicit_psi.hpp"
#include "l1cert/lfunc_lab.hpp"
#include "l1cert/numtheory.hpp"

using namespace l1cert::lfunc;
using l1cert::numtheory::QuadChar;
using l1cert::numtheory::SieveTable;
using l1cert::numtheory::build_sieve;
using l1cert::numtheory::fundamental_discriminants;

namespace {
const SieveTable& table() {
    static const SieveTable t = build_sieve(200'000);
    return t;
}
}  // namespace

TEST_CASE("smoothing grid") {
    const auto ctx = make_context(QuadChar(-4), 100.0);
    CHECK(ctx.x_m(1) == doctest::Approx(1.0).epsilon(1e-15));
    for (std::uint64_t m = 1; m <= 100; ++m) {
        CHECK(ctx.x_m(m) >= -1e-12);
        CHECK(ctx.x_m(m) <= 1.0);
    }
    CHECK_THROWS_AS(make_context(QuadChar(-4), 1.0), std::invalid_argument);
}

TEST_CASE("f spot values and |f| <= 1") {
    const auto m4 = make_context(QuadChar(-4), 10.0);
    CHECK(f_value(m4, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f_value(m4, 1.0) == doctest::Approx(0.1).epsilon(1e-12));  // (1-1+1-1+1)/10

    std::mt19937_64 rng(9);
    const auto ds = fundamental_discriminants(200);
    std::uniform_int_distribution<std::size_t> di(0, ds.size() - 1);
    std::uniform_real_distribution<double> uh(2.0, 5000.0);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 1000; ++i) {
        const auto ctx = make_context(QuadChar(ds[di(rng)]), uh(rng));
        CHECK(std::abs(f_value(ctx, ux(rng))) <= 1.0 + 1e-12);
    }

    const auto capped = make_context(QuadChar(-4), 100.0, 50);
    CHECK_THROWS_AS(f_value(capped, 1.0), std::domain_error);
}

TEST_CASE("F closed form equals breakpoint-exact quadrature") {
    // piecewise-exact: on [log n/log H, log(n+1)/log H), f(u) = S(n) H^{-u}
    const auto quad_F = [](const SmoothingContext& ctx, double x) {
        const std::uint64_t K = ctx.threshold(x);
        double total = 0.0;
        long long S = 0;
        for (std::uint64_t n = 1; n < K; ++n) {
            S += ctx.chi_at(n);
            total += static_cast<double>(S) *
                     (1.0 / static_cast<double>(n) - 1.0 / static_cast<double>(n + 1));
        }
        S += ctx.chi_at(K);
        total += static_cast<double>(S) *
                 (1.0 / static_cast<double>(K) - std::exp(-x * ctx.log_H));
        return total / ctx.log_H;
    };
    std::mt19937_64 rng(15);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (long long d : {-3LL, -4LL, 5LL, -7LL, 12LL, -163LL}) {
        const auto ctx = make_context(QuadChar(d), 100.0);
        CHECK(F_value(ctx, 0.0) == 0.0);
        CHECK(F_value(ctx, 1.0) == doctest::Approx(quad_F(ctx, 1.0)).epsilon(0).margin(1e-12));
        for (int i = 0; i < 50; ++i) {
            const double x = ux(rng);
            CHECK(F_value(ctx, x) == doctest::Approx(quad_F(ctx, x)).epsilon(0).margin(1e-12));
        }
    }
}

TEST_CASE("F is continuous across breakpoints") {
    const auto ctx = make_context(QuadChar(-7), 500.0);
    for (std::uint64_t m = 2; m <= 400; m += 7) {
        const double xm = std::log(static_cast<double>(m)) / ctx.log_H;
        const double left = F_value(ctx, xm - 1e-9);
        const double right = F_value(ctx, xm + 1e-9);
        // jump bounded by the size of the term entering at the breakpoint
        CHECK(std::abs(right - left) <=
              1.0 / (static_cast<double>(m) * ctx.log_H) + 1e-8);
    }
}

TEST_CASE("ell, h, h1 empty sums and cross-module equality") {
    const auto ctx = make_context(QuadChar(5), 1000.0);
    const double y_small = 0.05;   // H^y < 2
    CHECK(ell_value(ctx, y_small) == 0.0);
    CHECK(h_value(ctx, table(), y_small) == 0.0);
    CHECK(h1_value(table(), 1000.0, y_small) == 0.0);

    for (double y : {0.3, 0.5, 0.77, 1.0}) {
        const double hy = std::pow(1000.0, y);
        CHECK(h1_value(table(), 1000.0, y) ==
              doctest::Approx(l1cert::numtheory::psi_tilde(table(), std::floor(hy * (1 + 1e-12))))
                  .epsilon(1e-14));
    }
}

TEST_CASE("ell equals its convolution form") {
    // ell(x) = sum_{m<=H^x} chi(m) Lambda(m)/m * f(x - log m/log H)
    std::mt19937_64 rng(21);
    const auto ds = fundamental_discriminants(150);
    std::uniform_int_distribution<std::size_t> di(0, ds.size() - 1);
    std::uniform_real_distribution<double> uh(10.0, 20000.0);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto ctx = make_context(QuadChar(ds[di(rng)]), uh(rng));
        const double x = ux(rng);
        const std::uint64_t K = ctx.threshold(x);
        double conv = 0.0;
        for (std::uint64_t m = 2; m <= K; ++m) {
            if (table().mangoldt[m] == 0.0) continue;
            const int cm = ctx.chi_at(m);
            if (cm == 0) continue;
            conv += cm * table().mangoldt[m] / static_cast<double>(m) *
                    f_value(ctx, x - std::log(static_cast<double>(m)) / ctx.log_H);
        }
        CHECK(ell_value(ctx, x) == doctest::Approx(conv).epsilon(0).margin(1e-10));
    }
}

TEST_CASE("partial-summation identity residual") {
    const auto m7 = make_context(QuadChar(-7), 500.0);
    CHECK(check_identity_opt1(m7, 0.0) == doctest::Approx(0.0).epsilon(0).margin(1e-14));
    CHECK(check_identity_opt1(m7, 1.0) <= 1e-10);

    std::mt19937_64 rng(33);
    const auto ds = fundamental_discriminants(300);
    std::uniform_int_distribution<std::size_t> di(0, ds.size() - 1);
    std::uniform_real_distribution<double> uh(2.0, 100'000.0);
    std::uniform_real_distribution<double> ux(0.0, 1.0);
    for (int i = 0; i < 200; ++i) {
        const auto ctx = make_context(QuadChar(ds[di(rng)]), uh(rng));
        CHECK(check_identity_opt1(ctx, ux(rng)) <= 1e-10);
    }

    // residual stays at rounding scale as H grows
    for (double H : {100.0, 1000.0, 10'000.0, 100'000.0}) {
        const auto ctx = make_context(QuadChar(-7), H);
        CHECK(check_identity_opt1(ctx, 1.0) <= 1e-10);
    }
}

TEST_CASE("truncated L(1) values against classical constants") {
    const QuadChar m4(-4);
    const auto r = l1_truncated(m4, 100'000);
    CHECK(r.method == LMethod::truncated_series);
    CHECK(std::abs(r.value - M_PI / 4.0) <= r.tail_bound);
    CHECK_THROWS_AS(l1_truncated(m4, 3), std::domain_error);
}

TEST_CASE("closed-form L(1) spot values") {
    CHECK(l1_closed_form(QuadChar(-3)).value ==
          doctest::Approx(M_PI / (3.0 * std::sqrt(3.0))).epsilon(0).margin(1e-9));
    CHECK(l1_closed_form(QuadChar(-4)).value == doctest::Approx(M_PI / 4.0).epsilon(0).margin(1e-9));
    CHECK(l1_closed_form(QuadChar(5)).value ==
          doctest::Approx(2.0 / std::sqrt(5.0) * std::log((1.0 + std::sqrt(5.0)) / 2.0))
              .epsilon(0)
              .margin(1e-9));
    CHECK(l1_closed_form(QuadChar(-4)).method == LMethod::gauss_sum_closed_form);
    CHECK_THROWS_AS(l1_closed_form(QuadChar(-3), 2), std::domain_error);
}

TEST_CASE("closed form validated against the truncated series before oracle use") {
    // anti-circularity gate: first 100 discriminants, both routes agree
    // within the stated bounds
    const auto ds = fundamental_discriminants(400);
    std::size_t used = 0;
    for (long long d : ds) {
        if (used >= 100) break;
        const QuadChar chi(d);
        const auto closed = l1_closed_form(chi);
        const auto trunc = l1_truncated(chi, 200 * chi.q);
        CHECK(std::abs(closed.value - trunc.value) <= closed.tail_bound + trunc.tail_bound);
        ++used;
    }
    CHECK(used == 100);
}

TEST_CASE("smoothing lemma margins") {
    const QuadChar chi(-163);
    for (double mult : {10.0, 100.0}) {
        const double H = mult * static_cast<double>(chi.q);
        CHECK(check_lemma_l1chi(chi, H) >= 0.0);
    }
    // margin grows roughly like V/H as H grows
    const double m1 = check_lemma_l1chi(chi, 10.0 * chi.q);
    const double m2 = check_lemma_l1chi(chi, 100.0 * chi.q);
    CHECK(m1 > m2);
    CHECK_THROWS_AS(check_lemma_l1chi(QuadChar(-4), 1000.0), std::domain_error);

    for (long long d : fundamental_discriminants(300)) {
        const QuadChar c(d);
        if (c.q < 100) continue;
        CHECK(check_lemma_l1chi(c, 10.0 * c.q) >= 0.0);
    }
}

TEST_CASE("convolution lemma margins") {
    const QuadChar m4(-4);
    const double H = 1000.0;
    const double budget = 1.411 / std::pow(std::log(H), 2.0);
    // x = 0: both sides vanish, margin is the full budget
    const double x0[] = {0.0};
    CHECK(check_lemma_l7(m4, table(), H, x0) == doctest::Approx(budget).epsilon(1e-9));
    const double xs[] = {0.25, 0.5, 0.75, 1.0};
    CHECK(check_lemma_l7(m4, table(), H, xs) >= 0.0);

    std::size_t used = 0;
    for (long long d : fundamental_discriminants(200)) {
        if (used >= 50) break;
        CHECK(check_lemma_l7(QuadChar(d), table(), 1e4, xs) >= 0.0);
        ++used;
    }
}
