#include "l1cert/stephens.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "l1cert/accumulate.hpp"
#include "l1cert/explicit_psi.hpp"

namespace l1cert::stephens {

namespace {
const double kLog10 = std::log(10.0);
const double kInvSqrtE = std::exp(-0.5);
constexpr double kGammaMinusOne = l1cert::explicit_psi::kEulerGamma - 1.0;

void normalize(double& mant, int& e10) {
    if (!(mant > 0.0)) throw std::invalid_argument("Modulus: mantissa must be positive");
    while (mant >= 10.0) { mant /= 10.0; ++e10; }
    while (mant < 1.0) { mant *= 10.0; --e10; }
}
}  // namespace

Modulus Modulus::parse(std::string_view text) {
    double mant = 0.0;
    int e10 = 0;
    const std::string s(text);
    const auto epos = s.find_first_of("eE");
    try {
        if (epos == std::string::npos) {
            std::size_t used = 0;
            mant = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
        } else {
            std::size_t used = 0;
            mant = std::stod(s.substr(0, epos), &used);
            if (used != epos) throw std::invalid_argument(s);
            e10 = std::stoi(s.substr(epos + 1), &used);
            if (used != s.size() - epos - 1) throw std::invalid_argument(s);
        }
    } catch (const std::exception&) {
        throw std::invalid_argument("Modulus: cannot parse \"" + s + "\"");
    }
    normalize(mant, e10);
    Modulus m;
    m.mantissa = mant;
    m.exp10 = e10;
    return m;
}

Modulus Modulus::from_double(double q) {
    if (!(q > 0.0) || !std::isfinite(q))
        throw std::invalid_argument("Modulus: q must be positive and finite");
    double mant = q;
    int e10 = 0;
    normalize(mant, e10);
    return Modulus{mant, e10};
}

Modulus Modulus::from_log10(double log10_q) {
    const double e = std::floor(log10_q);
    return Modulus{std::pow(10.0, log10_q - e), static_cast<int>(e)};
}

double Modulus::log_nat() const { return std::log(mantissa) + exp10 * kLog10; }
double Modulus::log10_val() const { return std::log10(mantissa) + exp10; }

double Modulus::sqrt_val() const {
    // exp10 odd: sqrt(m 10^e) = sqrt(10 m) 10^{(e-1)/2}, (e-1) even
    const bool odd_exp = (exp10 % 2) != 0;
    const double half = odd_exp ? std::sqrt(10.0 * mantissa) : std::sqrt(mantissa);
    const int e = odd_exp ? (exp10 - 1) / 2 : exp10 / 2;
    return half * std::pow(10.0, e);
}

double Modulus::value() const { return mantissa * std::pow(10.0, exp10); }

std::string Modulus::str() const {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6ge%d", mantissa, exp10);
    return buf;
}

double r_chi_logs(double log_H, double log_V, double sqrt_q, double log_q, Parity parity) {
    const double log_v2_over_q = 2.0 * log_V - log_q;
    const double sqrtq_over_H = sqrt_q * std::exp(-log_H);
    const double v_over_H = std::exp(log_V - log_H);
    double v;
    if (parity == Parity::even) {
        const double log_arg = std::log(4.0) + 2.0 + 0.5 * log_q + log_H - 2.0 * log_V;
        if (log_v2_over_q <= 0.0 || log_arg <= 0.0)
            throw std::domain_error("r_chi: formula outside intended regime (log argument <= 1)");
        v = (3.66 + log_v2_over_q) * sqrtq_over_H + log_arg * v_over_H / 2.0;
    } else {
        const double log_arg = std::log(2.0) + 2.0 + 0.5 * log_q + log_H - 2.0 * log_V;
        if (log_v2_over_q <= 0.0 || log_arg <= 0.0)
            throw std::domain_error("r_chi: formula outside intended regime (log argument <= 1)");
        v = (7.2 + log_v2_over_q) * sqrtq_over_H + log_arg * v_over_H;
    }
    return round_up(v);
}

double r_chi(double H, double V, double q, Parity parity) {
    if (!(H > 0.0) || !(V > 0.0) || !(q > 0.0))
        throw std::invalid_argument("r_chi: H, V, q must be positive");
    return r_chi_logs(std::log(H), std::log(V), std::sqrt(q), std::log(q), parity);
}

StephensParams assemble_params(const Modulus& q0, double B, Parity parity) {
    const double log_q0 = q0.log_nat();
    if (log_q0 < std::log(100.0) - 1e-12)
        throw std::invalid_argument("assemble_params: violated constraint q0 >= 100");
    const double b_floor = std::sqrt(2.0) / 2.04;
    if (!(B >= b_floor))
        throw std::invalid_argument("assemble_params: violated constraint B >= sqrt(2)/2.04");

    StephensParams p;
    p.q0 = q0;
    p.B = B;
    p.parity = parity;
    p.V0 = charsum::pv_bound_fs_logs(q0.sqrt_val(), log_q0);
    p.H0 = B * p.V0;
    p.log_H0 = std::log(B) + std::log(p.V0);
    if (!(p.H0 >= 1e6))
        throw std::invalid_argument("assemble_params: violated constraint B*V0 >= 1e6");

    // a < 0; rounding toward 0 weakens the favorable 2 a theta log theta term
    p.a = kGammaMinusOne / p.log_H0;
    p.a = p.a + std::abs(p.a) * kRoundingSlack;
    p.eps2 = round_up(1.411 / (p.log_H0 * p.log_H0));
    p.A2 = (B >= 79.5) ? 0.94 : (B >= 39.6) ? 0.956 : std::sqrt(2.0);
    p.D0 = std::pow(p.A2 * B / 2.04, 2.0 / 3.0);
    p.D = p.D0;
    p.delta_chi = (3.0 - (parity == Parity::odd ? -1.0 : 1.0)) / 4.0;
    p.r_chi_value = r_chi_logs(p.log_H0, std::log(p.V0), q0.sqrt_val(), log_q0, parity);

    const double bracket = -1.15 + 3.81 * std::pow(p.A2, 2.0 / 3.0) * std::pow(B, -1.0 / 3.0) -
                           1.0 / B + p.r_chi_value;
    p.eps1 = round_up(bracket / p.log_H0);
    return p;
}

double theta_inequality_lhs(double theta, double a, double eps1, double eps2) {
    if (!(theta > 0.0) || !(theta <= 1.0))
        throw std::domain_error("theta_inequality_lhs: theta must lie in (0, 1]");
    const double lt = std::log(theta);
    return 2.0 * a * theta * lt - 2.0 * theta * (kInvSqrtE - theta) * (2.0 + lt) + eps1 + eps2;
}

double phi_lower_envelope(double y, double theta) {
    return 2.0 * (y - y * std::log(y) - theta);
}

ThetaCertificate solve_theta_star(const StephensParams& params) {
    ThetaCertificate cert;
    cert.params = params;
    cert.trace.tol = kThetaTol;
    cert.trace.scan_points = kThetaScanPoints;

    const auto g = [&](double t) {
        return theta_inequality_lhs(t, params.a, params.eps1, params.eps2);
    };
    const double lo0 = 0.5, hi0 = kInvSqrtE;

    double prev = lo0;
    double g_prev = g(prev);
    if (g_prev >= 0.0) {
        cert.trace.endpoint_left = true;
        cert.trace.bracket_lo = cert.trace.bracket_hi = lo0;
        cert.trace.g_lo = cert.trace.g_hi = g_prev;
        cert.theta_star = lo0;
        return cert;
    }
    double lo = 0.0, hi = 0.0, g_lo = 0.0, g_hi = 0.0;
    bool found = false;
    for (int i = 1; i <= kThetaScanPoints; ++i) {
        const double t = lo0 + (hi0 - lo0) * i / kThetaScanPoints;
        const double gt = g(t);
        if (gt >= 0.0) {
            lo = prev; hi = t; g_lo = g_prev; g_hi = gt;
            found = true;
            break;
        }
        prev = t;
        g_prev = gt;
    }
    if (!found) {
        cert.trace.endpoint_right = true;
        cert.trace.bracket_lo = cert.trace.bracket_hi = hi0;
        cert.trace.g_lo = cert.trace.g_hi = g_prev;
        cert.theta_star = hi0;
        return cert;
    }
    while (hi - lo > kThetaTol) {
        const double mid = 0.5 * (lo + hi);
        const double gm = g(mid);
        if (gm >= 0.0) { hi = mid; g_hi = gm; }
        else { lo = mid; g_lo = gm; }
    }
    cert.trace.bracket_lo = lo;
    cert.trace.bracket_hi = hi;
    cert.trace.g_lo = g_lo;
    cert.trace.g_hi = g_hi;
    cert.theta_star = hi;   // g(theta_star) >= 0 end of the bracket
    return cert;
}

ThetaCertificate certify(const Modulus& q0, double B, Parity parity, double target_c) {
    const StephensParams p = assemble_params(q0, B, parity);
    ThetaCertificate cert = solve_theta_star(p);
    cert.target_c = target_c;
    // one tolerance step down: a smaller theta* weakens but never invalidates
    const double theta_eff = std::max(0.5, cert.theta_star - kThetaTol);
    const double log_q0 = q0.log_nat();
    const double coeff =
        2.0 * (1.0 - theta_eff) * (std::log(B) + std::log(p.V0)) / log_q0 + 1.0 / (B * log_q0);
    cert.coefficient = round_up(coeff);
    cert.margin = target_c - cert.coefficient;
    cert.pass = cert.coefficient <= target_c;
    return cert;
}

MinQ0Result min_q0(double B, Parity parity, double target_c, double grid_step, double log10_cap) {
    const auto passes = [&](double lx) {
        try {
            return certify(Modulus::from_log10(lx), B, parity, target_c).pass;
        } catch (const std::invalid_argument&) {
            return false;  // infeasible assembly counts as not passing
        }
    };
    const double lo = 2.0;  // q0 >= 100
    double found = -1.0;
    for (double lx = lo; lx <= log10_cap + 1e-9; lx += grid_step) {
        if (passes(lx)) { found = lx; break; }
    }
    if (found < 0.0) throw std::runtime_error("min_q0: unattainable at this B");

    MinQ0Result r;
    r.log10_q0 = found;
    r.q0 = Modulus::from_log10(found);
    for (int j = 1; j <= 10; ++j) {
        const double lx = found + j * std::max(grid_step, (log10_cap - found) / 12.0);
        if (lx > log10_cap) break;
        r.spot_log10.push_back(lx);
        if (!passes(lx)) r.monotone_ok = false;
    }
    return r;
}

SweepResult sweep_B(Parity parity, double target_c, const std::vector<double>& B_grid,
                    unsigned threads) {
    SweepResult res;
    res.rows.resize(B_grid.size());
    for_each_chunk(B_grid.size(), 1, threads, [&](std::size_t, std::size_t b, std::size_t e) {
        for (std::size_t i = b; i < e; ++i) {
            SweepRow& row = res.rows[i];
            row.B = B_grid[i];
            try {
                const auto m = min_q0(B_grid[i], parity, target_c);
                row.attainable = true;
                row.log10_min_q0 = m.log10_q0;
                row.min_q0_str = m.q0.str();
            } catch (const std::exception&) {
                row.attainable = false;
            }
        }
    });
    for (std::size_t i = 0; i < res.rows.size(); ++i) {
        if (!res.rows[i].attainable) continue;
        if (!res.argmin || res.rows[i].log10_min_q0 < res.rows[*res.argmin].log10_min_q0)
            res.argmin = i;
    }
    return res;
}

}  // namespace l1cert::stephens
