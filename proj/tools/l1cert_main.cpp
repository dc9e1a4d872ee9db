// l1cert -- certification and audit front end.
//
// Subcommands: certify, sweep, min-q0, delta-integral, psi-audit,
// charsum-audit, lemma-audit, report.  All commands validate their
// parameters before any long computation starts, write reports atomically,
// and exit 0 when every check passes, 1 on any certification/audit failure,
// 2 on usage errors.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "l1cert/charsum.hpp"
#include "l1cert/explicit_psi.hpp"
#include "l1cert/lfunc_lab.hpp"
#include "l1cert/numtheory.hpp"
#include "l1cert/report.hpp"
#include "l1cert/stephens.hpp"

namespace nt = l1cert::numtheory;
namespace xp = l1cert::explicit_psi;
namespace cs = l1cert::charsum;
namespace se = l1cert::stephens;
namespace lf = l1cert::lfunc;
namespace rp = l1cert::report;
using nlohmann::json;

namespace {

cs::Parity parse_parity(const std::string& s) {
    if (s == "odd") return cs::Parity::odd;
    if (s == "even") return cs::Parity::even;
    throw CLI::ValidationError("--parity must be 'odd' or 'even'");
}

// Accepts "exp(500)" or an ordinary magnitude like "1e20"; returns log(x1).
double parse_x1_log(const std::string& s) {
    if (s.rfind("exp(", 0) == 0 && s.back() == ')') {
        return std::stod(s.substr(4, s.size() - 5));
    }
    return se::Modulus::parse(s).log_nat();
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::fwrite(text.data(), 1, text.size(), stdout);
    else
        rp::write_atomic(out_path, text);
}

json maybe_timestamp(json j, bool comparable) {
    if (!comparable) j["timestamp"] = static_cast<std::int64_t>(std::time(nullptr));
    return j;
}

// Sieve with optional on-disk cache (L1CERT_CACHE_DIR).
nt::SieveTable sieve_with_cache(std::uint64_t limit) {
    const char* dir = std::getenv("L1CERT_CACHE_DIR");
    std::string path;
    if (dir && *dir) {
        path = std::string(dir) + "/sieve_" + std::to_string(limit) + ".bin";
        if (auto t = nt::load_sieve(path); t && t->limit == limit) return std::move(*t);
    }
    auto t = nt::build_sieve(limit);
    if (!path.empty()) nt::save_sieve(t, path);
    return t;
}

int run_psi_audit(std::uint64_t limit, unsigned threads, const std::string& out, bool comparable) {
    const auto table = sieve_with_cache(limit);
    (void)threads;
    std::uint64_t bad_sqrt = 0, bad_classical = 0, bad_bklnw = 0, bad_tilde = 0, bad_545 = 0,
                  bad_576 = 0;
    for (std::uint64_t n = 0; n <= limit; ++n) {
        const double x = static_cast<double>(n);
        const double p = table.psi_prefix[n];
        if (p > xp::psi_upper_classical(x)) ++bad_classical;
        if (n >= 12 && std::abs(p - x) > xp::psi_error_bound(x)) ++bad_sqrt;
        if (n >= 100000 && std::abs(p - x) > 0.64673 * x / (std::log(x) * std::log(x)))
            ++bad_bklnw;
        if (n >= 2) {
            const double d = table.psitilde_prefix[n] - std::log(x) + xp::kEulerGamma;
            if (std::abs(d) > xp::psitilde_error(x)) ++bad_tilde;
        }
        if (n >= 1000 && table.psitilde_prefix[n] > std::log(x) - 0.545) ++bad_545;
        if (n >= 1000000 && table.psitilde_prefix[n] > std::log(x) - 0.576) ++bad_576;
    }
    json j;
    j["limit"] = limit;
    j["violations"] = {{"classical_1.04x", bad_classical},
                       {"two_sided_piecewise", bad_sqrt},
                       {"bklnw_0.64673", bad_bklnw},
                       {"psitilde_min_bound", bad_tilde},
                       {"psitilde_upper_0.545", bad_545},
                       {"psitilde_upper_0.576", bad_576}};
    const bool ok = !(bad_classical | bad_sqrt | bad_bklnw | bad_tilde | bad_545 | bad_576);
    j["pass"] = ok;
    emit(out, rp::to_text(maybe_timestamp(j, comparable)));
    return ok ? 0 : 1;
}

int run_charsum_audit(std::uint64_t dmax, unsigned threads, const std::string& out,
                      const std::string& format, bool comparable) {
    const auto rows = cs::charsum_audit(dmax, threads);
    bool ok = true;
    for (const auto& r : rows) ok = ok && r.margin >= 0.0;
    if (format == "csv") {
        emit(out, rp::charsum_audit_csv(rows));
    } else {
        json arr = json::array();
        for (const auto& r : rows) {
            arr.push_back({{"d", r.d},
                           {"q", r.q},
                           {"parity", rp::parity_name(r.parity)},
                           {"oracle_max", r.oracle_max},
                           {"V_fs", std::isnan(r.v_fs) ? json() : json(r.v_fs)},
                           {"V_lapkova", r.v_lapkova},
                           {"margin", r.margin}});
        }
        json j;
        j["d_max"] = dmax;
        j["rows"] = arr;
        j["pass"] = ok;
        emit(out, rp::to_text(maybe_timestamp(j, comparable)));
    }
    return ok ? 0 : 1;
}

int run_lemma_audit(std::uint64_t dmax, std::uint64_t sieve_limit, const std::string& out,
                    bool comparable) {
    (void)comparable;
    const auto table = sieve_with_cache(sieve_limit);
    std::string lines;
    bool ok = true;
    std::mt19937_64 rng(20250810);
    const auto ds = nt::fundamental_discriminants(dmax);
    for (long long d : ds) {
        const nt::QuadChar chi(d);
        if (chi.q < 100) continue;
        for (double mult : {10.0, 100.0}) {
            const double H = mult * static_cast<double>(chi.q);
            const double margin = lf::check_lemma_l1chi(chi, H);
            const bool pass = margin >= 0.0;
            ok = ok && pass;
            json rec = {{"lemma", "l1chi"}, {"d", d}, {"H", H}, {"margin", margin}, {"pass", pass}};
            lines += rec.dump() + "\n";
        }
        if (chi.q <= 200) {
            const double xs[] = {0.25, 0.5, 0.75, 1.0};
            const double H = 1e4;
            const double margin = lf::check_lemma_l7(chi, table, H, xs);
            const bool pass = margin >= 0.0;
            ok = ok && pass;
            json rec = {{"lemma", "l7"}, {"d", d}, {"H", H}, {"margin", margin}, {"pass", pass}};
            lines += rec.dump() + "\n";
        }
        // identity residual spot check on a random x
        std::uniform_real_distribution<double> ux(0.1, 1.0);
        const auto ctx = lf::make_context(chi, 1000.0);
        const double x = ux(rng);
        const double resid = lf::check_identity_opt1(ctx, x);
        const bool pass = resid <= 1e-10;
        ok = ok && pass;
        json rec = {{"lemma", "opt1"}, {"d", d}, {"H", 1000.0}, {"x", x},
                    {"margin", 1e-10 - resid}, {"pass", pass}};
        lines += rec.dump() + "\n";
    }
    emit(out, lines);
    return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"explicit L(1,chi) upper-bound certification laboratory"};
    app.set_config("--config", "", "read options from an INI/TOML file (flags override)");
    unsigned threads = 2;
    app.add_option("--threads", threads, "worker thread cap")->capture_default_str();
    std::string out_path;
    app.add_option("--out", out_path, "output path (default stdout); written atomically");
    bool comparable = false;
    app.add_flag("--comparable", comparable, "omit the timestamp field (byte-stable output)");

    // certify
    auto* c_cmd = app.add_subcommand("certify", "certify L(1,chi) <= c log q for q >= q0");
    std::string q0_str = "2e23", parity_str = "odd";
    double B = 90.0, target_c = 0.5;
    c_cmd->add_option("--q0", q0_str, "modulus threshold (scientific notation ok)")->required();
    c_cmd->add_option("--B", B, "smoothing multiplier H = B*V")->required();
    c_cmd->add_option("--parity", parity_str, "odd|even")->required();
    c_cmd->add_option("--c", target_c, "target coefficient of log q")->required();

    // sweep
    auto* s_cmd = app.add_subcommand("sweep", "minimal q0 over a grid of B");
    std::vector<double> b_grid;
    std::string s_parity = "odd", s_format = "json";
    double s_c = 0.5;
    s_cmd->add_option("--B-grid", b_grid, "B values")->required()->expected(-1);
    s_cmd->add_option("--parity", s_parity, "odd|even")->required();
    s_cmd->add_option("--c", s_c, "target coefficient")->required();
    s_cmd->add_option("--format", s_format, "json|csv")->capture_default_str();

    // min-q0
    auto* m_cmd = app.add_subcommand("min-q0", "smallest passing q0 on the log grid");
    std::string m_parity = "odd";
    double m_B = 90.0, m_c = 0.5;
    m_cmd->add_option("--B", m_B, "")->required();
    m_cmd->add_option("--parity", m_parity, "odd|even")->required();
    m_cmd->add_option("--c", m_c, "target coefficient")->required();

    // delta-integral
    auto* d_cmd = app.add_subcommand("delta-integral", "weighted remainder integral bound");
    std::string umax_str = "1e6", x1_str = "exp(500)";
    std::uint64_t d_limit = 0;
    d_cmd->add_option("--umax", umax_str, "direct-summation endpoint")->capture_default_str();
    d_cmd->add_option("--x1", x1_str, "tail split, e.g. exp(500)")->capture_default_str();
    d_cmd->add_option("--limit", d_limit, "sieve limit (default max(umax, 1e6))");

    // psi-audit
    auto* p_cmd = app.add_subcommand("psi-audit", "exhaustive psi/psitilde bound audit");
    std::string p_limit_str = "1e7";
    p_cmd->add_option("--limit", p_limit_str, "audit range")->capture_default_str();

    // charsum-audit
    auto* a_cmd = app.add_subcommand("charsum-audit", "interval-sum oracle vs explicit bounds");
    std::uint64_t a_dmax = 3000;
    std::string a_format = "csv";
    a_cmd->add_option("--dmax", a_dmax, "max |d|")->capture_default_str();
    a_cmd->add_option("--format", a_format, "csv|json")->capture_default_str();

    // lemma-audit
    auto* l_cmd = app.add_subcommand("lemma-audit", "smoothing-lemma margins, JSON lines");
    std::uint64_t l_dmax = 300, l_sieve = 1'000'000;
    l_cmd->add_option("--dmax", l_dmax, "max |d|")->capture_default_str();
    l_cmd->add_option("--sieve-limit", l_sieve, "")->capture_default_str();

    // report
    auto* r_cmd = app.add_subcommand("report", "the four headline certifications, one artifact");

    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*c_cmd) {
            const auto cert = se::certify(se::Modulus::parse(q0_str), B,
                                          parse_parity(parity_str), target_c);
            emit(out_path, rp::to_text(maybe_timestamp(rp::certificate_json(cert), comparable)));
            return cert.pass ? 0 : 1;
        }
        if (*s_cmd) {
            const auto res = se::sweep_B(parse_parity(s_parity), s_c, b_grid, threads);
            if (s_format == "csv")
                emit(out_path, rp::sweep_csv(res));
            else
                emit(out_path, rp::to_text(maybe_timestamp(
                                   rp::sweep_json(parse_parity(s_parity), s_c, res), comparable)));
            return 0;
        }
        if (*m_cmd) {
            const auto res = se::min_q0(m_B, parse_parity(m_parity), m_c);
            emit(out_path, rp::to_text(maybe_timestamp(
                               rp::min_q0_json(m_B, parse_parity(m_parity), m_c, res), comparable)));
            return res.monotone_ok ? 0 : 1;
        }
        if (*d_cmd) {
            const auto umax = static_cast<std::uint64_t>(se::Modulus::parse(umax_str).value());
            const double log_x1 = parse_x1_log(x1_str);
            const std::uint64_t limit = d_limit ? d_limit : std::max<std::uint64_t>(umax, 1'000'000);
            if (umax > limit) throw CLI::ValidationError("--umax exceeds --limit");
            const auto table = sieve_with_cache(limit);
            const auto r = xp::delta_integral_with_tail(table, umax, log_x1, threads);
            emit(out_path, rp::to_text(maybe_timestamp(rp::delta_integral_json(r), comparable)));
            return r.total <= 0.411 ? 0 : 1;
        }
        if (*p_cmd) {
            const auto limit = static_cast<std::uint64_t>(se::Modulus::parse(p_limit_str).value());
            return run_psi_audit(limit, threads, out_path, comparable);
        }
        if (*a_cmd) return run_charsum_audit(a_dmax, threads, out_path, a_format, comparable);
        if (*l_cmd) return run_lemma_audit(l_dmax, l_sieve, out_path, comparable);
        if (*r_cmd) {
            const auto j = rp::headline_report(threads);
            emit(out_path, rp::to_text(maybe_timestamp(j, comparable)));
            return j["all_pass"].get<bool>() ? 0 : 1;
        }
    } catch (const CLI::ValidationError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 2;
}
