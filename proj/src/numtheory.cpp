#include "l1cert/numtheory.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <stdexcept>

#include "l1cert/accumulate.hpp"

namespace l1cert::numtheory {

namespace {

// Primes up to n by plain Eratosthenes; only ever called with n ~ sqrt(limit).
std::vector<std::uint64_t> small_primes(std::uint64_t n) {
    std::vector<bool> comp(n + 1, false);
    std::vector<std::uint64_t> primes;
    for (std::uint64_t p = 2; p <= n; ++p) {
        if (comp[p]) continue;
        primes.push_back(p);
        for (std::uint64_t m = p * p; m <= n; m += p) comp[m] = true;
    }
    return primes;
}

}  // namespace

SieveTable build_sieve(std::uint64_t limit) {
    if (limit < 2) throw std::invalid_argument("build_sieve: limit must be >= 2");
    // three double arrays; refuse before std::bad_alloc takes the process down
    if (limit > (std::uint64_t(1) << 33))
        throw std::length_error("build_sieve: limit exceeds the memory budget");

    SieveTable t;
    t.limit = limit;
    t.mangoldt.assign(limit + 1, 0.0);

    const auto root = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(limit))) + 1;
    const auto base = small_primes(root);
    for (std::uint64_t p : base) {
        if (p > limit) break;
        const double lp = std::log(static_cast<double>(p));
        for (std::uint64_t pk = p; pk <= limit; ) {
            t.mangoldt[pk] = lp;
            if (pk > limit / p) break;
            pk *= p;
        }
    }

    // segmented scan for primes above sqrt(limit); their only power in range
    // is p itself
    constexpr std::uint64_t kSegment = 1u << 21;
    std::vector<bool> seg;
    for (std::uint64_t lo = root + 1; lo <= limit; lo += kSegment) {
        const std::uint64_t hi = std::min(limit, lo + kSegment - 1);
        seg.assign(hi - lo + 1, false);
        for (std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t first = ((lo + p - 1) / p) * p;
            if (first < p * p) first = p * p;
            for (std::uint64_t m = first; m <= hi; m += p) seg[m - lo] = true;
        }
        for (std::uint64_t n = lo; n <= hi; ++n)
            if (!seg[n - lo]) t.mangoldt[n] = std::log(static_cast<double>(n));
    }

    t.psi_prefix.assign(limit + 1, 0.0);
    t.psitilde_prefix.assign(limit + 1, 0.0);
    KahanSum s, w;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        if (t.mangoldt[n] != 0.0) {
            s.add(t.mangoldt[n]);
            w.add(t.mangoldt[n] / static_cast<double>(n));
        }
        t.psi_prefix[n] = s.value();
        t.psitilde_prefix[n] = w.value();
    }
    return t;
}

double psi(const SieveTable& table, double x) {
    if (!(x >= 0.0) || x > static_cast<double>(table.limit))
        throw std::out_of_range("psi: x outside [0, limit]");
    return table.psi_prefix[static_cast<std::uint64_t>(x)];
}

double psi_tilde(const SieveTable& table, double x) {
    if (!(x >= 0.0) || x > static_cast<double>(table.limit))
        throw std::out_of_range("psi_tilde: x outside [0, limit]");
    return table.psitilde_prefix[static_cast<std::uint64_t>(x)];
}

int kronecker(long long d, unsigned long long n) {
    if (d == 0) throw std::invalid_argument("kronecker: d must be nonzero");
    if (n == 0) return (d == 1 || d == -1) ? 1 : 0;

    int result = 1;
    if ((n & 1) == 0) {
        if ((d & 1) == 0) return 0;
        const int d8 = static_cast<int>(((d % 8) + 8) % 8);
        const int k2 = (d8 == 1 || d8 == 7) ? 1 : -1;
        unsigned v = 0;
        while ((n & 1) == 0) { n >>= 1; ++v; }
        if (v & 1) result *= k2;
    }
    if (n == 1) return result;

    // (d|n) for odd n > 1 depends on d mod n only; standard Jacobi loop.
    unsigned long long a = static_cast<unsigned long long>(((d % static_cast<long long>(n)) + static_cast<long long>(n)) % static_cast<long long>(n));
    unsigned long long m = n;
    int t = 1;
    while (a != 0) {
        while ((a & 1) == 0) {
            a >>= 1;
            const unsigned long long r = m % 8;
            if (r == 3 || r == 5) t = -t;
        }
        std::swap(a, m);
        if ((a % 4 == 3) && (m % 4 == 3)) t = -t;
        a %= m;
    }
    if (m != 1) return 0;
    return result * t;
}

bool is_fundamental_discriminant(long long d) {
    if (d == 0 || d == 1) return false;
    const auto squarefree = [](unsigned long long m) {
        for (unsigned long long p = 2; p * p <= m; ++p)
            if (m % (p * p) == 0) return false;
        return true;
    };
    const long long r4 = ((d % 4) + 4) % 4;
    if (r4 == 1) return squarefree(static_cast<unsigned long long>(d < 0 ? -d : d));
    if (r4 == 0) {
        const long long m = d / 4;
        const long long m4 = ((m % 4) + 4) % 4;
        if (m4 == 2 || m4 == 3)
            return squarefree(static_cast<unsigned long long>(m < 0 ? -m : m));
    }
    return false;
}

std::vector<long long> fundamental_discriminants(std::uint64_t limit) {
    std::vector<long long> out;
    for (std::uint64_t a = 3; a <= limit; ++a) {
        const auto v = static_cast<long long>(a);
        if (is_fundamental_discriminant(v)) out.push_back(v);
        if (is_fundamental_discriminant(-v)) out.push_back(-v);
    }
    return out;
}

QuadChar::QuadChar(long long discriminant) : d(discriminant) {
    if (!is_fundamental_discriminant(d))
        throw std::invalid_argument("QuadChar: discriminant is not fundamental");
    q = static_cast<std::uint64_t>(d < 0 ? -d : d);
    odd = d < 0;
}

std::vector<signed char> QuadChar::period_table() const {
    std::vector<signed char> chi(q);
    for (std::uint64_t n = 0; n < q; ++n)
        chi[n] = static_cast<signed char>(kronecker(d, n));
    return chi;
}

namespace {
constexpr char kMagic[8] = {'L', '1', 'C', 'S', 'I', 'E', 'V', 'E'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

bool save_sieve(const SieveTable& table, const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f) return false;
    bool ok = std::fwrite(kMagic, 1, 8, f) == 8;
    ok = ok && std::fwrite(&kVersion, sizeof kVersion, 1, f) == 1;
    ok = ok && std::fwrite(&table.limit, sizeof table.limit, 1, f) == 1;
    const std::size_t n = table.limit + 1;
    ok = ok && std::fwrite(table.mangoldt.data(), sizeof(double), n, f) == n;
    ok = ok && std::fwrite(table.psi_prefix.data(), sizeof(double), n, f) == n;
    ok = ok && std::fwrite(table.psitilde_prefix.data(), sizeof(double), n, f) == n;
    ok = (std::fclose(f) == 0) && ok;
    return ok;
}

std::optional<SieveTable> load_sieve(const std::string& path) {
    std::FILE* f = std::fopen(path.c_str(), "rb");
    if (!f) return std::nullopt;
    char magic[8];
    std::uint32_t version = 0;
    SieveTable t;
    bool ok = std::fread(magic, 1, 8, f) == 8 && std::memcmp(magic, kMagic, 8) == 0;
    ok = ok && std::fread(&version, sizeof version, 1, f) == 1 && version == kVersion;
    ok = ok && std::fread(&t.limit, sizeof t.limit, 1, f) == 1 && t.limit >= 2 &&
         t.limit <= (std::uint64_t(1) << 33);
    if (ok) {
        const std::size_t n = t.limit + 1;
        t.mangoldt.resize(n);
        t.psi_prefix.resize(n);
        t.psitilde_prefix.resize(n);
        ok = std::fread(t.mangoldt.data(), sizeof(double), n, f) == n &&
             std::fread(t.psi_prefix.data(), sizeof(double), n, f) == n &&
             std::fread(t.psitilde_prefix.data(), sizeof(double), n, f) == n;
    }
    std::fclose(f);
    if (!ok) return std::nullopt;
    return t;
}

}  // namespace l1cert::numtheory
