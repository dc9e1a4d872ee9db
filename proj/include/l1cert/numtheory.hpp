#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace l1cert::numtheory {

// Immutable arithmetic substrate: von Mangoldt values and the Chebyshev
// prefix sums psi(n) = sum_{m<=n} Lambda(m), psitilde(n) = sum Lambda(m)/m.
//
// Lambda(p^k) is stored as the *same* double log(p) for every power of p
// (computed once per prime), so powers of one prime are bit-identical.
// Prefix sums use compensated accumulation.
struct SieveTable {
    std::uint64_t limit = 0;
    std::vector<double> mangoldt;          // Lambda(n), index 0..limit
    std::vector<double> psi_prefix;        // psi(n)
    std::vector<double> psitilde_prefix;   // psitilde(n)
};

inline constexpr std::uint64_t kDefaultSieveLimit = 10'000'000;

// limit >= 2; throws std::invalid_argument otherwise and std::length_error
// when the table would not fit in memory.  Prime marking is segmented, so
// limits above 1e7 only cost the three value arrays.
SieveTable build_sieve(std::uint64_t limit);

// psi(floor(x)); requires 0 <= x <= limit (std::out_of_range otherwise).
double psi(const SieveTable& table, double x);
// Weighted analogue sum_{n<=x} Lambda(n)/n.
double psi_tilde(const SieveTable& table, double x);

// Kronecker symbol (d|n) for d != 0, n >= 0, by reciprocity reduction
// (n is never factored).  Total: returns 0 on shared factors.
int kronecker(long long d, unsigned long long n);

bool is_fundamental_discriminant(long long d);

// All fundamental d with 3 <= |d| <= limit, ordered by |d| ascending,
// positive member first at ties.  Each defines one primitive quadratic
// character mod |d|.
std::vector<long long> fundamental_discriminants(std::uint64_t limit);

// Primitive quadratic character chi_d = (d|.) of a fundamental discriminant.
struct QuadChar {
    long long d = 0;
    std::uint64_t q = 0;      // modulus |d|
    bool odd = false;         // chi(-1) = -1, i.e. d < 0

    explicit QuadChar(long long discriminant);

    int operator()(unsigned long long n) const { return kronecker(d, n); }

    // One full period of values chi(0..q-1); oracle sweeps index this
    // instead of paying the reciprocity loop per point.
    std::vector<signed char> period_table() const;
};

// Optional on-disk cache.  Layout (little-endian host): magic "L1CSIEVE",
// u32 version = 1, u64 limit, then the three double arrays of length
// limit+1 in the order mangoldt, psi_prefix, psitilde_prefix.  The cache
// is an optimization only; loads that fail for any reason return nullopt.
bool save_sieve(const SieveTable& table, const std::string& path);
std::optional<SieveTable> load_sieve(const std::string& path);

}  // namespace l1cert::numtheory
