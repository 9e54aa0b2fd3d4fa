// legendre_moebius.hpp
// Exact Moebius-sum evaluators over squarefree divisor lattices.
//
//   legendre_sum           S(x, z)   = sum_{d | P(z)} mu(d) floor(x/d)
//   lpf_count_via_moebius  #lpf = p  = sum_{d | P(p)} mu(d) floor(x/(d p))
//   frac_remainder_sum     R(x, z)   = sum_{p<z} sum_{d | P(p)} mu(d) {x/(d p)}
//   frac_bound_b3          B(x, z)   = sum_{p<z} {x/p} prod_{q<p} (1 - 1/q)
//
// P(y) is never materialised; a divisor lattice is described by the list of
// primes below y. Enumerations are exponential on purpose and guarded by a
// cap on the number of primes (2^cap terms).

#pragma once

#include "lpfsieve/errors.hpp"
#include "lpfsieve/prime_table.hpp"
#include "lpfsieve/rational.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <vector>

namespace lpfsieve {

inline constexpr std::uint64_t kDefaultMaxPiZ = 24;

using int128 = __int128;
using uint128 = unsigned __int128;

inline std::string to_string(int128 v) {
    if (v == 0) return "0";
    const bool neg = v < 0;
    uint128 u = neg ? uint128(-(v + 1)) + 1 : uint128(v);
    std::string s;
    while (u > 0) {
        s.insert(s.begin(), static_cast<char>('0' + static_cast<int>(u % 10)));
        u /= 10;
    }
    return neg ? "-" + s : s;
}

struct SquarefreeDivisor {
    std::uint64_t value = 1;
    int moebius = 1;
    std::vector<std::uint64_t> prime_support;
};

struct MoebiusSumBreakdown {
    int128 total = 0;
    std::uint64_t term_count = 0;
    uint128 max_abs_partial = 0;
};

// mu(n) by trial division.
inline int moebius(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("moebius: n must be >= 1");
    int sign = 1;
    auto strip = [&](std::uint64_t p) -> bool {
        if (n % p != 0) return true;
        n /= p;
        if (n % p == 0) return false;
        sign = -sign;
        return true;
    };
    if (!strip(2) || !strip(3)) return 0;
    for (std::uint64_t f = 5; f <= n / f; f += 6) {
        if (!strip(f) || !strip(f + 2)) return 0;
    }
    if (n > 1) sign = -sign;
    return sign;
}

namespace detail {

template <typename UInt>
void require_product_fits(std::span<const std::uint64_t> primes) {
    UInt prod = 1;
    for (const std::uint64_t p : primes) {
        if (p < 2) throw std::invalid_argument("divisor lattice needs primes, got " + std::to_string(p));
        if (prod > std::numeric_limits<UInt>::max() / p)
            throw OverflowError("product of " + std::to_string(primes.size()) + " primes does not fit in " +
                                std::to_string(sizeof(UInt) * 8) + " bits");
        prod *= p;
    }
}

inline void require_distinct(std::span<const std::uint64_t> primes) {
    std::unordered_set<std::uint64_t> seen;
    for (const std::uint64_t p : primes)
        if (!seen.insert(p).second) throw std::invalid_argument("duplicate prime " + std::to_string(p));
}

// Depth-first walk in subset-rank order: the highest-index prime is the
// outermost choice, so subsets come out as ranks 0, 1, ..., 2^k - 1 where
// bit i of the rank selects primes[i].
template <typename UInt, typename Visit>
void walk_divisors(std::span<const std::uint64_t> primes, std::size_t level, UInt value, int mu, Visit& visit) {
    if (level == 0) {
        visit(value, mu);
        return;
    }
    walk_divisors<UInt>(primes, level - 1, value, mu, visit);
    walk_divisors<UInt>(primes, level - 1, value * primes[level - 1], -mu, visit);
}

inline void require_cap(std::uint64_t prime_count, std::uint64_t cap) {
    if (prime_count > cap) throw CapExceededError(prime_count, cap);
}

}  // namespace detail

// Visit all 2^k squarefree divisors of prod(primes) with value and mu(d),
// in subset-rank order. UInt must hold the full product.
template <typename UInt, typename Visit>
void for_each_squarefree_divisor(std::span<const std::uint64_t> primes, Visit&& visit) {
    detail::require_product_fits<UInt>(primes);
    detail::walk_divisors<UInt>(primes, primes.size(), UInt{1}, 1, visit);
}

// Streams SquarefreeDivisor records (value, sign, support) in subset-rank order.
template <typename Visit>
void enumerate_divisors(std::span<const std::uint64_t> primes, Visit&& visit) {
    detail::require_distinct(primes);
    detail::require_product_fits<std::uint64_t>(primes);
    SquarefreeDivisor d;
    const std::uint64_t total = std::uint64_t{1} << primes.size();
    for (std::uint64_t rank = 0; rank < total; ++rank) {
        d.value = 1;
        d.prime_support.clear();
        for (std::size_t i = 0; i < primes.size(); ++i) {
            if ((rank >> i) & 1u) {
                d.value *= primes[i];
                d.prime_support.push_back(primes[i]);
            }
        }
        d.moebius = (d.prime_support.size() % 2 == 0) ? 1 : -1;
        visit(static_cast<const SquarefreeDivisor&>(d));
    }
}

inline std::vector<SquarefreeDivisor> enumerate_divisors(std::span<const std::uint64_t> primes) {
    if (primes.size() >= 32) throw OverflowError("too many primes to materialise the divisor list");
    std::vector<SquarefreeDivisor> out;
    out.reserve(std::size_t{1} << primes.size());
    enumerate_divisors(primes, [&](const SquarefreeDivisor& d) { out.push_back(d); });
    return out;
}

// sum_{d | prod(primes)} mu(d) floor(y / (d * scale)) with diagnostics.
inline MoebiusSumBreakdown moebius_floor_sum(std::uint64_t y, std::uint64_t scale,
                                             std::span<const std::uint64_t> primes) {
    MoebiusSumBreakdown out;
    auto visit = [&](uint128 d, int mu) {
        const uint128 dp = d * scale;
        const int128 term = dp > y ? 0 : static_cast<int128>(y / static_cast<std::uint64_t>(dp));
        out.total += mu > 0 ? term : -term;
        ++out.term_count;
        const uint128 mag = out.total < 0 ? uint128(-out.total) : uint128(out.total);
        if (mag > out.max_abs_partial) out.max_abs_partial = mag;
    };
    // scale * prod(primes) must fit 128 bits
    if (scale == 0) throw std::invalid_argument("scale must be positive");
    std::vector<std::uint64_t> check(primes.begin(), primes.end());
    detail::require_product_fits<uint128>(check);
    if (scale > 1) {
        check.push_back(scale);
        detail::require_product_fits<uint128>(check);
    }
    detail::walk_divisors<uint128>(primes, primes.size(), uint128{1}, 1, visit);
    return out;
}

inline MoebiusSumBreakdown legendre_sum_breakdown(std::uint64_t x, std::uint64_t z, const PrimeTable& table,
                                                  std::uint64_t cap = kDefaultMaxPiZ) {
    if (z < 2) throw std::invalid_argument("sifting bound z must be >= 2");
    const auto primes = table.primes_below(z);
    detail::require_cap(primes.size(), cap);
    return moebius_floor_sum(x, 1, primes);
}

// Legendre's formula for S(x, z). Equals survivor_count(x, z).
inline std::int64_t legendre_sum(std::uint64_t x, std::uint64_t z, const PrimeTable& table,
                                 std::uint64_t cap = kDefaultMaxPiZ) {
    return static_cast<std::int64_t>(legendre_sum_breakdown(x, z, table, cap).total);
}

// #{n <= x : lpf(n) = p} by inclusion-exclusion over d | prod_{q<p} q.
// gcd(p, d) = 1 on this lattice, so lcm(p, d) = d p.
inline std::int64_t lpf_count_via_moebius(std::uint64_t x, std::uint64_t p, const PrimeTable& table,
                                          std::uint64_t cap = kDefaultMaxPiZ) {
    if (!table.is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    const auto below = table.primes_below(p);
    detail::require_cap(below.size(), cap);
    return static_cast<std::int64_t>(moebius_floor_sum(x, p, below).total);
}

// Exact R(x, z). Accumulated over the common denominator Q = prod_{p<z} p:
// each {x/(dp)} = (x mod dp)/(dp) = (x mod dp) * (Q/dp) / Q.
inline Rational frac_remainder_sum(std::uint64_t x, std::uint64_t z, const PrimeTable& table,
                                   std::uint64_t cap = kDefaultMaxPiZ) {
    if (z < 2) throw std::invalid_argument("sifting bound z must be >= 2");
    const auto sifting = table.primes_below(z);
    detail::require_cap(sifting.size(), cap);
    detail::require_product_fits<uint128>(sifting);

    mpz_class q = 1;
    for (const std::uint64_t p : sifting) q *= detail::to_mpz(p);

    mpz_class numer = 0;
    mpz_class cofactor;
    for (std::size_t i = 0; i < sifting.size(); ++i) {
        const std::uint64_t p = sifting[i];
        auto visit = [&](uint128 d, int mu) {
            const uint128 dp = d * p;
            const uint128 rem = uint128(x) % dp;
            if (rem == 0) return;
            mpz_divexact(cofactor.get_mpz_t(), q.get_mpz_t(), detail::to_mpz(dp).get_mpz_t());
            cofactor *= detail::to_mpz(rem);
            if (mu > 0)
                numer += cofactor;
            else
                numer -= cofactor;
        };
        detail::walk_divisors<uint128>(sifting.first(i), i, uint128{1}, 1, visit);
    }
    return Rational(numer, q);
}

// Exact B(x, z) = sum_{p<z} {x/p} prod_{q<p} (1 - 1/q); always in [0, pi(z-1)).
// Running numerator over D = prod_{q<=p} q, with A = prod_{q<p} (q - 1).
inline Rational frac_bound_b3(std::uint64_t x, std::uint64_t z, const PrimeTable& table) {
    if (z < 2) throw std::invalid_argument("sifting bound z must be >= 2");
    mpz_class numer = 0, den = 1, totient = 1;
    for (const std::uint64_t p : table.primes_below(z)) {
        const mpz_class pz = detail::to_mpz(p);
        numer *= pz;
        numer += totient * detail::to_mpz(x % p);
        den *= pz;
        totient *= detail::to_mpz(p - 1);
    }
    return Rational(numer, den);
}

}  // namespace lpfsieve
