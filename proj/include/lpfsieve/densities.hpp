// densities.hpp
// Exact Mertens products, least-prime-factor densities and the telescoping
// identity
//
//   sum_{p <= r} g(p) = 1 - prod_{p <= r} (1 - 1/p),   g(p) = (1/p) prod_{q < p} (1 - 1/q).
//
// g(p) uses the strict product q < p; with q <= p the identity is false.

#pragma once

#include "lpfsieve/errors.hpp"
#include "lpfsieve/prime_table.hpp"
#include "lpfsieve/rational.hpp"

#include <boost/multiprecision/mpfr.hpp>

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

namespace lpfsieve {

// DensityTable entries are cached only up to this bound; larger z is
// served on demand by the free functions.
inline constexpr std::uint64_t kDensityTableMaxZ = 10'001;

namespace detail {

inline mpz_class product_of(std::span<const std::uint64_t> primes, std::uint64_t offset_down) {
    // balanced product tree keeps the big multiplications subquadratic
    if (primes.empty()) return 1;
    if (primes.size() <= 16) {
        mpz_class r = 1;
        for (const std::uint64_t p : primes) r *= detail::to_mpz(p - offset_down);
        return r;
    }
    const std::size_t mid = primes.size() / 2;
    return product_of(primes.first(mid), offset_down) * product_of(primes.subspan(mid), offset_down);
}

// sum_{p in primes} g(p) as numerator over prod(primes).
inline Rational density_prefix_sum(std::span<const std::uint64_t> primes) {
    mpz_class numer = 0, den = 1, totient = 1;
    for (const std::uint64_t p : primes) {
        const mpz_class pz = detail::to_mpz(p);
        numer *= pz;
        numer += totient;
        den *= pz;
        totient *= detail::to_mpz(p - 1);
    }
    return Rational(numer, den);
}

}  // namespace detail

// prod_{p<z} (1 - 1/p); 1 when no prime is below z.
inline Rational mertens_product(std::uint64_t z, const PrimeTable& table) {
    if (z < 2) throw std::invalid_argument("mertens_product: z must be >= 2");
    const auto primes = table.primes_below(z);
    return Rational(detail::product_of(primes, 1), detail::product_of(primes, 0));
}

// Largest prime <= r, or 0 when r < 2. Real thresholds are floored first.
inline std::uint64_t largest_prime_at_most(double r, const PrimeTable& table) {
    if (!(r >= 2.0)) return 0;
    const auto n = static_cast<std::uint64_t>(std::floor(r));
    const auto below = table.primes_below(n + 1);
    return below.empty() ? 0 : below.back();
}

// g(p) = (1/p) prod_{q<p} (1 - 1/q).
inline Rational lpf_density(std::uint64_t p, const PrimeTable& table) {
    if (!table.is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    const auto below = table.primes_below(p);
    return Rational(detail::product_of(below, 1), detail::product_of(below, 0) * detail::to_mpz(p));
}

struct DensityIdentity {
    Rational lhs;
    Rational rhs;
    bool equal = false;
};

// lhs = sum_{p<=r} g(p), rhs = 1 - mertens_product(r + 1).
inline DensityIdentity density_identity_check(std::uint64_t r, const PrimeTable& table) {
    DensityIdentity out;
    if (r < 2) {
        out.equal = true;  // empty sum, empty product
        return out;
    }
    table.require_covers_below(r + 1);
    out.lhs = detail::density_prefix_sum(table.primes_below(r + 1));
    out.rhs = Rational(1) - mertens_product(r + 1, table);
    out.equal = out.lhs == out.rhs;
    return out;
}

// Real-valued threshold: only the primes <= r matter.
inline DensityIdentity density_identity_check(double r, const PrimeTable& table) {
    if (!(r >= 1.0)) return density_identity_check(std::uint64_t{0}, table);
    return density_identity_check(static_cast<std::uint64_t>(std::floor(r)), table);
}

// x * g(p): the main term of the lpf class size.
inline Rational lpf_main_term(std::uint64_t x, std::uint64_t p, const PrimeTable& table) {
    return Rational::from_unsigned(x) * lpf_density(p, table);
}

// sum_{p<z} x g(p), summed term by term. Equals x (1 - mertens_product(z)).
inline Rational sift_main_term(std::uint64_t x, std::uint64_t z, const PrimeTable& table) {
    if (z < 2) throw std::invalid_argument("sift_main_term: z must be >= 2");
    return Rational::from_unsigned(x) * detail::density_prefix_sum(table.primes_below(z));
}

namespace detail {

// sum_{k=a}^{b-1} 1/k as p/q by binary splitting (unreduced).
inline void harmonic_split(std::uint64_t a, std::uint64_t b, mpz_class& p, mpz_class& q) {
    if (b - a == 1) {
        p = 1;
        q = detail::to_mpz(a);
        return;
    }
    const std::uint64_t m = a + (b - a) / 2;
    mpz_class p1, q1, p2, q2;
    harmonic_split(a, m, p1, q1);
    harmonic_split(m, b, p2, q2);
    p = p1 * q2 + p2 * q1;
    q = q1 * q2;
}

}  // namespace detail

// H_n = sum_{k=1}^{n} 1/k.
inline Rational harmonic_number(std::uint64_t n) {
    if (n == 0) return Rational(0);
    mpz_class p, q;
    detail::harmonic_split(1, n + 1, p, q);
    return Rational(p, q);
}

struct HarmonicChain {
    Rational product_inverse;  // prod_{p<z} (1 - 1/p)^-1
    Rational harmonic;         // sum_{k<z} 1/k
    Real log_z;
    bool ordered = false;
};

// product_inverse > harmonic > log z. At z = 2 the first link is an
// equality (1 = 1) and is accepted as >=.
inline HarmonicChain harmonic_lower_bound_check(std::uint64_t z, const PrimeTable& table) {
    if (z < 2) throw std::invalid_argument("harmonic_lower_bound_check: z must be >= 2");
    HarmonicChain out;
    out.product_inverse = Rational(1) / mertens_product(z, table);
    out.harmonic = harmonic_number(z - 1);
    out.log_z = boost::multiprecision::log(Real(z));
    const bool first = z >= 3 ? out.product_inverse > out.harmonic : out.product_inverse >= out.harmonic;
    out.ordered = first && compare(out.harmonic, out.log_z) > 0;
    return out;
}

struct DensityEntry {
    std::uint64_t p = 0;
    Rational g;                 // g(p)
    Rational partial_sum;       // sum_{q<=p} g(q)
    Rational mertens_below_p;   // prod_{q<p} (1 - 1/q)
};

struct DensityTable {
    std::uint64_t z = 0;
    std::vector<DensityEntry> entries;  // one per prime p < z
};

// Built incrementally: each partial_sum is checked against 1 - prod_{q<=p}(1 - 1/q).
inline DensityTable build_density_table(std::uint64_t z, const PrimeTable& table) {
    if (z < 2) throw std::invalid_argument("build_density_table: z must be >= 2");
    if (z > kDensityTableMaxZ)
        throw ResourceLimitError("density table is cached only for z <= " + std::to_string(kDensityTableMaxZ) +
                                 "; use the on-demand functions above that");
    DensityTable dt;
    dt.z = z;
    Rational mertens(1);
    Rational sum(0);
    for (const std::uint64_t p : table.primes_below(z)) {
        DensityEntry e;
        e.p = p;
        e.mertens_below_p = mertens;
        e.g = mertens * Rational(1, static_cast<std::int64_t>(p));
        sum += e.g;
        mertens *= Rational(static_cast<std::int64_t>(p - 1), static_cast<std::int64_t>(p));
        if (sum != Rational(1) - mertens)
            throw AssertionFailure("density telescoping broke at p=" + std::to_string(p));
        e.partial_sum = sum;
        dt.entries.push_back(std::move(e));
    }
    return dt;
}

}  // namespace lpfsieve
