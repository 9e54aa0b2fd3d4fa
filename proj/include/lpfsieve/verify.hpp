// verify.hpp
// The exact-identity suite behind `lpfsieve verify-identities`. Every check
// here is an exact integer or rational equality (or inequality); a single
// failure is an implementation bug and is reported with its (x, z) point.

#pragma once

#include "lpfsieve/densities.hpp"
#include "lpfsieve/error_lab.hpp"
#include "lpfsieve/legendre_moebius.hpp"
#include "lpfsieve/prime_table.hpp"
#include "lpfsieve/sieve_core.hpp"

#include <algorithm>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace lpfsieve {

inline constexpr std::uint64_t kDefaultSeed = 20230920;

struct IdentityFamily {
    std::string name;
    std::uint64_t checks = 0;
    std::uint64_t failures = 0;
    std::optional<std::string> first_failure;

    void record(bool ok, std::uint64_t x, std::uint64_t z) {
        ++checks;
        if (ok) return;
        ++failures;
        if (!first_failure) first_failure = "(x=" + std::to_string(x) + ", z=" + std::to_string(z) + ", " + name + ")";
    }
};

struct IdentitySuiteResult {
    std::uint64_t limit = 0;
    std::vector<IdentityFamily> families;

    bool passed() const {
        return std::all_of(families.begin(), families.end(), [](const auto& f) { return f.failures == 0; });
    }
    std::uint64_t total_checks() const {
        std::uint64_t n = 0;
        for (const auto& f : families) n += f.checks;
        return n;
    }
    std::optional<std::string> first_failure() const {
        for (const auto& f : families)
            if (f.first_failure) return f.first_failure;
        return std::nullopt;
    }
};

struct IdentitySuiteOptions {
    std::uint64_t seed = kDefaultSeed;
    std::uint64_t random_points = 200;
    std::uint64_t exhaustive_up_to = 200;  // every x in [1, n] is checked for the small families
    SieveOptions sieve{};
};

// Table limit the suite needs for a given x limit.
inline std::uint64_t identity_suite_table_limit(std::uint64_t limit) { return std::max<std::uint64_t>(limit, 31); }

inline IdentitySuiteResult run_identity_suite(std::uint64_t limit, const PrimeTable& table,
                                              const IdentitySuiteOptions& opt = {}) {
    IdentitySuiteResult res;
    res.limit = limit;
    IdentityFamily partition{"partition: survivors + sum count_lpf = x"};
    IdentityFamily census_fam{"census: lpf_census agrees with survivor_count and count_lpf"};
    IdentityFamily legendre{"legendre: legendre_sum = survivor_count"};
    IdentityFamily per_prime{"per-prime moebius: lpf_count_via_moebius = count_lpf"};
    IdentityFamily telescoping{"density telescoping: sum g(p) = 1 - prod(1 - 1/p)"};
    IdentityFamily main_terms{"main terms: sift_main_term = x (1 - mertens_product)"};
    IdentityFamily remainder{"remainder: S - x prod(1 - 1/p) = frac_remainder_sum"};
    IdentityFamily chebyshev{"chebyshev inclusion: pi(x) <= S(x, isqrt(x)+1) + pi(isqrt(x))"};
    IdentityFamily harmonic{"harmonic chain: prod^-1 > H(z-1) > log z"};

    if (limit > 0) {
        // x sample: exhaustive small range, decades, seeded random draws
        std::vector<std::uint64_t> xs;
        for (std::uint64_t x = 1; x <= std::min(limit, opt.exhaustive_up_to); ++x) xs.push_back(x);
        for (std::uint64_t d = 10; d <= limit; d *= 10) {
            xs.push_back(d);
            if (d > limit / 10) break;
        }
        xs.push_back(limit);
        std::mt19937_64 rng(opt.seed);
        std::uniform_int_distribution<std::uint64_t> draw_x(1, limit);
        for (std::uint64_t i = 0; i < opt.random_points; ++i) xs.push_back(draw_x(rng));
        std::sort(xs.begin(), xs.end());
        xs.erase(std::unique(xs.begin(), xs.end()), xs.end());

        const auto small_primes = table.primes_below(31);
        for (const std::uint64_t x : xs) {
            // partition at a random z and at the Chebyshev z
            std::uniform_int_distribution<std::uint64_t> draw_z(2, std::max<std::uint64_t>(2, std::min(x, table.limit())));
            for (const std::uint64_t z : {draw_z(rng), isqrt(x) + 1}) {
                if (z > table.limit() + 1) continue;
                std::uint64_t sifted = 0;
                for (const std::uint64_t p : table.primes_below(z)) sifted += count_lpf(x, p, table, opt.sieve);
                const std::uint64_t s = survivor_count(x, z, table, opt.sieve);
                partition.record(s + sifted == x, x, z);
                if (x <= 100'000) {
                    const LpfCensus c = lpf_census(x, z, table, opt.sieve);
                    bool ok = c.survivors == s && c.survivors + c.sifted() == x;
                    for (const auto& [p, n] : c.counts) ok = ok && n == count_lpf(x, p, table, opt.sieve);
                    census_fam.record(ok, x, z);
                }
            }
            // one census up to z = 31 gives S(x, z) for every z <= 31
            const LpfCensus small = lpf_census(x, 31, table, opt.sieve);
            std::uint64_t s = x;
            for (std::uint64_t z = 2; z <= 31; ++z) {
                if (table.is_prime(z - 1)) s -= small.count_for(z - 1);
                legendre.record(legendre_sum(x, z, table) == static_cast<std::int64_t>(s), x, z);
                const Rational err = Rational::from_unsigned(s) - Rational::from_unsigned(x) * mertens_product(z, table);
                remainder.record(err == frac_remainder_sum(x, z, table), x, z);
                main_terms.record(sift_main_term(x, z, table) ==
                                      Rational::from_unsigned(x) * (Rational(1) - mertens_product(z, table)),
                                  x, z);
            }
            for (const std::uint64_t p : small_primes)
                per_prime.record(lpf_count_via_moebius(x, p, table) ==
                                     static_cast<std::int64_t>(count_lpf(x, p, table, opt.sieve)),
                                 x, p);
            if (x >= 2 && x <= table.limit()) chebyshev.record(chebyshev_check(x, table, opt.sieve).holds_54, x, isqrt(x) + 1);
        }

        const std::uint64_t density_top = std::min<std::uint64_t>(limit, 10'000);
        for (const std::uint64_t r : table.primes_below(density_top + 1))
            telescoping.record(density_identity_check(r, table).equal, r, r + 1);
        for (std::uint64_t z = 3; z <= density_top; ++z)
            harmonic.record(harmonic_lower_bound_check(z, table).ordered, 0, z);
    }

    res.families = {partition, census_fam, legendre, per_prime, telescoping, main_terms, remainder, chebyshev, harmonic};
    return res;
}

}  // namespace lpfsieve
