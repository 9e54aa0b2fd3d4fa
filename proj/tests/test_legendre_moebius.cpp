#include "lpfsieve/densities.hpp"
#include "lpfsieve/legendre_moebius.hpp"
#include "lpfsieve/sieve_core.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>
#include <set>

using namespace lpfsieve;

namespace {

const PrimeTable& table() {
    static const PrimeTable t = build_prime_table(1'000'000);
    return t;
}

// Oracle for the remainder: fractional parts summed with the int128 Frac,
// divisors found by scanning 1..prod and testing squarefreeness directly.
oracle::Frac brute_remainder(std::uint64_t x, std::uint64_t z) {
    oracle::Frac r(0);
    const auto ps = oracle::primes_up_to(z - 1);
    for (std::size_t i = 0; i < ps.size(); ++i) {
        std::uint64_t modulus = 1;
        for (std::size_t j = 0; j < i; ++j) modulus *= ps[j];
        for (std::uint64_t d = 1; d <= modulus; ++d) {
            if (modulus % d != 0) continue;
            const int mu = oracle::moebius(d);
            const std::uint64_t dp = d * ps[i];
            r = r + oracle::Frac(mu * static_cast<__int128>(x % dp), static_cast<__int128>(dp));
        }
    }
    return r;
}

}  // namespace

TEST(Moebius, WorkedExamples) {
    EXPECT_EQ(moebius(1), 1);
    EXPECT_EQ(moebius(6), 1);
    EXPECT_EQ(moebius(12), 0);
    EXPECT_EQ(moebius(30), -1);
    EXPECT_EQ(moebius(4294967291ull), -1);  // prime
    EXPECT_EQ(moebius(4294967291ull * 2), 1);
    EXPECT_THROW(moebius(0), std::invalid_argument);
}

TEST(Moebius, AgreesWithFactorisationOracle) {
    for (std::uint64_t n = 1; n <= 100'000; ++n) ASSERT_EQ(moebius(n), oracle::moebius(n)) << n;
}

TEST(EnumerateDivisors, WorkedExamples) {
    const auto none = enumerate_divisors(std::span<const std::uint64_t>{});
    ASSERT_EQ(none.size(), 1u);
    EXPECT_EQ(none[0].value, 1u);
    EXPECT_EQ(none[0].moebius, 1);

    const std::vector<std::uint64_t> p23{2, 3};
    const auto d23 = enumerate_divisors(p23);
    ASSERT_EQ(d23.size(), 4u);
    // subset-rank order: {}, {2}, {3}, {2,3}
    EXPECT_EQ(d23[0].value, 1u);
    EXPECT_EQ(d23[1].value, 2u);
    EXPECT_EQ(d23[2].value, 3u);
    EXPECT_EQ(d23[3].value, 6u);
    EXPECT_EQ(d23[0].moebius, 1);
    EXPECT_EQ(d23[1].moebius, -1);
    EXPECT_EQ(d23[2].moebius, -1);
    EXPECT_EQ(d23[3].moebius, 1);

    const std::vector<std::uint64_t> p235{2, 3, 5};
    std::set<std::uint64_t> values;
    for (const auto& d : enumerate_divisors(p235)) values.insert(d.value);
    EXPECT_EQ(values, (std::set<std::uint64_t>{1, 2, 3, 5, 6, 10, 15, 30}));
}

TEST(EnumerateDivisors, TermCountAndSignStructure) {
    const auto ps = table().primes_below(45);  // 14 primes
    for (std::size_t k = 0; k <= ps.size(); ++k) {
        std::uint64_t n = 0;
        enumerate_divisors(ps.first(k), [&](const SquarefreeDivisor& d) {
            std::uint64_t prod = 1;
            for (auto p : d.prime_support) prod *= p;
            ASSERT_EQ(prod, d.value);
            ASSERT_EQ(d.moebius, d.prime_support.size() % 2 ? -1 : 1);
            ASSERT_EQ(d.moebius, oracle::moebius(d.value));
            ++n;
        });
        ASSERT_EQ(n, std::uint64_t{1} << k);
    }
}

TEST(EnumerateDivisors, RankOrderMatchesWalker) {
    const auto ps = table().primes_below(30);
    std::vector<std::uint64_t> a, b;
    enumerate_divisors(ps, [&](const SquarefreeDivisor& d) { a.push_back(d.value); });
    for_each_squarefree_divisor<std::uint64_t>(ps, [&](std::uint64_t v, int) { b.push_back(v); });
    EXPECT_EQ(a, b);
}

TEST(EnumerateDivisors, Errors) {
    const auto ps = table().primes_below(60);  // 17 primes: product > 2^64
    EXPECT_THROW(enumerate_divisors(ps, [](const SquarefreeDivisor&) {}), OverflowError);
    const std::vector<std::uint64_t> dup{2, 3, 3};
    EXPECT_THROW(enumerate_divisors(dup, [](const SquarefreeDivisor&) {}), std::invalid_argument);
}

TEST(LegendreSum, WorkedExamples) {
    EXPECT_EQ(legendre_sum(10, 3, table()), 5);
    EXPECT_EQ(legendre_sum(30, 6, table()), 8);
    for (std::uint64_t x : {1u, 9u, 1000u}) EXPECT_EQ(legendre_sum(x, 2, table()), static_cast<std::int64_t>(x));
    const auto b = legendre_sum_breakdown(30, 6, table());
    EXPECT_EQ(b.term_count, 8u);
    EXPECT_EQ(static_cast<std::int64_t>(b.total), 8);
    EXPECT_EQ(static_cast<std::uint64_t>(b.max_abs_partial), 30u);
}

TEST(LegendreSum, CapExceeded) {
    try {
        legendre_sum(1000, 100, table(), 24);  // 25 primes below 100
        FAIL() << "expected cap error";
    } catch (const CapExceededError& e) {
        EXPECT_EQ(e.prime_count(), 25u);
        EXPECT_NE(std::string(e.what()).find("2^25"), std::string::npos);
    }
}

TEST(LegendreSum, AtTheDefaultCap) {
    // 24 primes (p <= 89): 2^24 terms with 128-bit divisor products
    const std::uint64_t x = 123'456'789;
    const auto b = legendre_sum_breakdown(x, 90, table());
    EXPECT_EQ(b.term_count, std::uint64_t{1} << 24);
    EXPECT_EQ(static_cast<std::uint64_t>(b.total), survivor_count(x, 90, table()));
}

TEST(LegendreSum, EquivalentToSieveExhaustiveSmall) {
    for (std::uint64_t x = 1; x <= 3000; ++x) {
        const auto c = lpf_census(x, 31, table());
        std::uint64_t s = x;
        for (std::uint64_t z = 2; z <= 31; ++z) {
            s -= c.count_for(z - 1);
            ASSERT_EQ(legendre_sum(x, z, table()), static_cast<std::int64_t>(s)) << x << " " << z;
        }
    }
}

TEST(LpfCountViaMoebius, WorkedExamples) {
    EXPECT_EQ(lpf_count_via_moebius(10, 3, table()), 2);
    EXPECT_EQ(lpf_count_via_moebius(10, 2, table()), 5);
    EXPECT_EQ(lpf_count_via_moebius(100, 7, table()), 4);
    EXPECT_THROW(lpf_count_via_moebius(100, 8, table()), std::invalid_argument);
    EXPECT_THROW(lpf_count_via_moebius(100, 101, table(), 10), CapExceededError);
}

TEST(LpfCountViaMoebius, MatchesCountLpf) {
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 100; ++trial) {
        const std::uint64_t x = std::uniform_int_distribution<std::uint64_t>(1, 1'000'000)(rng);
        for (const auto p : table().primes_below(31))
            ASSERT_EQ(lpf_count_via_moebius(x, p, table()), static_cast<std::int64_t>(count_lpf(x, p, table())))
                << x << " " << p;
    }
}

TEST(FracRemainderSum, WorkedExamples) {
    EXPECT_EQ(frac_remainder_sum(16, 4, table()), Rational(-1, 3));
    EXPECT_EQ(frac_remainder_sum(6, 3, table()), Rational(0));
    EXPECT_EQ(frac_remainder_sum(30, 6, table()), Rational(0));
    EXPECT_EQ(frac_remainder_sum(100, 10, table()), Rational(-6, 7));
}

TEST(FracRemainderSum, MatchesBruteForceOracle) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 40; ++trial) {
        const std::uint64_t x = std::uniform_int_distribution<std::uint64_t>(1, 1'000'000)(rng);
        const std::uint64_t z = std::uniform_int_distribution<std::uint64_t>(2, 20)(rng);
        const auto want = brute_remainder(x, z);
        const auto got = frac_remainder_sum(x, z, table());
        ASSERT_EQ(got.to_string(), to_string(want.num) + "/" + to_string(want.den)) << x << " " << z;
    }
}

TEST(FracRemainderSum, ExactRemainderIdentity) {
    std::mt19937_64 rng(29);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint64_t x = std::uniform_int_distribution<std::uint64_t>(1, 1'000'000)(rng);
        for (std::uint64_t z = 2; z <= 31; z += 3) {
            const Rational lhs = Rational::from_unsigned(survivor_count(x, z, table())) -
                                 Rational::from_unsigned(x) * mertens_product(z, table());
            ASSERT_EQ(lhs, frac_remainder_sum(x, z, table())) << x << " " << z;
        }
    }
}

TEST(FracBoundB3, WorkedExamples) {
    EXPECT_EQ(frac_bound_b3(16, 4, table()), Rational(1, 6));
    EXPECT_EQ(frac_bound_b3(10, 6, table()), Rational(1, 6));
    for (std::uint64_t k = 1; k < 40; ++k) EXPECT_EQ(frac_bound_b3(std::uint64_t{1} << k, 3, table()), Rational(0));
}

TEST(FracBoundB3, RangeAndOracle) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 200; ++trial) {
        const std::uint64_t x = std::uniform_int_distribution<std::uint64_t>(1, 1'000'000)(rng);
        const std::uint64_t z = std::uniform_int_distribution<std::uint64_t>(2, 2000)(rng);
        const Rational b = frac_bound_b3(x, z, table());
        ASSERT_GE(b, Rational(0));
        ASSERT_LT(b, Rational::from_unsigned(table().primes_below(z).size()) + (z == 2 ? Rational(1) : Rational(0)));
        if (z <= 30) {
            oracle::Frac want(0);
            for (auto p : oracle::primes_up_to(z - 1))
                want = want + oracle::Frac(static_cast<__int128>(x % p), static_cast<__int128>(p)) * oracle::mertens(p);
            ASSERT_EQ(b.to_string(), to_string(want.num) + "/" + to_string(want.den));
        }
    }
}
