#include "lpfsieve/error_lab.hpp"
#include "lpfsieve/report.hpp"
#include "oracle.hpp"

#include <gtest/gtest.h>

#include <random>
#include <sstream>

using namespace lpfsieve;

namespace {

const PrimeTable& table() {
    static const PrimeTable t = build_prime_table(1'000'000);
    return t;
}

EvaluationOptions with_frac() {
    EvaluationOptions o;
    o.frac_remainder = true;
    return o;
}

}  // namespace

TEST(EvaluatePoint, SixteenFour) {
    const auto r = evaluate_point(16, 4, with_frac(), table());
    EXPECT_EQ(r.survivors, 5u);
    EXPECT_EQ(r.main_term, Rational(16, 3));
    EXPECT_EQ(r.error, Rational(-1, 3));
    EXPECT_EQ(r.pi_z, 2u);
    EXPECT_EQ(r.log2_legendre_bound, 2u);
    ASSERT_TRUE(r.b3_bound);
    EXPECT_EQ(*r.b3_bound, Rational(1, 6));
    ASSERT_TRUE(r.frac_remainder);
    EXPECT_EQ(*r.frac_remainder, Rational(-1, 3));
    EXPECT_EQ(r.frac_agrees, true);
    EXPECT_EQ(r.moebius_agrees, true);
    EXPECT_TRUE(r.exact_checks_pass());
    EXPECT_EQ(format_real(*r.ratio_error_to_pi_z, 10), "0.1666666667");
}

TEST(EvaluatePoint, HundredTen) {
    const auto r = evaluate_point(100, 10, {}, table());
    EXPECT_EQ(r.survivors, 22u);
    EXPECT_EQ(r.main_term, Rational(160, 7));
    EXPECT_EQ(r.error, Rational(-6, 7));
    EXPECT_FALSE(r.frac_remainder);
}

TEST(EvaluatePoint, ZEqualsTwo) {
    for (const std::uint64_t x : {2u, 3u, 1000u}) {
        const auto r = evaluate_point(x, 2, with_frac(), table());
        EXPECT_EQ(r.survivors, x);
        EXPECT_EQ(r.main_term, Rational::from_unsigned(x));
        EXPECT_TRUE(r.error.is_zero());
        EXPECT_EQ(r.pi_z, 0u);
        EXPECT_FALSE(r.ratio_error_to_pi_z);
    }
}

TEST(EvaluatePoint, InvalidPoint) {
    EXPECT_THROW(evaluate_point(5, 6, {}, table()), std::invalid_argument);
    EXPECT_THROW(evaluate_point(5, 1, {}, table()), std::invalid_argument);
}

TEST(EvaluatePoint, CapsBecomeAbsentFields) {
    auto opt = with_frac();
    opt.max_pi_z = 5;
    opt.moebius_check_max_z = 1000;
    const auto r = evaluate_point(10'000, 100, opt, table());
    EXPECT_FALSE(r.frac_remainder);
    EXPECT_FALSE(r.moebius_agrees);
    EXPECT_TRUE(r.exact_checks_pass());
    EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "frac_capped"), r.flags.end());
    EXPECT_NE(std::find(r.flags.begin(), r.flags.end(), "moebius_capped"), r.flags.end());
}

TEST(EvaluatePoint, CoherenceOnRandomPoints) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 60; ++trial) {
        const std::uint64_t x = std::uniform_int_distribution<std::uint64_t>(31, 1'000'000)(rng);
        const std::uint64_t z = std::uniform_int_distribution<std::uint64_t>(2, 31)(rng);
        const auto r = evaluate_point(x, z, with_frac(), table());
        ASSERT_TRUE(r.exact_checks_pass()) << x << " " << z;
        ASSERT_EQ(r.error, Rational::from_unsigned(r.survivors) - r.main_term);
        ASSERT_EQ(*r.frac_remainder, r.error);
        ASSERT_GE(*r.b3_bound, Rational(0));
        // each fractional part is < 1; with no sifting primes the sum is empty
        if (r.pi_z == 0) ASSERT_EQ(*r.b3_bound, Rational(0));
        else ASSERT_LT(*r.b3_bound, Rational::from_unsigned(r.pi_z));
        std::uint64_t sifted = 0;
        for (const auto p : table().primes_below(z)) sifted += count_lpf(x, p, table());
        ASSERT_EQ(r.survivors, x - sifted);
    }
}

TEST(RunSweep, PowersOfTenSqrt) {
    SweepConfig cfg;
    cfg.x_values = parse_x_spec("pow10:2..6");
    cfg.z_rule = parse_z_rule("sqrt");
    cfg.enable_frac_remainder = true;
    cfg.validate();
    const auto recs = run_sweep(cfg, table());
    ASSERT_EQ(recs.size(), 5u);
    for (const auto& r : recs) {
        EXPECT_TRUE(r.exact_checks_pass());
        EXPECT_EQ(r.z, isqrt(r.x) + 1);
        if (r.frac_remainder) EXPECT_EQ(*r.frac_remainder, r.error);
    }
    // x = 100, z = 11: pi(10) = 4 sifting primes, within every cap
    ASSERT_TRUE(recs[0].frac_remainder);
    EXPECT_EQ(recs[0].survivors, 22u);
}

TEST(RunSweep, SinglePointMatchesEvaluatePoint) {
    SweepConfig cfg;
    cfg.x_values = {16};
    cfg.z_rule = parse_z_rule("4");
    cfg.enable_frac_remainder = true;
    const auto recs = run_sweep(cfg, table());
    ASSERT_EQ(recs.size(), 1u);
    const auto direct = evaluate_point(16, 4, cfg.evaluation_options(), table());
    EXPECT_EQ(make_report(sweep_columns(), recs).rows[0],
              make_report(sweep_columns(), std::vector<ErrorRecord>{direct}).rows[0]);
}

TEST(RunSweep, PowersOfTwoAndOrdering) {
    SweepConfig cfg;
    cfg.x_values = {1u << 20, 16, 1u << 10, 16};
    for (std::uint64_t k = 4; k <= 20; ++k) cfg.x_values.push_back(std::uint64_t{1} << k);
    const auto recs = run_sweep(cfg, table());
    ASSERT_EQ(recs.size(), 17u);
    for (std::size_t i = 1; i < recs.size(); ++i) EXPECT_LT(recs[i - 1].x, recs[i].x);
    for (const auto& r : recs) EXPECT_TRUE(r.ratio_error_to_pi_z.has_value());
}

TEST(RunSweep, DeterministicAcrossThreadCounts) {
    SweepConfig cfg;
    cfg.x_values = parse_x_spec("geom:100..1000000:12");
    cfg.enable_frac_remainder = true;
    auto render = [&](unsigned threads) {
        cfg.threads = threads;
        std::ostringstream os;
        write_csv(os, make_report(sweep_columns(), run_sweep(cfg, table())));
        return os.str();
    };
    const std::string one = render(1);
    EXPECT_EQ(one, render(3));
    EXPECT_EQ(one, render(8));
}

TEST(RunSweep, PerPointFailuresAreRecorded) {
    SweepConfig cfg;
    cfg.x_values = {100, 2'000'000'000'000};  // second needs primes beyond the table
    cfg.z_rule = parse_z_rule("fixed:2000000");
    const auto recs = run_sweep(cfg, table());
    ASSERT_EQ(recs.size(), 2u);
    EXPECT_TRUE(recs[0].failure);  // z > x
    EXPECT_TRUE(recs[1].failure);  // z beyond table
    EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(SweepConfig, ZRules) {
    EXPECT_EQ(parse_z_rule("sqrt").z_for(100), 11u);
    EXPECT_EQ(parse_z_rule("sqrt").z_for(2), 2u);
    EXPECT_EQ(parse_z_rule("fixed:7").z_for(100), 7u);
    EXPECT_EQ(parse_z_rule("logx").z_for(1'000'000), 13u);
    EXPECT_EQ(parse_z_rule("logx").z_for(3), 2u);
    EXPECT_THROW(parse_z_rule("fixed:1"), ConfigError);
    EXPECT_THROW(parse_z_rule("cube"), ConfigError);
    SweepConfig bad;
    bad.x_values = {1};
    EXPECT_THROW(bad.validate(), ConfigError);
}

TEST(Chebyshev, WorkedExamples) {
    const auto c100 = chebyshev_check(100, table());
    EXPECT_EQ(c100.pi_x, 25u);
    EXPECT_EQ(c100.z_used, 11u);
    EXPECT_EQ(c100.survivors, 22u);
    EXPECT_EQ(survivor_count(100, 10, table()), 22u);  // no prime in [10, 11)
    EXPECT_EQ(c100.pi_z, 4u);
    EXPECT_EQ(c100.s_plus_pi_z, 26u);
    EXPECT_TRUE(c100.holds_54);

    const auto c4 = chebyshev_check(4, table());
    EXPECT_EQ(c4.pi_x, 2u);
    EXPECT_EQ(c4.z_used, 3u);
    EXPECT_EQ(c4.survivors, 2u);
    EXPECT_EQ(c4.s_plus_pi_z, 3u);
    EXPECT_TRUE(c4.holds_54);

    const auto c2 = chebyshev_check(2, table());
    EXPECT_EQ(c2.z_used, 2u);
    EXPECT_EQ(c2.survivors, 2u);
    EXPECT_EQ(c2.pi_x, 1u);
    EXPECT_TRUE(c2.holds_54);

    EXPECT_THROW(chebyshev_check(1, table()), std::invalid_argument);
    EXPECT_THROW(chebyshev_check(1'000'001, table()), OutOfRangeError);
}

TEST(Chebyshev, InclusionHoldsForEveryXUpToOneMillion) {
    // one pass over an lpf table: S(x, isqrt(x)+1) maintained incrementally
    const std::uint64_t top = 1'000'000;
    std::vector<std::uint32_t> lpf(top + 1, 0);
    for (std::uint64_t i = 2; i <= top; ++i)
        if (lpf[i] == 0)
            for (std::uint64_t j = i; j <= top; j += i)
                if (lpf[j] == 0) lpf[j] = static_cast<std::uint32_t>(i);
    std::uint64_t pi_x = 0, survivors = 1;  // x = 1
    std::uint64_t z = 2, pi_z = 0;
    std::vector<std::uint64_t> below(top + 1, 0);  // #{n <= x : lpf(n) = p}
    for (std::uint64_t x = 2; x <= top; ++x) {
        if (lpf[x] == x) ++pi_x;
        ++below[lpf[x]];
        if (lpf[x] >= z) ++survivors;
        const std::uint64_t z_new = isqrt(x) + 1;
        for (; z < z_new; ++z) {
            if (lpf[z] != z) continue;
            survivors -= below[z];  // prime z enters the sifting set
            ++pi_z;
        }
        ASSERT_LE(pi_x, survivors + pi_z) << x;
        if (x % 9973 == 0) {
            const auto rec = chebyshev_check(x, table());
            ASSERT_EQ(rec.survivors, survivors) << x;
            ASSERT_EQ(rec.pi_x, pi_x);
            ASSERT_TRUE(rec.holds_54);
        }
    }
}

TEST(BlowupProbe, TermCounts) {
    const auto rows6 = legendre_blowup_probe(6, 1000, table());
    ASSERT_EQ(rows6.size(), 4u);
    std::vector<std::uint64_t> zs, counts;
    for (const auto& r : rows6) {
        zs.push_back(r.z);
        counts.push_back(r.term_count);
    }
    EXPECT_EQ(zs, (std::vector<std::uint64_t>{2, 3, 4, 6}));
    EXPECT_EQ(counts, (std::vector<std::uint64_t>{1, 2, 4, 8}));

    const auto rows31 = legendre_blowup_probe(31, 1000, table());
    EXPECT_EQ(rows31.back().term_count, 1024u);
    EXPECT_EQ(rows31.back().pi_z, 10u);

    const auto rows2 = legendre_blowup_probe(2, 1000, table());
    ASSERT_EQ(rows2.size(), 1u);
    EXPECT_EQ(rows2[0].term_count, 1u);
    EXPECT_EQ(rows2[0].value, 1000);
}

TEST(BlowupProbe, StopsAtCap) {
    const auto rows = legendre_blowup_probe(100, 1000, table(), 6);
    ASSERT_FALSE(rows.empty());
    EXPECT_TRUE(rows.back().error);
    EXPECT_EQ(rows.back().pi_z, 7u);
    EXPECT_EQ(rows.size(), 8u);
}
