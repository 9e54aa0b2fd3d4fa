// error_lab.hpp
// Measurement harness for the sieve error term
//
//   E(x, z) = S(x, z) - x prod_{p<z} (1 - 1/p)
//
// against the candidate bounds: pi(z) (linear), 2^pi(z) (Legendre, reported
// by its exponent) and B(x, z) = sum_{p<z} {x/p} prod_{q<p}(1 - 1/q).
// Exact quantities are asserted; ratio columns are measurements only.

#pragma once

#include "lpfsieve/densities.hpp"
#include "lpfsieve/errors.hpp"
#include "lpfsieve/legendre_moebius.hpp"
#include "lpfsieve/prime_table.hpp"
#include "lpfsieve/rational.hpp"
#include "lpfsieve/sieve_core.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

namespace lpfsieve {

inline constexpr std::uint64_t kDefaultMoebiusCheckMaxZ = 31;

struct EvaluationOptions {
    bool moebius_check = true;
    // Moebius cross-check runs only for z up to this bound
    std::uint64_t moebius_check_max_z = kDefaultMoebiusCheckMaxZ;
    bool frac_remainder = false;
    std::uint64_t max_pi_z = kDefaultMaxPiZ;
    SieveOptions sieve{};
};

struct ErrorRecord {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    std::uint64_t survivors = 0;
    Rational main_term;
    Rational error;
    std::uint64_t pi_z = 0;                // number of sifting primes, pi(z - 1)
    std::uint64_t log2_legendre_bound = 0; // exponent of 2^pi(z)
    std::optional<Rational> b3_bound;
    std::optional<Rational> frac_remainder;
    std::optional<Real> ratio_error_to_pi_z;
    std::optional<Real> ratio_error_log_x_over_x;
    std::optional<bool> moebius_agrees;
    std::optional<bool> frac_agrees;
    std::vector<std::string> flags;
    std::optional<std::string> failure;    // point could not be evaluated

    // True when every asserted exact check that ran has passed.
    bool exact_checks_pass() const {
        return !failure && moebius_agrees.value_or(true) && frac_agrees.value_or(true);
    }
};

inline ErrorRecord evaluate_point(std::uint64_t x, std::uint64_t z, const EvaluationOptions& opt,
                                  const PrimeTable& table) {
    if (z < 2 || z > x)
        throw std::invalid_argument("evaluation point needs 2 <= z <= x, got x=" + std::to_string(x) +
                                    " z=" + std::to_string(z));
    ErrorRecord rec;
    rec.x = x;
    rec.z = z;
    rec.survivors = survivor_count(x, z, table, opt.sieve);
    rec.main_term = Rational::from_unsigned(x) * mertens_product(z, table);
    rec.error = Rational::from_unsigned(rec.survivors) - rec.main_term;
    rec.pi_z = table.primes_below(z).size();
    rec.log2_legendre_bound = rec.pi_z;
    rec.b3_bound = frac_bound_b3(x, z, table);

    const Rational abs_error = rec.error.abs();
    if (rec.pi_z > 0) rec.ratio_error_to_pi_z = abs_error.to_real() / Real(rec.pi_z);
    if (x >= 2) rec.ratio_error_log_x_over_x = abs_error.to_real() * boost::multiprecision::log(Real(x)) / Real(x);

    if (opt.moebius_check && z <= opt.moebius_check_max_z) {
        try {
            const std::int64_t legendre = legendre_sum(x, z, table, opt.max_pi_z);
            rec.moebius_agrees = legendre == static_cast<std::int64_t>(rec.survivors);
            rec.flags.emplace_back(*rec.moebius_agrees ? "moebius_ok" : "moebius_mismatch");
        } catch (const ResourceLimitError&) {
            rec.flags.emplace_back("moebius_capped");
        }
    }
    if (opt.frac_remainder) {
        try {
            rec.frac_remainder = frac_remainder_sum(x, z, table, opt.max_pi_z);
            rec.frac_agrees = *rec.frac_remainder == rec.error;
            rec.flags.emplace_back(*rec.frac_agrees ? "frac_ok" : "frac_mismatch");
        } catch (const ResourceLimitError&) {
            rec.flags.emplace_back("frac_capped");
        } catch (const OverflowError&) {
            rec.flags.emplace_back("frac_capped");
        }
    }
    return rec;
}

// How z is derived from x in a sweep.
struct ZRule {
    enum class Kind { Sqrt, Fixed, LogX };
    Kind kind = Kind::Sqrt;
    std::uint64_t fixed = 0;

    // Sqrt uses floor(sqrt(x)) + 1 so every composite <= x is sifted.
    std::uint64_t z_for(std::uint64_t x) const {
        switch (kind) {
            case Kind::Sqrt: return isqrt(x) + 1;
            case Kind::Fixed: return fixed;
            case Kind::LogX: {
                const double lx = x > 0 ? std::floor(std::log(static_cast<double>(x))) : 0.0;
                return std::max<std::uint64_t>(2, static_cast<std::uint64_t>(lx));
            }
        }
        return 0;
    }

    std::string name() const {
        switch (kind) {
            case Kind::Sqrt: return "sqrt";
            case Kind::Fixed: return "fixed:" + std::to_string(fixed);
            case Kind::LogX: return "logx";
        }
        return "?";
    }
};

enum class OutputFormat { Csv, Json };

struct SweepConfig {
    std::vector<std::uint64_t> x_values;
    ZRule z_rule;
    bool enable_moebius_cross_check = true;
    bool enable_frac_remainder = false;
    OutputFormat output = OutputFormat::Csv;
    std::uint64_t max_pi_z = kDefaultMaxPiZ;
    std::uint64_t segment_size = kDefaultSegmentSize;
    unsigned threads = 1;
    // --moebius-check lifts the z <= 31 default window (the pi(z) cap still applies)
    bool force_moebius_check = false;

    std::vector<std::pair<std::uint64_t, std::uint64_t>> points() const {
        std::vector<std::pair<std::uint64_t, std::uint64_t>> pts;
        pts.reserve(x_values.size());
        for (const std::uint64_t x : x_values) pts.emplace_back(x, z_rule.z_for(x));
        std::sort(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        return pts;
    }

    EvaluationOptions evaluation_options() const {
        EvaluationOptions opt;
        opt.moebius_check = enable_moebius_cross_check || force_moebius_check;
        opt.moebius_check_max_z = force_moebius_check ? UINT64_MAX : kDefaultMoebiusCheckMaxZ;
        opt.frac_remainder = enable_frac_remainder;
        opt.max_pi_z = max_pi_z;
        opt.sieve.segment_size = segment_size;
        return opt;
    }

    // Throws ConfigError unless every point satisfies 2 <= z <= x <= cap.
    void validate() const {
        if (segment_size == 0) throw ConfigError("segment size must be positive");
        if (threads == 0) throw ConfigError("thread count must be positive");
        if (z_rule.kind == ZRule::Kind::Fixed && z_rule.fixed < 2) throw ConfigError("fixed z must be >= 2");
        for (const auto& [x, z] : points()) {
            if (x > kDefaultMaxX)
                throw ResourceLimitError("x=" + std::to_string(x) + " exceeds the cap " + std::to_string(kDefaultMaxX));
            if (z < 2 || z > x)
                throw ConfigError("point x=" + std::to_string(x) + " z=" + std::to_string(z) +
                                  " violates 2 <= z <= x (z rule " + z_rule.name() + ")");
        }
    }

    // Smallest table limit that covers every point.
    std::uint64_t required_table_limit() const {
        std::uint64_t lim = 2;
        for (const auto& [x, z] : points()) lim = std::max({lim, z - 1, isqrt(x)});
        return lim;
    }
};

// Evaluate every configured point; per-point failures land in the row.
// Output order is (x, z) regardless of the thread count.
inline std::vector<ErrorRecord> run_sweep(const SweepConfig& config, const PrimeTable& table) {
    const auto pts = config.points();
    const EvaluationOptions opt = config.evaluation_options();
    std::vector<ErrorRecord> out(pts.size());

    auto eval = [&](std::size_t i) {
        const auto [x, z] = pts[i];
        try {
            out[i] = evaluate_point(x, z, opt, table);
        } catch (const std::exception& e) {
            out[i] = ErrorRecord{};
            out[i].x = x;
            out[i].z = z;
            out[i].failure = e.what();
        }
    };

    const unsigned workers = std::max(1u, std::min<unsigned>(config.threads, static_cast<unsigned>(pts.size())));
    if (workers <= 1) {
        for (std::size_t i = 0; i < pts.size(); ++i) eval(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < pts.size(); i = next++) eval(i);
        });
    pool.clear();
    return out;
}

struct ChebyshevRecord {
    std::uint64_t x = 0;
    std::uint64_t z_used = 0;
    std::uint64_t pi_x = 0;
    std::uint64_t survivors = 0;
    std::uint64_t pi_z = 0;          // pi(z_used - 1) = pi(floor(sqrt x))
    std::uint64_t s_plus_pi_z = 0;
    Real mertens_upper;              // x / log(sqrt x)
    bool holds_54 = false;           // pi(x) <= S + pi(z), exact
    bool holds_53 = false;           // S < x / log(sqrt x) + pi(z), diagnostic (constant 1)
};

inline ChebyshevRecord chebyshev_check(std::uint64_t x, const PrimeTable& table, const SieveOptions& sieve = {}) {
    if (x < 2) throw std::invalid_argument("chebyshev_check: x must be >= 2");
    if (x > table.limit())
        throw OutOfRangeError("chebyshev_check needs pi(" + std::to_string(x) + "), table limit is " +
                              std::to_string(table.limit()));
    ChebyshevRecord rec;
    rec.x = x;
    rec.z_used = isqrt(x) + 1;
    rec.pi_x = prime_count(x, table);
    rec.survivors = survivor_count(x, rec.z_used, table, sieve);
    rec.pi_z = prime_count(rec.z_used - 1, table);
    rec.s_plus_pi_z = rec.survivors + rec.pi_z;
    rec.holds_54 = rec.pi_x <= rec.s_plus_pi_z;
    rec.mertens_upper = Real(x) / boost::multiprecision::log(boost::multiprecision::sqrt(Real(x)));
    rec.holds_53 = Real(rec.survivors) < rec.mertens_upper + Real(rec.pi_z);
    return rec;
}

struct BlowupRow {
    std::uint64_t z = 0;
    std::uint64_t pi_z = 0;
    std::uint64_t term_count = 0;
    std::optional<std::int64_t> value;
    double wall_time_s = 0.0;
    std::optional<std::string> error;
};

// Legendre evaluation at every z where a new prime enters (z = 2 and z = p + 1),
// up to z_max. Stops with an error row at the cap.
inline std::vector<BlowupRow> legendre_blowup_probe(std::uint64_t z_max, std::uint64_t x, const PrimeTable& table,
                                                    std::uint64_t cap = kDefaultMaxPiZ) {
    std::vector<BlowupRow> rows;
    if (z_max < 2) return rows;
    std::vector<std::uint64_t> zs{2};
    for (const std::uint64_t p : table.primes_below(z_max))
        if (p + 1 <= z_max) zs.push_back(p + 1);
    for (const std::uint64_t z : zs) {
        BlowupRow row;
        row.z = z;
        row.pi_z = table.primes_below(z).size();
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const MoebiusSumBreakdown b = legendre_sum_breakdown(x, z, table, cap);
            row.term_count = b.term_count;
            row.value = static_cast<std::int64_t>(b.total);
        } catch (const CapExceededError& e) {
            row.error = e.what();
        }
        row.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rows.push_back(std::move(row));
        if (rows.back().error) break;
    }
    return rows;
}

}  // namespace lpfsieve
