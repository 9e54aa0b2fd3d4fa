// sieve_core.hpp
// Exact least-prime-factor classification of [1, x] by a segmented sieve.
//
// Sifting primes are always the primes p < z (strict). The number 1 has no
// prime factor and is always a survivor.
//
// Only primes p <= sqrt(x) have multiples other than p itself inside [1, x]
// with least prime factor p (n = p*m with lpf(n) = p forces m = 1 or m >= p).
// Every routine here exploits that: primes in (sqrt(x), z) classify exactly
// one integer, themselves.

#pragma once

#include "lpfsieve/errors.hpp"
#include "lpfsieve/prime_table.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace lpfsieve {

// x is capped so that every floor(x/d) and every d*p product stays exact.
inline constexpr std::uint64_t kDefaultMaxX = std::uint64_t{1} << 48;

struct SieveOptions {
    std::uint64_t segment_size = kDefaultSegmentSize;
    std::uint64_t max_x = kDefaultMaxX;
};

struct LpfCensus {
    std::uint64_t x = 0;
    std::uint64_t z = 0;
    // (p, #{n <= x : lpf(n) = p}) for every prime p < z, increasing in p
    std::vector<std::pair<std::uint64_t, std::uint64_t>> counts;
    std::uint64_t survivors = 0;

    std::uint64_t sifted() const {
        std::uint64_t s = 0;
        for (const auto& [p, c] : counts) s += c;
        return s;
    }

    std::uint64_t count_for(std::uint64_t p) const {
        const auto it = std::lower_bound(counts.begin(), counts.end(), p,
                                         [](const auto& e, std::uint64_t v) { return e.first < v; });
        return (it != counts.end() && it->first == p) ? it->second : 0;
    }
};

// One half-open block [lo, hi) of the classification. marks[n - lo] is 0 for
// a survivor, otherwise 1 + the table index of lpf(n).
struct Segment {
    std::uint64_t lo = 0;
    std::uint64_t hi = 0;
    std::vector<std::uint32_t> lpf_marks;

    static constexpr std::uint32_t kSurvivor = 0;

    std::uint64_t size() const noexcept { return hi - lo; }
    std::uint32_t mark_of(std::uint64_t n) const { return lpf_marks[n - lo]; }
};

namespace detail {

inline void check_sieve_args(std::uint64_t x, std::uint64_t z, const PrimeTable& table, const SieveOptions& opt) {
    if (z < 2) throw std::invalid_argument("sifting bound z must be >= 2, got " + std::to_string(z));
    if (x > opt.max_x)
        throw ResourceLimitError("x=" + std::to_string(x) + " exceeds the configured cap " + std::to_string(opt.max_x));
    if (opt.segment_size == 0) throw ConfigError("segment size must be positive");
    table.require_covers_below(z);
}

}  // namespace detail

// Classify [lo, hi) against the primes below z, for integers up to x.
// hi is clipped to x + 1. Independent of any other segment.
inline Segment classify_segment(std::uint64_t lo, std::uint64_t hi, std::uint64_t x, std::uint64_t z,
                                const PrimeTable& table) {
    Segment seg;
    seg.lo = std::max<std::uint64_t>(lo, 1);
    seg.hi = std::max(seg.lo, std::min(hi, x + 1));
    seg.lpf_marks.assign(seg.size(), Segment::kSurvivor);
    if (seg.size() == 0) return seg;

    const auto sifting = table.primes_below(z);
    const std::uint64_t root = isqrt(seg.hi - 1);
    std::size_t i = 0;
    // increasing p, first writer wins: the first prime to reach n is lpf(n)
    for (; i < sifting.size() && sifting[i] <= root; ++i) {
        const std::uint64_t p = sifting[i];
        const auto tag = static_cast<std::uint32_t>(i + 1);
        if (p >= seg.lo && p < seg.hi) seg.lpf_marks[p - seg.lo] = tag;
        std::uint64_t n = std::max(p * p, (seg.lo + p - 1) / p * p);
        for (; n < seg.hi; n += p)
            if (seg.lpf_marks[n - seg.lo] == Segment::kSurvivor) seg.lpf_marks[n - seg.lo] = tag;
    }
    // remaining sifting primes only classify themselves
    auto first = std::lower_bound(sifting.begin() + static_cast<std::ptrdiff_t>(i), sifting.end(), seg.lo);
    for (auto it = first; it != sifting.end() && *it < seg.hi; ++it)
        seg.lpf_marks[*it - seg.lo] = static_cast<std::uint32_t>(it - sifting.begin() + 1);
    return seg;
}

// Exact census of [1, x] by least prime factor below z.
inline LpfCensus lpf_census(std::uint64_t x, std::uint64_t z, const PrimeTable& table, const SieveOptions& opt = {}) {
    detail::check_sieve_args(x, z, table, opt);
    const auto sifting = table.primes_below(z);
    LpfCensus census;
    census.x = x;
    census.z = z;
    std::vector<std::uint64_t> hist(sifting.size(), 0);
    for (std::uint64_t lo = 1; lo <= x; lo += opt.segment_size) {
        const Segment seg = classify_segment(lo, lo + opt.segment_size, x, z, table);
        for (const std::uint32_t m : seg.lpf_marks) {
            if (m == Segment::kSurvivor)
                ++census.survivors;
            else
                ++hist[m - 1];
        }
        if (x - lo < opt.segment_size) break;
    }
    census.counts.reserve(sifting.size());
    for (std::size_t i = 0; i < sifting.size(); ++i) census.counts.emplace_back(sifting[i], hist[i]);
    return census;
}

// #{n <= x : n has no prime factor < z}, without keeping per-prime classes.
inline std::uint64_t survivor_count(std::uint64_t x, std::uint64_t z, const PrimeTable& table,
                                    const SieveOptions& opt = {}) {
    detail::check_sieve_args(x, z, table, opt);
    if (x == 0) return 0;
    if (z > x) return 1;  // every 1 < n <= x has lpf(n) <= n < z
    const std::uint64_t root = isqrt(x);
    // primes above sqrt(x) are handled by excluding (1, z) from the tally
    const auto crossing = table.primes_below(std::min(z, root + 1));

    std::vector<std::uint64_t> next(crossing.size());
    for (std::size_t i = 0; i < crossing.size(); ++i) next[i] = crossing[i];  // p itself is sifted

    std::vector<char> marked(static_cast<std::size_t>(std::min(opt.segment_size, x)));
    std::uint64_t survivors = 0;
    for (std::uint64_t lo = 1; lo <= x; lo += opt.segment_size) {
        const std::uint64_t hi = (x - lo < opt.segment_size) ? x + 1 : lo + opt.segment_size;
        const std::size_t len = static_cast<std::size_t>(hi - lo);
        std::fill(marked.begin(), marked.begin() + static_cast<std::ptrdiff_t>(len), 0);
        for (std::size_t i = 0; i < crossing.size(); ++i) {
            const std::uint64_t p = crossing[i];
            std::uint64_t n = next[i];
            if (n == p && n < hi) {
                marked[n - lo] = 1;
                n = p * p;  // p*m for 1 < m < p was reached by a smaller prime
            }
            for (; n < hi; n += p) marked[n - lo] = 1;
            next[i] = n;
        }
        // tally 1 and every unmarked n >= z
        const std::uint64_t tally_from = std::max(lo, std::min(z, hi));
        if (lo == 1 && tally_from > 1) ++survivors;
        for (std::uint64_t n = tally_from; n < hi; ++n) survivors += marked[n - lo] == 0;
        if (hi == x + 1) break;
    }
    return survivors;
}

// #{n <= x : lpf(n) = p}, as the count of m <= floor(x/p) with no prime factor < p.
inline std::uint64_t count_lpf(std::uint64_t x, std::uint64_t p, const PrimeTable& table,
                               const SieveOptions& opt = {}) {
    if (p > table.limit())
        throw OutOfRangeError("prime " + std::to_string(p) + " exceeds table limit " + std::to_string(table.limit()));
    if (!table.is_prime(p)) throw std::invalid_argument(std::to_string(p) + " is not prime");
    if (x > opt.max_x)
        throw ResourceLimitError("x=" + std::to_string(x) + " exceeds the configured cap " + std::to_string(opt.max_x));
    if (p > x) return 0;
    return survivor_count(x / p, p, table, opt);
}

}  // namespace lpfsieve
