// prime_table.hpp
// PrimeTable: every prime <= limit, built by a segmented sieve of
// Eratosthenes. Immutable after construction and safe to share across
// threads.

#pragma once

#include "lpfsieve/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <span>
#include <string>
#include <vector>

namespace lpfsieve {

inline constexpr std::uint64_t kDefaultSegmentSize = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kDefaultMemoryBudget = std::uint64_t{4} << 30;  // bytes
inline constexpr const char* kMemoryBudgetEnv = "LPFSIEVE_MEMORY_BUDGET";

// Memory budget in bytes; LPFSIEVE_MEMORY_BUDGET overrides the default.
inline std::uint64_t memory_budget() {
    if (const char* env = std::getenv(kMemoryBudgetEnv); env != nullptr && *env != '\0') {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 10);
        if (end != nullptr && *end == '\0') return v;
        throw ConfigError(std::string(kMemoryBudgetEnv) + " is not an unsigned integer: " + env);
    }
    return kDefaultMemoryBudget;
}

// floor(sqrt(n)), exact for all 64-bit n.
constexpr std::uint64_t isqrt(std::uint64_t n) {
    if (n < 2) return n;
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && static_cast<unsigned __int128>(r) * r > n) --r;
    while (static_cast<unsigned __int128>(r + 1) * (r + 1) <= n) ++r;
    return r;
}

class PrimeTable {
public:
    PrimeTable() = default;
    PrimeTable(std::uint64_t limit, std::vector<std::uint64_t> primes)
        : limit_(limit), primes_(std::move(primes)) {}

    std::uint64_t limit() const noexcept { return limit_; }
    std::span<const std::uint64_t> primes() const noexcept { return primes_; }
    std::size_t size() const noexcept { return primes_.size(); }
    std::uint64_t operator[](std::size_t i) const { return primes_[i]; }

    // Primes strictly below z. Requires z <= limit + 1.
    std::span<const std::uint64_t> primes_below(std::uint64_t z) const {
        require_covers_below(z);
        const auto end = std::lower_bound(primes_.begin(), primes_.end(), z);
        return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
    }

    // pi(x). Requires x <= limit.
    std::uint64_t count_up_to(std::uint64_t x) const {
        if (x > limit_)
            throw OutOfRangeError("prime count at " + std::to_string(x) + " exceeds table limit " +
                                  std::to_string(limit_));
        return static_cast<std::uint64_t>(std::upper_bound(primes_.begin(), primes_.end(), x) -
                                          primes_.begin());
    }

    bool is_prime(std::uint64_t n) const {
        if (n > limit_)
            throw OutOfRangeError("primality of " + std::to_string(n) + " exceeds table limit " +
                                  std::to_string(limit_));
        return std::binary_search(primes_.begin(), primes_.end(), n);
    }

    // Index of prime p in the table; p must be a tabulated prime.
    std::size_t index_of(std::uint64_t p) const {
        const auto it = std::lower_bound(primes_.begin(), primes_.end(), p);
        if (it == primes_.end() || *it != p)
            throw std::invalid_argument(std::to_string(p) + " is not a tabulated prime");
        return static_cast<std::size_t>(it - primes_.begin());
    }

    void require_covers_below(std::uint64_t z) const {
        if (limit_ != UINT64_MAX && z > limit_ + 1)
            throw OutOfRangeError("sifting bound z=" + std::to_string(z) + " needs primes up to " +
                                  std::to_string(z - 1) + ", table limit is " + std::to_string(limit_));
    }

private:
    std::uint64_t limit_ = 0;
    std::vector<std::uint64_t> primes_;
};

// Rough byte footprint of a table: the primes vector (1.26 x / ln x entries
// is an upper bound on pi(x) for x >= 17) plus one sieve segment.
inline std::uint64_t estimated_table_bytes(std::uint64_t limit, std::uint64_t segment_size = kDefaultSegmentSize) {
    const double x = static_cast<double>(std::max<std::uint64_t>(limit, 17));
    const double entries = 1.26 * x / std::log(x);
    return static_cast<std::uint64_t>(entries * sizeof(std::uint64_t)) + segment_size;
}

inline PrimeTable build_prime_table(std::uint64_t limit, std::uint64_t budget_bytes = memory_budget(),
                                    std::uint64_t segment_size = kDefaultSegmentSize) {
    if (segment_size == 0) throw ConfigError("segment size must be positive");
    if (estimated_table_bytes(limit, segment_size) > budget_bytes)
        throw ResourceLimitError("prime table up to " + std::to_string(limit) + " needs ~" +
                                 std::to_string(estimated_table_bytes(limit, segment_size)) +
                                 " bytes, budget is " + std::to_string(budget_bytes));
    std::vector<std::uint64_t> primes;
    if (limit < 2) return PrimeTable(limit, std::move(primes));

    // base primes up to sqrt(limit) by a plain sieve
    const std::uint64_t root = isqrt(limit);
    std::vector<char> small(root + 1, 1);
    std::vector<std::uint64_t> base;
    for (std::uint64_t i = 2; i <= root; ++i) {
        if (!small[i]) continue;
        base.push_back(i);
        for (std::uint64_t j = i * i; j <= root; j += i) small[j] = 0;
    }

    primes.reserve(static_cast<std::size_t>(estimated_table_bytes(limit, 0) / sizeof(std::uint64_t)));
    std::vector<char> seg(segment_size);
    for (std::uint64_t lo = 2; lo <= limit; lo += segment_size) {
        const std::uint64_t hi = std::min(limit, lo + segment_size - 1);  // inclusive
        std::fill(seg.begin(), seg.begin() + static_cast<std::ptrdiff_t>(hi - lo + 1), 1);
        for (const std::uint64_t p : base) {
            if (p * p > hi) break;
            std::uint64_t start = std::max(p * p, (lo + p - 1) / p * p);
            for (std::uint64_t j = start; j <= hi; j += p) seg[j - lo] = 0;
        }
        for (std::uint64_t n = lo; n <= hi; ++n)
            if (seg[n - lo]) primes.push_back(n);
        if (hi == limit) break;
    }
    return PrimeTable(limit, std::move(primes));
}

// pi(x) against a table.
inline std::uint64_t prime_count(std::uint64_t x, const PrimeTable& table) { return table.count_up_to(x); }

}  // namespace lpfsieve
