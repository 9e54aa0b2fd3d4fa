// errors.hpp
// Exception types shared by every lpfsieve module.
//
// The CLI maps these onto exit statuses:
//   AssertionFailure  -> 1
//   ConfigError       -> 2
//   ResourceLimitError, CapExceededError -> 3

#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lpfsieve {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Requested work would exceed the memory budget or the 64-bit headroom cap on x.
class ResourceLimitError : public Error {
public:
    using Error::Error;
};

// A Moebius enumeration would need more than 2^cap terms.
class CapExceededError : public ResourceLimitError {
public:
    CapExceededError(std::uint64_t prime_count, std::uint64_t cap)
        : ResourceLimitError("divisor enumeration over " + std::to_string(prime_count) +
                             " primes needs 2^" + std::to_string(prime_count) +
                             " terms, cap is 2^" + std::to_string(cap)),
          prime_count_(prime_count),
          cap_(cap) {}

    std::uint64_t prime_count() const noexcept { return prime_count_; }
    std::uint64_t cap() const noexcept { return cap_; }

private:
    std::uint64_t prime_count_;
    std::uint64_t cap_;
};

// A squarefree divisor product does not fit the requested integer width.
class OverflowError : public Error {
public:
    using Error::Error;
};

// Query outside the coverage of a PrimeTable.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

// An exact identity failed. Always an implementation bug.
class AssertionFailure : public Error {
public:
    using Error::Error;
};

}  // namespace lpfsieve
