// rational.hpp
// Exact rational numbers (GMP mpq backed) and a high-precision real type
// (MPFR backed) for the diagnostic columns.
//
// Rational keeps the mpq invariant at all times: lowest terms, positive
// denominator, zero is 0/1.

#pragma once

#include <gmpxx.h>
#include <mpfr.h>

#include <boost/multiprecision/mpfr.hpp>

#include <compare>
#include <cstdint>
#include <cstdlib>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lpfsieve {

// 80 decimal digits of working precision; every real-valued column is
// printed with at most 30 significant digits.
using Real = boost::multiprecision::number<boost::multiprecision::mpfr_float_backend<80>,
                                           boost::multiprecision::et_off>;

namespace detail {

inline mpz_class to_mpz(unsigned __int128 v) {
    const auto hi = static_cast<std::uint64_t>(v >> 64);
    const auto lo = static_cast<std::uint64_t>(v);
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &hi);
    r <<= 64;
    mpz_class low;
    mpz_import(low.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &lo);
    r += low;
    return r;
}

inline mpz_class to_mpz(std::uint64_t v) {
    mpz_class r;
    mpz_import(r.get_mpz_t(), 1, 1, sizeof(std::uint64_t), 0, 0, &v);
    return r;
}

inline mpz_class to_mpz(__int128 v) {
    if (v >= 0) return to_mpz(static_cast<unsigned __int128>(v));
    mpz_class r = to_mpz(static_cast<unsigned __int128>(-(v + 1)));
    r += 1;
    return -r;
}

inline mpz_class to_mpz(std::int64_t v) { return to_mpz(static_cast<__int128>(v)); }

// Render an MPFR value with `digits` significant decimal digits.
inline std::string format_mpfr(mpfr_srcptr v, int digits) {
    char* buf = nullptr;
    if (mpfr_asprintf(&buf, "%.*Rg", digits, v) < 0 || buf == nullptr)
        throw std::runtime_error("mpfr_asprintf failed");
    std::string out(buf);
    mpfr_free_str(buf);
    return out;
}

}  // namespace detail

class Rational {
public:
    Rational() = default;

    Rational(std::int64_t n) : q_(detail::to_mpz(n)) {}  // NOLINT(google-explicit-constructor)
    Rational(int n) : q_(n) {}                           // NOLINT(google-explicit-constructor)

    Rational(const mpz_class& num, const mpz_class& den) {
        if (den == 0) throw std::domain_error("Rational: zero denominator");
        q_ = mpq_class(num, den);
        q_.canonicalize();
    }

    Rational(std::int64_t num, std::int64_t den) : Rational(detail::to_mpz(num), detail::to_mpz(den)) {}

    explicit Rational(const mpq_class& q) : q_(q) { q_.canonicalize(); }

    static Rational from_unsigned(std::uint64_t n) { return Rational(detail::to_mpz(n), mpz_class(1)); }

    // Accepts "n" or "n/d" with optional leading sign on n.
    static Rational parse(std::string_view text) {
        const std::string s(text);
        const auto slash = s.find('/');
        mpz_class num, den(1);
        if (num.set_str(s.substr(0, slash), 10) != 0)
            throw std::invalid_argument("Rational: bad numerator in '" + s + "'");
        if (slash != std::string::npos && den.set_str(s.substr(slash + 1), 10) != 0)
            throw std::invalid_argument("Rational: bad denominator in '" + s + "'");
        return Rational(num, den);
    }

    const mpz_class& numerator() const { return q_.get_num(); }
    const mpz_class& denominator() const { return q_.get_den(); }
    const mpq_class& mpq() const { return q_; }

    int sign() const { return sgn(q_); }
    bool is_zero() const { return sign() == 0; }
    bool is_integer() const { return q_.get_den() == 1; }

    Rational abs() const { return Rational(::abs(q_)); }

    // Largest integer <= value.
    mpz_class floor() const {
        mpz_class r;
        mpz_fdiv_q(r.get_mpz_t(), q_.get_num_mpz_t(), q_.get_den_mpz_t());
        return r;
    }

    // Always "num/den", including integers ("5/1").
    std::string to_string() const { return q_.get_num().get_str() + "/" + q_.get_den().get_str(); }

    std::string to_decimal(int significant_digits = 30) const {
        mpfr_t v;
        mpfr_init2(v, 384);
        mpfr_set_q(v, q_.get_mpq_t(), MPFR_RNDN);
        std::string out = detail::format_mpfr(v, significant_digits);
        mpfr_clear(v);
        return out;
    }

    Real to_real() const {
        Real r;
        mpfr_set_q(r.backend().data(), q_.get_mpq_t(), MPFR_RNDN);
        return r;
    }

    Rational& operator+=(const Rational& o) { q_ += o.q_; return *this; }
    Rational& operator-=(const Rational& o) { q_ -= o.q_; return *this; }
    Rational& operator*=(const Rational& o) { q_ *= o.q_; return *this; }
    Rational& operator/=(const Rational& o) {
        if (o.is_zero()) throw std::domain_error("Rational: division by zero");
        q_ /= o.q_;
        return *this;
    }

    friend Rational operator+(Rational a, const Rational& b) { return a += b; }
    friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
    friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
    friend Rational operator/(Rational a, const Rational& b) { return a /= b; }
    friend Rational operator-(const Rational& a) { return Rational(mpq_class(-a.q_)); }

    friend bool operator==(const Rational& a, const Rational& b) { return a.q_ == b.q_; }
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
        const int c = cmp(a.q_, b.q_);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    }

    friend std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.to_string(); }

private:
    mpq_class q_{0};
};

// True iff gcd(num, den) == 1 and den > 0.
inline bool is_reduced(const Rational& r) {
    mpz_class g;
    mpz_gcd(g.get_mpz_t(), r.numerator().get_mpz_t(), r.denominator().get_mpz_t());
    return g == 1 && r.denominator() > 0;
}

inline std::string format_real(const Real& r, int significant_digits = 30) {
    return detail::format_mpfr(r.backend().data(), significant_digits);
}

// Sign of (rational - real). Exact as long as the two differ by more than
// the real's working precision, which holds for every comparison made here.
inline int compare(const Rational& q, const Real& r) {
    Real qr = q.to_real();
    if (qr < r) return -1;
    if (qr > r) return 1;
    return 0;
}

}  // namespace lpfsieve
