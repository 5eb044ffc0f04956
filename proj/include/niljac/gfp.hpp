#pragma once

// Prime-field scalars GF(p).  Elements store the canonical representative in
// [0, p) together with their modulus; mixing moduli raises FieldMismatchError.

#include <cstdint>
#include <string>

#include "niljac/errors.hpp"

namespace niljac {

namespace detail {

inline std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t p) {
    return static_cast<std::uint64_t>((static_cast<unsigned __int128>(a) * b) % p);
}

inline std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t p) {
    std::uint64_t r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, p);
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    return r;
}

// Deterministic Miller-Rabin; the witness set below covers all 64-bit inputs.
inline bool is_prime_u64(std::uint64_t n) {
    if (n < 2) return false;
    for (std::uint64_t q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        if (n % q == 0) return n == q;
    }
    std::uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull,
                            23ull, 29ull, 31ull, 37ull}) {
        std::uint64_t x = powmod_u64(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool witness = true;
        for (int i = 1; i < s; ++i) {
            x = mulmod_u64(x, x, n);
            if (x == n - 1) { witness = false; break; }
        }
        if (witness) return false;
    }
    return true;
}

}  // namespace detail

class GFp {
  public:
    // Field descriptor: the modulus.  Primality is checked once here, so every
    // element construction path goes through a validated Spec.
    struct Spec {
        std::uint64_t p = 0;

        Spec() = default;
        explicit Spec(std::uint64_t modulus) : p(modulus) {
            if (p > (std::uint64_t(1) << 62))
                throw Error("GF(p) modulus too large");
            if (!detail::is_prime_u64(p))
                throw Error("GF(p) modulus " + std::to_string(p) + " is not prime");
        }

        GFp zero() const { return GFp(0, *this); }
        GFp one() const { return GFp(1 % p, *this); }

        GFp from_long(long n) const {
            std::int64_t m = n % static_cast<std::int64_t>(p);
            if (m < 0) m += static_cast<std::int64_t>(p);
            return GFp(static_cast<std::uint64_t>(m), *this);
        }

        // Builds num/den from decimal digit strings via modular inversion.
        GFp from_decimal(bool negative, const std::string& num,
                         const std::string& den) const {
            GFp n = reduce_digits(num);
            if (negative) n = -n;
            if (den.empty()) return n;
            GFp d = reduce_digits(den);
            if (d.is_zero())
                throw ParseError("denominator divisible by field characteristic " +
                                 std::to_string(p));
            return n / d;
        }

        long characteristic() const { return static_cast<long>(p); }
        std::string describe() const { return "GF(" + std::to_string(p) + ")"; }
        bool operator==(const Spec&) const = default;

      private:
        GFp reduce_digits(const std::string& digits) const {
            std::uint64_t v = 0;
            for (char c : digits) v = (v * 10 + std::uint64_t(c - '0')) % p;
            return GFp(v, *this);
        }
    };

    GFp(std::uint64_t canonical, Spec spec) : v_(canonical), p_(spec.p) {}

    Spec spec() const { Spec s; s.p = p_; return s; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    GFp operator+(const GFp& o) const {
        check(o);
        std::uint64_t s = v_ + o.v_;
        if (s >= p_) s -= p_;
        return GFp(s, spec());
    }
    GFp operator-(const GFp& o) const {
        check(o);
        std::uint64_t s = v_ >= o.v_ ? v_ - o.v_ : v_ + p_ - o.v_;
        return GFp(s, spec());
    }
    GFp operator*(const GFp& o) const {
        check(o);
        return GFp(detail::mulmod_u64(v_, o.v_, p_), spec());
    }
    GFp operator/(const GFp& o) const { return *this * o.inv(); }
    GFp operator-() const { return GFp(v_ == 0 ? 0 : p_ - v_, spec()); }

    GFp& operator+=(const GFp& o) { return *this = *this + o; }
    GFp& operator-=(const GFp& o) { return *this = *this - o; }
    GFp& operator*=(const GFp& o) { return *this = *this * o; }

    bool operator==(const GFp& o) const {
        check(o);
        return v_ == o.v_;
    }

    GFp mul_int(long n) const { return *this * spec().from_long(n); }

    // Division by a small integer that is 0 mod p is the characteristic
    // obstruction (e.g. integrating y^(p-1) or undoing a degree-p shift).
    GFp div_int(long n) const {
        GFp d = spec().from_long(n);
        if (d.is_zero())
            throw CharacteristicTooSmallError(
                "division by " + std::to_string(n) + " impossible in " +
                spec().describe());
        return *this / d;
    }

    GFp inv() const {
        if (v_ == 0) throw DivisionByZeroError("inverse of zero in " + spec().describe());
        // Extended Euclid on (v, p); p prime guarantees gcd 1.
        std::int64_t t = 0, new_t = 1;
        std::int64_t r = static_cast<std::int64_t>(p_), new_r = static_cast<std::int64_t>(v_);
        while (new_r != 0) {
            std::int64_t q = r / new_r;
            t -= q * new_t; std::swap(t, new_t);
            r -= q * new_r; std::swap(r, new_r);
        }
        if (t < 0) t += static_cast<std::int64_t>(p_);
        return GFp(static_cast<std::uint64_t>(t), spec());
    }

    // Canonical representatives carry no sign; these exist so the shared
    // polynomial printer treats every GF(p) coefficient as non-negative.
    bool is_negative() const { return false; }
    GFp abs() const { return *this; }

    std::uint64_t value() const { return v_; }
    std::string str() const { return std::to_string(v_); }

  private:
    void check(const GFp& o) const {
        if (p_ != o.p_)
            throw FieldMismatchError("mixing GF(" + std::to_string(p_) + ") with GF(" +
                                     std::to_string(o.p_) + ")");
    }

    std::uint64_t v_;
    std::uint64_t p_;
};

}  // namespace niljac
