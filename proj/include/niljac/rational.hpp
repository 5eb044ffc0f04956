#pragma once

// Exact rational scalars (characteristic 0).  Values are kept in lowest
// terms with a positive denominator by the boost backend.

#include <boost/multiprecision/cpp_int.hpp>

#include <string>

#include "niljac/errors.hpp"

namespace niljac {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

class Rational {
  public:
    // Field descriptor.  Rationals need no runtime data; the struct exists so
    // that every field type exposes the same Spec interface.
    struct Spec {
        Rational zero() const { return Rational(0); }
        Rational one() const { return Rational(1); }
        Rational from_long(long n) const { return Rational(n); }

        // Builds num/den from decimal digit strings; den == "" means 1.
        Rational from_decimal(bool negative, const std::string& num,
                              const std::string& den) const {
            BigInt n(num);
            BigInt d = den.empty() ? BigInt(1) : BigInt(den);
            if (d == 0) throw ParseError("zero denominator");
            if (negative) n = -n;
            return Rational(BigRat(n, d));
        }

        // 0 for characteristic zero.
        long characteristic() const { return 0; }
        std::string describe() const { return "Q"; }
        bool operator==(const Spec&) const = default;
    };

    Rational() : v_(0) {}
    explicit Rational(long n) : v_(n) {}
    explicit Rational(BigRat v) : v_(std::move(v)) {}
    Rational(long num, long den) : v_(BigRat(num, den)) {
        if (den == 0) throw DivisionByZeroError("zero denominator");
    }

    Spec spec() const { return Spec{}; }

    bool is_zero() const { return v_ == 0; }
    bool is_one() const { return v_ == 1; }

    Rational operator+(const Rational& o) const { return Rational(v_ + o.v_); }
    Rational operator-(const Rational& o) const { return Rational(v_ - o.v_); }
    Rational operator*(const Rational& o) const { return Rational(v_ * o.v_); }
    Rational operator/(const Rational& o) const {
        if (o.is_zero()) throw DivisionByZeroError("division by zero rational");
        return Rational(v_ / o.v_);
    }
    Rational operator-() const { return Rational(-v_); }

    Rational& operator+=(const Rational& o) { v_ += o.v_; return *this; }
    Rational& operator-=(const Rational& o) { v_ -= o.v_; return *this; }
    Rational& operator*=(const Rational& o) { v_ *= o.v_; return *this; }

    bool operator==(const Rational& o) const { return v_ == o.v_; }

    Rational mul_int(long n) const { return Rational(v_ * n); }

    // Exact division by a small integer.  n == 0 cannot be absorbed into the
    // field (characteristic 0), so it is a plain division by zero.
    Rational div_int(long n) const {
        if (n == 0) throw DivisionByZeroError("division by integer 0");
        return Rational(v_ / n);
    }

    Rational inv() const {
        if (is_zero()) throw DivisionByZeroError("inverse of zero");
        return Rational(1 / v_);
    }

    bool is_negative() const { return v_ < 0; }
    Rational abs() const { return v_ < 0 ? Rational(-v_) : *this; }

    const BigRat& value() const { return v_; }
    BigInt numerator() const { return boost::multiprecision::numerator(v_); }
    BigInt denominator() const { return boost::multiprecision::denominator(v_); }

    // Integer staging for bulk products: callers may accumulate numerators
    // over BigInt against a common denominator and rebuild (with a single
    // normalization) through from_ratio.
    using StagedInt = BigInt;
    static Rational from_ratio(StagedInt num, const StagedInt& den) {
        return Rational(BigRat(std::move(num), den));
    }

    // Canonical text form: "n" or "n/d", lowest terms, sign on the numerator.
    std::string str() const {
        std::string s = numerator().str();
        BigInt d = denominator();
        if (d != 1) s += "/" + d.str();
        return s;
    }

  private:
    BigRat v_;
};

}  // namespace niljac
