#pragma once

// Monomials in x, y, z as exponent triples, ordered by the one global
// monomial order used everywhere: lexicographic with x > y > z.

#include <array>
#include <compare>
#include <cstdint>

#include "niljac/errors.hpp"

namespace niljac {

enum class Var : int { x = 0, y = 1, z = 2 };

inline constexpr const char* var_name(Var v) {
    switch (v) {
        case Var::x: return "x";
        case Var::y: return "y";
        default: return "z";
    }
}

class Monomial {
  public:
    // Exponent bound keeps products safely representable.
    static constexpr std::uint32_t kMaxExp = 1u << 24;

    constexpr Monomial() : e_{0, 0, 0} {}
    Monomial(std::uint32_t ex, std::uint32_t ey, std::uint32_t ez) : e_{ex, ey, ez} {
        if (ex >= kMaxExp || ey >= kMaxExp || ez >= kMaxExp)
            throw Error("monomial exponent too large");
    }

    static Monomial var(Var v, std::uint32_t e = 1) {
        Monomial m;
        m.e_[static_cast<int>(v)] = e;
        return m;
    }

    std::uint32_t exp(Var v) const { return e_[static_cast<int>(v)]; }
    std::uint64_t total_degree() const {
        return std::uint64_t(e_[0]) + e_[1] + e_[2];
    }
    bool is_constant() const { return e_[0] == 0 && e_[1] == 0 && e_[2] == 0; }

    Monomial operator*(const Monomial& o) const {
        return Monomial(e_[0] + o.e_[0], e_[1] + o.e_[1], e_[2] + o.e_[2]);
    }

    bool divides(const Monomial& o) const {
        return e_[0] <= o.e_[0] && e_[1] <= o.e_[1] && e_[2] <= o.e_[2];
    }

    // Precondition: this->divides(o) was checked by the caller.
    Monomial divide_into(const Monomial& o) const {
        return Monomial(o.e_[0] - e_[0], o.e_[1] - e_[1], o.e_[2] - e_[2]);
    }

    // Lex order with x > y > z; arrays compare lexicographically.
    friend std::strong_ordering operator<=>(const Monomial& a, const Monomial& b) {
        return a.e_ <=> b.e_;
    }
    friend bool operator==(const Monomial& a, const Monomial& b) = default;

    // Drops the exponent of `v` (used by coeff_in).
    Monomial without(Var v) const {
        Monomial m = *this;
        m.e_[static_cast<int>(v)] = 0;
        return m;
    }

  private:
    std::array<std::uint32_t, 3> e_;
};

}  // namespace niljac
