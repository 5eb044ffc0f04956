#pragma once

// The Field concept every scalar type models, plus field-spec text parsing
// ("Q" / "GF(p)") used by file headers and the CLI.

#include <concepts>
#include <string>

#include "niljac/errors.hpp"
#include "niljac/gfp.hpp"
#include "niljac/rational.hpp"

namespace niljac {

template <class K>
concept Field = requires(const K a, const K b, long n, const typename K::Spec s) {
    { a + b } -> std::same_as<K>;
    { a - b } -> std::same_as<K>;
    { a* b } -> std::same_as<K>;
    { a / b } -> std::same_as<K>;
    { -a } -> std::same_as<K>;
    { a == b } -> std::convertible_to<bool>;
    { a.is_zero() } -> std::convertible_to<bool>;
    { a.is_one() } -> std::convertible_to<bool>;
    { a.inv() } -> std::same_as<K>;
    { a.mul_int(n) } -> std::same_as<K>;
    { a.div_int(n) } -> std::same_as<K>;
    { a.is_negative() } -> std::convertible_to<bool>;
    { a.abs() } -> std::same_as<K>;
    { a.spec() } -> std::same_as<typename K::Spec>;
    { a.str() } -> std::same_as<std::string>;
    { s.zero() } -> std::same_as<K>;
    { s.one() } -> std::same_as<K>;
    { s.from_long(n) } -> std::same_as<K>;
    { s.characteristic() } -> std::same_as<long>;
    { s.describe() } -> std::same_as<std::string>;
};

static_assert(Field<Rational>);
static_assert(Field<GFp>);

// Parses a field description: "Q" or "GF(p)" (whitespace-trimmed).
// `on_rational` / `on_gfp` receive the corresponding Spec; both must return
// the same type.
template <class FQ, class FP>
auto with_field_spec(const std::string& text, FQ&& on_rational, FP&& on_gfp) {
    std::string s;
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s == "Q") return on_rational(Rational::Spec{});
    if (s.size() > 4 && s.rfind("GF(", 0) == 0 && s.back() == ')') {
        std::string digits = s.substr(3, s.size() - 4);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw ParseError("malformed field spec '" + text + "'");
        if (digits.size() > 18) throw ParseError("field modulus too large: " + digits);
        return on_gfp(GFp::Spec(std::stoull(digits)));
    }
    throw ParseError("unknown field spec '" + text + "' (expected Q or GF(p))");
}

}  // namespace niljac
