#pragma once

// Recursive-descent parser for the ASCII polynomial grammar:
//
//   poly     := term (("+"|"-") term)*
//   term     := ["-"] factor ("*" factor)*
//   factor   := rational | var ["^" nat]
//   rational := int ["/" nat]
//   var      := "x" | "y" | "z" | "t"
//
// Whitespace-insensitive.  Errors carry a 1-based character position.
// "t" is only meaningful in two places (shape-B formal slot, univariate
// parameter polynomials), so admission is controlled by a variable table.

#include <array>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "niljac/multipoly.hpp"

namespace niljac {

// Maps the surface variables x,y,z,t to monomial slots; -1 rejects.
struct VarTable {
    std::array<int, 4> slot{0, 1, 2, -1};
    bool z_t_conflict = false;  // z and t share a slot; using both is an error

    static VarTable standard() { return VarTable{}; }

    // Shape-B outer polynomials: the formal slot may be written t (preferred)
    // or z, but mixing the two spellings in one polynomial is ambiguous.
    static VarTable t_as_z() {
        VarTable v;
        v.slot = {0, 1, 2, 2};
        v.z_t_conflict = true;
        return v;
    }

    // Univariate input: only `sym` is admitted, parked in slot 0.
    static VarTable single(char sym) {
        VarTable v;
        v.slot = {-1, -1, -1, -1};
        v.slot[index_of(sym)] = 0;
        return v;
    }

    static int index_of(char c) {
        switch (c) {
            case 'x': return 0;
            case 'y': return 1;
            case 'z': return 2;
            case 't': return 3;
            default: return -1;
        }
    }
};

namespace detail {

template <Field K>
class PolyParser {
  public:
    PolyParser(std::string_view text, const typename K::Spec& spec, const VarTable& vars)
        : text_(text), spec_(spec), vars_(vars) {}

    MultiPoly<K> parse() {
        skip_ws();
        if (eof()) fail("empty polynomial");
        std::vector<typename MultiPoly<K>::Term> terms;
        terms.push_back(parse_term(false));
        for (;;) {
            skip_ws();
            if (eof()) break;
            char c = peek();
            if (c == '+' || c == '-') {
                ++pos_;
                terms.push_back(parse_term(c == '-'));
            } else {
                fail(std::string("unexpected character '") + c + "'");
            }
        }
        if (vars_.z_t_conflict && seen_z_ && seen_t_)
            fail_at(second_zt_pos_, "polynomial mixes z and t for the same slot");
        return MultiPoly<K>::from_terms(std::move(terms));
    }

  private:
    typename MultiPoly<K>::Term parse_term(bool negated) {
        skip_ws();
        if (!eof() && peek() == '-') {
            ++pos_;
            negated = !negated;
        }
        K coeff = spec_.one();
        std::array<std::uint64_t, 3> exps{0, 0, 0};
        parse_factor(coeff, exps);
        for (;;) {
            skip_ws();
            if (!eof() && peek() == '*') {
                ++pos_;
                parse_factor(coeff, exps);
            } else {
                break;
            }
        }
        if (negated) coeff = -coeff;
        for (int v = 0; v < 3; ++v)
            if (exps[v] >= Monomial::kMaxExp) fail("monomial exponent too large");
        return {Monomial(static_cast<std::uint32_t>(exps[0]),
                         static_cast<std::uint32_t>(exps[1]),
                         static_cast<std::uint32_t>(exps[2])),
                coeff};
    }

    void parse_factor(K& coeff, std::array<std::uint64_t, 3>& exps) {
        skip_ws();
        if (eof()) fail("expected factor");
        char c = peek();
        if (c == '-' || is_digit(c)) {
            coeff = coeff * parse_rational();
            return;
        }
        int idx = VarTable::index_of(c);
        if (idx < 0) fail(std::string("unexpected character '") + c + "'");
        int slot = vars_.slot[idx];
        if (slot < 0) fail(std::string("variable ") + c + " not allowed here");
        std::size_t at = pos_;
        if (vars_.z_t_conflict) {
            if (c == 'z') { if (seen_t_ && !second_zt_pos_) second_zt_pos_ = at + 1; seen_z_ = true; }
            if (c == 't') { if (seen_z_ && !second_zt_pos_) second_zt_pos_ = at + 1; seen_t_ = true; }
        }
        ++pos_;
        std::uint64_t e = 1;
        skip_ws();
        if (!eof() && peek() == '^') {
            ++pos_;
            e = parse_exponent();
        }
        exps[slot] += e;
    }

    K parse_rational() {
        skip_ws();
        bool neg = false;
        if (!eof() && peek() == '-') {
            ++pos_;
            neg = true;
        }
        std::string num = parse_digits("expected digits");
        std::string den;
        skip_ws();
        if (!eof() && peek() == '/') {
            ++pos_;
            den = parse_digits("expected digits after '/'");
        }
        std::size_t at = pos_;
        try {
            return spec_.from_decimal(neg, num, den);
        } catch (const ParseError& e) {
            fail_at(at, e.what());
        }
    }

    std::uint64_t parse_exponent() {
        std::size_t at = pos_ + 1;
        std::string d = parse_digits("expected exponent digits");
        if (d.size() > 9) fail_at(at, "exponent too large");
        return std::stoull(d);
    }

    std::string parse_digits(const char* msg) {
        skip_ws();
        std::string d;
        while (!eof() && is_digit(peek())) d += text_[pos_++];
        if (d.empty()) fail(msg);
        return d;
    }

    static bool is_digit(char c) { return c >= '0' && c <= '9'; }
    bool eof() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    void skip_ws() {
        while (!eof() && (peek() == ' ' || peek() == '\t')) ++pos_;
    }

    [[noreturn]] void fail(const std::string& msg) const { fail_at(pos_ + 1, msg); }
    [[noreturn]] void fail_at(std::size_t pos1, const std::string& msg) const {
        throw ParseError(msg, pos1);
    }

    std::string_view text_;
    const typename K::Spec& spec_;
    VarTable vars_;
    std::size_t pos_ = 0;
    bool seen_z_ = false, seen_t_ = false;
    std::size_t second_zt_pos_ = 0;
};

}  // namespace detail

template <Field K>
MultiPoly<K> parse_poly(std::string_view text, const typename K::Spec& spec,
                        const VarTable& vars = VarTable::standard()) {
    return detail::PolyParser<K>(text, spec, vars).parse();
}

}  // namespace niljac
