#pragma once

// Sparse multivariate polynomials over a Field, canonical form throughout:
// terms are kept in strictly descending lex order (x > y > z) and zero
// coefficients are never stored, so equal polynomials are representationally
// identical and printing is deterministic.

#include <algorithm>
#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "niljac/field.hpp"
#include "niljac/monomial.hpp"

namespace niljac {

// Fields exposing an exact integer form (numerator, denominator and a
// normalizing rebuild) get a staged bulk product: denominators are cleared
// once per factor, the term products run over plain integers, and each
// output coefficient is normalized exactly once instead of once per
// intermediate operation.  Results are identical; only the cost changes.
template <typename T>
concept StagedProductField = requires(const T v, typename T::StagedInt i) {
    { v.numerator() } -> std::same_as<typename T::StagedInt>;
    { v.denominator() } -> std::same_as<typename T::StagedInt>;
    { T::from_ratio(std::move(i), i) } -> std::same_as<T>;
};

// Degree of the zero polynomial.  A sentinel below every real degree keeps
// degree comparisons in the recognizers total; never -1.
inline constexpr int kDegNegInf = std::numeric_limits<int>::min();

template <Field K>
class MultiPoly {
  public:
    struct Term {
        Monomial m;
        K c;
    };

    MultiPoly() = default;  // zero polynomial

    static MultiPoly zero() { return MultiPoly(); }

    static MultiPoly constant(const K& c) {
        MultiPoly p;
        if (!c.is_zero()) p.terms_.push_back({Monomial{}, c});
        return p;
    }

    static MultiPoly variable(Var v, const typename K::Spec& spec) {
        MultiPoly p;
        p.terms_.push_back({Monomial::var(v), spec.one()});
        return p;
    }

    static MultiPoly monomial(const Monomial& m, const K& c) {
        MultiPoly p;
        if (!c.is_zero()) p.terms_.push_back({m, c});
        return p;
    }

    // Canonicalizes an arbitrary term list (sorts, merges, drops zeros).
    static MultiPoly from_terms(std::vector<Term> ts) {
        std::sort(ts.begin(), ts.end(),
                  [](const Term& a, const Term& b) { return a.m > b.m; });
        MultiPoly p;
        for (auto& t : ts) {
            if (!p.terms_.empty() && p.terms_.back().m == t.m) {
                p.terms_.back().c += t.c;
                if (p.terms_.back().c.is_zero()) p.terms_.pop_back();
            } else if (!t.c.is_zero()) {
                p.terms_.push_back(std::move(t));
            }
        }
        return p;
    }

    const std::vector<Term>& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && terms_[0].m.is_constant());
    }

    // Coefficient of the constant monomial, nullptr when absent.
    const K* constant_coeff() const {
        if (!terms_.empty() && terms_.back().m.is_constant()) return &terms_.back().c;
        return nullptr;
    }

    // Coefficient of an arbitrary monomial, nullptr when absent.
    const K* coeff(const Monomial& m) const {
        auto it = std::lower_bound(
            terms_.begin(), terms_.end(), m,
            [](const Term& t, const Monomial& mm) { return t.m > mm; });
        if (it != terms_.end() && it->m == m) return &it->c;
        return nullptr;
    }

    const Monomial& leading_monomial() const { return terms_.front().m; }
    const K& leading_coeff() const { return terms_.front().c; }

    int deg_in(Var v) const {
        if (terms_.empty()) return kDegNegInf;
        std::uint32_t d = 0;
        for (const auto& t : terms_) d = std::max(d, t.m.exp(v));
        return static_cast<int>(d);
    }

    int degree() const {
        if (terms_.empty()) return kDegNegInf;
        std::uint64_t d = 0;
        for (const auto& t : terms_) d = std::max(d, t.m.total_degree());
        return static_cast<int>(d);
    }

    bool operator==(const MultiPoly& o) const {
        if (terms_.size() != o.terms_.size()) return false;
        for (std::size_t i = 0; i < terms_.size(); ++i)
            if (!(terms_[i].m == o.terms_[i].m) || !(terms_[i].c == o.terms_[i].c))
                return false;
        return true;
    }

    MultiPoly operator+(const MultiPoly& o) const {
        check_compatible(o);
        MultiPoly r;
        r.terms_.reserve(terms_.size() + o.terms_.size());
        std::size_t i = 0, j = 0;
        while (i < terms_.size() && j < o.terms_.size()) {
            if (terms_[i].m > o.terms_[j].m) {
                r.terms_.push_back(terms_[i++]);
            } else if (o.terms_[j].m > terms_[i].m) {
                r.terms_.push_back(o.terms_[j++]);
            } else {
                K c = terms_[i].c + o.terms_[j].c;
                if (!c.is_zero()) r.terms_.push_back({terms_[i].m, std::move(c)});
                ++i;
                ++j;
            }
        }
        for (; i < terms_.size(); ++i) r.terms_.push_back(terms_[i]);
        for (; j < o.terms_.size(); ++j) r.terms_.push_back(o.terms_[j]);
        return r;
    }

    MultiPoly operator-() const {
        MultiPoly r = *this;
        for (auto& t : r.terms_) t.c = -t.c;
        return r;
    }

    MultiPoly operator-(const MultiPoly& o) const { return *this + (-o); }

    MultiPoly operator*(const MultiPoly& o) const {
        check_compatible(o);
        if (is_zero() || o.is_zero()) return MultiPoly();
        if constexpr (StagedProductField<K>) {
            return staged_product(o);
        } else {
            std::vector<Term> prods;
            prods.reserve(terms_.size() * o.terms_.size());
            for (const auto& a : terms_)
                for (const auto& b : o.terms_) prods.push_back({a.m * b.m, a.c * b.c});
            return from_terms(std::move(prods));
        }
    }

    // Scalar multiple.
    MultiPoly scale(const K& k) const {
        if (k.is_zero()) return MultiPoly();
        if (!terms_.empty() && !(terms_[0].c.spec() == k.spec()))
            throw FieldMismatchError("scalar from a different field");
        MultiPoly r = *this;
        for (auto& t : r.terms_) t.c = t.c * k;
        return r;
    }

    // Multiplication by (m, c); preserves term order.
    MultiPoly mul_term(const Monomial& m, const K& c) const {
        if (c.is_zero()) return MultiPoly();
        MultiPoly r;
        r.terms_.reserve(terms_.size());
        for (const auto& t : terms_) r.terms_.push_back({t.m * m, t.c * c});
        return r;
    }

    MultiPoly pow(unsigned e) const {
        if (e == 0) {
            if (is_zero()) throw Error("0^0 of polynomials is undefined here");
            return constant(terms_[0].c.spec().one());
        }
        MultiPoly r = *this;
        for (unsigned i = 1; i < e; ++i) r = r * *this;
        return r;
    }

    MultiPoly partial(Var v) const {
        MultiPoly r;
        for (const auto& t : terms_) {
            std::uint32_t e = t.m.exp(v);
            if (e == 0) continue;
            K c = t.c.mul_int(static_cast<long>(e));
            if (c.is_zero()) continue;  // exponent divisible by char p
            Monomial m = t.m.without(v) * Monomial::var(v, e - 1);
            r.terms_.push_back({m, std::move(c)});
        }
        return r;  // order preserved: one exponent uniformly decremented
    }

    // Term-wise antiderivative in v with zero constant of integration.
    // Throws CharacteristicTooSmallError when some e+1 vanishes mod p.
    MultiPoly integrate(Var v) const {
        MultiPoly r;
        for (const auto& t : terms_) {
            std::uint32_t e = t.m.exp(v);
            K c = t.c.div_int(static_cast<long>(e) + 1);
            Monomial m = t.m.without(v) * Monomial::var(v, e + 1);
            r.terms_.push_back({m, std::move(c)});
        }
        return r;
    }

    // Coefficient of var^k viewed in (K[others])[var]; the var exponent is
    // removed, so  p = sum_k coeff_in(p, var, k) * var^k.
    MultiPoly coeff_in(Var v, std::uint32_t k) const {
        MultiPoly r;
        for (const auto& t : terms_)
            if (t.m.exp(v) == k) r.terms_.push_back({t.m.without(v), t.c});
        return r;  // order preserved: fixed exponent removed uniformly
    }

    // Simultaneous substitution; unbound variables map to themselves.
    // A ring homomorphism: respects + and *.
    MultiPoly substitute(const std::array<std::optional<MultiPoly>, 3>& bind) const {
        if (is_zero()) return MultiPoly();
        const auto spec = terms_[0].c.spec();
        const MultiPoly one = constant(spec.one());
        std::array<std::vector<MultiPoly>, 3> pows;  // pows[v][e] = binding^e
        for (int v = 0; v < 3; ++v) pows[v].push_back(one);
        auto power = [&](int v, std::uint32_t e) -> const MultiPoly& {
            auto& cache = pows[v];
            while (cache.size() <= e) {
                const MultiPoly& base =
                    bind[v] ? *bind[v]
                            : variable(static_cast<Var>(v), spec);
                cache.push_back(cache.back() * base);
            }
            return cache[e];
        };
        MultiPoly r;
        for (const auto& t : terms_) {
            MultiPoly term = constant(t.c);
            for (int v = 0; v < 3; ++v) {
                std::uint32_t e = t.m.exp(static_cast<Var>(v));
                if (e) term = term * power(v, e);
            }
            r = r + term;
        }
        return r;
    }

    MultiPoly substitute(Var v, const MultiPoly& p) const {
        std::array<std::optional<MultiPoly>, 3> bind{};
        bind[static_cast<int>(v)] = p;
        return substitute(bind);
    }

    // Single-divisor reduction under the global monomial order.  Returns the
    // exact quotient, or nullopt when *this is not a multiple of d: once the
    // divisor's leading monomial fails to divide the running remainder's,
    // later steps only touch smaller monomials, so exactness is impossible.
    std::optional<MultiPoly> divide_exact(const MultiPoly& d) const {
        if (d.is_zero()) throw DivisionByZeroError("polynomial division by zero");
        check_compatible(d);
        MultiPoly rem = *this;
        MultiPoly q;
        while (!rem.is_zero()) {
            if (!d.leading_monomial().divides(rem.leading_monomial()))
                return std::nullopt;
            Monomial m = d.leading_monomial().divide_into(rem.leading_monomial());
            K c = rem.leading_coeff() / d.leading_coeff();
            q.terms_.push_back({m, c});  // strictly descending across steps
            rem = rem - d.mul_term(m, c);
        }
        return q;
    }

    // Canonical text form; `names` substitutes display names per variable
    // (shape-B outer polynomials print their formal slot as "t").
    std::string str(const std::array<std::string, 3>& names = {"x", "y", "z"}) const {
        if (terms_.empty()) return "0";
        std::string out;
        bool first = true;
        for (const auto& t : terms_) {
            if (first) {
                if (t.c.is_negative()) out += "-";
                first = false;
            } else {
                out += t.c.is_negative() ? " - " : " + ";
            }
            K mag = t.c.abs();
            std::string mono;
            for (int v = 0; v < 3; ++v) {
                std::uint32_t e = t.m.exp(static_cast<Var>(v));
                if (e == 0) continue;
                if (!mono.empty()) mono += "*";
                mono += names[v];
                if (e >= 2) mono += "^" + std::to_string(e);
            }
            if (mono.empty()) {
                out += mag.str();
            } else if (mag.is_one()) {
                out += mono;
            } else {
                out += mag.str() + "*" + mono;
            }
        }
        return out;
    }

  private:
    void check_compatible(const MultiPoly& o) const {
        if (!terms_.empty() && !o.terms_.empty() &&
            !(terms_[0].c.spec() == o.terms_[0].c.spec()))
            throw FieldMismatchError("polynomials over different fields");
    }

    // Product over the cleared-denominator integer form; see
    // StagedProductField.  Both factors are nonzero here.
    MultiPoly staged_product(const MultiPoly& o) const
        requires StagedProductField<K>
    {
        using I = typename K::StagedInt;
        struct IntTerm {
            Monomial m;
            I c;
        };
        auto stage = [](const std::vector<Term>& ts) {
            std::pair<I, std::vector<I>> r{I(1), {}};
            for (const auto& t : ts) {
                using std::lcm;
                r.first = lcm(r.first, t.c.denominator());
            }
            r.second.reserve(ts.size());
            for (const auto& t : ts)
                r.second.push_back(t.c.numerator() * (r.first / t.c.denominator()));
            return r;
        };
        auto [da, A] = stage(terms_);
        auto [db, B] = stage(o.terms_);
        std::vector<IntTerm> prods;
        prods.reserve(terms_.size() * o.terms_.size());
        for (std::size_t i = 0; i < terms_.size(); ++i)
            for (std::size_t j = 0; j < o.terms_.size(); ++j)
                prods.push_back({terms_[i].m * o.terms_[j].m, A[i] * B[j]});
        std::sort(prods.begin(), prods.end(),
                  [](const IntTerm& a, const IntTerm& b) { return a.m > b.m; });
        const I den = da * db;
        MultiPoly r;
        std::size_t i = 0;
        while (i < prods.size()) {
            I c = std::move(prods[i].c);
            std::size_t j = i + 1;
            while (j < prods.size() && prods[j].m == prods[i].m) c += prods[j++].c;
            if (c != 0) r.terms_.push_back({prods[i].m, K::from_ratio(std::move(c), den)});
            i = j;
        }
        return r;
    }

    std::vector<Term> terms_;
};

}  // namespace niljac
