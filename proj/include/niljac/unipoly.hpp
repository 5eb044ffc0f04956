#pragma once

// Dense univariate polynomials in one symbol of {x, y, z, t}.  Used for the
// outer polynomial g, the shift a(x)/b(y), and parameter files.

#include <string>
#include <vector>

#include "niljac/multipoly.hpp"
#include "niljac/parse.hpp"

namespace niljac {

template <Field K>
class UniPoly {
  public:
    UniPoly(char symbol, const typename K::Spec& spec)
        : symbol_(symbol), spec_(spec) {}

    static UniPoly from_coeffs(char symbol, const typename K::Spec& spec,
                               std::vector<K> coeffs) {
        UniPoly p(symbol, spec);
        p.c_ = std::move(coeffs);
        p.trim();
        return p;
    }

    // Requires p to involve at most the variable `v`.
    static UniPoly from_multipoly(const MultiPoly<K>& p, Var v, char symbol,
                                  const typename K::Spec& spec) {
        UniPoly r(symbol, spec);
        for (const auto& t : p.terms()) {
            if (!t.m.without(v).is_constant())
                throw Error("polynomial is not univariate in " +
                            std::string(var_name(v)));
            std::uint32_t e = t.m.exp(v);
            if (r.c_.size() <= e) r.c_.resize(e + 1, spec.zero());
            r.c_[e] = t.c;
        }
        r.trim();
        return r;
    }

    char symbol() const { return symbol_; }
    const typename K::Spec& spec() const { return spec_; }

    bool is_zero() const { return c_.empty(); }
    int degree() const {
        return c_.empty() ? kDegNegInf : static_cast<int>(c_.size()) - 1;
    }

    K coeff(std::size_t k) const {
        return k < c_.size() ? c_[k] : spec_.zero();
    }
    const K& leading_coeff() const { return c_.back(); }
    K value_at_zero() const { return coeff(0); }

    bool operator==(const UniPoly& o) const {
        if (c_.size() != o.c_.size()) return false;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!(c_[i] == o.c_[i])) return false;
        return true;
    }

    UniPoly operator+(const UniPoly& o) const {
        UniPoly r(symbol_, spec_);
        r.c_.resize(std::max(c_.size(), o.c_.size()), spec_.zero());
        for (std::size_t i = 0; i < r.c_.size(); ++i)
            r.c_[i] = coeff(i) + o.coeff(i);
        r.trim();
        return r;
    }

    UniPoly operator-(const UniPoly& o) const {
        UniPoly r(symbol_, spec_);
        r.c_.resize(std::max(c_.size(), o.c_.size()), spec_.zero());
        for (std::size_t i = 0; i < r.c_.size(); ++i)
            r.c_[i] = coeff(i) - o.coeff(i);
        r.trim();
        return r;
    }

    UniPoly scale(const K& k) const {
        UniPoly r(symbol_, spec_);
        if (k.is_zero()) return r;
        r.c_ = c_;
        for (auto& c : r.c_) c = c * k;
        return r;
    }

    UniPoly derivative() const {
        UniPoly r(symbol_, spec_);
        for (std::size_t i = 1; i < c_.size(); ++i)
            r.c_.push_back(c_[i].mul_int(static_cast<long>(i)));
        r.trim();
        return r;
    }

    // Composition g(q) for a polynomial argument, by Horner's scheme.
    MultiPoly<K> eval(const MultiPoly<K>& q) const {
        MultiPoly<K> r;  // zero
        for (std::size_t i = c_.size(); i-- > 0;)
            r = r * q + MultiPoly<K>::constant(c_[i]);
        return r;
    }

    K eval(const K& v) const {
        K r = spec_.zero();
        for (std::size_t i = c_.size(); i-- > 0;) r = r * v + c_[i];
        return r;
    }

    // g(t + s) and g(a*t): argument shifts used for gauge normalization.
    UniPoly shift_arg(const K& s) const {
        MultiPoly<K> arg = MultiPoly<K>::variable(Var::x, spec_) +
                           MultiPoly<K>::constant(s);
        return from_multipoly(eval(arg), Var::x, symbol_, spec_);
    }
    UniPoly scale_arg(const K& a) const {
        MultiPoly<K> arg = MultiPoly<K>::variable(Var::x, spec_).scale(a);
        return from_multipoly(eval(arg), Var::x, symbol_, spec_);
    }

    // Embeds into K[x,y,z] with `v` as the variable.
    MultiPoly<K> inject(Var v) const {
        std::vector<typename MultiPoly<K>::Term> ts;
        for (std::size_t i = 0; i < c_.size(); ++i)
            if (!c_[i].is_zero())
                ts.push_back({Monomial::var(v, static_cast<std::uint32_t>(i)), c_[i]});
        return MultiPoly<K>::from_terms(std::move(ts));
    }

    std::string str() const {
        std::string n(1, symbol_);
        return inject(Var::x).str({n, "y", "z"});
    }

  private:
    void trim() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

    char symbol_;
    typename K::Spec spec_;
    std::vector<K> c_;
};

// Parses a univariate polynomial allowed to mention only `symbol`.
template <Field K>
UniPoly<K> parse_unipoly(std::string_view text, char symbol,
                         const typename K::Spec& spec) {
    MultiPoly<K> p = parse_poly<K>(text, spec, VarTable::single(symbol));
    return UniPoly<K>::from_multipoly(p, Var::x, symbol, spec);
}

}  // namespace niljac
