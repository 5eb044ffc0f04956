#pragma once

// Normal-form machinery for shape A/B maps with nilpotent Jacobian:
//
//  * shift extraction: writing Q(x,y) as G(y + a(x)) with univariate G,
//    together with the two divisibility branch tests;
//  * the two generator families (A: u = g(a*y + b(x)) with quadratic b;
//    B: the x<->y mirror with u carrying the z term) and the sheared variant
//    of family B;
//  * recognizers that recover canonical parameters (gauge: a = 1,
//    l2tilde = 0, g(0) = 0) and the conjugation-driven classifier that tries
//    the shear/swap conjugator family;
//  * parameter files and classification reports.

#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "niljac/kvfile.hpp"
#include "niljac/polymap.hpp"
#include "niljac/unipoly.hpp"

namespace niljac {

// ---------------------------------------------------------------------------
// Shift extraction.

enum class ShiftStatus { Extracted, LeadingCoeffNotConstant, NoShift };

template <Field K>
struct ShiftExtraction {
    ShiftStatus status;
    std::optional<UniPoly<K>> shift;  // a, univariate in the shift variable
    std::optional<UniPoly<K>> outer;  // G, univariate in t
};

// Decides whether Q = G(m + a(s)) for the main variable m and shift variable
// s, and returns the witness pair if so.  The candidate shift is forced:
// a = Q_{r-1} / (r * Q_r) where Q_i are the m-coefficients and r = deg_m Q;
// the hypothesis Q_r constant is part of the statement.  The returned gauge
// has zero t^{r-1} coefficient in G; callers re-gauge as needed.
// Requires characteristic 0 or p > r (the shift formula divides by r).
template <Field K>
ShiftExtraction<K> extract_shift(const MultiPoly<K>& Q, Var main, Var shift_var,
                                 const typename K::Spec& spec) {
    Var third = static_cast<Var>(3 - static_cast<int>(main) - static_cast<int>(shift_var));
    if (Q.deg_in(third) > 0)
        throw Error(std::string("polynomial involves ") + var_name(third));

    const char shift_sym = var_name(shift_var)[0];
    auto extracted = [&](const MultiPoly<K>& a_poly, const MultiPoly<K>& g_poly) {
        ShiftExtraction<K> r;
        r.status = ShiftStatus::Extracted;
        r.shift = UniPoly<K>::from_multipoly(a_poly, shift_var, shift_sym, spec);
        r.outer = UniPoly<K>::from_multipoly(g_poly, main, 't', spec);
        // Postcondition Q = G(m + a(s)), exactly.
        MultiPoly<K> back = r.outer->eval(MultiPoly<K>::variable(main, spec) + a_poly);
        if (!(back == Q)) throw InternalCheckError("shift extraction is not exact");
        return r;
    };

    int r = Q.deg_in(main);
    if (r == kDegNegInf) return extracted(MultiPoly<K>::zero(), MultiPoly<K>::zero());
    if (r == 0) {
        if (!Q.is_constant()) return {ShiftStatus::LeadingCoeffNotConstant, {}, {}};
        return extracted(MultiPoly<K>::zero(), Q);
    }

    MultiPoly<K> lead = Q.coeff_in(main, static_cast<std::uint32_t>(r));
    if (!lead.is_constant()) return {ShiftStatus::LeadingCoeffNotConstant, {}, {}};
    long ch = spec.characteristic();
    if (ch > 0 && ch <= r)
        throw CharacteristicTooSmallError(
            "shift extraction needs characteristic 0 or p > " + std::to_string(r));

    K qr = *lead.constant_coeff();
    MultiPoly<K> a_poly =
        Q.coeff_in(main, static_cast<std::uint32_t>(r - 1)).scale(qr.mul_int(r).inv());
    MultiPoly<K> shifted =
        Q.substitute(main, MultiPoly<K>::variable(main, spec) - a_poly);
    if (shifted.deg_in(shift_var) > 0) return {ShiftStatus::NoShift, {}, {}};
    return extracted(a_poly, shifted);
}

// The spec'd roles: Q in K[x, y], shift in x, outer in y.
template <Field K>
ShiftExtraction<K> extract_shift(const MultiPoly<K>& Q, const typename K::Spec& spec) {
    return extract_shift(Q, Var::y, Var::x, spec);
}

// Divisibility branch tests for Q nonconstant in y with constant leading
// y-coefficient: whether Q_y | Q_x, and whether Q_y | Q + c for some constant
// c.  The latter holds iff Q = Q_r*(y + a(x))^r - c, so it is decided
// constructively: c = -(Q - Q_r*(y + a)^r) iff that difference is constant.
template <Field K>
struct BranchReport {
    bool qy_divides_qx;
    std::optional<K> shift_constant;  // the c of branch 2, when it exists
};

template <Field K>
BranchReport<K> branch_check(const MultiPoly<K>& Q, const typename K::Spec& spec) {
    int r = Q.deg_in(Var::y);
    if (r < 1) throw Error("branch check requires Q nonconstant in y");
    if (Q.deg_in(Var::z) > 0) throw Error("polynomial involves z");

    BranchReport<K> rep{false, {}};
    MultiPoly<K> qx = Q.partial(Var::x), qy = Q.partial(Var::y);
    rep.qy_divides_qx = qx.divide_exact(qy).has_value();

    MultiPoly<K> lead = Q.coeff_in(Var::y, static_cast<std::uint32_t>(r));
    if (lead.is_constant()) {
        long ch = spec.characteristic();
        if (ch > 0 && ch <= r)
            throw CharacteristicTooSmallError(
                "branch check needs characteristic 0 or p > " + std::to_string(r));
        K qr = *lead.constant_coeff();
        MultiPoly<K> a_poly =
            Q.coeff_in(Var::y, static_cast<std::uint32_t>(r - 1)).scale(qr.mul_int(r).inv());
        MultiPoly<K> D =
            Q - (MultiPoly<K>::variable(Var::y, spec) + a_poly)
                    .pow(static_cast<unsigned>(r))
                    .scale(qr);
        if (D.is_constant()) {
            const K* d = D.constant_coeff();
            rep.shift_constant = d ? -*d : spec.zero();
        }
    }
    return rep;
}

// ---------------------------------------------------------------------------
// Generator families.

// Family A (shape A): with b(x) = v1*c0*a*x^2 + l1*x + l2tilde,
//   u = g(a*y + b(x))
//   v = v1*z - a^{-1}*b'(x)*u - v1*l2*x
//   h = c0*u^2 + l2*u
template <Field K>
struct FamilyAParams {
    UniPoly<K> g;  // g(0) = 0, deg >= 1
    K a, v1, c0;   // nonzero
    K l1, l2, l2t;

    static FamilyAParams make(UniPoly<K> g, K a, K v1, K c0, K l1, K l2, K l2t) {
        std::vector<std::string> bad;
        if (g.degree() < 1) bad.push_back("g (degree >= 1 required)");
        else if (!g.value_at_zero().is_zero()) bad.push_back("g (g(0) = 0 required)");
        if (a.is_zero()) bad.push_back("a (nonzero required)");
        if (v1.is_zero()) bad.push_back("v1 (nonzero required)");
        if (c0.is_zero()) bad.push_back("c0 (nonzero required)");
        if (!bad.empty()) {
            std::string msg = "invalid parameters: " + bad[0];
            for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
            throw InvalidParamsError(msg);
        }
        return FamilyAParams{std::move(g), std::move(a), std::move(v1),
                             std::move(c0), std::move(l1), std::move(l2),
                             std::move(l2t)};
    }

    bool operator==(const FamilyAParams& o) const {
        return g == o.g && a == o.a && v1 == o.v1 && c0 == o.c0 && l1 == o.l1 &&
               l2 == o.l2 && l2t == o.l2t;
    }
};

// Family B: the x<->y mirror with the z term moved to u.  With
// b(y) = u1*c0*a*y^2 + l1*y + l2tilde,
//   u = u1*z - a^{-1}*b'(y)*v - u1*l2*y
//   v = g(a*x + b(y))
//   h = c0*v^2 + l2*v
template <Field K>
struct FamilyBParams {
    UniPoly<K> g;
    K a, u1, c0;
    K l1, l2, l2t;

    static FamilyBParams make(UniPoly<K> g, K a, K u1, K c0, K l1, K l2, K l2t) {
        std::vector<std::string> bad;
        if (g.degree() < 1) bad.push_back("g (degree >= 1 required)");
        else if (!g.value_at_zero().is_zero()) bad.push_back("g (g(0) = 0 required)");
        if (a.is_zero()) bad.push_back("a (nonzero required)");
        if (u1.is_zero()) bad.push_back("u1 (nonzero required)");
        if (c0.is_zero()) bad.push_back("c0 (nonzero required)");
        if (!bad.empty()) {
            std::string msg = "invalid parameters: " + bad[0];
            for (std::size_t i = 1; i < bad.size(); ++i) msg += "; " + bad[i];
            throw InvalidParamsError(msg);
        }
        return FamilyBParams{std::move(g), std::move(a), std::move(u1),
                             std::move(c0), std::move(l1), std::move(l2),
                             std::move(l2t)};
    }

    bool operator==(const FamilyBParams& o) const {
        return g == o.g && a == o.a && u1 == o.u1 && c0 == o.c0 && l1 == o.l1 &&
               l2 == o.l2 && l2t == o.l2t;
    }
};

// A generated map plus the origin flag: the construction sends 0 to 0 iff
// g(b(0)) = g(l2tilde) = 0.  A violating map is still returned, flagged.
template <Field K>
struct GeneratedMap {
    PolyMap3<K> map;
    bool origin_ok;
};

template <Field K>
GeneratedMap<K> generate_family_a(const FamilyAParams<K>& p) {
    const auto spec = p.a.spec();
    auto X = MultiPoly<K>::variable(Var::x, spec);
    auto Y = MultiPoly<K>::variable(Var::y, spec);
    auto Z = MultiPoly<K>::variable(Var::z, spec);
    MultiPoly<K> b = (X * X).scale(p.v1 * p.c0 * p.a) + X.scale(p.l1) +
                     MultiPoly<K>::constant(p.l2t);
    MultiPoly<K> u = p.g.eval(Y.scale(p.a) + b);
    MultiPoly<K> v = Z.scale(p.v1) - b.partial(Var::x).scale(p.a.inv()) * u -
                     X.scale(p.v1 * p.l2);
    MultiPoly<K> h = (u * u).scale(p.c0) + u.scale(p.l2);
    bool origin_ok = u.constant_coeff() == nullptr;
    return GeneratedMap<K>{
        PolyMap3<K>::make(std::move(u), std::move(v), std::move(h), Shape::A, spec),
        origin_ok};
}

template <Field K>
GeneratedMap<K> generate_family_b(const FamilyBParams<K>& p) {
    const auto spec = p.a.spec();
    auto X = MultiPoly<K>::variable(Var::x, spec);
    auto Y = MultiPoly<K>::variable(Var::y, spec);
    auto Z = MultiPoly<K>::variable(Var::z, spec);
    MultiPoly<K> b = (Y * Y).scale(p.u1 * p.c0 * p.a) + Y.scale(p.l1) +
                     MultiPoly<K>::constant(p.l2t);
    MultiPoly<K> v = p.g.eval(X.scale(p.a) + b);
    MultiPoly<K> u = Z.scale(p.u1) - b.partial(Var::y).scale(p.a.inv()) * v -
                     Y.scale(p.u1 * p.l2);
    MultiPoly<K> h = (v * v).scale(p.c0) + v.scale(p.l2);
    bool origin_ok = v.constant_coeff() == nullptr;
    return GeneratedMap<K>{
        PolyMap3<K>::make(std::move(u), std::move(v), std::move(h), Shape::C, spec),
        origin_ok};
}

// Unit lower-triangular shear [[1,0,0],[s,1,0],[0,0,1]].
template <Field K>
ScalarMatrix3<K> shear_matrix(const K& s) {
    const auto spec = s.spec();
    K o = spec.one(), z = spec.zero();
    return ScalarMatrix3<K>({o, z, z}, {s, o, z}, {z, z, o});
}

// Swap of the first two coordinates, [[0,1,0],[1,0,0],[0,0,1]].
template <Field K>
ScalarMatrix3<K> swap_matrix(const typename K::Spec& spec) {
    K o = spec.one(), z = spec.zero();
    return ScalarMatrix3<K>({z, o, z}, {o, z, z}, {z, z, o});
}

template <Field K>
struct ShearedMap {
    PolyMap3<K> map;        // shape B for s != 0 (the base itself for s = 0)
    ScalarMatrix3<K> T;     // conjugate(map, T) equals the family-B base
    bool origin_ok;
};

// Conjugates a family-B base out of its normal position: the result is
// T o base o T^{-1} for the shear T with parameter s, stored in shape B with
// outer polynomial s*w + v0.
template <Field K>
ShearedMap<K> generate_sheared_b(const FamilyBParams<K>& p, const K& s) {
    const auto spec = p.a.spec();
    GeneratedMap<K> base = generate_family_b(p);
    ScalarMatrix3<K> T = shear_matrix(s);
    if (s.is_zero()) return ShearedMap<K>{base.map, T, base.origin_ok};
    MultiPoly<K> sub = MultiPoly<K>::variable(Var::y, spec) -
                       MultiPoly<K>::variable(Var::x, spec).scale(s);
    MultiPoly<K> u = base.map.u().substitute(Var::y, sub);
    MultiPoly<K> v0 = base.map.stored_v().substitute(Var::y, sub);
    MultiPoly<K> h = base.map.h().substitute(Var::y, sub);
    MultiPoly<K> outer = MultiPoly<K>::variable(Var::z, spec).scale(s) + v0;
    return ShearedMap<K>{
        PolyMap3<K>::make(std::move(u), std::move(outer), std::move(h), Shape::B, spec),
        T, base.origin_ok};
}

// ---------------------------------------------------------------------------
// Recognition.

enum class ClassifyStatus {
    NormalFormA,
    NormalFormB,
    Dependent,
    NoMatch,
    NotNilpotent,
    NotOriginPreserving,
    ShapeMismatch,
};

inline const char* classify_status_name(ClassifyStatus s) {
    switch (s) {
        case ClassifyStatus::NormalFormA: return "NormalFormA";
        case ClassifyStatus::NormalFormB: return "NormalFormB";
        case ClassifyStatus::Dependent: return "Dependent";
        case ClassifyStatus::NoMatch: return "NoMatch";
        case ClassifyStatus::NotNilpotent: return "NotNilpotent";
        case ClassifyStatus::NotOriginPreserving: return "NotOriginPreserving";
        default: return "ShapeMismatch";
    }
}

// Degree gating attached to NoMatch: the proven classification range covers
// main-variable degrees <= 7 or == 9 for either of the two planar components.
struct GatingReport {
    char axis;  // 'y' for family A, 'x' for family B
    int deg_u;
    int deg_h;
    int gcd_deg;
    bool within_proven_bounds;

    static GatingReport build(char axis, int du, int dh) {
        GatingReport g;
        g.axis = axis;
        g.deg_u = du;
        g.deg_h = dh;
        g.gcd_deg = (du > 0 && dh > 0) ? std::gcd(du, dh) : 0;
        auto in = [](int d) { return d <= 7 || d == 9; };
        g.within_proven_bounds = in(du) || in(dh);
        return g;
    }
};

template <Field K>
struct Classification {
    ClassifyStatus status;
    std::optional<FamilyAParams<K>> a_params;
    std::optional<FamilyBParams<K>> b_params;
    std::optional<ScalarMatrix3<K>> conjugator;  // NormalFormB only
    std::optional<DependenceWitness<K>> witness;  // Dependent only
    std::vector<std::string> notes;
    std::optional<GatingReport> gating;

    static Classification fail(ClassifyStatus st, std::string note) {
        Classification c{st, {}, {}, {}, {}, {}, {}};
        c.notes.push_back(std::move(note));
        return c;
    }
};

namespace detail {

// Exact fit h = c0*p + l2*q over the monomial basis; unique when p, q are
// linearly independent.  Returns nullopt when no exact fit exists.
template <Field K>
std::optional<std::pair<K, K>> fit_two_term(const MultiPoly<K>& h,
                                            const MultiPoly<K>& p,
                                            const MultiPoly<K>& q) {
    std::vector<Monomial> rows;
    for (const auto* poly : {&h, &p, &q})
        for (const auto& t : poly->terms()) rows.push_back(t.m);
    std::sort(rows.begin(), rows.end(), [](const Monomial& a, const Monomial& b) { return a > b; });
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (rows.empty()) return std::nullopt;

    const auto spec = [&]() {
        for (const auto* poly : {&h, &p, &q})
            if (!poly->is_zero()) return poly->terms()[0].c.spec();
        throw Error("fit on zero polynomials");
    }();
    auto at = [&](const MultiPoly<K>& f, const Monomial& m) {
        const K* c = f.coeff(m);
        return c ? *c : spec.zero();
    };

    // First row with a nonzero (p, q) entry, then the first row making the
    // 2x2 system invertible; Cramer, then verify against every monomial.
    std::size_t r1 = rows.size();
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (!at(p, rows[i]).is_zero() || !at(q, rows[i]).is_zero()) { r1 = i; break; }
    if (r1 == rows.size()) return std::nullopt;
    K p1 = at(p, rows[r1]), q1 = at(q, rows[r1]), h1 = at(h, rows[r1]);
    for (std::size_t i = r1 + 1; i < rows.size(); ++i) {
        K p2 = at(p, rows[i]), q2 = at(q, rows[i]);
        K det = p1 * q2 - q1 * p2;
        if (det.is_zero()) continue;
        K h2 = at(h, rows[i]);
        K c0 = (h1 * q2 - q1 * h2) / det;
        K l2 = (p1 * h2 - h1 * p2) / det;
        if (p.scale(c0) + q.scale(l2) == h) return std::make_pair(c0, l2);
        return std::nullopt;
    }
    return std::nullopt;
}

}  // namespace detail

// Recognizes the family-A normal form from a shape-A map, recovering the
// canonical gauge a = 1, l2tilde = 0, g(0) = 0 (the shift constant is
// absorbed into g, the scale a into g's argument).
template <Field K>
Classification<K> recognize_family_a(const PolyMap3<K>& H) {
    using C = Classification<K>;
    const auto spec = H.spec();
    if (!z_free(H.u()) || !z_free(H.h()))
        return C::fail(ClassifyStatus::ShapeMismatch, "u or h involves z");
    if (H.shape() == Shape::B)
        return C::fail(ClassifyStatus::ShapeMismatch, "shape B map");
    const MultiPoly<K>& u = H.u();
    const MultiPoly<K>& v = H.stored_v();
    const MultiPoly<K>& h = H.h();

    if (!origin_check(H))
        return C::fail(ClassifyStatus::NotOriginPreserving, "H(0) != 0");

    VDecomposition<K> vd{spec.zero(), MultiPoly<K>::zero()};
    try {
        vd = vdecompose(v, spec);
    } catch (const ShapeMismatchError& e) {
        return C::fail(ClassifyStatus::ShapeMismatch, e.what());
    }
    if (vd.v1.is_zero())
        return C::fail(ClassifyStatus::ShapeMismatch, "v has no z term");

    PolyMap3<K> HA = PolyMap3<K>::make(u, v, h, Shape::A, spec);
    for (const auto& r : residuals(HA))
        if (!r.is_zero())
            return C::fail(ClassifyStatus::NotNilpotent, "residual system nonzero");

    if (auto w = linear_dependence(HA)) {
        C c{ClassifyStatus::Dependent, {}, {}, {}, std::move(w), {}, {}};
        return c;
    }

    GatingReport gate = GatingReport::build('y', u.deg_in(Var::y), h.deg_in(Var::y));
    auto no_match = [&](std::string note) {
        C c = C::fail(ClassifyStatus::NoMatch, std::move(note));
        c.gating = gate;
        return c;
    };

    ShiftExtraction<K> ex = extract_shift(u, Var::y, Var::x, spec);
    if (ex.status == ShiftStatus::LeadingCoeffNotConstant)
        return no_match("leading coefficient of u in y is not constant");
    if (ex.status == ShiftStatus::NoShift)
        return no_match("u is not a polynomial of y + a(x)");

    // Re-gauge: move the shift's constant into g so that b(0) = 0.
    K beta0 = ex.shift->value_at_zero();
    UniPoly<K> B = *ex.shift - UniPoly<K>::from_coeffs('x', spec, {beta0});
    UniPoly<K> G = ex.outer->shift_arg(beta0);
    if (!G.value_at_zero().is_zero())
        throw InternalCheckError("origin-preserving map yielded g(0) != 0");
    if (G.degree() < 1) return no_match("outer polynomial g is constant");
    if (B.degree() != 2) return no_match("shift polynomial b is not quadratic");

    auto fit = detail::fit_two_term(h, u * u, u);
    if (!fit) return no_match("h is not of the form c0*u^2 + l2*u");
    K c0 = fit->first, l2 = fit->second;
    if (c0.is_zero()) return no_match("quadratic coefficient c0 of h vanishes");
    if (!(B.coeff(2) == vd.v1 * c0))
        return no_match("quadratic shift coefficient differs from v1*c0");

    MultiPoly<K> v_expected =
        MultiPoly<K>::variable(Var::z, spec).scale(vd.v1) -
        B.derivative().inject(Var::x) * u -
        MultiPoly<K>::variable(Var::x, spec).scale(vd.v1 * l2);
    if (!(v == v_expected)) return no_match("v does not match the reconstructed form");

    FamilyAParams<K> params = FamilyAParams<K>::make(
        G, spec.one(), vd.v1, c0, B.coeff(1), l2, spec.zero());
    if (!(generate_family_a(params).map == HA))
        throw InternalCheckError("family A regeneration mismatch");
    C c{ClassifyStatus::NormalFormA, std::move(params), {}, {}, {}, {}, {}};
    return c;
}

// Mirror recognizer for the family-B normal position (u carries z linearly,
// v and h are z-free).
template <Field K>
Classification<K> recognize_family_b(const PolyMap3<K>& H) {
    using C = Classification<K>;
    const auto spec = H.spec();
    auto comps = H.composed();
    const MultiPoly<K>&U = comps[0], &V = comps[1], &W = comps[2];
    if (!z_free(V) || !z_free(W))
        return C::fail(ClassifyStatus::ShapeMismatch, "v or h involves z");

    PolyMap3<K> HC = PolyMap3<K>::make(U, V, W, Shape::C, spec);
    if (!origin_check(HC))
        return C::fail(ClassifyStatus::NotOriginPreserving, "H(0) != 0");

    VDecomposition<K> ud{spec.zero(), MultiPoly<K>::zero()};
    try {
        ud = vdecompose(U, spec);  // U = u1*z + (z-free part)
    } catch (const ShapeMismatchError& e) {
        return C::fail(ClassifyStatus::ShapeMismatch, e.what());
    }
    if (ud.v1.is_zero())
        return C::fail(ClassifyStatus::ShapeMismatch, "u has no z term");
    const K u1 = ud.v1;

    for (const auto& r : residuals(HC))
        if (!r.is_zero())
            return C::fail(ClassifyStatus::NotNilpotent, "residual system nonzero");

    if (auto w = linear_dependence(HC)) {
        C c{ClassifyStatus::Dependent, {}, {}, {}, std::move(w), {}, {}};
        return c;
    }

    GatingReport gate = GatingReport::build('x', V.deg_in(Var::x), W.deg_in(Var::x));
    auto no_match = [&](std::string note) {
        C c = C::fail(ClassifyStatus::NoMatch, std::move(note));
        c.gating = gate;
        return c;
    };

    ShiftExtraction<K> ex = extract_shift(V, Var::x, Var::y, spec);
    if (ex.status == ShiftStatus::LeadingCoeffNotConstant)
        return no_match("leading coefficient of v in x is not constant");
    if (ex.status == ShiftStatus::NoShift)
        return no_match("v is not a polynomial of x + b(y)");

    K beta0 = ex.shift->value_at_zero();
    UniPoly<K> B = *ex.shift - UniPoly<K>::from_coeffs('y', spec, {beta0});
    UniPoly<K> G = ex.outer->shift_arg(beta0);
    if (!G.value_at_zero().is_zero())
        throw InternalCheckError("origin-preserving map yielded g(0) != 0");
    if (G.degree() < 1) return no_match("outer polynomial g is constant");
    if (B.degree() != 2) return no_match("shift polynomial b is not quadratic");

    auto fit = detail::fit_two_term(W, V * V, V);
    if (!fit) return no_match("h is not of the form c0*v^2 + l2*v");
    K c0 = fit->first, l2 = fit->second;
    if (c0.is_zero()) return no_match("quadratic coefficient c0 of h vanishes");
    if (!(B.coeff(2) == u1 * c0))
        return no_match("quadratic shift coefficient differs from u1*c0");

    MultiPoly<K> u_expected =
        MultiPoly<K>::variable(Var::z, spec).scale(u1) -
        B.derivative().inject(Var::y) * V -
        MultiPoly<K>::variable(Var::y, spec).scale(u1 * l2);
    if (!(U == u_expected)) return no_match("u does not match the reconstructed form");

    FamilyBParams<K> params = FamilyBParams<K>::make(
        G, spec.one(), u1, c0, B.coeff(1), l2, spec.zero());
    if (!(generate_family_b(params).map == HC))
        throw InternalCheckError("family B regeneration mismatch");
    C c{ClassifyStatus::NormalFormB, {}, std::move(params), ScalarMatrix3<K>::identity(spec),
        {}, {}, {}};
    return c;
}

// Full classifier: dependence first (conjugation-invariant), then the
// direct shape-A position, then the family-B position reached through the
// conjugator family {identity, swap} x {shear}.  The shear parameter is read
// off as the constant ratio of the z-parts of v and u.  First success wins;
// the attempt order is fixed, so results are deterministic.
template <Field K>
Classification<K> classify_map(const PolyMap3<K>& H) {
    using C = Classification<K>;
    const auto spec = H.spec();
    auto comps = H.composed();

    if (!origin_check(H))
        return C::fail(ClassifyStatus::NotOriginPreserving, "H(0) != 0");
    if (!is_nilpotent(jacobian_of(H)))
        return C::fail(ClassifyStatus::NotNilpotent, "Jacobian is not nilpotent");
    if (auto w = linear_dependence(H)) {
        C c{ClassifyStatus::Dependent, {}, {}, {}, std::move(w), {}, {}};
        return c;
    }

    std::vector<std::string> notes;

    // Direct shape-A position.
    if (z_free(comps[0]) && z_free(comps[2])) {
        PolyMap3<K> HA = PolyMap3<K>::make(comps[0], comps[1], comps[2], Shape::A, spec);
        try {
            C r = recognize_family_a(HA);
            if (r.status == ClassifyStatus::NormalFormA) return r;
            notes.push_back("direct A position: " +
                            (r.notes.empty() ? std::string("no") : r.notes[0]));
        } catch (const CharacteristicTooSmallError& e) {
            notes.push_back(std::string("direct A position: ") + e.what());
        }
    } else {
        notes.push_back("direct A position: u or h involves z");
    }

    // Family-B position through a conjugator S in {identity, swap} followed
    // by a shear.
    for (int use_swap = 0; use_swap < 2; ++use_swap) {
        std::string route = use_swap ? "swap" : "identity";
        std::array<MultiPoly<K>, 3> m = comps;
        if (use_swap) {
            auto Hs = conjugate(H, swap_matrix<K>(spec));
            m = Hs.composed();
        }
        if (!z_free(m[2])) {
            notes.push_back(route + " route: h involves z");
            continue;
        }
        if (z_free(m[0])) {
            notes.push_back(route + " route: u has no z term");
            continue;
        }
        MultiPoly<K> du = m[0] - m[0].substitute(Var::z, MultiPoly<K>::zero());
        MultiPoly<K> dv = m[1] - m[1].substitute(Var::z, MultiPoly<K>::zero());
        K lam = spec.zero();
        if (!dv.is_zero()) {
            auto q = dv.divide_exact(du);
            if (!q || !q->is_constant()) {
                notes.push_back(route + " route: z-part of v is not a constant multiple of the z-part of u");
                continue;
            }
            lam = *q->constant_coeff();
        }
        std::array<MultiPoly<K>, 3> pos = m;
        if (!lam.is_zero()) {
            MultiPoly<K> sub = MultiPoly<K>::variable(Var::y, spec) +
                               MultiPoly<K>::variable(Var::x, spec).scale(lam);
            pos[1] = (m[1] - m[0].scale(lam)).substitute(Var::y, sub);
            pos[0] = m[0].substitute(Var::y, sub);
            pos[2] = m[2].substitute(Var::y, sub);
        }
        PolyMap3<K> HB = PolyMap3<K>::make(pos[0], pos[1], pos[2], Shape::C, spec);
        try {
            C r = recognize_family_b(HB);
            if (r.status == ClassifyStatus::NormalFormB) {
                ScalarMatrix3<K> T = shear_matrix(lam);
                if (use_swap) T = swap_matrix<K>(spec) * T;
                r.conjugator = T;
                return r;
            }
            notes.push_back(route + " route: " +
                            (r.notes.empty() ? std::string("no") : r.notes[0]));
        } catch (const CharacteristicTooSmallError& e) {
            notes.push_back(route + " route: " + e.what());
        }
    }

    C c = C::fail(ClassifyStatus::NoMatch, "no conjugation reached a normal form");
    c.notes.insert(c.notes.end(), notes.begin(), notes.end());
    c.gating = GatingReport::build('y', comps[0].deg_in(Var::y), comps[2].deg_in(Var::y));
    return c;
}

// Rebuilds the map described by a successful classification.
template <Field K>
std::optional<PolyMap3<K>> regenerate(const Classification<K>& c) {
    if (c.status == ClassifyStatus::NormalFormA && c.a_params)
        return generate_family_a(*c.a_params).map;
    if (c.status == ClassifyStatus::NormalFormB && c.b_params) {
        PolyMap3<K> base = generate_family_b(*c.b_params).map;
        if (!c.conjugator) return base;
        const auto spec = base.spec();
        if (*c.conjugator == ScalarMatrix3<K>::identity(spec)) return base;
        return conjugate(base, c.conjugator->inverse());
    }
    return std::nullopt;
}

}  // namespace niljac
