#pragma once

// Polynomial maps H = (u, v, h) on K^3 and the structural operations on
// them: shape tags, origin check, linear dependence of components, exact
// conjugation by constant matrices, the per-shape residual systems whose
// simultaneous vanishing is equivalent to Jacobian nilpotency, and potential
// reconstruction for closed planar pairs.

#include <array>
#include <optional>
#include <vector>

#include "niljac/matrix.hpp"
#include "niljac/multipoly.hpp"

namespace niljac {

// Structural shapes.
//   A: u(x,y), v(x,y,z), h(x,y)
//   B: u(x,y,z), v(x,y,u), h(x,y) -- the stored v is the OUTER polynomial
//      v(x,y,w) with the formal slot w parked in the z position; the second
//      map component is v(x,y,u), composed on demand.
//   C: u(x,y,z), v(x,y,z), h(x,y)
enum class Shape { A, B, C, General };

inline const char* shape_name(Shape s) {
    switch (s) {
        case Shape::A: return "A";
        case Shape::B: return "B";
        case Shape::C: return "C";
        default: return "GENERAL";
    }
}

inline std::optional<Shape> shape_from_name(const std::string& s) {
    if (s == "A") return Shape::A;
    if (s == "B") return Shape::B;
    if (s == "C") return Shape::C;
    if (s == "GENERAL") return Shape::General;
    return std::nullopt;
}

template <Field K>
bool z_free(const MultiPoly<K>& p) {
    return p.deg_in(Var::z) <= 0;
}

template <Field K>
class PolyMap3 {
  public:
    static PolyMap3 make(MultiPoly<K> u, MultiPoly<K> v, MultiPoly<K> h,
                         Shape shape, const typename K::Spec& spec) {
        switch (shape) {
            case Shape::A:
                if (!z_free(u)) throw ShapeMismatchError("shape A: u must not involve z");
                if (!z_free(h)) throw ShapeMismatchError("shape A: h must not involve z");
                break;
            case Shape::B:
            case Shape::C:
                if (!z_free(h))
                    throw ShapeMismatchError(std::string("shape ") +
                                             shape_name(shape) +
                                             ": h must not involve z");
                break;
            case Shape::General:
                break;
        }
        for (const auto* p : {&u, &v, &h})
            if (!p->is_zero() && !(p->terms()[0].c.spec() == spec))
                throw FieldMismatchError("map component over a different field");
        return PolyMap3(std::move(u), std::move(v), std::move(h), shape, spec);
    }

    const MultiPoly<K>& u() const { return u_; }
    // Stored second component: outer polynomial for shape B, otherwise the
    // component itself.
    const MultiPoly<K>& stored_v() const { return v_; }
    const MultiPoly<K>& h() const { return h_; }
    Shape shape() const { return shape_; }
    const typename K::Spec& spec() const { return spec_; }

    MultiPoly<K> composed_v() const {
        if (shape_ == Shape::B) return v_.substitute(Var::z, u_);
        return v_;
    }

    std::array<MultiPoly<K>, 3> composed() const {
        return {u_, composed_v(), h_};
    }

    // Structural equality: same shape tag and same stored components.
    bool operator==(const PolyMap3& o) const {
        return shape_ == o.shape_ && u_ == o.u_ && v_ == o.v_ && h_ == o.h_;
    }

  private:
    PolyMap3(MultiPoly<K> u, MultiPoly<K> v, MultiPoly<K> h, Shape shape,
             typename K::Spec spec)
        : u_(std::move(u)), v_(std::move(v)), h_(std::move(h)),
          shape_(shape), spec_(std::move(spec)) {}

    MultiPoly<K> u_, v_, h_;
    Shape shape_;
    typename K::Spec spec_;
};

// Equality as maps of K^3 (composed components), ignoring shape tags.
template <Field K>
bool equal_as_maps(const PolyMap3<K>& a, const PolyMap3<K>& b) {
    auto ca = a.composed(), cb = b.composed();
    return ca[0] == cb[0] && ca[1] == cb[1] && ca[2] == cb[2];
}

template <Field K>
bool origin_check(const PolyMap3<K>& H) {
    for (const auto& c : H.composed())
        if (c.constant_coeff() != nullptr) return false;
    return true;
}

template <Field K>
PolyMatrix3<K> jacobian_of(const PolyMap3<K>& H) {
    auto c = H.composed();
    return jacobian_of(c[0], c[1], c[2]);
}

// ---------------------------------------------------------------------------
// Linear dependence of the components over K.

template <Field K>
struct DependenceWitness {
    std::array<K, 3> lambda;  // lambda . (u, v, h) = 0, first nonzero entry 1
};

// Exact Gaussian elimination on the coefficient vectors of the composed
// components.  Deterministic: columns are the union of monomials in
// descending order, pivots take the first usable row.  Returns the witness
// from the first non-pivot row, normalized so its first nonzero entry is 1.
template <Field K>
std::optional<DependenceWitness<K>> linear_dependence(const PolyMap3<K>& H) {
    const auto spec = H.spec();
    auto comps = H.composed();

    std::vector<Monomial> cols;
    for (const auto& c : comps)
        for (const auto& t : c.terms()) cols.push_back(t.m);
    std::sort(cols.begin(), cols.end(), [](const Monomial& a, const Monomial& b) { return a > b; });
    cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

    std::array<std::vector<K>, 3> row;
    std::array<std::array<K, 3>, 3> aug = {
        std::array<K, 3>{spec.one(), spec.zero(), spec.zero()},
        std::array<K, 3>{spec.zero(), spec.one(), spec.zero()},
        std::array<K, 3>{spec.zero(), spec.zero(), spec.one()}};
    for (int i = 0; i < 3; ++i) {
        row[i].reserve(cols.size());
        for (const auto& m : cols) {
            const K* c = comps[i].coeff(m);
            row[i].push_back(c ? *c : spec.zero());
        }
    }

    std::array<bool, 3> used{false, false, false};
    for (std::size_t col = 0; col < cols.size(); ++col) {
        int pivot = -1;
        for (int i = 0; i < 3; ++i)
            if (!used[i] && !row[i][col].is_zero()) { pivot = i; break; }
        if (pivot < 0) continue;
        used[pivot] = true;
        for (int i = 0; i < 3; ++i) {
            if (used[i] || row[i][col].is_zero()) continue;
            K f = row[i][col] / row[pivot][col];
            for (std::size_t j = col; j < cols.size(); ++j)
                row[i][j] -= f * row[pivot][j];
            for (int j = 0; j < 3; ++j) aug[i][j] -= f * aug[pivot][j];
        }
    }

    for (int i = 0; i < 3; ++i) {
        if (used[i]) continue;
        std::array<K, 3> lam = aug[i];
        for (int j = 0; j < 3; ++j) {
            if (!lam[j].is_zero()) {
                K inv = lam[j].inv();
                for (int k = j; k < 3; ++k) lam[k] = lam[k] * inv;
                break;
            }
        }
        return DependenceWitness<K>{lam};
    }
    return std::nullopt;
}

// ---------------------------------------------------------------------------
// Conjugation by constant invertible matrices.

// Detects the canonical stored form of a composed triple (see Shape).  For
// shape B the outer polynomial is reconstructed as w-linear: v = lam*u + v0
// with constant lam != 0 and z-free v0.
template <Field K>
PolyMap3<K> with_detected_shape(const MultiPoly<K>& u, const MultiPoly<K>& v,
                                const MultiPoly<K>& h,
                                const typename K::Spec& spec) {
    if (!z_free(h))
        return PolyMap3<K>::make(u, v, h, Shape::General, spec);
    if (z_free(u))
        return PolyMap3<K>::make(u, v, h, Shape::A, spec);
    if (z_free(v))
        return PolyMap3<K>::make(u, v, h, Shape::C, spec);
    MultiPoly<K> du = u - u.substitute(Var::z, MultiPoly<K>::zero());
    MultiPoly<K> dv = v - v.substitute(Var::z, MultiPoly<K>::zero());
    auto q = dv.divide_exact(du);
    if (q && q->is_constant() && !q->is_zero()) {
        const K lam = *q->constant_coeff();
        MultiPoly<K> v0 = v - u.scale(lam);
        MultiPoly<K> outer =
            MultiPoly<K>::variable(Var::z, spec).scale(lam) + v0;
        return PolyMap3<K>::make(u, outer, h, Shape::B, spec);
    }
    return PolyMap3<K>::make(u, v, h, Shape::C, spec);
}

// T^{-1} o H o T for constant invertible T; the result carries the detected
// canonical shape of the conjugated components.
template <Field K>
PolyMap3<K> conjugate(const PolyMap3<K>& H, const ScalarMatrix3<K>& T) {
    const auto spec = H.spec();
    ScalarMatrix3<K> Ti = T.inverse();  // throws SingularMatrixError
    std::array<std::optional<MultiPoly<K>>, 3> bind;
    for (int i = 0; i < 3; ++i) {
        MultiPoly<K> arg;
        for (int j = 0; j < 3; ++j)
            arg = arg + MultiPoly<K>::variable(static_cast<Var>(j), spec)
                            .scale(T.at(i, j));
        bind[i] = arg;
    }
    auto comps = H.composed();
    std::array<MultiPoly<K>, 3> moved;
    for (int i = 0; i < 3; ++i) moved[i] = comps[i].substitute(bind);
    std::array<MultiPoly<K>, 3> out;
    for (int i = 0; i < 3; ++i) {
        MultiPoly<K> acc;
        for (int j = 0; j < 3; ++j) acc = acc + moved[j].scale(Ti.at(i, j));
        out[i] = acc;
    }
    return with_detected_shape(out[0], out[1], out[2], spec);
}

// ---------------------------------------------------------------------------
// Residual systems.

// v = v1*z + v0 for deg_in(v, z) <= 1 with constant z-coefficient.
template <Field K>
struct VDecomposition {
    K v1;
    MultiPoly<K> v0;
};

template <Field K>
VDecomposition<K> vdecompose(const MultiPoly<K>& v, const typename K::Spec& spec) {
    if (v.deg_in(Var::z) > 1)
        throw ShapeMismatchError("v has degree >= 2 in z");
    MultiPoly<K> c1 = v.coeff_in(Var::z, 1);
    if (!c1.is_constant())
        throw ShapeMismatchError("coefficient of z in v is not constant");
    const K* p = c1.constant_coeff();
    return VDecomposition<K>{p ? *p : spec.zero(), v.coeff_in(Var::z, 0)};
}

namespace detail {

// Single residual formula (no cross-check); k in {0, 1, 2}.  Used by
// residuals() below and as the early-exit screen in exhaustive surveys,
// where most candidates die on k = 0.
template <Field K>
MultiPoly<K> residual_component(const PolyMap3<K>& H, int k) {
    const auto spec = H.spec();
    switch (H.shape()) {
        case Shape::A: {
            auto d = vdecompose(H.stored_v(), spec);
            if (d.v1.is_zero())
                throw ShapeMismatchError("shape A residuals need deg_in(v, z) = 1");
            MultiPoly<K> ux = H.u().partial(Var::x), uy = H.u().partial(Var::y);
            if (k == 0) return ux + d.v0.partial(Var::y);
            MultiPoly<K> hy = H.h().partial(Var::y);
            if (k == 1)
                return ux * d.v0.partial(Var::y) - d.v0.partial(Var::x) * uy -
                       hy.scale(d.v1);
            return (ux * hy - uy * H.h().partial(Var::x)).scale(d.v1);
        }
        case Shape::B: {
            // Outer partials evaluated at (x, y, u): the stated convention.
            const MultiPoly<K>& u = H.u();
            MultiPoly<K> vy = H.stored_v().partial(Var::y).substitute(Var::z, u);
            MultiPoly<K> ux = u.partial(Var::x), uy = u.partial(Var::y);
            if (k == 0)
                return ux + vy +
                       H.stored_v().partial(Var::z).substitute(Var::z, u) * uy;
            MultiPoly<K> vx = H.stored_v().partial(Var::x).substitute(Var::z, u);
            MultiPoly<K> hx = H.h().partial(Var::x), hy = H.h().partial(Var::y);
            MultiPoly<K> uz = u.partial(Var::z);
            if (k == 1)
                return ux * vy - vx * uy - hx * uz -
                       hy * H.stored_v().partial(Var::z).substitute(Var::z, u) * uz;
            return uz * (vx * hy - vy * hx);
        }
        case Shape::C: {
            MultiPoly<K> ux = H.u().partial(Var::x), vy = H.stored_v().partial(Var::y);
            if (k == 0) return ux + vy;
            MultiPoly<K> uy = H.u().partial(Var::y), uz = H.u().partial(Var::z);
            MultiPoly<K> vx = H.stored_v().partial(Var::x),
                         vz = H.stored_v().partial(Var::z);
            MultiPoly<K> hx = H.h().partial(Var::x), hy = H.h().partial(Var::y);
            if (k == 1) return ux * vy - vx * uy - hx * uz - hy * vz;
            return vx * hy * uz - hx * vy * uz + hx * uy * vz - ux * hy * vz;
        }
        default: {
            CharCoeffs<K> c = char_coeffs(jacobian_of(H));
            return k == 0 ? c.c1 : (k == 1 ? c.c2 : c.c3);
        }
    }
}

}  // namespace detail

// The residual system of H: three polynomials that vanish simultaneously iff
// J(H) is nilpotent.  Each residual equals a characteristic coefficient of
// J(H) up to a pinned sign (A: +c1, +c2, -c3; B and C: +c1, +c2, +c3); the
// identity is recomputed here and verified on every call.
template <Field K>
std::array<MultiPoly<K>, 3> residuals(const PolyMap3<K>& H) {
    std::array<MultiPoly<K>, 3> r = {detail::residual_component(H, 0),
                                     detail::residual_component(H, 1),
                                     detail::residual_component(H, 2)};
    if (H.shape() == Shape::General) return r;

    bool negate_c3 = H.shape() == Shape::A;
    CharCoeffs<K> c = char_coeffs(jacobian_of(H));
    if (!(r[0] == c.c1) || !(r[1] == c.c2) ||
        !(r[2] == (negate_c3 ? -c.c3 : c.c3)))
        throw InternalCheckError(
            "residual system disagrees with characteristic coefficients");
    return r;
}

// ---------------------------------------------------------------------------
// Potential of a closed planar pair.

// The unique P with P_y = -u, P_x = v0 and P(0,0) = 0, for z-free u, v0 with
// u_x + v0_y = 0.  Built by integrating -u in y and adding the integral of
// the y-free part of v0; both pieces vanish at the origin by construction.
template <Field K>
MultiPoly<K> potential_of(const MultiPoly<K>& u, const MultiPoly<K>& v0) {
    if (!z_free(u) || !z_free(v0))
        throw Error("potential_of requires z-free inputs");
    if (!(u.partial(Var::x) + v0.partial(Var::y)).is_zero())
        throw NotClosedError("pair is not closed: u_x + v0_y != 0");
    MultiPoly<K> P = (-u).integrate(Var::y) +
                     v0.coeff_in(Var::y, 0).integrate(Var::x);
    if (!(P.partial(Var::y) == -u) || !(P.partial(Var::x) == v0))
        throw InternalCheckError("potential verification failed");
    return P;
}

}  // namespace niljac
