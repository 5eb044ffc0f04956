#pragma once

// 3x3 matrices over the polynomial ring (Jacobians) and over the scalar
// field (conjugators), plus the nilpotency test.

#include <array>
#include <string>

#include "niljac/multipoly.hpp"

namespace niljac {

// Constant matrices: conjugators and linear coordinate changes.
template <Field K>
class ScalarMatrix3 {
  public:
    using Row = std::array<K, 3>;

    ScalarMatrix3(Row r0, Row r1, Row r2) : m_{r0, r1, r2} {}

    static ScalarMatrix3 identity(const typename K::Spec& s) {
        K o = s.one(), z = s.zero();
        return ScalarMatrix3({o, z, z}, {z, o, z}, {z, z, o});
    }

    const K& at(int i, int j) const { return m_[i][j]; }

    bool operator==(const ScalarMatrix3& o) const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!(m_[i][j] == o.m_[i][j])) return false;
        return true;
    }

    ScalarMatrix3 operator*(const ScalarMatrix3& o) const {
        auto e = [&](int i, int j) {
            return m_[i][0] * o.m_[0][j] + m_[i][1] * o.m_[1][j] +
                   m_[i][2] * o.m_[2][j];
        };
        return ScalarMatrix3({e(0, 0), e(0, 1), e(0, 2)},
                             {e(1, 0), e(1, 1), e(1, 2)},
                             {e(2, 0), e(2, 1), e(2, 2)});
    }

    K det() const {
        return m_[0][0] * (m_[1][1] * m_[2][2] - m_[1][2] * m_[2][1]) -
               m_[0][1] * (m_[1][0] * m_[2][2] - m_[1][2] * m_[2][0]) +
               m_[0][2] * (m_[1][0] * m_[2][1] - m_[1][1] * m_[2][0]);
    }

    ScalarMatrix3 inverse() const {
        K d = det();
        if (d.is_zero()) throw SingularMatrixError("matrix is singular");
        K di = d.inv();
        auto cof = [&](int i, int j) {
            int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
            int c0 = (j + 1) % 3, c1 = (j + 2) % 3;
            return (m_[r0][c0] * m_[r1][c1] - m_[r0][c1] * m_[r1][c0]) * di;
        };
        // Adjugate transpose: inv[j][i] = cofactor(i, j) / det.
        return ScalarMatrix3({cof(0, 0), cof(1, 0), cof(2, 0)},
                             {cof(0, 1), cof(1, 1), cof(2, 1)},
                             {cof(0, 2), cof(1, 2), cof(2, 2)});
    }

    // Row-major "a,b,c;d,e,f;g,h,i" with canonical scalar formatting.
    std::string str() const {
        std::string s;
        for (int i = 0; i < 3; ++i) {
            if (i) s += ";";
            for (int j = 0; j < 3; ++j) {
                if (j) s += ",";
                s += m_[i][j].str();
            }
        }
        return s;
    }

  private:
    std::array<Row, 3> m_;
};

template <Field K>
class PolyMatrix3 {
  public:
    PolyMatrix3() = default;  // zero matrix

    static PolyMatrix3 from_scalar(const ScalarMatrix3<K>& s) {
        PolyMatrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m_[i][j] = MultiPoly<K>::constant(s.at(i, j));
        return r;
    }

    MultiPoly<K>& at(int i, int j) { return m_[i][j]; }
    const MultiPoly<K>& at(int i, int j) const { return m_[i][j]; }

    bool is_zero() const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!m_[i][j].is_zero()) return false;
        return true;
    }

    bool operator==(const PolyMatrix3& o) const {
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (!(m_[i][j] == o.m_[i][j])) return false;
        return true;
    }

    PolyMatrix3 operator*(const PolyMatrix3& o) const {
        PolyMatrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                r.m_[i][j] = m_[i][0] * o.m_[0][j] + m_[i][1] * o.m_[1][j] +
                             m_[i][2] * o.m_[2][j];
        return r;
    }

    PolyMatrix3 operator+(const PolyMatrix3& o) const {
        PolyMatrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m_[i][j] = m_[i][j] + o.m_[i][j];
        return r;
    }

    // e >= 1 (no identity available without a field spec).
    PolyMatrix3 pow(unsigned e) const {
        if (e == 0) throw Error("matrix pow needs e >= 1");
        PolyMatrix3 r = *this;
        for (unsigned i = 1; i < e; ++i) r = r * *this;
        return r;
    }

    MultiPoly<K> trace() const { return m_[0][0] + m_[1][1] + m_[2][2]; }

    // Entry-wise simultaneous substitution (e.g. J(H) composed with T*X).
    PolyMatrix3 substitute(const std::array<std::optional<MultiPoly<K>>, 3>& bind) const {
        PolyMatrix3 r;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) r.m_[i][j] = m_[i][j].substitute(bind);
        return r;
    }

    // Requires every entry constant (or zero).
    ScalarMatrix3<K> to_scalar(const typename K::Spec& spec) const {
        auto val = [&](int i, int j) {
            if (!m_[i][j].is_constant())
                throw Error("matrix entry is not constant");
            const K* c = m_[i][j].constant_coeff();
            return c ? *c : spec.zero();
        };
        return ScalarMatrix3<K>({val(0, 0), val(0, 1), val(0, 2)},
                                {val(1, 0), val(1, 1), val(1, 2)},
                                {val(2, 0), val(2, 1), val(2, 2)});
    }

  private:
    std::array<std::array<MultiPoly<K>, 3>, 3> m_;
};

// Characteristic coefficients of a 3x3 matrix: the characteristic polynomial
// is t^3 - c1*t^2 + c2*t - c3.
template <Field K>
struct CharCoeffs {
    MultiPoly<K> c1, c2, c3;
};

template <Field K>
CharCoeffs<K> char_coeffs(const PolyMatrix3<K>& M) {
    auto minor2 = [&](int i, int j) {
        return M.at(i, i) * M.at(j, j) - M.at(i, j) * M.at(j, i);
    };
    CharCoeffs<K> r;
    r.c1 = M.trace();
    r.c2 = minor2(0, 1) + minor2(0, 2) + minor2(1, 2);
    // Determinant by explicit cofactor expansion along the first row.
    r.c3 = M.at(0, 0) * (M.at(1, 1) * M.at(2, 2) - M.at(1, 2) * M.at(2, 1)) -
           M.at(0, 1) * (M.at(1, 0) * M.at(2, 2) - M.at(1, 2) * M.at(2, 0)) +
           M.at(0, 2) * (M.at(1, 0) * M.at(2, 1) - M.at(1, 1) * M.at(2, 0));
    return r;
}

// Nilpotency via vanishing characteristic coefficients, cross-checked against
// M^3 = 0.  The two criteria agree for 3x3 matrices over a polynomial ring;
// disagreement indicates an arithmetic bug, not a property of the input.
template <Field K>
bool is_nilpotent(const PolyMatrix3<K>& M) {
    CharCoeffs<K> c = char_coeffs(M);
    bool by_coeffs = c.c1.is_zero() && c.c2.is_zero() && c.c3.is_zero();
    bool by_cube = M.pow(3).is_zero();
    if (by_coeffs != by_cube)
        throw InternalCheckError(
            "nilpotency criteria disagree (char coefficients vs cube)");
    return by_coeffs;
}

// T^{-1} * M * T for a constant invertible T.
template <Field K>
PolyMatrix3<K> scalar_conj(const ScalarMatrix3<K>& T, const PolyMatrix3<K>& M) {
    PolyMatrix3<K> Tm = PolyMatrix3<K>::from_scalar(T);
    PolyMatrix3<K> Ti = PolyMatrix3<K>::from_scalar(T.inverse());
    return Ti * M * Tm;
}

template <Field K>
PolyMatrix3<K> jacobian_of(const MultiPoly<K>& u, const MultiPoly<K>& v,
                           const MultiPoly<K>& h) {
    PolyMatrix3<K> J;
    const MultiPoly<K>* rows[3] = {&u, &v, &h};
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            J.at(i, j) = rows[i]->partial(static_cast<Var>(j));
    return J;
}

}  // namespace niljac
