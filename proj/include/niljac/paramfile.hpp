#pragma once

// Parameter files for the generator families, plus small scalar/matrix
// parsing helpers shared with the CLI.
//
// Format: key = value lines, '#' comments and blank lines ignored.
//   family  = thm22 | prop31 | thm33     (required)
//   field   = Q | GF(p)                  (optional, default Q)
//   g       = polynomial in t            (required; g(0) = 0, deg >= 1)
//   a, c0   = nonzero scalars            (optional, default 1)
//   v1 (thm22) / u1 (prop31, thm33)      (optional, default 1)
//   l1, l2, l2tilde = scalars            (optional, default 0)
//   shear   = scalar                     (thm33 only; required)
// Scalars use the rational literal syntax, e.g. -3/2.

#include <map>
#include <optional>
#include <set>
#include <string>

#include "niljac/kvfile.hpp"
#include "niljac/normalform.hpp"
#include "niljac/parse.hpp"

namespace niljac {

// Parses a scalar literal (any constant expression in the polynomial
// grammar, typically n or n/d).
template <Field K>
K parse_scalar(const std::string& text, const typename K::Spec& spec) {
    MultiPoly<K> p = parse_poly<K>(text, spec, VarTable::single('t'));
    if (!p.is_constant()) throw ParseError("expected a constant");
    const K* c = p.constant_coeff();
    return c ? *c : spec.zero();
}

// Parses "a,b,c;d,e,f;g,h,i" (row-major) into a matrix.
template <Field K>
ScalarMatrix3<K> parse_matrix(const std::string& text, const typename K::Spec& spec) {
    std::array<std::array<std::string, 3>, 3> cell;
    std::size_t row = 0, col = 0, start = 0;
    auto put = [&](std::size_t end) {
        if (row > 2 || col > 2) throw ParseError("matrix needs exactly 3x3 entries");
        cell[row][col] = text.substr(start, end - start);
        start = end + 1;
    };
    for (std::size_t i = 0; i < text.size(); ++i) {
        if (text[i] == ',') { put(i); ++col; }
        else if (text[i] == ';') { put(i); ++row; col = 0; }
    }
    put(text.size());
    if (row != 2 || col != 2) throw ParseError("matrix needs exactly 3x3 entries");
    auto e = [&](int i, int j) { return parse_scalar<K>(cell[i][j], spec); };
    return ScalarMatrix3<K>({e(0, 0), e(0, 1), e(0, 2)},
                            {e(1, 0), e(1, 1), e(1, 2)},
                            {e(2, 0), e(2, 1), e(2, 2)});
}

enum class GenFamily { A, B, ShearedB };

inline GenFamily gen_family_from_name(const std::string& name) {
    if (name == "thm22") return GenFamily::A;
    if (name == "prop31") return GenFamily::B;
    if (name == "thm33") return GenFamily::ShearedB;
    throw ParseError("unknown family '" + name + "' (expected thm22, prop31 or thm33)");
}

struct ParamFileData {
    GenFamily family;
    std::string field_text;  // "Q" when absent
    std::map<std::string, KvLine> values;
};

inline ParamFileData read_param_file_text(const std::string& text) {
    ParamFileData data;
    data.field_text = "Q";
    std::optional<std::string> family;
    for (const KvLine& kv : read_kv_lines(text)) {
        if (data.values.count(kv.key))
            throw ParseError("line " + std::to_string(kv.line_no) + ": duplicate key '" +
                             kv.key + "'");
        if (kv.key == "family") family = kv.value;
        else if (kv.key == "field") data.field_text = kv.value;
        data.values.emplace(kv.key, kv);
    }
    if (!family) throw ParseError("missing 'family' line");
    data.family = gen_family_from_name(*family);
    data.values.erase("family");
    data.values.erase("field");
    return data;
}

namespace detail {

template <Field K>
class ParamReader {
  public:
    ParamReader(const ParamFileData& data, const typename K::Spec& spec)
        : data_(data), spec_(spec) {}

    K scalar(const std::string& key, const K& fallback) {
        auto it = data_.values.find(key);
        seen_.insert(key);
        if (it == data_.values.end()) return fallback;
        return value_of(it->second, [&](const std::string& v) { return parse_scalar<K>(v, spec_); });
    }

    K required_scalar(const std::string& key) {
        auto it = data_.values.find(key);
        seen_.insert(key);
        if (it == data_.values.end())
            throw ParseError("missing '" + key + "' line");
        return value_of(it->second, [&](const std::string& v) { return parse_scalar<K>(v, spec_); });
    }

    UniPoly<K> required_unipoly(const std::string& key) {
        auto it = data_.values.find(key);
        seen_.insert(key);
        if (it == data_.values.end())
            throw ParseError("missing '" + key + "' line");
        return value_of(it->second,
                        [&](const std::string& v) { return parse_unipoly<K>(v, 't', spec_); });
    }

    void finish() const {
        for (const auto& [key, kv] : data_.values)
            if (!seen_.count(key))
                throw ParseError("line " + std::to_string(kv.line_no) + ": unknown key '" +
                                 key + "'");
    }

  private:
    template <typename F>
    auto value_of(const KvLine& kv, F&& parse) {
        try {
            return parse(kv.value);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(kv.line_no) + " (" + kv.key + "): " +
                             e.what());
        }
    }

    const ParamFileData& data_;
    const typename K::Spec& spec_;
    std::set<std::string> seen_;
};

}  // namespace detail

template <Field K>
FamilyAParams<K> build_family_a_params(const ParamFileData& data,
                                       const typename K::Spec& spec) {
    detail::ParamReader<K> r(data, spec);
    UniPoly<K> g = r.required_unipoly("g");
    K a = r.scalar("a", spec.one());
    K v1 = r.scalar("v1", spec.one());
    K c0 = r.scalar("c0", spec.one());
    K l1 = r.scalar("l1", spec.zero());
    K l2 = r.scalar("l2", spec.zero());
    K l2t = r.scalar("l2tilde", spec.zero());
    r.finish();
    return FamilyAParams<K>::make(std::move(g), std::move(a), std::move(v1),
                                  std::move(c0), std::move(l1), std::move(l2),
                                  std::move(l2t));
}

template <Field K>
FamilyBParams<K> build_family_b_params(const ParamFileData& data,
                                       const typename K::Spec& spec,
                                       K* shear_out = nullptr) {
    detail::ParamReader<K> r(data, spec);
    UniPoly<K> g = r.required_unipoly("g");
    K a = r.scalar("a", spec.one());
    K u1 = r.scalar("u1", spec.one());
    K c0 = r.scalar("c0", spec.one());
    K l1 = r.scalar("l1", spec.zero());
    K l2 = r.scalar("l2", spec.zero());
    K l2t = r.scalar("l2tilde", spec.zero());
    if (shear_out) *shear_out = r.required_scalar("shear");
    r.finish();
    return FamilyBParams<K>::make(std::move(g), std::move(a), std::move(u1),
                                  std::move(c0), std::move(l1), std::move(l2),
                                  std::move(l2t));
}

}  // namespace niljac
