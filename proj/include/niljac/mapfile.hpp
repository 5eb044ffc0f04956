#pragma once

// Map file format.
//
//   field = Q | GF(p)        (optional, default Q)
//   shape = A|B|C|GENERAL    (optional, default GENERAL)
//   u = <polynomial>
//   v = <polynomial>
//   h = <polynomial>
//
// The canonical writer always emits all five lines in the order above.  For
// shape B the v line holds the outer polynomial; its formal slot is written
// t (the reader also accepts z, but not both spellings at once).

#include <string>
#include <variant>

#include "niljac/field.hpp"
#include "niljac/kvfile.hpp"
#include "niljac/parse.hpp"
#include "niljac/polymap.hpp"

namespace niljac {

using AnyMap = std::variant<PolyMap3<Rational>, PolyMap3<GFp>>;

namespace detail {

template <Field K>
PolyMap3<K> map_from_kv(const std::vector<KvLine>& lines,
                        const typename K::Spec& spec) {
    std::optional<KvLine> su, sv, sh;
    std::optional<Shape> shape;
    for (const auto& kv : lines) {
        auto dup = [&](bool seen) {
            if (seen)
                throw ParseError("line " + std::to_string(kv.line_no) +
                                 ": duplicate key '" + kv.key + "'");
        };
        if (kv.key == "field") {
            continue;  // handled by the dispatching caller
        } else if (kv.key == "shape") {
            dup(shape.has_value());
            auto s = shape_from_name(kv.value);
            if (!s)
                throw ParseError("line " + std::to_string(kv.line_no) +
                                 ": unknown shape '" + kv.value + "'");
            shape = *s;
        } else if (kv.key == "u") {
            dup(su.has_value()); su = kv;
        } else if (kv.key == "v") {
            dup(sv.has_value()); sv = kv;
        } else if (kv.key == "h") {
            dup(sh.has_value()); sh = kv;
        } else {
            throw ParseError("line " + std::to_string(kv.line_no) +
                             ": unknown key '" + kv.key + "'");
        }
    }
    for (const auto* req : {&su, &sv, &sh})
        if (!*req) throw ParseError("map file is missing a component line (u, v, h)");
    Shape sh_tag = shape.value_or(Shape::General);

    auto parse_component = [&](const KvLine& kv, const VarTable& vars) {
        try {
            return parse_poly<K>(kv.value, spec, vars);
        } catch (const ParseError& e) {
            throw ParseError("line " + std::to_string(kv.line_no) + " (" + kv.key +
                             "): " + e.what());
        }
    };
    MultiPoly<K> u = parse_component(*su, VarTable::standard());
    MultiPoly<K> v = parse_component(
        *sv, sh_tag == Shape::B ? VarTable::t_as_z() : VarTable::standard());
    MultiPoly<K> h = parse_component(*sh, VarTable::standard());
    return PolyMap3<K>::make(std::move(u), std::move(v), std::move(h), sh_tag, spec);
}

}  // namespace detail

inline AnyMap read_map_text(const std::string& text) {
    auto lines = read_kv_lines(text);
    std::string field = "Q";
    bool field_seen = false;
    for (const auto& kv : lines) {
        if (kv.key != "field") continue;
        if (field_seen)
            throw ParseError("line " + std::to_string(kv.line_no) +
                             ": duplicate key 'field'");
        field = kv.value;
        field_seen = true;
    }
    return with_field_spec(
        field,
        [&](const Rational::Spec& s) -> AnyMap {
            return detail::map_from_kv<Rational>(lines, s);
        },
        [&](const GFp::Spec& s) -> AnyMap {
            return detail::map_from_kv<GFp>(lines, s);
        });
}

template <Field K>
std::string write_map_text(const PolyMap3<K>& H) {
    std::array<std::string, 3> vnames = {"x", "y", "z"};
    std::array<std::string, 3> wnames = {"x", "y", "t"};
    std::string out;
    out += "field = " + H.spec().describe() + "\n";
    out += "shape = " + std::string(shape_name(H.shape())) + "\n";
    out += "u = " + H.u().str(vnames) + "\n";
    out += "v = " + H.stored_v().str(H.shape() == Shape::B ? wnames : vnames) + "\n";
    out += "h = " + H.h().str(vnames) + "\n";
    return out;
}

inline std::string write_map_text(const AnyMap& H) {
    return std::visit([](const auto& m) { return write_map_text(m); }, H);
}

}  // namespace niljac
