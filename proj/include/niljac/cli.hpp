#pragma once

// Command implementations for the niljac tool.  Each command writes to a
// stream and returns the process exit code, so tests drive them in-process;
// the binary in tools/ only handles argument parsing and file I/O.
//
// Exit codes: 0 = success / property holds, 1 = property fails (not
// nilpotent, not dependent, no normal form, unmatched survey specimens),
// 2 = usage or input error, 3 = internal invariant failure.
//
// Output convention: machine-readable "key = value" lines; everything meant
// for humans is prefixed with '#'.

#include <ostream>
#include <string>

#include "niljac/mapfile.hpp"
#include "niljac/normalform.hpp"
#include "niljac/paramfile.hpp"
#include "niljac/search.hpp"

namespace niljac {

// Maps exceptions to exit codes; commands themselves just throw.
template <typename F>
int cli_guard(std::ostream& err, F&& body) {
    try {
        return body();
    } catch (const InternalCheckError& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 3;
    }
}

namespace detail {

template <Field K>
void print_classification(const Classification<K>& cls, std::ostream& out) {
    switch (cls.status) {
        case ClassifyStatus::NormalFormA:
            out << "# map is in the plane-family normal form (shape A)\n";
            break;
        case ClassifyStatus::NormalFormB:
            out << "# map reaches the mirrored normal form after conjugation\n";
            break;
        case ClassifyStatus::Dependent:
            out << "# components are linearly dependent\n";
            break;
        case ClassifyStatus::NoMatch:
            out << "# no conjugation in the tried family reaches a normal form\n";
            break;
        case ClassifyStatus::NotNilpotent:
            out << "# Jacobian is not nilpotent\n";
            break;
        case ClassifyStatus::NotOriginPreserving:
            out << "# map does not fix the origin\n";
            break;
        case ClassifyStatus::ShapeMismatch:
            out << "# map does not have the required component structure\n";
            break;
    }
    for (const auto& note : cls.notes) out << "# note: " << note << "\n";
    out << "status = " << classify_status_name(cls.status) << "\n";
    if (cls.a_params) {
        const auto& p = *cls.a_params;
        out << "g = " << p.g.str() << "\n";
        out << "a = " << p.a.str() << "\n";
        out << "v1 = " << p.v1.str() << "\n";
        out << "c0 = " << p.c0.str() << "\n";
        out << "l1 = " << p.l1.str() << "\n";
        out << "l2 = " << p.l2.str() << "\n";
        out << "l2tilde = " << p.l2t.str() << "\n";
    }
    if (cls.b_params) {
        const auto& p = *cls.b_params;
        out << "g = " << p.g.str() << "\n";
        out << "a = " << p.a.str() << "\n";
        out << "u1 = " << p.u1.str() << "\n";
        out << "c0 = " << p.c0.str() << "\n";
        out << "l1 = " << p.l1.str() << "\n";
        out << "l2 = " << p.l2.str() << "\n";
        out << "l2tilde = " << p.l2t.str() << "\n";
    }
    if (cls.conjugator) out << "T = " << cls.conjugator->str() << "\n";
    if (cls.witness) {
        out << "witness = " << cls.witness->lambda[0].str() << ","
            << cls.witness->lambda[1].str() << "," << cls.witness->lambda[2].str()
            << "\n";
    }
    if (cls.gating) {
        const auto& g = *cls.gating;
        out << "gating_axis = " << g.axis << "\n";
        out << "gating_deg_u = " << g.deg_u << "\n";
        out << "gating_deg_h = " << g.deg_h << "\n";
        out << "gating_gcd = " << g.gcd_deg << "\n";
        out << "within_proven_bounds = " << (g.within_proven_bounds ? "true" : "false")
            << "\n";
    }
}

}  // namespace detail

// check: residual system and nilpotency verdict.
inline int cmd_check(const std::string& map_text, std::ostream& out) {
    AnyMap any = read_map_text(map_text);
    return std::visit(
        [&](const auto& H) {
            out << "field = " << H.spec().describe() << "\n";
            out << "shape = " << shape_name(H.shape()) << "\n";
            auto rs = residuals(H);
            bool all_zero = true;
            for (int i = 0; i < 3; ++i) {
                out << "residual_" << (i + 1) << " = " << rs[i].str() << "\n";
                all_zero = all_zero && rs[i].is_zero();
            }
            bool nil = is_nilpotent(jacobian_of(H));
            if (nil != all_zero)
                throw InternalCheckError("residual verdict disagrees with nilpotency");
            out << "origin_fixed = " << (origin_check(H) ? "true" : "false") << "\n";
            out << "nilpotent = " << (nil ? "true" : "false") << "\n";
            return nil ? 0 : 1;
        },
        any);
}

// depend: linear dependence of the components over K.
inline int cmd_depend(const std::string& map_text, std::ostream& out) {
    AnyMap any = read_map_text(map_text);
    return std::visit(
        [&](const auto& H) {
            auto w = linear_dependence(H);
            out << "dependent = " << (w ? "true" : "false") << "\n";
            if (w) {
                out << "witness = " << w->lambda[0].str() << "," << w->lambda[1].str()
                    << "," << w->lambda[2].str() << "\n";
                out << "# witness lambda satisfies lambda . (u, v, h) = 0\n";
            }
            return w ? 0 : 1;
        },
        any);
}

// classify: full classification with the conjugator family.
inline int cmd_classify(const std::string& map_text, std::ostream& out) {
    AnyMap any = read_map_text(map_text);
    return std::visit(
        [&](const auto& H) {
            auto cls = classify_map(H);
            detail::print_classification(cls, out);
            switch (cls.status) {
                case ClassifyStatus::NormalFormA:
                case ClassifyStatus::NormalFormB:
                case ClassifyStatus::Dependent:
                    return 0;
                default:
                    return 1;
            }
        },
        any);
}

// gen: emit a generated map as a map file.  The family token on the command
// line must agree with any family line inside the parameter file.
inline int cmd_gen(const std::string& family_token, const std::string& param_text,
                   std::ostream& out) {
    GenFamily requested = gen_family_from_name(family_token);
    std::string patched = param_text;
    ParamFileData data = [&]() {
        // Tolerate files without a family line by trusting the token.
        try {
            return read_param_file_text(param_text);
        } catch (const ParseError& e) {
            if (std::string(e.what()) != "missing 'family' line") throw;
            patched = "family = " + family_token + "\n" + param_text;
            return read_param_file_text(patched);
        }
    }();
    if (data.family != requested)
        throw ParseError("parameter file family does not match '" + family_token + "'");

    auto emit = [&](const auto& spec) {
        using K = std::decay_t<decltype(spec.zero())>;
        if (data.family == GenFamily::A) {
            GeneratedMap<K> g = generate_family_a(build_family_a_params<K>(data, spec));
            if (!g.origin_ok) out << "# origin violation: g(l2tilde) != 0\n";
            out << write_map_text(g.map);
        } else if (data.family == GenFamily::B) {
            GeneratedMap<K> g = generate_family_b(build_family_b_params<K>(data, spec));
            if (!g.origin_ok) out << "# origin violation: g(l2tilde) != 0\n";
            out << write_map_text(g.map);
        } else {
            K shear = spec.zero();
            FamilyBParams<K> p = build_family_b_params<K>(data, spec, &shear);
            ShearedMap<K> g = generate_sheared_b(p, shear);
            if (!g.origin_ok) out << "# origin violation: g(l2tilde) != 0\n";
            out << "# conjugate(map, T) with T = " << g.T.str()
                << " recovers the normal position\n";
            out << write_map_text(g.map);
        }
        return 0;
    };
    return with_field_spec(
        data.field_text, [&](const Rational::Spec& s) { return emit(s); },
        [&](const GFp::Spec& s) { return emit(s); });
}

// lemma21: shift extraction for a planar polynomial, plus the divisibility
// branch report when the leading hypothesis applies.
inline int cmd_lemma21(const std::string& expr, const std::string& field_text,
                       std::ostream& out) {
    auto run = [&](const auto& spec) {
        using K = std::decay_t<decltype(spec.zero())>;
        MultiPoly<K> Q = parse_poly<K>(expr, spec);
        if (Q.deg_in(Var::z) > 0) throw ParseError("polynomial must lie in K[x, y]");
        ShiftExtraction<K> ex = extract_shift(Q, spec);
        switch (ex.status) {
            case ShiftStatus::Extracted:
                out << "status = Extracted\n";
                out << "a = " << ex.shift->str() << "\n";
                out << "g = " << ex.outer->str() << "\n";
                break;
            case ShiftStatus::LeadingCoeffNotConstant:
                out << "# leading coefficient in y is not a constant\n";
                out << "status = LeadingCoeffNotConstant\n";
                break;
            case ShiftStatus::NoShift:
                out << "# no shift a(x) makes the polynomial univariate\n";
                out << "status = NoShift\n";
                break;
        }
        if (Q.deg_in(Var::y) >= 1 &&
            Q.coeff_in(Var::y, static_cast<std::uint32_t>(Q.deg_in(Var::y))).is_constant()) {
            BranchReport<K> br = branch_check(Q, spec);
            out << "qy_divides_qx = " << (br.qy_divides_qx ? "true" : "false") << "\n";
            out << "qy_divides_q_shifted = " << (br.shift_constant ? "true" : "false")
                << "\n";
            if (br.shift_constant)
                out << "shift_constant = " << br.shift_constant->str() << "\n";
        }
        return ex.status == ShiftStatus::Extracted ? 0 : 1;
    };
    return with_field_spec(
        field_text, [&](const Rational::Spec& s) { return run(s); },
        [&](const GFp::Spec& s) { return run(s); });
}

// conjugate: emit conjugate(H, T) as a map file.  T comes from --matrix, or
// from composing --swap and --shear (T = swap * shear).
inline int cmd_conjugate(const std::string& map_text, const std::string& matrix_text,
                         const std::string& shear_text, bool swap, std::ostream& out) {
    if (!matrix_text.empty() && (swap || !shear_text.empty()))
        throw ParseError("--matrix excludes --swap and --shear");
    if (matrix_text.empty() && !swap && shear_text.empty())
        throw ParseError("conjugation needs --matrix, --swap or --shear");
    AnyMap any = read_map_text(map_text);
    return std::visit(
        [&](const auto& H) {
            using K = std::decay_t<decltype(H.spec().zero())>;
            const auto spec = H.spec();
            ScalarMatrix3<K> T = ScalarMatrix3<K>::identity(spec);
            if (!matrix_text.empty()) {
                T = parse_matrix<K>(matrix_text, spec);
            } else {
                if (swap) T = swap_matrix<K>(spec);
                if (!shear_text.empty())
                    T = T * shear_matrix(parse_scalar<K>(shear_text, spec));
            }
            out << write_map_text(conjugate(H, T));
            return 0;
        },
        any);
}

// search: survey a space; exit 0 iff no unmatched specimen exists.
inline int cmd_search(const std::string& space_text, unsigned workers,
                      std::optional<std::uint64_t> seed_override, std::ostream& out) {
    AnySearchSpace any = read_search_space_text(space_text);
    return std::visit(
        [&](auto space) {
            if (space.sampled && seed_override) space.seed = *seed_override;
            if (space.sampled && space.sample_count == 0)
                throw ParseError("sampled space has n = 0");
            SurveyReport rep = run_survey(space, workers);
            out << "total = " << rep.total_size << "\n";
            out << "candidates = " << rep.counts.candidates << "\n";
            out << "nilpotent = " << rep.counts.nilpotent << "\n";
            out << "dependent = " << rep.counts.dependent << "\n";
            out << "matched = " << rep.counts.matched << "\n";
            out << "unmatched = " << rep.counts.unmatched << "\n";
            for (const auto& [index, text] : rep.specimens) {
                out << "# ---- unmatched specimen, index " << index << "\n";
                std::size_t pos = 0;
                while (pos < text.size()) {
                    std::size_t nl = text.find('\n', pos);
                    if (nl == std::string::npos) nl = text.size();
                    out << "#   " << text.substr(pos, nl - pos) << "\n";
                    pos = nl + 1;
                }
            }
            return rep.counts.unmatched == 0 ? 0 : 1;
        },
        any);
}

}  // namespace niljac
