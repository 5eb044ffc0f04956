#pragma once

// Exhaustive and sampled surveys over finitely supported spaces of maps.
//
// A space fixes a shape, a field, a monomial support list per component and
// a list of candidate coefficient values.  Candidates are indexed in mixed
// radix: one digit per support slot, u slots first (each component's
// monomials in descending order), then v, then h, with the first slot most
// significant.  Workers receive contiguous index ranges and their results
// merge associatively, so counts and specimen lists are identical for every
// worker count.
//
// Space file format (key = value lines, '#' comments ignored):
//   shape  = A | B | C | GENERAL          (required)
//   field  = Q | GF(p)                    (default Q)
//   u, v, h = comma-separated monomials   (default empty; empty = component 0)
//   coeffs = all | comma-separated values ('all' needs a finite field)
//   mode   = exhaustive | sampled         (default exhaustive)
//   n, seed = counts for sampled mode     (required when sampled)
//   cap    = candidate limit              (default 10^8)
// Shape B spaces write the outer v support in t (or z), e.g. "v = t^2, x".

#include <cstdint>
#include <exception>
#include <limits>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "niljac/mapfile.hpp"
#include "niljac/normalform.hpp"
#include "niljac/paramfile.hpp"

namespace niljac {

inline constexpr std::uint64_t kDefaultSurveyCap = 100'000'000;

template <Field K>
struct SearchSpace {
    Shape shape;
    typename K::Spec spec;
    std::array<std::vector<Monomial>, 3> support;  // u, v, h slots, descending
    std::vector<K> coeff_values;
    bool sampled = false;
    std::uint64_t sample_count = 0;
    std::uint64_t seed = 0;
    std::uint64_t cap = kDefaultSurveyCap;

    static SearchSpace make(Shape shape, typename K::Spec spec,
                            std::array<std::vector<Monomial>, 3> support,
                            std::vector<K> coeff_values) {
        if (coeff_values.empty()) throw Error("coefficient list is empty");
        for (std::size_t i = 0; i < coeff_values.size(); ++i)
            for (std::size_t j = i + 1; j < coeff_values.size(); ++j)
                if (coeff_values[i] == coeff_values[j])
                    throw Error("coefficient list has duplicates");
        const char* names[3] = {"u", "v", "h"};
        for (int c = 0; c < 3; ++c) {
            auto& mons = support[c];
            std::sort(mons.begin(), mons.end(),
                      [](const Monomial& a, const Monomial& b) { return a > b; });
            for (std::size_t i = 0; i + 1 < mons.size(); ++i)
                if (mons[i] == mons[i + 1])
                    throw Error(std::string("duplicate monomial in ") + names[c] +
                                " support");
            for (const Monomial& m : mons) {
                if (m.is_constant())
                    throw Error(std::string("constant monomial in ") + names[c] +
                                " support (candidates must fix the origin)");
                bool z_ok = m.exp(Var::z) == 0;
                if (!z_ok && ((shape == Shape::A && c != 1) || (shape != Shape::A && c == 2)))
                    throw Error(std::string(names[c]) + " support must be z-free for this shape");
            }
        }
        return SearchSpace{shape, std::move(spec), std::move(support),
                           std::move(coeff_values)};
    }

    std::size_t slot_count() const {
        return support[0].size() + support[1].size() + support[2].size();
    }

    // Total candidate count, or nullopt on uint64 overflow.
    std::optional<std::uint64_t> total_size() const {
        std::uint64_t total = 1;
        std::uint64_t radix = coeff_values.size();
        for (std::size_t i = 0; i < slot_count(); ++i) {
            if (total > std::numeric_limits<std::uint64_t>::max() / radix)
                return std::nullopt;
            total *= radix;
        }
        return total;
    }
};

using AnySearchSpace = std::variant<SearchSpace<Rational>, SearchSpace<GFp>>;

// Candidate at a mixed-radix index (increments of the index change the last
// h slot fastest).
template <Field K>
PolyMap3<K> map_at(const SearchSpace<K>& space, std::uint64_t index) {
    const std::uint64_t radix = space.coeff_values.size();
    std::size_t n = space.slot_count();
    std::vector<std::size_t> digit(n);
    for (std::size_t j = n; j-- > 0;) {
        digit[j] = static_cast<std::size_t>(index % radix);
        index /= radix;
    }
    std::array<MultiPoly<K>, 3> comp = {MultiPoly<K>::zero(), MultiPoly<K>::zero(),
                                        MultiPoly<K>::zero()};
    std::size_t j = 0;
    for (int c = 0; c < 3; ++c) {
        std::vector<typename MultiPoly<K>::Term> terms;
        for (const Monomial& m : space.support[c]) {
            const K& coeff = space.coeff_values[digit[j++]];
            if (!coeff.is_zero()) terms.push_back({m, coeff});
        }
        comp[c] = MultiPoly<K>::from_terms(std::move(terms));
    }
    return PolyMap3<K>::make(std::move(comp[0]), std::move(comp[1]),
                             std::move(comp[2]), space.shape, space.spec);
}

namespace detail {

// splitmix64 finalizer; derives independent per-sample streams from a seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t i) {
    std::uint64_t z = seed + (i + 1) * 0x9E3779B97F4A7C15ull;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

// Uniform draw from [0, n) by rejection; no modulo bias.
inline std::uint64_t uniform_index(std::mt19937_64& rng, std::uint64_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t r;
    do { r = rng(); } while (r >= limit);
    return r % n;
}

}  // namespace detail

// Reproducible sample from the space: the i-th draw of a seed is the same
// map regardless of how many other draws happen around it.
template <Field K>
PolyMap3<K> random_map(const SearchSpace<K>& space, std::uint64_t seed,
                       std::uint64_t i = 0) {
    auto total = space.total_size();
    if (!total || *total > space.cap)
        throw SpaceTooLargeError("space exceeds the candidate cap");
    std::mt19937_64 rng(detail::derive_seed(seed, i));
    return map_at(space, detail::uniform_index(rng, *total));
}

struct SurveyCounts {
    std::uint64_t candidates = 0;
    std::uint64_t nilpotent = 0;
    std::uint64_t dependent = 0;
    std::uint64_t matched = 0;
    std::uint64_t unmatched = 0;

    SurveyCounts& operator+=(const SurveyCounts& o) {
        candidates += o.candidates;
        nilpotent += o.nilpotent;
        dependent += o.dependent;
        matched += o.matched;
        unmatched += o.unmatched;
        return *this;
    }
};

struct SurveyReport {
    std::uint64_t total_size = 0;  // candidates in the space (or sample count)
    SurveyCounts counts;
    // Unmatched specimens in index order, capped at the specimen limit;
    // counts.unmatched is exact regardless.
    std::vector<std::pair<std::uint64_t, std::string>> specimens;
};

namespace detail {

// Keeps the unmatched specimens with the smallest indices seen so far,
// capped at the limit.  Selecting by smallest index (rather than by
// encounter order) keeps the kept set independent of how the index range is
// partitioned between workers, in sampled mode included, where candidate
// indices are not monotone in processing order.
class SpecimenBuffer {
  public:
    explicit SpecimenBuffer(std::size_t limit) : limit_(limit) {}

    bool wants(std::uint64_t index) const {
        return limit_ > 0 && (heap_.size() < limit_ || index < heap_.top().first);
    }

    void add(std::uint64_t index, std::string text) {
        heap_.emplace(index, std::move(text));
        if (heap_.size() > limit_) heap_.pop();
    }

    std::vector<std::pair<std::uint64_t, std::string>> take_sorted() {
        std::vector<std::pair<std::uint64_t, std::string>> out(heap_.size());
        for (std::size_t i = heap_.size(); i-- > 0;) {
            out[i] = heap_.top();
            heap_.pop();
        }
        return out;
    }

  private:
    std::size_t limit_;
    std::priority_queue<std::pair<std::uint64_t, std::string>> heap_;
};

template <Field K>
void survey_one(const SearchSpace<K>& space, std::uint64_t index,
                SurveyCounts& counts, SpecimenBuffer& specimens) {
    PolyMap3<K> H = map_at(space, index);
    ++counts.candidates;
    try {
        for (int k = 0; k < 3; ++k)
            if (!residual_component(H, k).is_zero()) return;
    } catch (const ShapeMismatchError&) {
        // Degenerate candidate (e.g. shape A whose z coefficient enumerated
        // to 0): fall back to the characteristic-coefficient screen.
        CharCoeffs<K> c = char_coeffs(jacobian_of(H));
        if (!c.c1.is_zero() || !c.c2.is_zero() || !c.c3.is_zero()) return;
    }
    if (!is_nilpotent(jacobian_of(H)))
        throw InternalCheckError("zero residuals but non-nilpotent Jacobian");
    ++counts.nilpotent;
    Classification<K> cls = classify_map(H);
    switch (cls.status) {
        case ClassifyStatus::Dependent:
            ++counts.dependent;
            break;
        case ClassifyStatus::NormalFormA:
        case ClassifyStatus::NormalFormB:
            ++counts.matched;
            break;
        case ClassifyStatus::NoMatch:
            ++counts.unmatched;
            if (specimens.wants(index)) specimens.add(index, write_map_text(H));
            break;
        default:
            throw InternalCheckError("unexpected classification of a survey candidate");
    }
}

}  // namespace detail

// Runs the survey with the given worker count.  Results are independent of
// the worker count: ranges are contiguous, counts merge associatively and
// the reported specimens are the unmatched candidates with the smallest
// indices, a selection that does not depend on the range partition.
template <Field K>
SurveyReport run_survey(const SearchSpace<K>& space, unsigned workers = 1,
                        std::size_t specimen_limit = 100) {
    auto total_opt = space.total_size();
    if (!total_opt || *total_opt > space.cap) {
        std::string size_text = total_opt ? std::to_string(*total_opt)
                                          : "more than 2^64";
        throw SpaceTooLargeError("space has " + size_text +
                                 " candidates, cap is " + std::to_string(space.cap));
    }
    const std::uint64_t total = *total_opt;
    const std::uint64_t jobs = space.sampled ? space.sample_count : total;
    if (workers == 0) workers = 1;
    if (jobs > 0 && workers > jobs) workers = static_cast<unsigned>(jobs);

    struct Local {
        SurveyCounts counts;
        detail::SpecimenBuffer specimens;
        std::exception_ptr error;

        explicit Local(std::size_t limit) : specimens(limit) {}
    };
    std::vector<Local> locals(workers == 0 ? 1 : workers, Local(specimen_limit));

    auto run_range = [&](std::uint64_t lo, std::uint64_t hi, Local& local) {
        try {
            for (std::uint64_t i = lo; i < hi; ++i) {
                std::uint64_t index = i;
                if (space.sampled) {
                    std::mt19937_64 rng(detail::derive_seed(space.seed, i));
                    index = detail::uniform_index(rng, total);
                }
                detail::survey_one(space, index, local.counts, local.specimens);
            }
        } catch (...) {
            local.error = std::current_exception();
        }
    };

    if (workers <= 1) {
        run_range(0, jobs, locals[0]);
    } else {
        std::vector<std::thread> threads;
        const std::uint64_t chunk = jobs / workers, extra = jobs % workers;
        std::uint64_t lo = 0;
        for (unsigned w = 0; w < workers; ++w) {
            std::uint64_t hi = lo + chunk + (w < extra ? 1 : 0);
            threads.emplace_back(run_range, lo, hi, std::ref(locals[w]));
            lo = hi;
        }
        for (auto& t : threads) t.join();
    }

    SurveyReport report;
    report.total_size = jobs;
    for (Local& l : locals) {
        if (l.error) std::rethrow_exception(l.error);
        report.counts += l.counts;
        auto part = l.specimens.take_sorted();
        report.specimens.insert(report.specimens.end(),
                                std::make_move_iterator(part.begin()),
                                std::make_move_iterator(part.end()));
    }
    std::sort(report.specimens.begin(), report.specimens.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    if (report.specimens.size() > specimen_limit)
        report.specimens.resize(specimen_limit);
    return report;
}

// ---------------------------------------------------------------------------
// Space files.

namespace detail {

inline std::uint64_t parse_u64(const std::string& text, const std::string& what) {
    if (text.empty() || text.find_first_not_of("0123456789") != std::string::npos)
        throw ParseError(what + " must be a nonnegative integer");
    try {
        return std::stoull(text);
    } catch (const std::out_of_range&) {
        throw ParseError(what + " is out of range");
    }
}

template <Field K>
std::vector<Monomial> parse_support(const std::string& text,
                                    const typename K::Spec& spec,
                                    const VarTable& vars) {
    std::vector<Monomial> mons;
    std::size_t start = 0;
    auto take = [&](std::size_t end) {
        std::string chunk = kv_trim(text.substr(start, end - start));
        start = end + 1;
        if (chunk.empty()) throw ParseError("empty monomial in support list");
        MultiPoly<K> p = parse_poly<K>(chunk, spec, vars);
        if (p.terms().size() != 1 || !p.terms()[0].c.is_one())
            throw ParseError("'" + chunk + "' is not a monomial with coefficient 1");
        if (p.terms()[0].m.is_constant())
            throw ParseError("constant monomial '" + chunk + "' not allowed");
        mons.push_back(p.terms()[0].m);
    };
    if (kv_trim(text).empty()) return mons;
    for (std::size_t i = 0; i < text.size(); ++i)
        if (text[i] == ',') take(i);
    take(text.size());
    return mons;
}

template <Field K>
SearchSpace<K> space_from_kv(const std::vector<KvLine>& lines, Shape shape,
                             const typename K::Spec& spec) {
    std::array<std::vector<Monomial>, 3> support;
    std::vector<K> coeffs;
    bool sampled = false, have_coeffs = false, have_mode = false;
    std::optional<std::uint64_t> n, seed, cap;

    for (const KvLine& kv : lines) {
        auto fail = [&](const std::string& msg) -> ParseError {
            return ParseError("line " + std::to_string(kv.line_no) + ": " + msg);
        };
        try {
            if (kv.key == "shape" || kv.key == "field") continue;  // handled by caller
            if (kv.key == "u" || kv.key == "v" || kv.key == "h") {
                int c = kv.key == "u" ? 0 : kv.key == "v" ? 1 : 2;
                if (!support[c].empty()) throw fail("duplicate '" + kv.key + "' line");
                VarTable vars = (c == 1 && shape == Shape::B) ? VarTable::t_as_z()
                                                              : VarTable::standard();
                support[c] = parse_support<K>(kv.value, spec, vars);
            } else if (kv.key == "coeffs") {
                if (have_coeffs) throw fail("duplicate 'coeffs' line");
                have_coeffs = true;
                if (kv_trim(kv.value) == "all") {
                    long p = spec.characteristic();
                    if (p == 0)
                        throw fail("coeffs = all requires a finite field");
                    for (long i = 0; i < p; ++i) coeffs.push_back(spec.from_long(i));
                } else {
                    std::size_t start = 0;
                    auto take = [&](std::size_t end) {
                        coeffs.push_back(
                            parse_scalar<K>(kv.value.substr(start, end - start), spec));
                        start = end + 1;
                    };
                    for (std::size_t i = 0; i < kv.value.size(); ++i)
                        if (kv.value[i] == ',') take(i);
                    take(kv.value.size());
                }
            } else if (kv.key == "mode") {
                if (have_mode) throw fail("duplicate 'mode' line");
                have_mode = true;
                std::string m = kv_trim(kv.value);
                if (m == "sampled") sampled = true;
                else if (m != "exhaustive") throw fail("unknown mode '" + m + "'");
            } else if (kv.key == "n") {
                n = parse_u64(kv_trim(kv.value), "n");
            } else if (kv.key == "seed") {
                seed = parse_u64(kv_trim(kv.value), "seed");
            } else if (kv.key == "cap") {
                cap = parse_u64(kv_trim(kv.value), "cap");
            } else {
                throw fail("unknown key '" + kv.key + "'");
            }
        } catch (const ParseError& e) {
            std::string w = e.what();
            if (w.rfind("line ", 0) == 0) throw;
            throw fail(w);
        }
    }

    if (!have_coeffs) throw ParseError("missing 'coeffs' line");
    if (sampled && (!n || !seed))
        throw ParseError("sampled mode requires 'n' and 'seed' lines");
    if (!sampled && (n || seed))
        throw ParseError("'n' and 'seed' lines require mode = sampled");

    SearchSpace<K> space = SearchSpace<K>::make(shape, spec, std::move(support),
                                                std::move(coeffs));
    space.sampled = sampled;
    if (n) space.sample_count = *n;
    if (seed) space.seed = *seed;
    if (cap) space.cap = *cap;
    return space;
}

}  // namespace detail

inline AnySearchSpace read_search_space_text(const std::string& text) {
    std::vector<KvLine> lines = read_kv_lines(text);
    std::string field_text = "Q";
    std::optional<Shape> shape;
    bool field_seen = false, shape_seen = false;
    for (const KvLine& kv : lines) {
        if (kv.key == "field") {
            if (field_seen)
                throw ParseError("line " + std::to_string(kv.line_no) +
                                 ": duplicate 'field' line");
            field_seen = true;
            field_text = kv.value;
        } else if (kv.key == "shape") {
            if (shape_seen)
                throw ParseError("line " + std::to_string(kv.line_no) +
                                 ": duplicate 'shape' line");
            shape_seen = true;
            auto s = shape_from_name(kv_trim(kv.value));
            if (!s)
                throw ParseError("line " + std::to_string(kv.line_no) +
                                 ": unknown shape '" + kv.value + "'");
            shape = *s;
        }
    }
    if (!shape) throw ParseError("missing 'shape' line");
    return with_field_spec(
        field_text,
        [&](const Rational::Spec& spec) -> AnySearchSpace {
            return detail::space_from_kv<Rational>(lines, *shape, spec);
        },
        [&](const GFp::Spec& spec) -> AnySearchSpace {
            return detail::space_from_kv<GFp>(lines, *shape, spec);
        });
}

}  // namespace niljac
