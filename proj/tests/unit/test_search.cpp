#include <catch2/catch_amalgamated.hpp>

#include "niljac/search.hpp"
#include "support/testutil.hpp"

using namespace niljac;

namespace {
GFp::Spec f3(3);
GFp::Spec f5(5);
GFp::Spec f7(7);

Monomial mono(std::uint32_t a, std::uint32_t b, std::uint32_t c) {
    return Monomial(a, b, c);
}

std::vector<GFp> range_coeffs(const GFp::Spec& f, long n) {
    std::vector<GFp> v;
    for (long i = 0; i < n; ++i) v.push_back(f.from_long(i));
    return v;
}

bool same_counts(const SurveyCounts& a, const SurveyCounts& b) {
    return a.candidates == b.candidates && a.nilpotent == b.nilpotent &&
           a.dependent == b.dependent && a.matched == b.matched &&
           a.unmatched == b.unmatched;
}

// GF(3) space whose nonzero candidates have Frobenius-degree components, so
// every independent nilpotent candidate is honestly unmatched (the normal-form
// machinery needs characteristic 0 or > the component degree).
SearchSpace<GFp> frobenius_space() {
    std::array<std::vector<Monomial>, 3> sup;
    sup[0] = {mono(0, 3, 0), mono(6, 0, 0)};
    sup[1] = {mono(0, 0, 1), mono(1, 3, 0), mono(7, 0, 0)};
    sup[2] = {mono(0, 6, 0), mono(6, 3, 0), mono(12, 0, 0)};
    return SearchSpace<GFp>::make(Shape::General, f3, std::move(sup),
                                  range_coeffs(f3, 3));
}
}  // namespace

TEST_CASE("candidate indexing is mixed radix with the last h slot fastest") {
    std::array<std::vector<Monomial>, 3> sup;
    sup[0] = {mono(1, 0, 0)};
    sup[1] = {mono(0, 0, 1)};
    sup[2] = {mono(0, 1, 0)};
    auto space =
        SearchSpace<GFp>::make(Shape::General, f5, std::move(sup), range_coeffs(f5, 3));
    REQUIRE(space.total_size() == 27);

    CHECK(map_at(space, 0).u().is_zero());
    CHECK(map_at(space, 1).h().str() == "y");
    CHECK(map_at(space, 1).u().is_zero());
    CHECK(map_at(space, 3).stored_v().str() == "z");
    CHECK(map_at(space, 3).h().is_zero());

    auto H = map_at(space, 9 * 2 + 3 * 1 + 2);
    CHECK(H.u().str() == "2*x");
    CHECK(H.stored_v().str() == "z");
    CHECK(H.h().str() == "2*y");
}

TEST_CASE("support lists are sorted descending before indexing") {
    std::array<std::vector<Monomial>, 3> sup;
    sup[0] = {mono(0, 1, 0), mono(2, 0, 0)};  // y listed before x^2
    auto space =
        SearchSpace<GFp>::make(Shape::General, f5, std::move(sup), range_coeffs(f5, 3));
    REQUIRE(space.total_size() == 9);
    CHECK(space.support[0] == std::vector<Monomial>{mono(2, 0, 0), mono(0, 1, 0)});
    CHECK(map_at(space, 3).u().str() == "x^2");
    CHECK(map_at(space, 1).u().str() == "y");
    CHECK(map_at(space, 4).u().str() == "x^2 + y");
}

TEST_CASE("space validation") {
    auto base_sup = []() {
        std::array<std::vector<Monomial>, 3> sup;
        sup[0] = {mono(0, 1, 0)};
        return sup;
    };
    CHECK_THROWS_AS(SearchSpace<GFp>::make(Shape::General, f5, base_sup(),
                                           std::vector<GFp>{}),
                    Error);
    CHECK_THROWS_AS(
        SearchSpace<GFp>::make(Shape::General, f5, base_sup(),
                               std::vector<GFp>{f5.one(), f5.from_long(6)}),
        Error);  // 6 = 1 in GF(5)

    std::array<std::vector<Monomial>, 3> dup;
    dup[0] = {mono(1, 0, 0), mono(1, 0, 0)};
    CHECK_THROWS_AS(
        SearchSpace<GFp>::make(Shape::General, f5, std::move(dup), range_coeffs(f5, 2)),
        Error);

    std::array<std::vector<Monomial>, 3> con;
    con[1] = {mono(0, 0, 0)};
    CHECK_THROWS_AS(
        SearchSpace<GFp>::make(Shape::General, f5, std::move(con), range_coeffs(f5, 2)),
        Error);

    std::array<std::vector<Monomial>, 3> zh;
    zh[2] = {mono(0, 0, 1)};
    CHECK_THROWS_AS(
        SearchSpace<GFp>::make(Shape::General, f5, std::move(zh), range_coeffs(f5, 2)),
        Error);

    std::array<std::vector<Monomial>, 3> zu;
    zu[0] = {mono(0, 0, 1)};
    CHECK_THROWS_AS(
        SearchSpace<GFp>::make(Shape::A, f5, std::move(zu), range_coeffs(f5, 2)),
        Error);

    // The same u support is fine for shape C (only h must stay planar).
    std::array<std::vector<Monomial>, 3> zc;
    zc[0] = {mono(0, 0, 1)};
    CHECK_NOTHROW(
        SearchSpace<GFp>::make(Shape::C, f5, std::move(zc), range_coeffs(f5, 2)));
}

TEST_CASE("exhaustive survey partitions nilpotent candidates") {
    auto space = frobenius_space();
    REQUIRE(space.total_size() == 6561);
    auto rep = run_survey(space, 1);
    CHECK(rep.total_size == 6561);
    CHECK(rep.counts.candidates == 6561);
    CHECK(rep.counts.nilpotent ==
          rep.counts.dependent + rep.counts.matched + rep.counts.unmatched);
    // Disjoint supports: a candidate is dependent exactly when a component
    // vanishes, so 8 * 26 * 26 of the 6561 all-nilpotent candidates survive.
    CHECK(rep.counts.nilpotent == 6561);
    CHECK(rep.counts.unmatched == 8 * 26 * 26);
    REQUIRE(rep.specimens.size() == 100);  // default specimen cap

    for (std::size_t i = 0; i + 1 < rep.specimens.size(); ++i)
        CHECK(rep.specimens[i].first < rep.specimens[i + 1].first);
    for (const auto& [index, text] : rep.specimens)
        CHECK(write_map_text(map_at(space, index)) == text);
}

TEST_CASE("survey results are independent of the worker count") {
    auto space = frobenius_space();
    auto r1 = run_survey(space, 1);
    auto r3 = run_survey(space, 3);
    auto r7 = run_survey(space, 7);
    CHECK(same_counts(r1.counts, r3.counts));
    CHECK(same_counts(r1.counts, r7.counts));
    CHECK(r1.specimens == r3.specimens);
    CHECK(r1.specimens == r7.specimens);
}

TEST_CASE("sampled surveys are reproducible and seed-sensitive") {
    auto space = frobenius_space();
    space.sampled = true;
    space.sample_count = 200;
    space.seed = 99;

    auto a = run_survey(space, 1);
    auto b = run_survey(space, 5);
    CHECK(a.total_size == 200);
    CHECK(a.counts.candidates == 200);
    CHECK(same_counts(a.counts, b.counts));
    CHECK(a.specimens == b.specimens);

    int diff = 0;
    for (std::uint64_t i = 0; i < 100; ++i) {
        auto x = write_map_text(random_map(space, 42, i));
        CHECK(x == write_map_text(random_map(space, 42, i)));
        if (x != write_map_text(random_map(space, 43, i))) ++diff;
    }
    CHECK(diff >= 90);
}

TEST_CASE("candidate caps") {
    auto space = frobenius_space();
    space.cap = 100;
    try {
        run_survey(space, 1);
        FAIL("expected SpaceTooLargeError");
    } catch (const SpaceTooLargeError& e) {
        CHECK(std::string(e.what()).find("6561") != std::string::npos);
    }
    CHECK_THROWS_AS(random_map(space, 1, 0), SpaceTooLargeError);

    // 3^41 overflows uint64; the size is reported as beyond 2^64.
    std::array<std::vector<Monomial>, 3> sup;
    for (std::uint32_t i = 1; i <= 41; ++i) sup[0].push_back(mono(i, 0, 0));
    auto big = SearchSpace<GFp>::make(Shape::General, f3, std::move(sup),
                                      range_coeffs(f3, 3));
    CHECK_FALSE(big.total_size().has_value());
    try {
        run_survey(big, 1);
        FAIL("expected SpaceTooLargeError");
    } catch (const SpaceTooLargeError& e) {
        CHECK(std::string(e.what()).find("2^64") != std::string::npos);
    }
}

TEST_CASE("a survey finds the normal-form instances it covers") {
    // GF(7) shape-A space around the reduction of the basic family-A map.
    std::array<std::vector<Monomial>, 3> sup;
    sup[0] = {mono(0, 1, 0), mono(2, 0, 0)};
    sup[1] = {mono(0, 0, 1), mono(3, 0, 0), mono(1, 1, 0)};
    sup[2] = {mono(4, 0, 0), mono(2, 1, 0), mono(0, 2, 0)};
    std::vector<GFp> coeffs = {f7.zero(), f7.one(), f7.from_long(2), f7.from_long(5)};
    auto space = SearchSpace<GFp>::make(Shape::A, f7, std::move(sup), coeffs);
    REQUIRE(space.total_size() == 65536);

    auto rep = run_survey(space, 4);
    CHECK(rep.counts.candidates == 65536);
    CHECK(rep.counts.nilpotent ==
          rep.counts.dependent + rep.counts.matched + rep.counts.unmatched);
    CHECK(rep.counts.matched >= 1);
}

TEST_CASE("space files round trip") {
    std::string text =
        "# smoke survey\n"
        "shape = C\n"
        "field = GF(5)\n"
        "u = z, y\n"
        "v = x\n"
        "h = x, y\n"
        "coeffs = all\n";
    auto any = read_search_space_text(text);
    auto& sp = std::get<SearchSpace<GFp>>(any);
    CHECK(sp.shape == Shape::C);
    CHECK(sp.spec.characteristic() == 5);
    CHECK(sp.coeff_values.size() == 5);
    CHECK(sp.support[0] == std::vector<Monomial>{mono(0, 1, 0), mono(0, 0, 1)});
    CHECK(sp.support[1] == std::vector<Monomial>{mono(1, 0, 0)});
    CHECK(sp.support[2] == std::vector<Monomial>{mono(1, 0, 0), mono(0, 1, 0)});
    CHECK(sp.total_size() == 3125);
    CHECK_FALSE(sp.sampled);
    CHECK(sp.cap == kDefaultSurveyCap);

    // All linear candidates with nilpotent Jacobian have dependent rows.
    auto rep = run_survey(sp, 1);
    CHECK(rep.counts.candidates == 3125);
    CHECK(rep.counts.nilpotent >= 1);
    CHECK(rep.counts.unmatched == 0);
    CHECK(rep.counts.nilpotent == rep.counts.dependent + rep.counts.matched);
    auto rep4 = run_survey(sp, 4);
    CHECK(same_counts(rep.counts, rep4.counts));
}

TEST_CASE("shape B space files write the outer support in t") {
    std::string text =
        "shape = B\n"
        "field = GF(7)\n"
        "u = z, y\n"
        "v = t^2, x\n"
        "h = x\n"
        "coeffs = 0, 1\n";
    auto any = read_search_space_text(text);
    auto& sp = std::get<SearchSpace<GFp>>(any);
    CHECK(sp.shape == Shape::B);
    CHECK(sp.support[1] == std::vector<Monomial>{mono(1, 0, 0), mono(0, 0, 2)});

    // z spells the same slot; t is rejected outside shape-B outer supports.
    std::string zform =
        "shape = B\nfield = GF(7)\nu = z\nv = z^2, x\nh = x\ncoeffs = 0, 1\n";
    auto sz = std::get<SearchSpace<GFp>>(read_search_space_text(zform));
    CHECK(sz.support[1] == std::vector<Monomial>{mono(1, 0, 0), mono(0, 0, 2)});
    CHECK_THROWS_AS(
        read_search_space_text("shape = A\nu = t\ncoeffs = 0, 1\n"),
        ParseError);
}

TEST_CASE("sampled space files") {
    std::string text =
        "shape = GENERAL\n"
        "field = GF(3)\n"
        "u = y\n"
        "v = z\n"
        "h = x\n"
        "coeffs = all\n"
        "mode = sampled\n"
        "n = 10\n"
        "seed = 7\n"
        "cap = 50\n";
    auto sp = std::get<SearchSpace<GFp>>(read_search_space_text(text));
    CHECK(sp.sampled);
    CHECK(sp.sample_count == 10);
    CHECK(sp.seed == 7);
    CHECK(sp.cap == 50);
    auto rep = run_survey(sp, 2);
    CHECK(rep.counts.candidates == 10);
}

TEST_CASE("space file errors") {
    auto fails_with = [](const std::string& text, const std::string& needle) {
        try {
            read_search_space_text(text);
            FAIL("expected an error for: " << text);
        } catch (const Error& e) {
            INFO(text);
            CHECK(std::string(e.what()).find(needle) != std::string::npos);
        }
    };
    fails_with("u = x\ncoeffs = 0,1\n", "missing 'shape' line");
    fails_with("shape = X\ncoeffs = 0,1\n", "unknown shape");
    fails_with("shape = A\nu = y\n", "missing 'coeffs' line");
    fails_with("shape = A\ncoeffs = all\n", "finite field");
    fails_with("shape = A\ncoeffs = 0,1\nmode = sampled\n", "'n' and 'seed'");
    fails_with("shape = A\ncoeffs = 0,1\nn = 5\nseed = 1\n", "mode = sampled");
    fails_with("shape = A\ncoeffs = 0,1\nfoo = 1\n", "unknown key");
    fails_with("shape = A\nu = y\nu = x\ncoeffs = 0,1\n", "duplicate 'u' line");
    fails_with("shape = A\nshape = B\ncoeffs = 0,1\n", "duplicate 'shape' line");
    fails_with("field = Q\nfield = Q\nshape = A\ncoeffs = 0,1\n",
               "duplicate 'field' line");
    fails_with("shape = A\nu = 2*x\ncoeffs = 0,1\n", "not a monomial");
    fails_with("shape = A\nu = x + y\ncoeffs = 0,1\n", "not a monomial");
    fails_with("shape = A\nu = 1\ncoeffs = 0,1\n", "constant monomial");
    fails_with("shape = A\nu = y\ncoeffs = 0,1\nn = abc\nmode = sampled\nseed = 1\n",
               "nonnegative integer");
    fails_with("shape = A\nu = y\ncoeffs = 1, 1\n", "duplicates");
    // Line numbers are attached to per-line failures.
    fails_with("shape = A\nu = 2*x\ncoeffs = 0,1\n", "line 2");
}
