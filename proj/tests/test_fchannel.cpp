#include <doctest.h>

#include "pidkit/combinatorics.hpp"
#include "pidkit/fchannel.hpp"
#include "pidkit/ipps.hpp"
#include "support.hpp"

using namespace pidkit;

namespace {

const SetSystem kDelta(5, 3, {{0, 1, 2}, {0, 1, 3}, {0, 1, 4}});
const Code kSquare(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
// Points 1..3 of the triangle example, on a ground set of size 4.
const SetSystem kTriangle(4, 2, {{1, 2}, {2, 3}, {1, 3}});

}  // namespace

TEST_CASE("u_bound") {
    CHECK(u_bound(2) == 4);
    CHECK(u_bound(3) == 6);
    CHECK(u_bound(5) == 12);
    CHECK_THROWS_AS(u_bound(1), std::invalid_argument);
    for (std::size_t t = 2; t <= 1000; ++t) {
        // floor((t/2 + 1)^2) computed as floor((t + 2)^2 / 4).
        CHECK(u_bound(t) == (t + 2) * (t + 2) / 4);
        CHECK(u_bound(t) == t * t / 4 + t + 1);
    }
}

TEST_CASE("classify_configuration examples") {
    const Channel ch = IppsChannel{2};
    const auto tri = classify_configuration({{0, 1}, {1, 2}, {0, 2}}, 2, ch, kTriangle);
    CHECK(tri.is_configuration);
    CHECK(tri.is_minimal);
    CHECK(tri.is_forbidden);
    REQUIRE(tri.witness_descendant);
    CHECK(std::get<PointSet>(*tri.witness_descendant).points == std::vector<Point>{1, 2});
    CHECK(tri.union_size == 3);

    const auto common = classify_configuration({{0}, {0, 1}}, 2, ch, kTriangle);
    CHECK_FALSE(common.is_configuration);
    CHECK_FALSE(common.is_minimal);
    CHECK_FALSE(common.is_forbidden);

    CHECK_THROWS(classify_configuration({{0, 1, 2}}, 2, ch, kTriangle));
    CHECK_THROWS(classify_configuration({{0, 5}}, 2, ch, kTriangle));
}

TEST_CASE("classify_configuration on code channels") {
    // {(0,1),(1,0)} and {(0,0),(1,1)} share desc ({0,1},{0,1}).
    const auto m = classify_configuration({{1, 2}, {0, 3}}, 2, MippcChannel{}, kSquare);
    CHECK(m.is_configuration);
    CHECK(m.is_forbidden);
    CHECK(std::get<ColumnSets>(*m.witness_descendant) == ColumnSets{{{0, 1}, {0, 1}}});

    const auto p = classify_configuration({{0}, {3}}, 2, IppcChannel{}, kSquare);
    CHECK(p.is_configuration);
    CHECK_FALSE(p.is_forbidden);

    const auto o = classify_configuration({{0, 1}, {2}}, 2, OrChannel{}, SetSystem(4, 2, {{0, 1}, {1, 2}, {0, 2}}));
    CHECK(o.is_configuration);
    CHECK_FALSE(o.is_forbidden);
}

TEST_CASE("enumerate_descendants examples") {
    const SetSystem one(3, 3, {{0, 1, 2}});
    const auto d1 = enumerate_descendants({0}, IppsChannel{3}, one);
    REQUIRE(d1.size() == 1);
    CHECK(std::get<PointSet>(d1[0]).points == std::vector<Point>{0, 1, 2});

    const Code diag(2, 2, {{0, 0}, {1, 1}});
    const auto d2 = enumerate_descendants({0, 1}, IppcChannel{}, diag);
    std::vector<Word> words;
    for (const auto& d : d2) words.push_back(std::get<DescendantWord>(d).symbols);
    CHECK(words == std::vector<Word>{{0, 0}, {0, 1}, {1, 0}, {1, 1}});

    const Code anti(2, 2, {{0, 1}, {1, 0}});
    const auto d3 = enumerate_descendants({0, 1}, MippcChannel{}, anti);
    REQUIRE(d3.size() == 1);
    CHECK(std::get<ColumnSets>(d3[0]) == ColumnSets{{{0, 1}, {0, 1}}});

    const auto d4 = enumerate_descendants({0, 1}, OrChannel{}, kDelta);
    REQUIRE(d4.size() == 1);
    CHECK(std::get<UnionSet>(d4[0]).points == std::vector<Point>{0, 1, 2, 3});
}

TEST_CASE("for_each_descendant stops early") {
    const Code big(4, 3, {{0, 0, 0, 0}, {1, 1, 1, 1}, {2, 2, 2, 2}});
    int seen = 0;
    CHECK_FALSE(for_each_descendant({0, 1, 2}, IppcChannel{}, big, [&](const Descendant&) { return ++seen < 5; }));
    CHECK(seen == 5);
}

TEST_CASE("can_produce") {
    CHECK(can_produce({0, 1}, PointSet{{0, 2, 3}}, IppsChannel{3}, kDelta));
    CHECK_FALSE(can_produce({0}, PointSet{{0, 2, 3}}, IppsChannel{3}, kDelta));
    CHECK(can_produce({0, 3}, DescendantWord{{0, 1}}, IppcChannel{}, kSquare));
    CHECK_FALSE(can_produce({0, 1}, DescendantWord{{1, 1}}, IppcChannel{}, kSquare));
}

TEST_CASE("channel and universe must match") {
    CHECK_THROWS_AS(is_scheme_direct(kDelta, 2, MippcChannel{}), FormatError);
    CHECK_THROWS_AS(is_scheme_direct(kSquare, 2, IppsChannel{2}), FormatError);
    CHECK_THROWS_AS(is_scheme_direct(kDelta, 2, IppsChannel{2}), FormatError);
}

TEST_CASE("is_scheme_direct and is_scheme_local examples") {
    for (auto verify : {+[](const Universe& u, std::size_t t, const Channel& c) { return is_scheme_direct(u, t, c); },
                        +[](const Universe& u, std::size_t t, const Channel& c) { return is_scheme_local(u, t, c); }}) {
        CHECK(verify(kDelta, 2, IppsChannel{3}).holds());

        const auto sq = verify(kSquare, 2, MippcChannel{});
        REQUIRE_FALSE(sq.holds());
        CHECK(std::get<ColumnSets>(sq.violation->descendant) == ColumnSets{{{0, 1}, {0, 1}}});
        // Both disjoint pairs appear among the parents, and the parents share nobody.
        const auto& parents = sq.violation->parents;
        CHECK(std::find(parents.begin(), parents.end(), Coalition{0, 3}) != parents.end());
        CHECK(std::find(parents.begin(), parents.end(), Coalition{1, 2}) != parents.end());

        CHECK(verify(SetSystem(3, 2, {{0, 1}}), 3, IppsChannel{2}).holds());
        CHECK(verify(Code(2, 3, {{1, 2}}), 2, IppcChannel{}).holds());
        CHECK(verify(SetSystem(3, 2, {{0, 1}}), 2, OrChannel{}).holds());

        CHECK_FALSE(verify(kTriangle, 2, IppsChannel{2}).holds());
        CHECK(verify(SetSystem(5, 3, {{0, 1, 2}, {0, 1, 3}}), 2, IppsChannel{3}).holds());
    }
}

TEST_CASE("local verifier reports the same witness for any thread count") {
    testing::Rng rng(5);
    for (int iter = 0; iter < 20; ++iter) {
        const auto sys = testing::random_set_system(rng, 7, 2, 8);
        const auto one = is_scheme_local(sys, 2, IppsChannel{2}, 1);
        const auto four = is_scheme_local(sys, 2, IppsChannel{2}, 4);
        REQUIRE(one.holds() == four.holds());
        if (!one.holds()) {
            CHECK(one.violation->coalition == four.violation->coalition);
            CHECK(one.violation->descendant == four.violation->descendant);
            CHECK(one.violation->parents == four.violation->parents);
        }
    }
}

TEST_CASE("property: direct, local and the definition-level oracle agree") {
    testing::Rng rng(2024);
    for (int iter = 0; iter < 150; ++iter) {
        const std::size_t t = testing::uniform(rng, 2, 3);
        const std::size_t v = testing::uniform(rng, 3, 8);
        const std::size_t w = testing::uniform(rng, 1, std::min<std::size_t>(3, v - 1));
        const auto sys = testing::random_set_system(rng, v, w, 8);
        for (const Channel ch : {Channel{IppsChannel{w}}, Channel{OrChannel{}}}) {
            const bool oracle = testing::oracle_is_scheme(sys, t, ch);
            CHECK(is_scheme_direct(sys, t, ch).holds() == oracle);
            CHECK(is_scheme_local(sys, t, ch).holds() == oracle);
        }

        const auto code = testing::random_code(rng, testing::uniform(rng, 2, 3), testing::uniform(rng, 2, 4), 8);
        for (const Channel ch : {Channel{MippcChannel{}}, Channel{IppcChannel{}}}) {
            const bool oracle = testing::oracle_is_scheme(code, t, ch);
            CHECK(is_scheme_direct(code, t, ch).holds() == oracle);
            CHECK(is_scheme_local(code, t, ch).holds() == oracle);
        }
    }
}

TEST_CASE("property: violations are genuine") {
    testing::Rng rng(77);
    int failures = 0;
    for (int iter = 0; iter < 100; ++iter) {
        const auto sys = testing::random_set_system(rng, 6, 2, 7);
        const auto verdict = is_scheme_direct(sys, 2, IppsChannel{2});
        if (verdict.holds()) continue;
        ++failures;
        const auto& v = *verdict.violation;
        CHECK(can_produce(v.coalition, v.descendant, IppsChannel{2}, sys));
        std::vector<Index> common = v.parents.front();
        for (const auto& p : v.parents) {
            CHECK(can_produce(p, v.descendant, IppsChannel{2}, sys));
            common = sorted_intersection(common, p);
        }
        CHECK(common.empty());
    }
    CHECK(failures > 0);
}

TEST_CASE("property: the scheme property is hereditary") {
    testing::Rng rng(99);
    int passing = 0;
    for (int iter = 0; iter < 200 && passing < 30; ++iter) {
        const auto code = testing::random_code(rng, 2, 4, 7);
        if (!is_scheme_direct(code, 2, MippcChannel{})) continue;
        ++passing;
        for (Index drop = 0; drop < code.size(); ++drop) {
            std::vector<Index> keep;
            for (Index i = 0; i < code.size(); ++i)
                if (i != drop) keep.push_back(i);
            CHECK(is_scheme_direct(code.restrict_to(keep), 2, MippcChannel{}).holds());
        }
    }
    CHECK(passing > 0);
}

TEST_CASE("property: minimal configurations have at most u elements") {
    testing::Rng rng(3);
    int minimal = 0;
    for (int iter = 0; iter < 3000; ++iter) {
        const std::size_t t = testing::uniform(rng, 2, 3);
        const auto sys = testing::random_set_system(rng, 8, 2, 12);
        const std::size_t m = testing::uniform(rng, 2, 5);
        std::vector<Coalition> family;
        for (std::size_t i = 0; i < m; ++i) family.push_back(testing::random_coalition(rng, sys.size(), t));
        const auto r = classify_configuration(family, t, IppsChannel{2}, sys);
        CHECK((!r.is_minimal || r.is_configuration));
        if (!r.is_minimal) continue;
        ++minimal;
        CHECK(r.union_size <= u_bound(t));
        for (std::size_t skip = 0; skip < m; ++skip) {
            std::vector<Index> common;
            bool first = true;
            for (std::size_t i = 0; i < m; ++i) {
                if (i == skip) continue;
                common = first ? family[i] : sorted_intersection(common, family[i]);
                first = false;
            }
            CHECK_FALSE(common.empty());
        }
    }
    CHECK(minimal > 0);
}
