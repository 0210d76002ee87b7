#include <doctest.h>

#include <cmath>

#include "pidkit/combinatorics.hpp"
#include "pidkit/ipps.hpp"
#include "pidkit/mippc.hpp"
#include "support.hpp"

using namespace pidkit;

namespace {

const Code kSquare(2, 2, {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
const Code kDiagonal(2, 3, {{0, 0}, {1, 1}, {2, 2}});

TraceError::Kind trace_failure(auto&& call) {
    try {
        call();
    } catch (const TraceError& e) {
        return e.kind();
    }
    FAIL("expected a trace error");
    return TraceError::Kind::NotProducible;
}

}  // namespace

TEST_CASE("desc") {
    CHECK(desc(std::vector<Word>{{0, 1, 2}}) == ColumnSets{{{0}, {1}, {2}}});
    CHECK(desc(std::vector<Word>{{0, 1}, {1, 0}}) == ColumnSets{{{0, 1}, {0, 1}}});
    CHECK(desc(std::vector<Word>{{0, 0}, {0, 1}}) == ColumnSets{{{0}, {0, 1}}});
    CHECK(desc(Coalition{1, 2}, kSquare) == ColumnSets{{{0, 1}, {0, 1}}});
}

TEST_CASE("is_bad_subfamily examples") {
    const auto bad = is_bad_subfamily({{0, 1}, {1, 0}, {0, 0}, {1, 1}}, 2);
    REQUIRE(bad);
    CHECK(bad->shared_desc == ColumnSets{{{0, 1}, {0, 1}}});
    const auto& fam = bad->witness_family;
    // Positions in U: 0=(0,1), 1=(1,0), 2=(0,0), 3=(1,1).
    CHECK(std::find(fam.begin(), fam.end(), Coalition{0, 1}) != fam.end());
    CHECK(std::find(fam.begin(), fam.end(), Coalition{2, 3}) != fam.end());

    CHECK_FALSE(is_bad_subfamily({{0, 0}, {0, 1}}, 2).has_value());
    CHECK(is_bad_subfamily({{1, 2}, {1, 2}}, 2).has_value());
    CHECK(is_bad_subfamily({{1, 2}, {1, 2}}, 3).has_value());

    CHECK_THROWS_AS(is_bad_subfamily({{0, 0}}, 2), std::invalid_argument);
    CHECK_THROWS_AS(is_bad_subfamily({{0}, {1}, {2}, {3}, {4}}, 2), std::invalid_argument);
}

TEST_CASE("property: class-based detection agrees with family enumeration") {
    testing::Rng rng(64);
    int bad = 0;
    for (int iter = 0; iter < 400; ++iter) {
        const std::size_t t = testing::uniform(rng, 2, 3);
        const std::size_t m = testing::uniform(rng, 2, std::min<std::size_t>(5, u_bound(t)));
        const std::size_t n = testing::uniform(rng, 1, 3);
        const std::size_t q = testing::uniform(rng, 2, 3);
        std::vector<Word> U;
        for (std::size_t i = 0; i < m; ++i) U.push_back(testing::random_word(rng, n, q));
        const auto got = is_bad_subfamily(U, t);
        CHECK(got.has_value() == testing::oracle_bad_subfamily(U, t));
        if (!got) continue;
        ++bad;
        // The reported class satisfies the three conditions.
        std::set<Index> cover;
        std::vector<Index> common = got->witness_family.front();
        for (const auto& f : got->witness_family) {
            CHECK(f.size() <= t);
            cover.insert(f.begin(), f.end());
            common = sorted_intersection(common, f);
            std::vector<Word> ws;
            for (Index i : f) ws.push_back(U[i]);
            CHECK(desc(ws) == got->shared_desc);
        }
        CHECK(cover.size() == m);
        CHECK(common.empty());
    }
    CHECK(bad > 0);
}

TEST_CASE("random_expurgated_mippc examples") {
    const auto r = random_expurgated_mippc(2, 8, 16, 2, 7);
    CHECK(r.sampled == 16);
    CHECK(is_scheme_direct(r.code, 2, MippcChannel{}).holds());

    const auto single = random_expurgated_mippc(2, 2, 1, 3, 99);
    CHECK(single.code.size() == 1);
    CHECK(is_scheme_direct(single.code, 3, MippcChannel{}).holds());

    CHECK(serialize(random_expurgated_mippc(2, 8, 16, 2, 7).code) == serialize(r.code));

    CHECK_THROWS_AS(random_expurgated_mippc(1, 4, 4, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_expurgated_mippc(2, 1, 4, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_expurgated_mippc(2, 4, 0, 2, 1), std::invalid_argument);
    CHECK_THROWS_AS(random_expurgated_mippc(2, 4, 500, 2, 1, 1000), BudgetExceeded);
}

TEST_CASE("property: expurgated codes pass the verifier") {
    for (std::uint64_t seed = 0; seed < 30; ++seed) {
        const std::size_t n = 2 + seed % 2;
        const std::size_t q = 3 + seed % 3;
        const std::size_t t = seed % 3 == 0 ? 3 : 2;
        const std::size_t M = 4 + seed % 9;
        const auto r = random_expurgated_mippc(n, q, M, t, seed);
        CHECK(r.code.size() <= M);
        CHECK(is_scheme_direct(r.code, t, MippcChannel{}).holds());
    }
}

TEST_CASE("default_code_size") {
    CHECK(default_code_size(2, 4, 2) == 7);
    CHECK(default_code_size(2, 6, 2) == 11);
    CHECK(default_code_size(2, 8, 2) == 16);
    CHECK(default_code_size(2, 8, 2, 0.5) == 8);
    for (std::size_t q = 2; q <= 12; ++q)
        CHECK(default_code_size(2, q, 2) ==
              static_cast<std::size_t>(std::ceil(std::pow(static_cast<double>(q), 4.0 / 3.0) - 1e-9)));
}

TEST_CASE("trace_mippc examples") {
    const Code c(2, 3, {{0, 0}, {0, 1}, {1, 2}});
    CHECK(trace_mippc(c, ColumnSets{{{0, 1}, {1, 2}}}, 2) == std::vector<Index>{1, 2});
    CHECK(trace_failure([&] { trace_mippc(kSquare, ColumnSets{{{0, 1}, {0, 1}}}, 2); }) ==
          TraceError::Kind::EmptyIntersection);
    CHECK(trace_mippc(kDiagonal, ColumnSets{{{1}, {1}}}, 2) == std::vector<Index>{1});
    CHECK(trace_failure([&] { trace_mippc(kDiagonal, ColumnSets{{{0}, {1}}}, 2); }) ==
          TraceError::Kind::NotProducible);
    CHECK_THROWS_AS(trace_mippc(kDiagonal, ColumnSets{{{0}}}, 2), FormatError);
}

TEST_CASE("trace_ippc examples") {
    CHECK(trace_ippc(kDiagonal, {0, 1}, 2) == std::vector<Index>{0, 1});
    CHECK(trace_ippc(kDiagonal, {0, 0}, 2) == std::vector<Index>{0});
    CHECK(trace_failure([&] { trace_ippc(Code(2, 2, {{0, 0}}), {0, 1}, 2); }) == TraceError::Kind::NotProducible);
    CHECK_THROWS_AS(trace_ippc(kDiagonal, {0, 3}, 2), FormatError);
}

TEST_CASE("check_ippc_implies_mippc examples") {
    const auto diag = check_ippc_implies_mippc(kDiagonal, 2);
    CHECK(diag.ippc);
    CHECK(diag.mippc);
    const auto sq = check_ippc_implies_mippc(kSquare, 2);
    CHECK_FALSE(sq.ippc);
    CHECK_FALSE(sq.mippc);
    const auto one = check_ippc_implies_mippc(Code(3, 2, {{0, 1, 1}}), 2);
    CHECK(one.ippc);
    CHECK(one.mippc);
}

TEST_CASE("property: an IPP code is always a multimedia code") {
    testing::Rng rng(12);
    int ippc = 0;
    for (int iter = 0; iter < 200; ++iter) {
        const auto code = testing::random_code(rng, testing::uniform(rng, 2, 3), testing::uniform(rng, 3, 5), 6);
        const auto r = check_ippc_implies_mippc(code, 2);
        CHECK(r.implication_holds());
        ippc += r.ippc;
    }
    CHECK(ippc > 0);
}

TEST_CASE("property: tracing verified codes names only real colluders") {
    testing::Rng rng(21);
    int mippc = 0, ippc = 0;
    for (int iter = 0; iter < 300; ++iter) {
        const std::size_t t = testing::uniform(rng, 2, 3);
        const auto code = testing::random_code(rng, testing::uniform(rng, 2, 4), testing::uniform(rng, 3, 6), 7);
        const bool is_m = is_scheme_direct(code, t, MippcChannel{}).holds();
        const bool is_i = is_scheme_direct(code, t, IppcChannel{}).holds();
        mippc += is_m;
        ippc += is_i;
        for (int k = 0; k < 10; ++k) {
            const auto c = testing::random_coalition(rng, code.size(), t);
            if (is_m) {
                const auto traced = trace_mippc(code, desc(c, code), t);
                CHECK_FALSE(traced.empty());
                CHECK(std::includes(c.begin(), c.end(), traced.begin(), traced.end()));
            }
            if (is_i) {
                for (const auto& d : enumerate_descendants(c, IppcChannel{}, code)) {
                    const auto traced = trace_ippc(code, std::get<DescendantWord>(d).symbols, t);
                    CHECK_FALSE(traced.empty());
                    CHECK(std::includes(c.begin(), c.end(), traced.begin(), traced.end()));
                }
            }
        }
    }
    CHECK(mippc > 10);
    CHECK(ippc > 10);
}
