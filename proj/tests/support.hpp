#pragma once

// Generators and brute-force oracles shared by the unit tests and the
// acceptance binary. The oracles deliberately avoid the library's own
// enumeration code so that they can serve as an independent reference.

#include <algorithm>
#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "pidkit/fchannel.hpp"
#include "pidkit/model.hpp"

namespace pidkit::testing {

using Rng = std::mt19937_64;

inline std::size_t uniform(Rng& rng, std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

inline Block random_block(Rng& rng, std::size_t v, std::size_t w) {
    std::vector<Point> pts(v);
    for (std::size_t i = 0; i < v; ++i) pts[i] = static_cast<Point>(i);
    std::shuffle(pts.begin(), pts.end(), rng);
    Block b(pts.begin(), pts.begin() + static_cast<std::ptrdiff_t>(w));
    std::sort(b.begin(), b.end());
    return b;
}

/// Up to `max_blocks` distinct random w-subsets of [0, v).
inline SetSystem random_set_system(Rng& rng, std::size_t v, std::size_t w, std::size_t max_blocks) {
    std::set<Block> blocks;
    const std::size_t target = uniform(rng, 1, max_blocks);
    for (std::size_t tries = 0; blocks.size() < target && tries < 50 * target; ++tries)
        blocks.insert(random_block(rng, v, w));
    return SetSystem(v, w, {blocks.begin(), blocks.end()});
}

inline Word random_word(Rng& rng, std::size_t n, std::size_t q) {
    Word wd(n);
    for (auto& s : wd) s = static_cast<Symbol>(uniform(rng, 0, q - 1));
    return wd;
}

inline Code random_code(Rng& rng, std::size_t n, std::size_t q, std::size_t max_words) {
    std::set<Word> words;
    const std::size_t target = uniform(rng, 1, max_words);
    for (std::size_t tries = 0; words.size() < target && tries < 50 * target; ++tries)
        words.insert(random_word(rng, n, q));
    return Code(n, q, {words.begin(), words.end()});
}

/// Random nonempty sorted subset of [0, n) with at most k members.
inline Coalition random_coalition(Rng& rng, std::size_t n, std::size_t k) {
    std::vector<Index> all(n);
    for (std::size_t i = 0; i < n; ++i) all[i] = i;
    std::shuffle(all.begin(), all.end(), rng);
    Coalition c(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(uniform(rng, 1, std::min(k, n))));
    std::sort(c.begin(), c.end());
    return c;
}

/// Every nonempty subset of [0, n) with at most k members, as bitmasks.
inline std::vector<std::uint32_t> small_subsets(std::size_t n, std::size_t k) {
    std::vector<std::uint32_t> out;
    for (std::uint32_t m = 1; m < (1u << n); ++m)
        if (static_cast<std::size_t>(__builtin_popcount(m)) <= k) out.push_back(m);
    return out;
}

inline std::vector<Index> members(std::uint32_t mask) {
    std::vector<Index> out;
    for (Index i = 0; i < 32; ++i)
        if (mask >> i & 1u) out.push_back(i);
    return out;
}

// Naive descendant sets, encoded as strings so that they can key a map.
inline std::vector<std::string> oracle_descendants(const Universe& u, std::uint32_t mask,
                                                   const Channel& ch) {
    std::vector<std::string> out;
    const auto idx = members(mask);
    if (const auto* sys = std::get_if<SetSystem>(&u)) {
        std::set<Point> uni;
        for (Index i : idx) uni.insert(sys->block(i).begin(), sys->block(i).end());
        const std::vector<Point> pts(uni.begin(), uni.end());
        if (std::holds_alternative<OrChannel>(ch)) {
            out.push_back("or" + serialize(Descendant{UnionSet{pts}}));
            return out;
        }
        const std::size_t w = sys->w();
        if (pts.size() > 20) throw std::logic_error("oracle: union too large");
        for (std::uint32_t m = 0; m < (1u << pts.size()); ++m) {
            if (static_cast<std::size_t>(__builtin_popcount(m)) != w) continue;
            std::vector<Point> T;
            for (std::size_t j = 0; j < pts.size(); ++j)
                if (m >> j & 1u) T.push_back(pts[j]);
            out.push_back(serialize(Descendant{PointSet{T}}));
        }
        return out;
    }
    const auto& code = std::get<Code>(u);
    std::vector<std::set<Symbol>> cols(code.n());
    for (Index i : idx)
        for (std::size_t j = 0; j < code.n(); ++j) cols[j].insert(code.word(i)[j]);
    if (std::holds_alternative<MippcChannel>(ch)) {
        ColumnSets cs;
        for (const auto& c : cols) cs.columns.emplace_back(c.begin(), c.end());
        out.push_back(serialize(Descendant{cs}));
        return out;
    }
    std::vector<Word> acc{Word{}};
    for (const auto& c : cols) {
        std::vector<Word> next;
        for (const auto& prefix : acc)
            for (Symbol s : c) {
                auto wd = prefix;
                wd.push_back(s);
                next.push_back(std::move(wd));
            }
        acc = std::move(next);
    }
    for (const auto& wd : acc) out.push_back(serialize(Descendant{DescendantWord{wd}}));
    return out;
}

/// Definition-level check: group coalitions of size <= t by descendant and
/// require every group to share a member. Universes of at most 12 elements.
inline bool oracle_is_scheme(const Universe& u, std::size_t t, const Channel& ch) {
    const std::size_t n = universe_size(u);
    if (n > 12) throw std::logic_error("oracle: universe too large");
    std::map<std::string, std::uint32_t> common;
    for (std::uint32_t mask : small_subsets(n, t))
        for (const auto& d : oracle_descendants(u, mask, ch)) {
            auto [it, fresh] = common.emplace(d, mask);
            if (!fresh) it->second &= mask;
        }
    for (const auto& [d, m] : common)
        if (m == 0) return false;
    return true;
}

/// Brute-force bad-subfamily test: search all families of <= t-subsets of
/// positions of U for (a) union U, (b) empty intersection and (c) equal
/// desc. Depth-first, extending only with subsets whose desc matches.
inline bool oracle_bad_subfamily(const std::vector<Word>& U, std::size_t t) {
    const std::size_t m = U.size();
    const auto subsets = small_subsets(m, t);
    const std::uint32_t full = (1u << m) - 1;
    auto desc_of = [&](std::uint32_t mask) {
        std::vector<std::set<Symbol>> cols(U.front().size());
        for (Index i : members(mask))
            for (std::size_t j = 0; j < cols.size(); ++j) cols[j].insert(U[i][j]);
        return cols;
    };
    std::vector<std::vector<std::set<Symbol>>> descs;
    for (auto s : subsets) descs.push_back(desc_of(s));

    // Families are subsets of `subsets`; fix the first member and extend.
    std::function<bool(std::size_t, std::size_t, std::uint32_t, std::uint32_t)> dfs =
        [&](std::size_t first, std::size_t next, std::uint32_t uni, std::uint32_t inter) {
            if (uni == full && inter == 0) return true;
            for (std::size_t k = next; k < subsets.size(); ++k) {
                if (descs[k] != descs[first]) continue;
                if (dfs(first, k + 1, uni | subsets[k], inter & subsets[k])) return true;
            }
            return false;
        };
    for (std::size_t f = 0; f < subsets.size(); ++f)
        if (dfs(f, f + 1, subsets[f], subsets[f])) return true;
    return false;
}

/// Flag system of the projective plane of order 3: blocks are the 13 points
/// and 13 lines, points are the 52 incident (point, line) pairs, and each
/// block holds its 4 flags. Two blocks meet in at most one flag, every flag
/// lies in exactly two blocks, and the incidence graph has no 4-cycles.
inline SetSystem projective_flag_system() {
    std::vector<std::array<int, 3>> pts;
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                const int lead = a != 0 ? a : b != 0 ? b : c;
                if (lead == 1) pts.push_back({a, b, c});
            }
    std::vector<Block> blocks(2 * pts.size());
    Point flag = 0;
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (std::size_t j = 0; j < pts.size(); ++j) {
            const auto& x = pts[i];
            const auto& l = pts[j];
            if ((x[0] * l[0] + x[1] * l[1] + x[2] * l[2]) % 3 != 0) continue;
            blocks[i].push_back(flag);
            blocks[pts.size() + j].push_back(flag);
            ++flag;
        }
    return SetSystem(flag, 4, std::move(blocks));
}

}  // namespace pidkit::testing
