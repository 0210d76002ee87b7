#include "pidkit/ipps.hpp"

#include <algorithm>
#include <random>
#include <set>

#include "pidkit/combinatorics.hpp"
#include "pidkit/fchannel.hpp"

namespace pidkit {

namespace {

std::vector<Point> normalized_descendant(const SetSystem& sys, std::vector<Point> T) {
    std::sort(T.begin(), T.end());
    if (std::adjacent_find(T.begin(), T.end()) != T.end())
        throw FormatError("descendant has a repeated point");
    if (T.size() != sys.w())
        throw FormatError("descendant has " + std::to_string(T.size()) + " points, expected " +
                          std::to_string(sys.w()));
    if (!T.empty() && T.back() >= sys.v())
        throw FormatError("descendant point " + std::to_string(T.back()) + " out of range");
    return T;
}

std::vector<Index> all_indices(std::size_t n) {
    std::vector<Index> ids(n);
    for (Index i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

// Stops at the first violation when the visitor returns false.
template <class Visitor>
void scan_2ipps(const SetSystem& sys, Visitor&& visit) {
    const auto& b = sys.blocks();
    const std::size_t w = sys.w();
    const bool more = for_each_combination(sys.size(), 3, [&](std::span<const std::size_t> ix) {
        const auto& A = b[ix[0]];
        const auto& B = b[ix[1]];
        const auto& C = b[ix[2]];
        auto overlap = sorted_intersection(sorted_intersection(sorted_union(A, B), sorted_union(A, C)),
                                           sorted_union(B, C));
        if (overlap.size() < w) return true;
        return visit(Ipps2Witness{Ipps2Witness::Kind::Triple, {ix[0], ix[1], ix[2]}, std::move(overlap)});
    });
    if (!more) return;
    for_each_combination(sys.size(), 4, [&](std::span<const std::size_t> ix) {
        constexpr std::size_t pairings[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        for (const auto& pr : pairings) {
            const Index a = ix[pr[0]], c = ix[pr[1]], d = ix[pr[2]], e = ix[pr[3]];
            auto overlap = sorted_intersection(sorted_union(b[a], b[c]), sorted_union(b[d], b[e]));
            if (overlap.size() < w) continue;
            if (!visit(Ipps2Witness{Ipps2Witness::Kind::Quadruple, {a, c, d, e}, std::move(overlap)}))
                return false;
        }
        return true;
    });
}

// Lexicographic unranking of k-subsets of {0..n-1}.
std::vector<Point> unrank_combination(std::uint64_t rank, std::size_t n, std::size_t k) {
    std::vector<Point> out;
    out.reserve(k);
    std::size_t x = 0;
    for (std::size_t i = 0; i < k; ++i) {
        while (true) {
            const std::uint64_t c = binomial_saturating(n - x - 1, k - i - 1);
            if (rank < c) {
                out.push_back(static_cast<Point>(x++));
                break;
            }
            rank -= c;
            ++x;
        }
    }
    return out;
}

std::vector<Block> sample_blocks(std::size_t v, std::size_t w, double p, std::mt19937_64& rng) {
    const BigInt total = binomial(v, w);
    if (total > (BigInt(1) << 48))
        throw std::invalid_argument("C(v, w) exceeds 2^48; refusing to sample");
    const auto n_blocks = total.convert_to<std::uint64_t>();

    // Independent inclusion is a binomial count followed by a uniform subset
    // of that size, which avoids walking all C(v, w) blocks.
    std::binomial_distribution<std::uint64_t> count_dist(n_blocks, p);
    const std::uint64_t k = count_dist(rng);
    constexpr std::uint64_t kMaxSample = std::uint64_t{1} << 24;
    if (k > kMaxSample) throw std::invalid_argument("sampled block count exceeds 2^24");

    // Floyd's algorithm for k distinct ranks.
    std::set<std::uint64_t> ranks;
    for (std::uint64_t j = n_blocks - k; j < n_blocks; ++j) {
        std::uniform_int_distribution<std::uint64_t> pick(0, j);
        const std::uint64_t r = pick(rng);
        if (!ranks.insert(r).second) ranks.insert(j);
    }

    const bool complement = w > v - w;
    const std::size_t kk = complement ? v - w : w;
    std::vector<Block> blocks;
    blocks.reserve(ranks.size());
    for (std::uint64_t r : ranks) {
        auto sub = unrank_combination(r, v, kk);
        if (!complement) {
            blocks.push_back(std::move(sub));
            continue;
        }
        Block b;
        std::size_t s = 0;
        for (Point x = 0; x < v; ++x) {
            if (s < sub.size() && sub[s] == x) ++s;
            else b.push_back(x);
        }
        blocks.push_back(std::move(b));
    }
    return blocks;
}

}  // namespace

std::vector<Coalition> possible_parents(const SetSystem& sys, const std::vector<Point>& T,
                                        std::size_t t) {
    if (t == 0) throw std::invalid_argument("t must be positive");
    const auto target = normalized_descendant(sys, T);
    const Channel ch = IppsChannel{sys.w()};
    const Universe u = sys;
    const Descendant d = PointSet{target};
    std::vector<Coalition> out;
    for (auto& c : subsets_up_to(all_indices(sys.size()), t)) {
        if (can_produce(c, d, ch, u)) out.push_back(std::move(c));
    }
    return out;
}

std::vector<Index> trace_ipps(const SetSystem& sys, const std::vector<Point>& T, std::size_t t) {
    const auto parents = possible_parents(sys, T, t);
    if (parents.empty())
        throw TraceError(TraceError::Kind::NotProducible,
                         "no coalition of size <= " + std::to_string(t) + " covers the descendant");
    Coalition common = parents.front();
    for (std::size_t i = 1; i < parents.size() && !common.empty(); ++i)
        common = sorted_intersection(common, parents[i]);
    if (common.empty())
        throw TraceError(TraceError::Kind::EmptyIntersection,
                         "possible parents have empty intersection; the system is not a " +
                             std::to_string(t) + "-IPPS");
    return common;
}

std::vector<Ipps2Witness> all_2ipps_witnesses(const SetSystem& sys) {
    std::vector<Ipps2Witness> out;
    scan_2ipps(sys, [&](Ipps2Witness w) {
        out.push_back(std::move(w));
        return true;
    });
    return out;
}

std::optional<Ipps2Witness> check_2ipps(const SetSystem& sys) {
    std::optional<Ipps2Witness> first;
    scan_2ipps(sys, [&](Ipps2Witness w) {
        first = std::move(w);
        return false;
    });
    return first;
}

std::vector<BadPacket> find_bad_packets(const SetSystem& sys, std::size_t t) {
    const std::size_t u = u_bound(t);
    const std::size_t w = sys.w();
    const std::size_t n = sys.size();
    std::vector<std::uint32_t> mult(sys.v(), 0);
    std::size_t span = 0;
    std::vector<Index> chosen;
    std::vector<BadPacket> out;

    auto add = [&](Index i) {
        for (Point x : sys.block(i))
            if (mult[x]++ == 0) ++span;
    };
    auto remove = [&](Index i) {
        for (Point x : sys.block(i))
            if (--mult[x] == 0) --span;
    };

    // Preorder DFS yields subsets in lexicographic order. A branch is cut once
    // its span exceeds (u-1)w, the largest span any packet may have.
    auto dfs = [&](auto&& self, Index start) -> void {
        for (Index i = start; i < n; ++i) {
            add(i);
            chosen.push_back(i);
            const std::size_t s = chosen.size();
            if (s >= 2 && span <= (s - 1) * w) {
                BadPacket bp;
                bp.blocks = chosen;
                for (Point x = 0; x < mult.size(); ++x)
                    if (mult[x]) bp.span.push_back(x);
                out.push_back(std::move(bp));
            }
            if (s < u && span <= (u - 1) * w) self(self, i + 1);
            chosen.pop_back();
            remove(i);
        }
    };
    dfs(dfs, 0);
    return out;
}

IppsExpurgation random_expurgated_ipps(std::size_t v, std::size_t w, std::size_t t, double p,
                                       std::uint64_t seed, DeletionRule rule) {
    if (w < 1 || v < w) throw std::invalid_argument("need v >= w >= 1");
    if (t < 2) throw std::invalid_argument("need t >= 2");
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("need 0 < p < 1");

    std::mt19937_64 rng(seed);
    const SetSystem sample(v, w, sample_blocks(v, w, p, rng));
    const auto packets = find_bad_packets(sample, t);

    std::vector<bool> deleted(sample.size(), false);
    if (rule == DeletionRule::LargestBlock) {
        for (const auto& bp : packets) deleted[bp.blocks.back()] = true;
    } else {
        std::vector<bool> alive(packets.size(), true);
        std::size_t remaining = packets.size();
        while (remaining > 0) {
            std::vector<std::size_t> hits(sample.size(), 0);
            for (std::size_t k = 0; k < packets.size(); ++k)
                if (alive[k])
                    for (Index b : packets[k].blocks) ++hits[b];
            Index pick = 0;
            for (Index b = 0; b < hits.size(); ++b)
                if (hits[b] >= hits[pick]) pick = b;
            deleted[pick] = true;
            for (std::size_t k = 0; k < packets.size(); ++k) {
                if (alive[k] && std::binary_search(packets[k].blocks.begin(),
                                                   packets[k].blocks.end(), pick)) {
                    alive[k] = false;
                    --remaining;
                }
            }
        }
    }

    std::vector<Index> keep;
    for (Index i = 0; i < sample.size(); ++i)
        if (!deleted[i]) keep.push_back(i);
    IppsExpurgation result{sample.restrict_to(keep), sample.size(), packets.size()};

    // Certificate: no bad packet survives, and small outputs are checked outright.
    if (!find_bad_packets(result.system, t).empty())
        throw std::logic_error("expurgation left a bad packet");
    const Universe out = result.system;
    if (t == 2) {
        if (check_2ipps(result.system))
            throw std::logic_error("expurgated system fails the 2-IPPS check");
    } else if (count_subsets(result.system.size(), 1, u_bound(t)) <= 20000) {
        if (!is_scheme_local(out, t, IppsChannel{w}))
            throw std::logic_error("expurgated system fails verification");
    }
    return result;
}

SetSystem delta_construction(std::size_t v, std::size_t w) {
    if (w < 2) throw std::invalid_argument("need w >= 2");
    if (v < w) throw std::invalid_argument("need v >= w");
    std::vector<Block> blocks;
    for (std::size_t j = w - 1; j < v; ++j) {
        Block b;
        for (Point x = 0; x + 1 < w; ++x) b.push_back(x);
        b.push_back(static_cast<Point>(j));
        blocks.push_back(std::move(b));
    }
    return SetSystem(v, w, std::move(blocks));
}

StructuralReport structural_report(const SetSystem& sys) {
    StructuralReport r;
    const auto& b = sys.blocks();
    std::vector<std::size_t> occurrences(sys.v(), 0);
    for (const auto& blk : b)
        for (Point x : blk) ++occurrences[x];

    std::vector<bool> has_two(b.size(), false);
    for (std::size_t i = 0; i < b.size(); ++i) {
        for (std::size_t j = i + 1; j < b.size(); ++j) {
            const std::size_t k = sorted_intersection(b[i], b[j]).size();
            r.max_pairwise_intersection = std::max(r.max_pairwise_intersection, k);
            if (k + 1 == sys.w()) r.prop5_bound_applies = true;
            if (k == 2) has_two[i] = has_two[j] = true;
        }
    }
    bool every_point_shared = true;
    for (const auto& blk : b) {
        const bool owns = std::any_of(blk.begin(), blk.end(),
                                      [&](Point x) { return occurrences[x] == 1; });
        if (owns) {
            ++r.one_own_subset_block_count;
            every_point_shared = false;
        }
    }
    r.two_intersection_block_count =
        static_cast<std::size_t>(std::count(has_two.begin(), has_two.end(), true));
    r.sparse_cover_assumption = r.max_pairwise_intersection <= 2 && every_point_shared;
    return r;
}

}  // namespace pidkit
