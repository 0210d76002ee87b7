#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "pidkit/model.hpp"

namespace pidkit {

/// Raised by the tracing routines.
class TraceError : public std::runtime_error {
public:
    enum class Kind {
        NotProducible,   ///< no coalition of size <= t can output the descendant
        EmptyIntersection,  ///< possible parents share nobody: not a parent-identifying scheme
    };

    TraceError(Kind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    Kind kind() const noexcept { return kind_; }

private:
    Kind kind_;
};

/// s blocks whose union has at most (s-1)w points.
struct BadPacket {
    std::vector<Index> blocks;
    std::vector<Point> span;
};

/// Violation of the two-coalition characterisation of 2-IPPS.
struct Ipps2Witness {
    enum class Kind {
        /// Three blocks A, B, C with |(A u B) n (A u C) n (B u C)| >= w.
        Triple,
        /// Four blocks with |(A u B) n (C u D)| >= w; `blocks` lists A, B, C, D.
        Quadruple,
    };
    Kind kind;
    std::vector<Index> blocks;
    std::vector<Point> overlap;
};

struct StructuralReport {
    std::size_t max_pairwise_intersection = 0;
    /// Blocks holding a point that lies in no other block.
    std::size_t one_own_subset_block_count = 0;
    /// Blocks B with some other block B' such that |B n B'| = 2.
    std::size_t two_intersection_block_count = 0;
    /// Some pair of blocks meets in exactly w-1 points.
    bool prop5_bound_applies = false;
    /// Pairwise intersections are at most 2 and every point of every block
    /// lies in some other block.
    bool sparse_cover_assumption = false;
};

/// Coalitions of size <= t whose block union covers T, in canonical order.
std::vector<Coalition> possible_parents(const SetSystem& sys, const std::vector<Point>& T,
                                        std::size_t t);

/// Intersection of all possible parents of T. Throws TraceError.
std::vector<Index> trace_ipps(const SetSystem& sys, const std::vector<Point>& T, std::size_t t);

/// Every triple and quadruple violation, triples first, each group in
/// lexicographic order of block indices (quadruples: per 4-set, the pairings
/// {AB|CD}, {AC|BD}, {AD|BC}).
std::vector<Ipps2Witness> all_2ipps_witnesses(const SetSystem& sys);

/// First triple/quadruple violation, or nullopt when the system is a 2-IPPS.
std::optional<Ipps2Witness> check_2ipps(const SetSystem& sys);

/// All bad s-packets with 2 <= s <= u_bound(t), in lexicographic order.
std::vector<BadPacket> find_bad_packets(const SetSystem& sys, std::size_t t);

enum class DeletionRule {
    /// Delete the lexicographically largest block of every bad packet.
    LargestBlock,
    /// Repeatedly delete the block lying in the most surviving bad packets.
    Greedy,
};

struct IppsExpurgation {
    SetSystem system;
    std::size_t sampled = 0;
    std::size_t bad_packets = 0;
};

/// Keeps each w-subset of {0..v-1} independently with probability p, then
/// removes one block from every bad packet. The result is a t-IPPS.
/// Refuses C(v, w) > 2^48.
IppsExpurgation random_expurgated_ipps(std::size_t v, std::size_t w, std::size_t t, double p,
                                       std::uint64_t seed,
                                       DeletionRule rule = DeletionRule::LargestBlock);

/// Blocks {j} u {0, ..., w-2} for j = w-1, ..., v-1.
SetSystem delta_construction(std::size_t v, std::size_t w);

StructuralReport structural_report(const SetSystem& sys);

}  // namespace pidkit
