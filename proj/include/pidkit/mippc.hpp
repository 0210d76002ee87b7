#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "pidkit/fchannel.hpp"
#include "pidkit/ipps.hpp"
#include "pidkit/model.hpp"

namespace pidkit {

/// A subfamily (positions into the word list it was found in) together with
/// the desc-class of its <= t-subsets that covers it with empty intersection.
struct BadSubfamily {
    std::vector<Index> words;
    std::vector<Coalition> witness_family;
    ColumnSets shared_desc;
};

/// Coordinate-wise symbol sets of the words at positions `s`.
ColumnSets desc(const Coalition& s, const Code& code);
ColumnSets desc(const std::vector<Word>& words);

/// Decides whether the word list U (duplicates allowed) is covered by
/// <= t-subsets that share one desc and have no common member.
/// Requires 2 <= |U| <= u_bound(t).
std::optional<BadSubfamily> is_bad_subfamily(const std::vector<Word>& U, std::size_t t);

struct MippcExpurgation {
    Code code;
    std::size_t sampled = 0;
    std::size_t bad_subfamilies = 0;
};

constexpr std::uint64_t kDefaultSubfamilyBudget = 1'000'000'000;

/// Draws M words uniformly from Q^n, deletes the lexicographically largest
/// word of every bad subfamily of size 2..u_bound(t) and returns the
/// remaining (distinct) words, which form a t-MIPPC.
MippcExpurgation random_expurgated_mippc(std::size_t n, std::size_t q, std::size_t M,
                                         std::size_t t, std::uint64_t seed,
                                         std::uint64_t budget = kDefaultSubfamilyBudget);

/// ceil(eps * q^(tn/(2t-1))), computed exactly.
std::size_t default_code_size(std::size_t n, std::size_t q, std::size_t t, double eps = 1.0);

/// Intersection of every S with |S| <= t and desc(S) = D. Throws TraceError.
std::vector<Index> trace_mippc(const Code& code, const ColumnSets& D, std::size_t t);

/// Intersection of every P with |P| <= t and d in desc(P). Throws TraceError.
std::vector<Index> trace_ippc(const Code& code, const Word& d, std::size_t t);

struct ImplicationReport {
    bool ippc = false;
    bool mippc = false;
    bool implication_holds() const noexcept { return !ippc || mippc; }
};

/// Runs both verifiers; an IPP code must also pass the multimedia check.
ImplicationReport check_ippc_implies_mippc(const Code& code, std::size_t t);

}  // namespace pidkit
