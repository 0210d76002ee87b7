#pragma once

#include <cstddef>
#include <cstdint>

#include "pidkit/model.hpp"

namespace pidkit {

struct SearchOptions {
    /// Maximum number of branch-and-bound nodes before BudgetExceeded.
    std::uint64_t budget = 100'000'000;
    /// Force the first candidate (block {0..w-1}, word 0...0) into every
    /// solution. Any nonempty scheme can be relabelled to contain it.
    bool fix_first = true;
};

template <class Witness>
struct SearchResult {
    std::size_t max_size;
    Witness witness;
    std::uint64_t nodes_explored;
};

/// Exact I_t(w, v): the most blocks in any t-IPPS(w, v).
SearchResult<SetSystem> max_ipps(std::size_t v, std::size_t w, std::size_t t,
                                 const SearchOptions& opts = {});

/// Exact M_t(n, q): the most words in any t-MIPPC(n, q).
SearchResult<Code> max_mippc(std::size_t n, std::size_t q, std::size_t t,
                             const SearchOptions& opts = {});

}  // namespace pidkit
