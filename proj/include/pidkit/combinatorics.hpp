#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace pidkit {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt binomial(std::uint64_t n, std::uint64_t k);

/// C(n, k) in 64 bits, or UINT64_MAX when the value does not fit.
std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k);

/// Sum of C(n, k) for lo <= k <= hi, saturating at UINT64_MAX.
std::uint64_t count_subsets(std::uint64_t n, std::uint64_t lo, std::uint64_t hi);

/// Visits every k-subset of {0, ..., n-1} in lexicographic order. The
/// visitor receives a sorted index span and returns false to stop early.
/// Returns false if the visitor stopped the walk.
template <class Visitor>
bool for_each_combination(std::size_t n, std::size_t k, Visitor&& visit) {
    if (k > n) return true;
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        if (!visit(std::span<const std::size_t>(idx))) return false;
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + (i - 1)) --i;
        if (i == 0) return true;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

/// All nonempty subsets of `ids` with at most `max_size` members, each
/// sorted, in lexicographic order of the index tuples (a prefix sorts first).
/// `ids` must be sorted ascending.
std::vector<std::vector<std::size_t>> subsets_up_to(std::span<const std::size_t> ids,
                                                    std::size_t max_size);

template <class T>
std::vector<T> sorted_intersection(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

template <class T>
std::vector<T> sorted_union(const std::vector<T>& a, const std::vector<T>& b) {
    std::vector<T> out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

}  // namespace pidkit
