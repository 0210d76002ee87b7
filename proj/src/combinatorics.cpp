#include "pidkit/combinatorics.hpp"

#include <limits>

namespace pidkit {

BigInt binomial(std::uint64_t n, std::uint64_t k) {
    if (k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        r *= n - i;
        r /= i + 1;
    }
    return r;
}

std::uint64_t binomial_saturating(std::uint64_t n, std::uint64_t k) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    if (k > n) return 0;
    k = std::min(k, n - k);
    unsigned __int128 r = 1;
    for (std::uint64_t i = 0; i < k; ++i) {
        r = r * (n - i) / (i + 1);
        if (r > kMax) return kMax;
    }
    return static_cast<std::uint64_t>(r);
}

std::uint64_t count_subsets(std::uint64_t n, std::uint64_t lo, std::uint64_t hi) {
    constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    for (std::uint64_t k = lo; k <= hi && k <= n; ++k) {
        const std::uint64_t c = binomial_saturating(n, k);
        if (c == kMax || total > kMax - c) return kMax;
        total += c;
    }
    return total;
}

namespace {

void extend(std::span<const std::size_t> ids, std::size_t start, std::size_t max_size,
            std::vector<std::size_t>& current, std::vector<std::vector<std::size_t>>& out) {
    for (std::size_t i = start; i < ids.size(); ++i) {
        current.push_back(ids[i]);
        out.push_back(current);
        if (current.size() < max_size) extend(ids, i + 1, max_size, current, out);
        current.pop_back();
    }
}

}  // namespace

std::vector<std::vector<std::size_t>> subsets_up_to(std::span<const std::size_t> ids,
                                                    std::size_t max_size) {
    std::vector<std::vector<std::size_t>> out;
    if (max_size == 0) return out;
    std::vector<std::size_t> current;
    extend(ids, 0, max_size, current, out);
    return out;
}

}  // namespace pidkit
