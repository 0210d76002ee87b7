#include "pidkit/search.hpp"

#include <algorithm>
#include <stdexcept>

#include "pidkit/combinatorics.hpp"
#include "pidkit/fchannel.hpp"

namespace pidkit {

namespace {

constexpr std::uint64_t kMaxCandidates = 100'000;

// Branch and bound over the candidates of `all` in index order. Candidates
// are only ever appended in increasing order, and the scheme property is
// hereditary, so adding c to a scheme S only needs checking on the
// sub-universes R u {c} with R a (u-1)-subset of S (or S itself if smaller).
class BranchAndBound {
public:
    BranchAndBound(const Universe& all, std::size_t t, Channel ch, const SearchOptions& opts)
        : all_(all), t_(t), ch_(std::move(ch)), opts_(opts), n_(universe_size(all)) {}

    std::vector<Index> run() {
        if (n_ == 0) return {};
        if (opts_.fix_first) {
            selected_ = {0};
            best_ = selected_;
            dfs(1);
        } else {
            dfs(0);
        }
        return best_;
    }

    std::uint64_t nodes() const { return nodes_; }

private:
    bool feasible(Index c) const {
        const std::size_t r = std::min(u_bound(t_) - 1, selected_.size());
        std::vector<Index> ids(r + 1);
        return for_each_combination(selected_.size(), r, [&](std::span<const std::size_t> pick) {
            for (std::size_t i = 0; i < r; ++i) ids[i] = selected_[pick[i]];
            ids[r] = c;
            return is_scheme_on(all_, ids, t_, ch_).holds();
        });
    }

    void dfs(Index next) {
        if (++nodes_ > opts_.budget)
            throw BudgetExceeded("search exceeded " + std::to_string(opts_.budget) + " nodes");
        if (selected_.size() > best_.size()) best_ = selected_;
        if (next >= n_ || selected_.size() + (n_ - next) <= best_.size()) return;
        if (feasible(next)) {
            selected_.push_back(next);
            dfs(next + 1);
            selected_.pop_back();
        }
        dfs(next + 1);
    }

    const Universe& all_;
    std::size_t t_;
    Channel ch_;
    SearchOptions opts_;
    std::size_t n_;
    std::vector<Index> selected_;
    std::vector<Index> best_;
    std::uint64_t nodes_ = 0;
};

// The witness passes, and no single extension inside the universe does.
void certify(const Universe& all, const std::vector<Index>& best, std::size_t t, const Channel& ch) {
    if (!is_scheme_on(all, best, t, ch))
        throw std::logic_error("search witness fails verification");
    const std::size_t n = universe_size(all);
    for (Index c = 0; c < n; ++c) {
        if (std::binary_search(best.begin(), best.end(), c)) continue;
        auto ext = best;
        ext.insert(std::upper_bound(ext.begin(), ext.end(), c), c);
        if (is_scheme_on(all, ext, t, ch))
            throw std::logic_error("search witness is not maximal");
    }
}

}  // namespace

SearchResult<SetSystem> max_ipps(std::size_t v, std::size_t w, std::size_t t,
                                 const SearchOptions& opts) {
    if (w < 1 || v < w) throw std::invalid_argument("need v >= w >= 1");
    if (t < 2) throw std::invalid_argument("need t >= 2");
    if (binomial_saturating(v, w) > kMaxCandidates)
        throw BudgetExceeded("C(v, w) is too large for exhaustive search");

    std::vector<Block> blocks;
    for_each_combination(v, w, [&](std::span<const std::size_t> idx) {
        blocks.emplace_back(idx.begin(), idx.end());
        return true;
    });
    const SetSystem full(v, w, std::move(blocks));
    const Universe all = full;
    const Channel ch = IppsChannel{w};

    BranchAndBound bb(all, t, ch, opts);
    const auto best = bb.run();
    certify(all, best, t, ch);
    return {best.size(), full.restrict_to(best), bb.nodes()};
}

SearchResult<Code> max_mippc(std::size_t n, std::size_t q, std::size_t t,
                             const SearchOptions& opts) {
    if (n < 1 || q < 1) throw std::invalid_argument("need n, q >= 1");
    if (t < 2) throw std::invalid_argument("need t >= 2");
    std::uint64_t count = 1;
    for (std::size_t i = 0; i < n; ++i) {
        count *= q;
        if (count > kMaxCandidates) throw BudgetExceeded("q^n is too large for exhaustive search");
    }

    std::vector<Word> words;
    Word wd(n, 0);
    for (std::uint64_t k = 0; k < count; ++k) {
        words.push_back(wd);
        for (std::size_t j = n; j-- > 0;) {
            if (++wd[j] < q) break;
            wd[j] = 0;
        }
    }
    const Code full(n, q, std::move(words));
    const Universe all = full;
    const Channel ch = MippcChannel{};

    BranchAndBound bb(all, t, ch, opts);
    const auto best = bb.run();
    certify(all, best, t, ch);
    return {best.size(), full.restrict_to(best), bb.nodes()};
}

}  // namespace pidkit
