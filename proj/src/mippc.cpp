#include "pidkit/mippc.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "pidkit/combinatorics.hpp"

namespace pidkit {

namespace {

std::vector<Index> all_indices(std::size_t n) {
    std::vector<Index> ids(n);
    for (Index i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

std::vector<Word> pick(const std::vector<Word>& words, const Coalition& s) {
    std::vector<Word> out;
    out.reserve(s.size());
    for (Index i : s) out.push_back(words.at(i));
    return out;
}

// Coordinate multiplicity bounds every bad subfamily obeys: at most
// floor(size/2) symbols per coordinate below size 2t, at most t from 2t on.
void check_multiplicity_bounds(const std::vector<Word>& U, std::size_t t) {
    const auto cols = desc(U).columns;
    const std::size_t cap = U.size() < 2 * t ? U.size() / 2 : t;
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i].size() > cap)
            throw std::logic_error("bad subfamily of size " + std::to_string(U.size()) + " has " +
                                   std::to_string(cols[i].size()) + " symbols in coordinate " +
                                   std::to_string(i) + ", bound is " + std::to_string(cap));
    }
}

template <class Match>
std::vector<Index> trace_by(const Code& code, std::size_t t, Match&& matches) {
    if (t == 0) throw std::invalid_argument("t must be positive");
    std::optional<Coalition> common;
    for (const auto& s : subsets_up_to(all_indices(code.size()), t)) {
        if (!matches(desc(s, code))) continue;
        common = common ? sorted_intersection(*common, s) : s;
    }
    if (!common)
        throw TraceError(TraceError::Kind::NotProducible,
                         "no coalition of size <= " + std::to_string(t) + " produces the descendant");
    if (common->empty())
        throw TraceError(TraceError::Kind::EmptyIntersection,
                         "possible parents have empty intersection; the code is not parent-identifying");
    return *common;
}

}  // namespace

ColumnSets desc(const std::vector<Word>& words) {
    ColumnSets out;
    if (words.empty()) return out;
    out.columns.resize(words.front().size());
    for (const auto& wd : words) {
        if (wd.size() != out.columns.size()) throw FormatError("words of different lengths");
        for (std::size_t j = 0; j < wd.size(); ++j) out.columns[j].push_back(wd[j]);
    }
    for (auto& col : out.columns) {
        std::sort(col.begin(), col.end());
        col.erase(std::unique(col.begin(), col.end()), col.end());
    }
    return out;
}

ColumnSets desc(const Coalition& s, const Code& code) {
    validate_coalition(s, code.size());
    return desc(pick(code.words(), s));
}

std::optional<BadSubfamily> is_bad_subfamily(const std::vector<Word>& U, std::size_t t) {
    const std::size_t u = u_bound(t);
    if (U.size() < 2 || U.size() > u)
        throw std::invalid_argument("subfamily size " + std::to_string(U.size()) +
                                    " outside [2, " + std::to_string(u) + "]");

    // A family meeting the three conditions lies inside one desc-class, and
    // then the whole class meets them too; so testing each class suffices.
    std::map<std::vector<std::vector<Symbol>>, std::vector<Coalition>> classes;
    for (auto& s : subsets_up_to(all_indices(U.size()), t))
        classes[desc(pick(U, s)).columns].push_back(std::move(s));

    for (auto& [cols, members] : classes) {
        Coalition cover = members.front();
        Coalition common = members.front();
        for (std::size_t i = 1; i < members.size(); ++i) {
            cover = sorted_union(cover, members[i]);
            common = sorted_intersection(common, members[i]);
        }
        if (cover.size() != U.size() || !common.empty()) continue;
        check_multiplicity_bounds(U, t);
        return BadSubfamily{all_indices(U.size()), std::move(members), ColumnSets{cols}};
    }
    return std::nullopt;
}

MippcExpurgation random_expurgated_mippc(std::size_t n, std::size_t q, std::size_t M,
                                         std::size_t t, std::uint64_t seed,
                                         std::uint64_t budget) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    if (q < 2) throw std::invalid_argument("need q >= 2");
    if (t < 2) throw std::invalid_argument("need t >= 2");
    if (M < 1) throw std::invalid_argument("need M >= 1");
    const std::size_t u = u_bound(t);
    const std::uint64_t work = count_subsets(M, 2, u);
    if (work > budget)
        throw BudgetExceeded(std::to_string(work) + " candidate subfamilies exceed the budget of " +
                             std::to_string(budget));

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<Symbol> symbol(0, static_cast<Symbol>(q - 1));
    std::vector<Word> sample(M, Word(n));
    for (auto& wd : sample)
        for (auto& x : wd) x = symbol(rng);

    std::vector<bool> deleted(M, false);
    std::size_t bad = 0;
    std::vector<Word> sub;
    for (std::size_t k = 2; k <= std::min(u, M); ++k) {
        for_each_combination(M, k, [&](std::span<const std::size_t> idx) {
            sub.clear();
            for (auto i : idx) sub.push_back(sample[i]);
            if (!is_bad_subfamily(sub, t)) return true;
            ++bad;
            // Largest word; among equal copies the later position.
            std::size_t top = idx[0];
            for (auto i : idx)
                if (sample[i] >= sample[top]) top = i;
            deleted[top] = true;
            return true;
        });
    }

    std::vector<Word> keep;
    for (std::size_t i = 0; i < M; ++i)
        if (!deleted[i]) keep.push_back(sample[i]);
    MippcExpurgation result{Code(n, q, std::move(keep)), M, bad};

    if (count_subsets(result.code.size(), 1, t) <= 5000 &&
        !is_scheme_direct(result.code, t, MippcChannel{}))
        throw std::logic_error("expurgated code fails the MIPPC check");
    return result;
}

std::size_t default_code_size(std::size_t n, std::size_t q, std::size_t t, double eps) {
    if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
    if (t < 1 || n < 1 || q < 1) throw std::invalid_argument("need n, q, t >= 1");
    const unsigned e = static_cast<unsigned>(2 * t - 1);
    // Smallest M with M^(2t-1) >= eps^(2t-1) * q^(tn).
    Rational target(boost::multiprecision::pow(BigInt(q), static_cast<unsigned>(t * n)));
    const Rational scale(eps);
    for (unsigned i = 0; i < e; ++i) target *= scale;
    auto enough = [&](const BigInt& m) { return Rational(boost::multiprecision::pow(m, e)) >= target; };
    BigInt hi = 1;
    while (!enough(hi)) hi *= 2;
    BigInt lo = hi / 2;  // enough(lo) is false unless lo == 0
    while (hi - lo > 1) {
        const BigInt mid = (lo + hi) / 2;
        if (enough(mid)) hi = mid;
        else lo = mid;
    }
    if (lo == 0 && enough(0)) hi = 0;
    return hi.convert_to<std::size_t>();
}

std::vector<Index> trace_mippc(const Code& code, const ColumnSets& D, std::size_t t) {
    if (D.columns.size() != code.n()) throw FormatError("descendant has the wrong number of coordinates");
    for (const auto& col : D.columns) {
        if (col.empty()) throw FormatError("descendant has an empty coordinate set");
        if (!std::is_sorted(col.begin(), col.end()) ||
            std::adjacent_find(col.begin(), col.end()) != col.end())
            throw FormatError("descendant coordinate sets must be sorted without repeats");
        if (col.back() >= code.q()) throw FormatError("descendant symbol out of range");
    }
    return trace_by(code, t, [&](const ColumnSets& cs) { return cs == D; });
}

std::vector<Index> trace_ippc(const Code& code, const Word& d, std::size_t t) {
    if (d.size() != code.n()) throw FormatError("descendant has the wrong length");
    for (Symbol x : d)
        if (x >= code.q()) throw FormatError("descendant symbol out of range");
    return trace_by(code, t, [&](const ColumnSets& cs) {
        for (std::size_t j = 0; j < d.size(); ++j)
            if (!std::binary_search(cs.columns[j].begin(), cs.columns[j].end(), d[j])) return false;
        return true;
    });
}

ImplicationReport check_ippc_implies_mippc(const Code& code, std::size_t t) {
    const Universe u = code;
    return {is_scheme_direct(u, t, IppcChannel{}).holds(), is_scheme_direct(u, t, MippcChannel{}).holds()};
}

}  // namespace pidkit
