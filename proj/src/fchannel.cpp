#include "pidkit/fchannel.hpp"

#include <algorithm>
#include <atomic>
#include <limits>
#include <thread>

#include "pidkit/combinatorics.hpp"

namespace pidkit {

namespace {

using Columns = std::vector<std::vector<Symbol>>;

std::vector<Point> block_union(const SetSystem& s, const Coalition& c) {
    std::vector<Point> out;
    for (Index i : c) out.insert(out.end(), s.block(i).begin(), s.block(i).end());
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

Columns projections(const Code& code, const Coalition& c) {
    Columns cols(code.n());
    for (Index i : c) {
        const Word& wd = code.word(i);
        for (std::size_t j = 0; j < wd.size(); ++j) cols[j].push_back(wd[j]);
    }
    for (auto& col : cols) {
        std::sort(col.begin(), col.end());
        col.erase(std::unique(col.begin(), col.end()), col.end());
    }
    return cols;
}

// Each adapter caches a per-coalition "image" (block union or coordinate
// projections) so the producer test never touches the universe again.

struct IppsAdapter {
    const SetSystem& sys;
    std::size_t w;
    using Image = std::vector<Point>;

    Image image(const Coalition& c) const { return block_union(sys, c); }

    template <class F>
    bool visit(const Image& img, F&& f) const {
        return for_each_combination(img.size(), w, [&](std::span<const std::size_t> idx) {
            PointSet ps;
            ps.points.reserve(idx.size());
            for (auto i : idx) ps.points.push_back(img[i]);
            return f(Descendant{std::move(ps)});
        });
    }

    bool produces(const Image& img, const Descendant& d) const {
        const auto* ps = std::get_if<PointSet>(&d);
        return ps && ps->points.size() == w &&
               std::includes(img.begin(), img.end(), ps->points.begin(), ps->points.end());
    }
};

struct OrAdapter {
    const SetSystem& sys;
    using Image = std::vector<Point>;

    Image image(const Coalition& c) const { return block_union(sys, c); }

    template <class F>
    bool visit(const Image& img, F&& f) const {
        return f(Descendant{UnionSet{img}});
    }

    bool produces(const Image& img, const Descendant& d) const {
        const auto* us = std::get_if<UnionSet>(&d);
        return us && us->points == img;
    }
};

struct MippcAdapter {
    const Code& code;
    using Image = Columns;

    Image image(const Coalition& c) const { return projections(code, c); }

    template <class F>
    bool visit(const Image& img, F&& f) const {
        return f(Descendant{ColumnSets{img}});
    }

    bool produces(const Image& img, const Descendant& d) const {
        const auto* cs = std::get_if<ColumnSets>(&d);
        return cs && cs->columns == img;
    }
};

struct IppcAdapter {
    const Code& code;
    using Image = Columns;

    Image image(const Coalition& c) const { return projections(code, c); }

    template <class F>
    bool visit(const Image& img, F&& f) const {
        if (img.empty() || std::any_of(img.begin(), img.end(), [](auto& c) { return c.empty(); }))
            return true;
        std::vector<std::size_t> pos(img.size(), 0);
        while (true) {
            DescendantWord dw;
            dw.symbols.reserve(img.size());
            for (std::size_t j = 0; j < img.size(); ++j) dw.symbols.push_back(img[j][pos[j]]);
            if (!f(Descendant{std::move(dw)})) return false;
            // Odometer, last coordinate fastest so words come out in lex order.
            std::size_t j = img.size();
            while (j > 0) {
                --j;
                if (++pos[j] < img[j].size()) break;
                pos[j] = 0;
                if (j == 0) return true;
            }
        }
    }

    bool produces(const Image& img, const Descendant& d) const {
        const auto* dw = std::get_if<DescendantWord>(&d);
        if (!dw || dw->symbols.size() != img.size()) return false;
        for (std::size_t j = 0; j < img.size(); ++j) {
            if (!std::binary_search(img[j].begin(), img[j].end(), dw->symbols[j])) return false;
        }
        return true;
    }
};

template <class F>
decltype(auto) with_adapter(const Universe& u, const Channel& ch, F&& f) {
    check_compatible(u, ch);
    if (const auto* ipps = std::get_if<IppsChannel>(&ch))
        return f(IppsAdapter{std::get<SetSystem>(u), ipps->w});
    if (std::holds_alternative<OrChannel>(ch)) return f(OrAdapter{std::get<SetSystem>(u)});
    if (std::holds_alternative<MippcChannel>(ch)) return f(MippcAdapter{std::get<Code>(u)});
    return f(IppcAdapter{std::get<Code>(u)});
}

template <class A>
std::optional<SchemeViolation> direct_check(const A& a, std::span<const Index> ids,
                                            std::size_t t) {
    const auto coalitions = subsets_up_to(ids, t);
    std::vector<typename A::Image> images;
    images.reserve(coalitions.size());
    for (const auto& c : coalitions) images.push_back(a.image(c));

    std::optional<SchemeViolation> found;
    for (std::size_t i = 0; i < coalitions.size() && !found; ++i) {
        a.visit(images[i], [&](const Descendant& d) {
            Coalition common;
            bool first = true;
            for (std::size_t j = 0; j < coalitions.size(); ++j) {
                if (!a.produces(images[j], d)) continue;
                common = first ? coalitions[j] : sorted_intersection(common, coalitions[j]);
                first = false;
                if (common.empty()) break;
            }
            if (!common.empty()) return true;
            SchemeViolation v{coalitions[i], d, {}};
            for (std::size_t j = 0; j < coalitions.size(); ++j) {
                if (a.produces(images[j], d)) v.parents.push_back(coalitions[j]);
            }
            found = std::move(v);
            return false;
        });
    }
    return found;
}

std::vector<Index> all_indices(std::size_t n) {
    std::vector<Index> ids(n);
    for (Index i = 0; i < n; ++i) ids[i] = i;
    return ids;
}

}  // namespace

std::size_t universe_size(const Universe& u) {
    return std::visit([](const auto& x) { return x.size(); }, u);
}

void check_compatible(const Universe& u, const Channel& ch) {
    const bool is_set = std::holds_alternative<SetSystem>(u);
    const bool set_channel =
        std::holds_alternative<IppsChannel>(ch) || std::holds_alternative<OrChannel>(ch);
    if (is_set != set_channel)
        throw FormatError(is_set ? "code channel applied to a set system"
                                 : "set-system channel applied to a code");
    if (const auto* ipps = std::get_if<IppsChannel>(&ch)) {
        if (ipps->w == 0) throw FormatError("IPPS channel needs w >= 1");
        if (ipps->w != std::get<SetSystem>(u).w())
            throw FormatError("IPPS channel w differs from the system's block size");
    }
}

std::size_t u_bound(std::size_t t) {
    if (t < 2) throw std::invalid_argument("u_bound: t must be at least 2");
    return t * t / 4 + t + 1;
}

ConfigurationReport classify_configuration(const std::vector<Coalition>& family, std::size_t t,
                                           const Channel& ch, const Universe& u) {
    check_compatible(u, ch);
    if (family.empty()) throw FormatError("configuration family is empty");
    const std::size_t n = universe_size(u);
    for (const auto& c : family) {
        validate_coalition(c, n);
        if (c.size() > t)
            throw FormatError("coalition of size " + std::to_string(c.size()) + " exceeds t=" +
                              std::to_string(t));
    }

    ConfigurationReport r;
    Coalition common = family.front();
    Coalition all = family.front();
    for (std::size_t i = 1; i < family.size(); ++i) {
        common = sorted_intersection(common, family[i]);
        all = sorted_union(all, family[i]);
    }
    r.union_size = all.size();
    r.is_configuration = common.empty();
    if (!r.is_configuration) return r;

    r.is_minimal = true;
    for (std::size_t skip = 0; skip < family.size() && r.is_minimal; ++skip) {
        std::optional<Coalition> rest;
        for (std::size_t j = 0; j < family.size(); ++j) {
            if (j == skip) continue;
            rest = rest ? sorted_intersection(*rest, family[j]) : family[j];
        }
        if (rest && rest->empty()) r.is_minimal = false;
    }

    if (const auto* ipps = std::get_if<IppsChannel>(&ch)) {
        const auto& sys = std::get<SetSystem>(u);
        auto shared = block_union(sys, family.front());
        for (std::size_t i = 1; i < family.size(); ++i)
            shared = sorted_intersection(shared, block_union(sys, family[i]));
        if (shared.size() >= ipps->w) {
            r.is_forbidden = true;
            shared.resize(ipps->w);
            r.witness_descendant = PointSet{std::move(shared)};
        }
    } else if (std::holds_alternative<OrChannel>(ch)) {
        const auto& sys = std::get<SetSystem>(u);
        const auto first = block_union(sys, family.front());
        r.is_forbidden = std::all_of(family.begin() + 1, family.end(),
                                     [&](const Coalition& c) { return block_union(sys, c) == first; });
        if (r.is_forbidden) r.witness_descendant = UnionSet{first};
    } else if (std::holds_alternative<MippcChannel>(ch)) {
        const auto& code = std::get<Code>(u);
        const auto first = projections(code, family.front());
        r.is_forbidden = std::all_of(family.begin() + 1, family.end(),
                                     [&](const Coalition& c) { return projections(code, c) == first; });
        if (r.is_forbidden) r.witness_descendant = ColumnSets{first};
    } else {
        const auto& code = std::get<Code>(u);
        auto shared = projections(code, family.front());
        for (std::size_t i = 1; i < family.size(); ++i) {
            const auto cols = projections(code, family[i]);
            for (std::size_t j = 0; j < shared.size(); ++j)
                shared[j] = sorted_intersection(shared[j], cols[j]);
        }
        r.is_forbidden = std::none_of(shared.begin(), shared.end(),
                                      [](const auto& col) { return col.empty(); });
        if (r.is_forbidden) {
            DescendantWord dw;
            for (const auto& col : shared) dw.symbols.push_back(col.front());
            r.witness_descendant = std::move(dw);
        }
    }
    return r;
}

bool for_each_descendant(const Coalition& p, const Channel& ch, const Universe& u,
                         const std::function<bool(const Descendant&)>& visit) {
    return with_adapter(u, ch, [&](const auto& a) {
        validate_coalition(p, universe_size(u));
        return a.visit(a.image(p), visit);
    });
}

std::vector<Descendant> enumerate_descendants(const Coalition& p, const Channel& ch,
                                              const Universe& u) {
    std::vector<Descendant> out;
    for_each_descendant(p, ch, u, [&](const Descendant& d) {
        out.push_back(d);
        return true;
    });
    return out;
}

bool can_produce(const Coalition& p, const Descendant& d, const Channel& ch, const Universe& u) {
    return with_adapter(u, ch, [&](const auto& a) {
        validate_coalition(p, universe_size(u));
        return a.produces(a.image(p), d);
    });
}

SchemeVerdict is_scheme_on(const Universe& u, std::span<const Index> ids, std::size_t t,
                           const Channel& ch) {
    if (t == 0) throw std::invalid_argument("t must be positive");
    return with_adapter(u, ch, [&](const auto& a) { return SchemeVerdict{direct_check(a, ids, t)}; });
}

SchemeVerdict is_scheme_direct(const Universe& u, std::size_t t, const Channel& ch) {
    const auto ids = all_indices(universe_size(u));
    return is_scheme_on(u, ids, t, ch);
}

SchemeVerdict is_scheme_local(const Universe& u, std::size_t t, const Channel& ch,
                              unsigned threads) {
    const std::size_t n = universe_size(u);
    const std::size_t k_max = std::min(u_bound(t), n);
    threads = std::max(1u, threads);

    return with_adapter(u, ch, [&](const auto& a) {
        for (std::size_t k = 1; k <= k_max; ++k) {
            constexpr auto kNone = std::numeric_limits<std::uint64_t>::max();
            std::atomic<std::uint64_t> best{kNone};
            std::vector<std::optional<SchemeViolation>> found(threads);
            std::vector<std::uint64_t> found_at(threads, kNone);

            auto worker = [&](unsigned id) {
                std::uint64_t ordinal = 0;
                std::vector<Index> sub(k);
                for_each_combination(n, k, [&](std::span<const std::size_t> idx) {
                    const std::uint64_t mine = ordinal++;
                    if (mine > best.load(std::memory_order_relaxed)) return false;
                    if (mine % threads != id) return true;
                    std::copy(idx.begin(), idx.end(), sub.begin());
                    if (auto v = direct_check(a, sub, t)) {
                        found[id] = std::move(v);
                        found_at[id] = mine;
                        std::uint64_t cur = best.load();
                        while (mine < cur && !best.compare_exchange_weak(cur, mine)) {
                        }
                        return false;
                    }
                    return true;
                });
            };

            if (threads == 1) {
                worker(0);
            } else {
                std::vector<std::jthread> pool;
                for (unsigned id = 0; id < threads; ++id) pool.emplace_back(worker, id);
            }

            const auto it = std::min_element(found_at.begin(), found_at.end());
            if (*it != kNone)
                return SchemeVerdict{std::move(found[static_cast<std::size_t>(it - found_at.begin())])};
        }
        return SchemeVerdict{};
    });
}

}  // namespace pidkit
