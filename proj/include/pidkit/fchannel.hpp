#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <variant>
#include <vector>

#include "pidkit/model.hpp"

namespace pidkit {

/// Colluders output any w-subset of the union of their blocks.
struct IppsChannel {
    std::size_t w;
};
/// Averaging attack: the output is exactly desc(P), the coordinate symbol sets.
struct MippcChannel {};
/// Classical IPP: the output is any word of P(1) x ... x P(n).
struct IppcChannel {};
/// OR channel: the output is the union of the coalition's blocks.
struct OrChannel {};

using Channel = std::variant<IppsChannel, MippcChannel, IppcChannel, OrChannel>;

/// Set-system channels pair with SetSystem, code channels with Code.
using Universe = std::variant<SetSystem, Code>;

std::size_t universe_size(const Universe& u);

/// Throws FormatError unless the channel applies to this kind of universe
/// (and, for IppsChannel, w matches the system's block size).
void check_compatible(const Universe& u, const Channel& ch);

/// Largest possible size |U(F)| of a minimal configuration of coalitions of
/// size <= t: floor((t/2 + 1)^2) = floor(t^2/4) + t + 1. Requires t >= 2.
std::size_t u_bound(std::size_t t);

struct ConfigurationReport {
    bool is_configuration = false;
    bool is_minimal = false;
    bool is_forbidden = false;
    std::optional<Descendant> witness_descendant;
    std::size_t union_size = 0;
};

/// Classifies a family F = {F_1, ..., F_m} of coalitions: configuration when
/// the members share no common element, minimal when each leave-one-out
/// subfamily still does, forbidden when it is a configuration whose channel
/// outputs share a descendant.
ConfigurationReport classify_configuration(const std::vector<Coalition>& family, std::size_t t,
                                           const Channel& ch, const Universe& u);

/// Streams f(P). The visitor returns false to stop; the function then
/// returns false. IPPC products are generated lazily.
bool for_each_descendant(const Coalition& p, const Channel& ch, const Universe& u,
                         const std::function<bool(const Descendant&)>& visit);

std::vector<Descendant> enumerate_descendants(const Coalition& p, const Channel& ch,
                                              const Universe& u);

/// True when coalition `p` can output `d` through the channel.
bool can_produce(const Coalition& p, const Descendant& d, const Channel& ch, const Universe& u);

/// A coalition of size <= t, a descendant it produces, and every coalition of
/// size <= t that can also produce it. The parents have empty intersection.
struct SchemeViolation {
    Coalition coalition;
    Descendant descendant;
    std::vector<Coalition> parents;
};

struct SchemeVerdict {
    std::optional<SchemeViolation> violation;
    bool holds() const noexcept { return !violation.has_value(); }
    explicit operator bool() const noexcept { return holds(); }
};

/// Checks the parent-identifying property over every coalition of size <= t
/// and every descendant it can produce. The reported violation is the first
/// one in canonical coalition order.
SchemeVerdict is_scheme_direct(const Universe& u, std::size_t t, const Channel& ch);

/// Same verdict as is_scheme_direct, obtained by running the direct check on
/// every sub-universe of at most u_bound(t) elements. Sub-universes are
/// visited by size, then lexicographically; `threads` > 1 splits each size
/// level across workers without changing the reported witness.
SchemeVerdict is_scheme_local(const Universe& u, std::size_t t, const Channel& ch,
                              unsigned threads = 1);

/// Direct check restricted to the elements `ids` (sorted); witnesses use the
/// original indices.
SchemeVerdict is_scheme_on(const Universe& u, std::span<const Index> ids, std::size_t t,
                           const Channel& ch);

}  // namespace pidkit
