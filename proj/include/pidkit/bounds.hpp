#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "pidkit/combinatorics.hpp"

namespace pidkit {

struct BoundEntry {
    std::string name;
    /// Exact value, or a real for quantities that involve irrational powers.
    std::variant<Rational, double> value;
    std::string source;
};

struct BoundsReport {
    std::string subject;  ///< "ipps" or "mippc"
    std::vector<std::pair<std::string, std::size_t>> params;
    std::vector<BoundEntry> entries;

    const BoundEntry* find(const std::string& name) const;
    /// Exact value of the named entry; throws std::out_of_range if missing or real.
    const Rational& exact(const std::string& name) const;
};

/// Closed-form bounds on the largest t-IPPS(w, v):
///   upper     C(v, ceil(w / (floor(t^2/4) + t)))
///   lower     v - w + 1 (delta construction)
///   exponent  w / (u - 1), the growth order of the random construction
///   exact     v - 1, only when w = 2
BoundsReport ipps_bounds(std::size_t v, std::size_t w, std::size_t t);

/// C(v,w) p - sum_{s=2..u} C(v,(s-1)w) C(C((s-1)w,w), s) p^s, evaluated
/// exactly for the given rational p.
Rational ipps_expected_size_exact(std::size_t v, std::size_t w, std::size_t t, const Rational& p);

/// The same expression at a double p (taken as its exact binary value).
/// Requires 0 <= p < 1.
double ipps_expected_size(std::size_t v, std::size_t w, std::size_t t, double p);

/// Argmax of ipps_expected_size over 512 log-spaced p values spanning
/// [base / 1e3, min(1 - 1e-9, base * 1e3)] with base = v^((2-u)w/(u-1)).
/// Ties go to the smaller p.
double optimize_p(std::size_t v, std::size_t w, std::size_t t);

/// The grid optimize_p searches.
std::vector<double> optimize_p_grid(std::size_t v, std::size_t w, std::size_t t);

/// Asymptotic rate bounds for t-MIPPC of length n:
///   lower_rate  t / (2t - 1)
///   upper_rate  1/2 + 1/(2t)                        n even
///               1/2 + max((n+1)/(2tn), 1/(2n))      n odd, t even
///               1/2 + max(1/(2t), 1/(2n))           n odd, t odd
/// With both c and q given, also the finite-q size bound
/// q^(n/2) (q^(n/2t) + 2c) (and its odd-n variants) and the rate it implies.
BoundsReport mippc_rate_bounds(std::size_t n, std::size_t t, std::optional<double> c = std::nullopt,
                               std::optional<std::size_t> q = std::nullopt);

struct RateTableRow {
    std::size_t n;
    std::size_t t;
    Rational lower;
    Rational upper;
    std::string published_lower;
    std::string published_upper;
    bool lower_matches;
    bool upper_matches;
};

/// Published asymptotic rate table for t-MIPPC, recomputed and compared at
/// a 0.001 tolerance.
std::vector<RateTableRow> table1_report();

double to_double(const Rational& r);
std::string render_text(const BoundsReport& r);
/// {"bound_name": {"num": ..., "den": ...}, ...}; reals as {"value": x}.
std::string render_json(const BoundsReport& r);
std::string render_text(const std::vector<RateTableRow>& rows);
std::string render_json(const std::vector<RateTableRow>& rows);

}  // namespace pidkit
