#include "pidkit/bounds.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "pidkit/fchannel.hpp"

namespace pidkit {

namespace {

// Exact value of a finite double.
Rational exact_rational(double x) {
    if (!std::isfinite(x)) throw std::invalid_argument("non-finite value");
    if (x == 0.0) return Rational(0);
    int exp = 0;
    const double mant = std::frexp(x, &exp);  // x = mant * 2^exp, 0.5 <= |mant| < 1
    const auto scaled = static_cast<std::int64_t>(std::ldexp(mant, 53));
    exp -= 53;
    Rational r{BigInt(scaled)};
    if (exp >= 0) r *= Rational(BigInt(1) << exp);
    else r /= Rational(BigInt(1) << -exp);
    return r;
}

Rational parse_published(const std::string& s) {
    if (auto slash = s.find('/'); slash != std::string::npos)
        return Rational(BigInt(std::stoll(s.substr(0, slash))), BigInt(std::stoll(s.substr(slash + 1))));
    const auto dot = s.find('.');
    if (dot == std::string::npos) return Rational(BigInt(std::stoll(s)));
    const std::string frac = s.substr(dot + 1);
    BigInt den = boost::multiprecision::pow(BigInt(10), static_cast<unsigned>(frac.size()));
    return Rational(BigInt(std::stoll(s.substr(0, dot))) * den + BigInt(std::stoll(frac)), den);
}

Rational abs_diff(const Rational& a, const Rational& b) { return a > b ? a - b : b - a; }

nlohmann::ordered_json integer_json(const BigInt& x) {
    if (x <= BigInt(std::numeric_limits<std::int64_t>::max()) &&
        x >= BigInt(std::numeric_limits<std::int64_t>::min()))
        return x.convert_to<std::int64_t>();
    return x.str();
}

nlohmann::ordered_json rational_json(const Rational& r) {
    nlohmann::ordered_json j;
    j["num"] = integer_json(boost::multiprecision::numerator(r));
    j["den"] = integer_json(boost::multiprecision::denominator(r));
    return j;
}

std::string format_rational(const Rational& r) {
    const BigInt den = boost::multiprecision::denominator(r);
    std::ostringstream os;
    if (den == 1) {
        os << boost::multiprecision::numerator(r).str();
    } else {
        os << boost::multiprecision::numerator(r).str() << '/' << den.str() << " ("
           << std::fixed << std::setprecision(3) << to_double(r) << ')';
    }
    return os.str();
}

}  // namespace

double to_double(const Rational& r) { return r.convert_to<double>(); }

const BoundEntry* BoundsReport::find(const std::string& name) const {
    for (const auto& e : entries)
        if (e.name == name) return &e;
    return nullptr;
}

const Rational& BoundsReport::exact(const std::string& name) const {
    const auto* e = find(name);
    if (!e) throw std::out_of_range("no bound named " + name);
    const auto* r = std::get_if<Rational>(&e->value);
    if (!r) throw std::out_of_range("bound " + name + " is not exact");
    return *r;
}

BoundsReport ipps_bounds(std::size_t v, std::size_t w, std::size_t t) {
    if (w < 2 || v < w) throw std::invalid_argument("need v >= w >= 2");
    if (t < 2) throw std::invalid_argument("need t >= 2");
    const std::size_t d = t * t / 4 + t;
    const std::size_t k = (w + d - 1) / d;

    BoundsReport r;
    r.subject = "ipps";
    r.params = {{"v", v}, {"w", w}, {"t", t}};
    r.entries.push_back({"upper", Rational(binomial(v, k)), "C(v, ceil(w/(floor(t^2/4)+t)))"});
    r.entries.push_back({"lower", Rational(BigInt(v - w + 1)), "delta construction, v-w+1"});
    r.entries.push_back({"exponent", Rational(BigInt(w), BigInt(u_bound(t) - 1)),
                         "random expurgation growth order w/(u-1)"});
    if (w == 2) r.entries.push_back({"exact", Rational(BigInt(v - 1)), "w = 2: exactly v-1"});
    return r;
}

Rational ipps_expected_size_exact(std::size_t v, std::size_t w, std::size_t t, const Rational& p) {
    if (p < 0 || p >= 1) throw std::invalid_argument("need 0 <= p < 1");
    const std::size_t u = u_bound(t);
    Rational value = Rational(binomial(v, w)) * p;
    Rational power = p;
    for (std::size_t s = 2; s <= u; ++s) {
        power *= p;
        const BigInt span = binomial(v, (s - 1) * w);
        if (span == 0) continue;
        const BigInt inner = binomial((s - 1) * w, w);
        // C(inner, s) with inner possibly large.
        BigInt packets = 1;
        for (std::size_t i = 0; i < s; ++i) packets = packets * (inner - i) / (i + 1);
        value -= Rational(span * packets) * power;
    }
    return value;
}

double ipps_expected_size(std::size_t v, std::size_t w, std::size_t t, double p) {
    return to_double(ipps_expected_size_exact(v, w, t, exact_rational(p)));
}

std::vector<double> optimize_p_grid(std::size_t v, std::size_t w, std::size_t t) {
    if (w < 1 || v < w) throw std::invalid_argument("need v >= w >= 1");
    const double u = static_cast<double>(u_bound(t));
    const double exponent = (2.0 - u) * static_cast<double>(w) / (u - 1.0);
    const double base = std::exp(std::log(static_cast<double>(v)) * exponent);
    const double lo = base / 1e3;
    const double hi = std::min(1.0 - 1e-9, base * 1e3);
    constexpr int kPoints = 512;
    std::vector<double> grid(kPoints);
    const double llo = std::log(lo);
    const double step = (std::log(hi) - llo) / (kPoints - 1);
    for (int k = 0; k < kPoints; ++k) grid[static_cast<std::size_t>(k)] = std::exp(llo + step * k);
    grid.front() = lo;
    grid.back() = hi;
    return grid;
}

double optimize_p(std::size_t v, std::size_t w, std::size_t t) {
    const auto grid = optimize_p_grid(v, w, t);
    double best_p = grid.front();
    Rational best = ipps_expected_size_exact(v, w, t, exact_rational(best_p));
    for (std::size_t k = 1; k < grid.size(); ++k) {
        Rational value = ipps_expected_size_exact(v, w, t, exact_rational(grid[k]));
        if (value > best) {
            best = std::move(value);
            best_p = grid[k];
        }
    }
    return best_p;
}

BoundsReport mippc_rate_bounds(std::size_t n, std::size_t t, std::optional<double> c,
                               std::optional<std::size_t> q) {
    if (n < 2) throw std::invalid_argument("need n >= 2");
    if (t < 2) throw std::invalid_argument("need t >= 2");
    const BigInt N(n), T(t);
    const Rational half(BigInt(1), BigInt(2));
    Rational upper;
    if (n % 2 == 0) {
        upper = half + Rational(BigInt(1), 2 * T);
    } else if (t % 2 == 0) {
        upper = half + std::max(Rational(N + 1, 2 * T * N), Rational(BigInt(1), 2 * N));
    } else {
        upper = half + std::max(Rational(BigInt(1), 2 * T), Rational(BigInt(1), 2 * N));
    }

    BoundsReport r;
    r.subject = "mippc";
    r.params = {{"n", n}, {"t", t}};
    r.entries.push_back({"lower_rate", Rational(T, 2 * T - 1), "random expurgation, t/(2t-1)"});
    r.entries.push_back({"upper_rate", upper, "bipartite-graph size bound, q -> infinity"});

    if (c && q) {
        if (*q < 2) throw std::invalid_argument("need q >= 2");
        r.params.emplace_back("q", *q);
        const long double Q = static_cast<long double>(*q);
        const long double cc = *c;
        const long double nn = static_cast<long double>(n);
        const long double tt = static_cast<long double>(t);
        const long double lead = std::pow(Q, nn / 2);
        long double size;
        if (n % 2 == 0) {
            size = lead * (std::pow(Q, nn / (2 * tt)) + 2 * cc);
        } else {
            const long double odd = cc * (std::sqrt(Q) + 1 / std::sqrt(Q));
            const long double top = t % 2 == 0 ? (nn + 1) / (2 * tt) : nn / (2 * tt);
            size = lead * (std::pow(Q, top) + odd);
        }
        r.entries.push_back({"finite_q_upper_size", static_cast<double>(size),
                             "bipartite-graph size bound at finite q with constant c"});
        r.entries.push_back({"finite_q_upper_rate",
                             static_cast<double>(std::log(size) / (nn * std::log(Q))),
                             "log_q(finite_q_upper_size) / n"});
    }
    return r;
}

std::vector<RateTableRow> table1_report() {
    struct Published {
        std::size_t n, t;
        const char* lower;
        const char* upper;
    };
    static constexpr Published kPublished[] = {
        {3, 2, "2/3", "2/3"},       {2, 3, "0.6", "0.667"},     {4, 4, "0.571", "0.625"},
        {6, 5, "0.556", "0.583"},   {8, 6, "0.545", "0.563"},   {9, 7, "0.538", "0.571"},
        {13, 10, "0.526", "0.554"}, {15, 11, "0.524", "0.545"}, {17, 12, "0.522", "0.544"},
        {19, 13, "0.52", "0.538"},
    };
    const Rational tol(BigInt(1), BigInt(1000));
    std::vector<RateTableRow> rows;
    for (const auto& p : kPublished) {
        const auto b = mippc_rate_bounds(p.n, p.t);
        RateTableRow row{p.n, p.t, b.exact("lower_rate"), b.exact("upper_rate"), p.lower, p.upper,
                         false, false};
        row.lower_matches = abs_diff(row.lower, parse_published(p.lower)) <= tol;
        row.upper_matches = abs_diff(row.upper, parse_published(p.upper)) <= tol;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string render_text(const BoundsReport& r) {
    std::ostringstream os;
    os << r.subject;
    for (const auto& [k, v] : r.params) os << ' ' << k << '=' << v;
    os << '\n';
    std::size_t width = 0;
    for (const auto& e : r.entries) width = std::max(width, e.name.size());
    for (const auto& e : r.entries) {
        os << "  " << std::left << std::setw(static_cast<int>(width)) << e.name << "  ";
        if (const auto* q = std::get_if<Rational>(&e.value)) os << format_rational(*q);
        else os << std::setprecision(6) << std::get<double>(e.value);
        os << "   [" << e.source << "]\n";
    }
    return os.str();
}

std::string render_json(const BoundsReport& r) {
    nlohmann::ordered_json j;
    for (const auto& e : r.entries) {
        if (const auto* q = std::get_if<Rational>(&e.value)) j[e.name] = rational_json(*q);
        else j[e.name] = {{"value", std::get<double>(e.value)}};
    }
    return j.dump();
}

std::string render_text(const std::vector<RateTableRow>& rows) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(3);
    os << "  (n,t)    lower  published  upper  published  status\n";
    for (const auto& row : rows) {
        std::ostringstream nt;
        nt << '(' << row.n << ',' << row.t << ')';
        os << "  " << std::left << std::setw(7) << nt.str() << std::right << std::setw(7)
           << to_double(row.lower) << std::setw(11) << row.published_lower << std::setw(7)
           << to_double(row.upper) << std::setw(11) << row.published_upper << "  "
           << (row.lower_matches && row.upper_matches ? "match" : "DISCREPANCY") << '\n';
    }
    return os.str();
}

std::string render_json(const std::vector<RateTableRow>& rows) {
    nlohmann::ordered_json arr = nlohmann::ordered_json::array();
    for (const auto& row : rows) {
        nlohmann::ordered_json j;
        j["n"] = row.n;
        j["t"] = row.t;
        j["lower"] = rational_json(row.lower);
        j["upper"] = rational_json(row.upper);
        j["published_lower"] = row.published_lower;
        j["published_upper"] = row.published_upper;
        j["lower_matches"] = row.lower_matches;
        j["upper_matches"] = row.upper_matches;
        arr.push_back(std::move(j));
    }
    return arr.dump();
}

}  // namespace pidkit
