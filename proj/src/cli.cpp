#include "pidkit/cli.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "pidkit/bounds.hpp"
#include "pidkit/fchannel.hpp"
#include "pidkit/ipps.hpp"
#include "pidkit/mippc.hpp"
#include "pidkit/model.hpp"
#include "pidkit/search.hpp"

namespace pidkit::cli {

namespace {

using nlohmann::ordered_json;

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

std::string read_input(const std::string& path) {
    if (path == "-") {
        return std::string(std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>());
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) throw UsageError("cannot open " + path);
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

void write_output(const std::string& doc, const std::string& path, std::ostream& out) {
    if (path.empty() || path == "-") {
        out << doc << '\n';
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot write " + path);
    f << doc << '\n';
}

std::optional<std::uint64_t> env_budget() {
    const char* raw = std::getenv("PIDKIT_BUDGET");
    if (!raw || !*raw) return std::nullopt;
    char* end = nullptr;
    const auto value = std::strtoull(raw, &end, 10);
    if (*end != '\0') throw UsageError("PIDKIT_BUDGET must be a non-negative integer");
    return value;
}

// Explicit flag, then PIDKIT_BUDGET, then the default.
std::uint64_t resolve_budget(const CLI::Option* flag, std::uint64_t flag_value, std::uint64_t fallback) {
    if (flag->count() > 0) return flag_value;
    if (auto env = env_budget()) return *env;
    return fallback;
}

ordered_json descendant_json(const Descendant& d) { return ordered_json::parse(serialize(d)); }

ordered_json violation_json(const SchemeViolation& v) {
    ordered_json j;
    j["coalition"] = v.coalition;
    j["descendant"] = descendant_json(v.descendant);
    j["parents"] = v.parents;
    return j;
}

ordered_json witness_json(const Ipps2Witness& w) {
    ordered_json j;
    j["kind"] = w.kind == Ipps2Witness::Kind::Triple ? "triple" : "quadruple";
    j["blocks"] = w.blocks;
    j["overlap"] = w.overlap;
    return j;
}

std::string list_text(const std::vector<std::size_t>& xs) {
    std::ostringstream os;
    os << '{';
    for (std::size_t i = 0; i < xs.size(); ++i) os << (i ? "," : "") << xs[i];
    os << '}';
    return os.str();
}

template <class T>
std::string list_text(const std::vector<T>& xs) {
    std::vector<std::size_t> ys(xs.begin(), xs.end());
    return list_text(ys);
}

struct Options {
    unsigned threads = 1;

    // gen-ipps
    bool delta = false;
    bool greedy = false;
    std::size_t v = 0, w = 0, t = 2;
    std::optional<double> p;
    std::optional<std::uint64_t> seed;
    std::string out_path;

    // gen-mippc
    std::size_t n = 0, q = 0;
    std::optional<std::size_t> M;
    double eps = 1.0;
    std::uint64_t budget = 0;

    // verify / trace
    std::string input;
    std::string descendant_path;
    std::string method = "direct";
    std::string channel;
    bool json = false;

    // bounds / search
    bool ipps = false, mippc = false, table1 = false, optimize = false, no_fix_first = false;
    std::optional<double> c;
};

int cmd_gen_ipps(const Options& o, std::ostream& out, std::ostream& err) {
    if (o.delta) {
        write_output(serialize(delta_construction(o.v, o.w)), o.out_path, out);
        return kOk;
    }
    if (!o.seed) throw UsageError("random generation needs --seed");
    const double p = o.p ? *o.p : optimize_p(o.v, o.w, o.t);
    const auto r = random_expurgated_ipps(o.v, o.w, o.t, p, *o.seed,
                                          o.greedy ? DeletionRule::Greedy : DeletionRule::LargestBlock);
    err << "p=" << p << " sampled=" << r.sampled << " bad_packets=" << r.bad_packets
        << " kept=" << r.system.size() << '\n';
    write_output(serialize(r.system), o.out_path, out);
    return kOk;
}

int cmd_gen_mippc(const Options& o, const CLI::Option* budget_flag, std::ostream& out,
                  std::ostream& err) {
    if (!o.seed) throw UsageError("random generation needs --seed");
    const std::size_t M = o.M ? *o.M : default_code_size(o.n, o.q, o.t, o.eps);
    const auto budget = resolve_budget(budget_flag, o.budget, kDefaultSubfamilyBudget);
    const auto r = random_expurgated_mippc(o.n, o.q, M, o.t, *o.seed, budget);
    err << "M=" << M << " bad_subfamilies=" << r.bad_subfamilies << " kept=" << r.code.size() << '\n';
    write_output(serialize(r.code), o.out_path, out);
    return kOk;
}

Universe load_universe(const std::string& path) {
    const std::string text = read_input(path);
    nlohmann::json probe;
    try {
        probe = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
    if (probe.is_object() && probe.contains("blocks")) return parse_set_system(text);
    if (probe.is_object() && probe.contains("words")) return parse_code(text);
    throw FormatError("input has neither \"blocks\" nor \"words\"");
}

Channel pick_channel(const Universe& u, const std::string& name) {
    const bool is_set = std::holds_alternative<SetSystem>(u);
    const std::string chosen = name.empty() ? (is_set ? "ipps" : "mippc") : name;
    Channel ch;
    if (chosen == "ipps") ch = IppsChannel{is_set ? std::get<SetSystem>(u).w() : 0};
    else if (chosen == "or") ch = OrChannel{};
    else if (chosen == "mippc") ch = MippcChannel{};
    else if (chosen == "ippc") ch = IppcChannel{};
    else throw UsageError("unknown channel " + chosen);
    try {
        check_compatible(u, ch);
    } catch (const FormatError& e) {
        throw UsageError(e.what());
    }
    return ch;
}

int cmd_verify(const Options& o, std::ostream& out) {
    const Universe u = load_universe(o.input);
    const Channel ch = pick_channel(u, o.channel);
    if (o.t < 2) throw UsageError("--t must be at least 2");

    if (o.method == "lemma5") {
        if (!std::holds_alternative<SetSystem>(u) || !std::holds_alternative<IppsChannel>(ch) || o.t != 2)
            throw UsageError("--method lemma5 applies to set systems with --t 2 only");
        const auto w = check_2ipps(std::get<SetSystem>(u));
        if (o.json) {
            ordered_json j;
            j["holds"] = !w;
            if (w) j["witness"] = witness_json(*w);
            out << j.dump() << '\n';
        } else if (w) {
            out << "fails: " << (w->kind == Ipps2Witness::Kind::Triple ? "triple " : "quadruple ")
                << list_text(w->blocks) << " overlap " << list_text(w->overlap) << '\n';
        } else {
            out << "holds\n";
        }
        return w ? kPropertyFails : kOk;
    }

    SchemeVerdict verdict;
    if (o.method == "direct") verdict = is_scheme_direct(u, o.t, ch);
    else if (o.method == "local") verdict = is_scheme_local(u, o.t, ch, o.threads);
    else throw UsageError("unknown method " + o.method);

    if (o.json) {
        ordered_json j;
        j["holds"] = verdict.holds();
        if (verdict.violation) j["witness"] = violation_json(*verdict.violation);
        out << j.dump() << '\n';
    } else if (verdict.violation) {
        const auto& v = *verdict.violation;
        out << "fails: coalition " << list_text(v.coalition) << " produces "
            << serialize(v.descendant) << "; possible parents";
        for (const auto& p : v.parents) out << ' ' << list_text(p);
        out << " share no member\n";
    } else {
        out << "holds\n";
    }
    return verdict.holds() ? kOk : kPropertyFails;
}

int cmd_trace(const Options& o, std::ostream& out) {
    const Universe u = load_universe(o.input);
    const Descendant d = parse_descendant(read_input(o.descendant_path));
    if (o.t < 1) throw UsageError("--t must be positive");

    std::vector<Index> traced;
    ordered_json members = ordered_json::array();
    try {
        if (const auto* ps = std::get_if<PointSet>(&d)) {
            const auto* sys = std::get_if<SetSystem>(&u);
            if (!sys) throw UsageError("point_set descendants trace against set systems");
            traced = trace_ipps(*sys, ps->points, o.t);
            for (Index i : traced) members.push_back(sys->block(i));
        } else if (const auto* dw = std::get_if<DescendantWord>(&d)) {
            const auto* code = std::get_if<Code>(&u);
            if (!code) throw UsageError("word descendants trace against codes");
            traced = trace_ippc(*code, dw->symbols, o.t);
            for (Index i : traced) members.push_back(code->word(i));
        } else if (const auto* cs = std::get_if<ColumnSets>(&d)) {
            const auto* code = std::get_if<Code>(&u);
            if (!code) throw UsageError("column_sets descendants trace against codes");
            traced = trace_mippc(*code, *cs, o.t);
            for (Index i : traced) members.push_back(code->word(i));
        } else {
            throw UsageError("union_set descendants cannot be traced");
        }
    } catch (const TraceError& e) {
        const char* kind = e.kind() == TraceError::Kind::NotProducible ? "not_producible" : "empty_intersection";
        if (o.json) out << ordered_json{{"error", kind}, {"message", e.what()}}.dump() << '\n';
        else out << kind << ": " << e.what() << '\n';
        return kPropertyFails;
    }

    if (o.json) {
        ordered_json j;
        j["traced"] = traced;
        j["members"] = members;
        out << j.dump() << '\n';
    } else {
        out << "traced " << list_text(traced) << ' ' << members.dump() << '\n';
    }
    return kOk;
}

int cmd_bounds(const Options& o, std::ostream& out) {
    if (static_cast<int>(o.ipps) + static_cast<int>(o.mippc) + static_cast<int>(o.table1) != 1)
        throw UsageError("choose exactly one of --ipps, --mippc, --table1");
    if (o.table1) {
        const auto rows = table1_report();
        out << (o.json ? render_json(rows) + "\n" : render_text(rows));
        return kOk;
    }
    BoundsReport r;
    if (o.ipps) {
        r = ipps_bounds(o.v, o.w, o.t);
        std::optional<double> p = o.p;
        if (o.optimize) {
            p = optimize_p(o.v, o.w, o.t);
            r.entries.push_back({"p_opt", *p, "grid argmax of the expected expurgated size"});
        }
        if (p) r.entries.push_back({"expected_size", ipps_expected_size(o.v, o.w, o.t, *p),
                                    "expected blocks minus expected bad packets at p"});
    } else {
        if (o.c.has_value() != (o.q != 0)) throw UsageError("--c and --q go together");
        r = mippc_rate_bounds(o.n, o.t, o.c, o.q ? std::optional<std::size_t>(o.q) : std::nullopt);
    }
    out << (o.json ? render_json(r) + "\n" : render_text(r));
    return kOk;
}

int cmd_search(const Options& o, const CLI::Option* budget_flag, std::ostream& out) {
    if (o.ipps == o.mippc) throw UsageError("choose exactly one of --ipps, --mippc");
    SearchOptions so;
    so.budget = resolve_budget(budget_flag, o.budget, so.budget);
    so.fix_first = !o.no_fix_first;
    ordered_json j;
    if (o.ipps) {
        const auto r = max_ipps(o.v, o.w, o.t, so);
        j["max_size"] = r.max_size;
        j["nodes_explored"] = r.nodes_explored;
        j["witness"] = ordered_json::parse(serialize(r.witness));
    } else {
        const auto r = max_mippc(o.n, o.q, o.t, so);
        j["max_size"] = r.max_size;
        j["nodes_explored"] = r.nodes_explored;
        j["witness"] = ordered_json::parse(serialize(r.witness));
    }
    if (o.json) {
        out << j.dump() << '\n';
    } else {
        out << "max_size " << j["max_size"].get<std::size_t>() << "\nnodes_explored "
            << j["nodes_explored"].get<std::uint64_t>() << "\nwitness " << j["witness"].dump() << '\n';
    }
    return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Construct, verify and trace parent-identifying set systems and codes."};
    app.name("pidkit");
    app.require_subcommand(1);
    app.fallthrough();

    Options o;
    app.add_option("--threads", o.threads, "Worker threads for local verification")
        ->check(CLI::Range(1u, 256u));

    auto* gen_ipps = app.add_subcommand("gen-ipps", "Generate a t-IPPS(w,v)");
    gen_ipps->add_flag("--delta", o.delta, "Explicit construction of size v-w+1");
    gen_ipps->add_option("--v", o.v, "Number of points")->required();
    gen_ipps->add_option("--w", o.w, "Block size")->required();
    gen_ipps->add_option("--t", o.t, "Coalition size bound");
    gen_ipps->add_option("--p", o.p, "Block inclusion probability (default: grid optimum)");
    gen_ipps->add_option("--seed", o.seed, "Random seed (required for random generation)");
    gen_ipps->add_flag("--greedy", o.greedy, "Greedy hitting-set deletion");
    gen_ipps->add_option("--out", o.out_path, "Output file (default stdout)");

    auto* gen_mippc = app.add_subcommand("gen-mippc", "Generate a t-MIPPC(n,q)");
    gen_mippc->add_option("--n", o.n, "Code length")->required();
    gen_mippc->add_option("--q", o.q, "Alphabet size")->required();
    gen_mippc->add_option("--t", o.t, "Coalition size bound");
    gen_mippc->add_option("--M", o.M, "Number of sampled words (default ceil(eps q^(tn/(2t-1))))");
    gen_mippc->add_option("--eps", o.eps, "Scale of the default M");
    gen_mippc->add_option("--seed", o.seed, "Random seed")->required();
    auto* mippc_budget = gen_mippc->add_option("--budget", o.budget, "Maximum candidate subfamilies");
    gen_mippc->add_option("--out", o.out_path, "Output file (default stdout)");

    auto* verify = app.add_subcommand("verify", "Check the parent-identifying property");
    verify->add_option("input", o.input, "Set system or code JSON ('-' for stdin)")->required();
    verify->add_option("--t", o.t, "Coalition size bound")->required();
    verify->add_option("--method", o.method, "direct | local | lemma5")
        ->check(CLI::IsMember({"direct", "local", "lemma5"}));
    verify->add_option("--channel", o.channel, "ipps | or (set systems), mippc | ippc (codes)")
        ->check(CLI::IsMember({"ipps", "or", "mippc", "ippc"}));
    verify->add_flag("--json", o.json, "Machine-readable output");

    auto* trace = app.add_subcommand("trace", "Identify guaranteed parents of a descendant");
    trace->add_option("input", o.input, "Set system or code JSON")->required();
    trace->add_option("descendant", o.descendant_path, "Descendant JSON")->required();
    trace->add_option("--t", o.t, "Coalition size bound")->required();
    trace->add_flag("--json", o.json, "Machine-readable output");

    auto* bounds = app.add_subcommand("bounds", "Evaluate closed-form bounds");
    bounds->add_flag("--ipps", o.ipps, "Bounds on t-IPPS(w,v) size");
    bounds->add_flag("--mippc", o.mippc, "Rate bounds for t-MIPPC of length n");
    bounds->add_flag("--table1", o.table1, "Compare rate bounds against the published table");
    bounds->add_option("--v", o.v);
    bounds->add_option("--w", o.w);
    bounds->add_option("--n", o.n);
    bounds->add_option("--t", o.t);
    bounds->add_option("--p", o.p, "Evaluate the expected expurgated size at p");
    bounds->add_flag("--optimize-p", o.optimize, "Also report the grid-optimal p");
    bounds->add_option("--c", o.c, "Constant of the finite-q size bound");
    bounds->add_option("--q", o.q, "Alphabet size for the finite-q bound");
    bounds->add_flag("--json", o.json, "JSON output");

    auto* search = app.add_subcommand("search", "Exhaustive maximum size");
    search->add_flag("--ipps", o.ipps);
    search->add_flag("--mippc", o.mippc);
    search->add_option("--v", o.v);
    search->add_option("--w", o.w);
    search->add_option("--n", o.n);
    search->add_option("--q", o.q);
    search->add_option("--t", o.t);
    auto* search_budget = search->add_option("--budget", o.budget, "Maximum branch-and-bound nodes");
    search->add_flag("--no-fix-first", o.no_fix_first, "Disable isomorph rejection");
    search->add_flag("--json", o.json, "JSON output");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kUsageError;
    }

    try {
        if (gen_ipps->parsed()) return cmd_gen_ipps(o, out, err);
        if (gen_mippc->parsed()) return cmd_gen_mippc(o, mippc_budget, out, err);
        if (verify->parsed()) return cmd_verify(o, out);
        if (trace->parsed()) return cmd_trace(o, out);
        if (bounds->parsed()) return cmd_bounds(o, out);
        if (search->parsed()) return cmd_search(o, search_budget, out);
    } catch (const BudgetExceeded& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return kUsageError;
    }
    return kUsageError;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    std::vector<const char*> argv;
    argv.push_back("pidkit");
    for (const auto& a : args) argv.push_back(a.c_str());
    return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace pidkit::cli
