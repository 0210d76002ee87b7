#include "pidkit/model.hpp"

#include <algorithm>
#include <limits>

#include <json.hpp>

namespace pidkit {

using nlohmann::json;

namespace {

std::string join(const std::vector<std::uint32_t>& xs) {
    std::string out = "[";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(xs[i]);
    }
    out += ']';
    return out;
}

std::string join(const std::vector<std::vector<std::uint32_t>>& rows) {
    std::string out = "[";
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (i) out += ',';
        out += join(rows[i]);
    }
    out += ']';
    return out;
}

json parse_document(std::string_view text) {
    try {
        return json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        throw FormatError(std::string("malformed JSON: ") + e.what());
    }
}

void require_keys(const json& doc, std::initializer_list<const char*> keys, const char* what) {
    if (!doc.is_object()) throw FormatError(std::string(what) + ": expected a JSON object");
    for (const char* k : keys) {
        if (!doc.contains(k)) throw FormatError(std::string(what) + ": missing key \"" + k + "\"");
    }
    for (const auto& [k, _] : doc.items()) {
        if (std::find_if(keys.begin(), keys.end(), [&](const char* x) { return k == x; }) ==
            keys.end())
            throw FormatError(std::string(what) + ": unexpected key \"" + k + "\"");
    }
}

std::uint64_t as_count(const json& j, const std::string& where) {
    if (!j.is_number_integer() || j.get<std::int64_t>() < 0)
        throw FormatError(where + ": expected a non-negative integer");
    return j.get<std::uint64_t>();
}

std::vector<std::uint32_t> as_int_list(const json& j, const std::string& where) {
    if (!j.is_array()) throw FormatError(where + ": expected an array");
    std::vector<std::uint32_t> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i) {
        const auto x = as_count(j[i], where + "[" + std::to_string(i) + "]");
        if (x > std::numeric_limits<std::uint32_t>::max())
            throw FormatError(where + "[" + std::to_string(i) + "]: value too large");
        out.push_back(static_cast<std::uint32_t>(x));
    }
    return out;
}

std::vector<std::vector<std::uint32_t>> as_int_rows(const json& j, const std::string& where) {
    if (!j.is_array()) throw FormatError(where + ": expected an array of arrays");
    std::vector<std::vector<std::uint32_t>> out;
    out.reserve(j.size());
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(as_int_list(j[i], where + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::uint32_t> as_sorted_set(const json& j, const std::string& where) {
    auto xs = as_int_list(j, where);
    std::sort(xs.begin(), xs.end());
    if (std::adjacent_find(xs.begin(), xs.end()) != xs.end())
        throw FormatError(where + ": repeated element");
    return xs;
}

std::size_t checked_size(std::uint64_t x, const char* name) {
    if (x == 0) throw FormatError(std::string(name) + " must be positive");
    if (x > std::numeric_limits<std::uint32_t>::max())
        throw FormatError(std::string(name) + " is too large");
    return static_cast<std::size_t>(x);
}

}  // namespace

SetSystem::SetSystem(std::size_t v, std::size_t w, std::vector<Block> blocks)
    : v_(v), w_(w), blocks_(std::move(blocks)) {
    if (v_ == 0) throw FormatError("v must be positive");
    if (w_ == 0) throw FormatError("w must be positive");
    if (w_ > v_) throw FormatError("w must not exceed v");
    for (std::size_t i = 0; i < blocks_.size(); ++i) {
        auto& b = blocks_[i];
        const std::string where = "block " + std::to_string(i);
        std::sort(b.begin(), b.end());
        if (std::adjacent_find(b.begin(), b.end()) != b.end())
            throw FormatError(where + ": repeated point");
        if (b.size() != w_)
            throw FormatError(where + ": has " + std::to_string(b.size()) +
                              " points, expected " + std::to_string(w_));
        if (!b.empty() && b.back() >= v_)
            throw FormatError(where + ": point " + std::to_string(b.back()) +
                              " out of range [0," + std::to_string(v_) + ")");
    }
    std::vector<Index> order(blocks_.size());
    for (Index i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return blocks_[a] < blocks_[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (blocks_[order[i]] == blocks_[order[i - 1]])
            throw FormatError("block " + std::to_string(order[i]) + ": duplicate of block " +
                              std::to_string(order[i - 1]));
    }
    std::sort(blocks_.begin(), blocks_.end());
}

Index SetSystem::find(const Block& b) const {
    auto it = std::lower_bound(blocks_.begin(), blocks_.end(), b);
    if (it == blocks_.end() || *it != b) return blocks_.size();
    return static_cast<Index>(it - blocks_.begin());
}

SetSystem SetSystem::restrict_to(std::span<const Index> indices) const {
    std::vector<Block> out;
    out.reserve(indices.size());
    for (Index i : indices) out.push_back(block(i));
    return SetSystem(v_, w_, std::move(out));
}

Code::Code(std::size_t n, std::size_t q, std::vector<Word> words)
    : n_(n), q_(q), words_(std::move(words)) {
    if (n_ == 0) throw FormatError("n must be positive");
    if (q_ == 0) throw FormatError("q must be positive");
    for (std::size_t i = 0; i < words_.size(); ++i) {
        const auto& wd = words_[i];
        const std::string where = "word " + std::to_string(i);
        if (wd.size() != n_)
            throw FormatError(where + ": has length " + std::to_string(wd.size()) +
                              ", expected " + std::to_string(n_));
        for (std::size_t j = 0; j < wd.size(); ++j) {
            if (wd[j] >= q_)
                throw FormatError(where + ", coordinate " + std::to_string(j) + ": symbol " +
                                  std::to_string(wd[j]) + " out of range [0," +
                                  std::to_string(q_) + ")");
        }
    }
    std::vector<Index> order(words_.size());
    for (Index i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](Index a, Index b) { return words_[a] < words_[b]; });
    for (std::size_t i = 1; i < order.size(); ++i) {
        if (words_[order[i]] == words_[order[i - 1]])
            throw FormatError("word " + std::to_string(order[i]) + ": duplicate of word " +
                              std::to_string(order[i - 1]));
    }
    std::sort(words_.begin(), words_.end());
}

Index Code::find(const Word& w) const {
    auto it = std::lower_bound(words_.begin(), words_.end(), w);
    if (it == words_.end() || *it != w) return words_.size();
    return static_cast<Index>(it - words_.begin());
}

Code Code::restrict_to(std::span<const Index> indices) const {
    std::vector<Word> out;
    out.reserve(indices.size());
    for (Index i : indices) out.push_back(word(i));
    return Code(n_, q_, std::move(out));
}

void validate_coalition(const Coalition& c, std::size_t universe_size) {
    if (c.empty()) throw FormatError("coalition is empty");
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c[i] >= universe_size)
            throw FormatError("coalition member " + std::to_string(c[i]) + " out of range [0," +
                              std::to_string(universe_size) + ")");
        if (i > 0 && c[i] <= c[i - 1])
            throw FormatError("coalition members must be strictly increasing");
    }
}

SetSystem parse_set_system(std::string_view text) {
    const json doc = parse_document(text);
    require_keys(doc, {"v", "w", "blocks"}, "set system");
    const auto v = checked_size(as_count(doc["v"], "v"), "v");
    const auto w = checked_size(as_count(doc["w"], "w"), "w");
    return SetSystem(v, w, as_int_rows(doc["blocks"], "blocks"));
}

Code parse_code(std::string_view text) {
    const json doc = parse_document(text);
    require_keys(doc, {"n", "q", "words"}, "code");
    const auto n = checked_size(as_count(doc["n"], "n"), "n");
    const auto q = checked_size(as_count(doc["q"], "q"), "q");
    return Code(n, q, as_int_rows(doc["words"], "words"));
}

std::string serialize(const SetSystem& s) {
    return "{\"v\":" + std::to_string(s.v()) + ",\"w\":" + std::to_string(s.w()) +
           ",\"blocks\":" + join(s.blocks()) + "}";
}

std::string serialize(const Code& c) {
    return "{\"n\":" + std::to_string(c.n()) + ",\"q\":" + std::to_string(c.q()) +
           ",\"words\":" + join(c.words()) + "}";
}

Descendant parse_descendant(std::string_view text) {
    const json doc = parse_document(text);
    require_keys(doc, {"kind", "value"}, "descendant");
    if (!doc["kind"].is_string()) throw FormatError("descendant: \"kind\" must be a string");
    const auto kind = doc["kind"].get<std::string>();
    const json& value = doc["value"];
    if (kind == "point_set") return PointSet{as_sorted_set(value, "value")};
    if (kind == "union_set") return UnionSet{as_sorted_set(value, "value")};
    if (kind == "word") return DescendantWord{as_int_list(value, "value")};
    if (kind == "column_sets") {
        if (!value.is_array()) throw FormatError("value: expected an array of arrays");
        ColumnSets cs;
        for (std::size_t i = 0; i < value.size(); ++i) {
            const std::string where = "value[" + std::to_string(i) + "]";
            auto col = as_sorted_set(value[i], where);
            if (col.empty()) throw FormatError(where + ": empty symbol set");
            cs.columns.push_back(std::move(col));
        }
        return cs;
    }
    throw FormatError("descendant: unknown kind \"" + kind + "\"");
}

std::string serialize(const Descendant& d) {
    struct {
        std::string operator()(const PointSet& x) const {
            return "{\"kind\":\"point_set\",\"value\":" + join(x.points) + "}";
        }
        std::string operator()(const DescendantWord& x) const {
            return "{\"kind\":\"word\",\"value\":" + join(x.symbols) + "}";
        }
        std::string operator()(const ColumnSets& x) const {
            return "{\"kind\":\"column_sets\",\"value\":" + join(x.columns) + "}";
        }
        std::string operator()(const UnionSet& x) const {
            return "{\"kind\":\"union_set\",\"value\":" + join(x.points) + "}";
        }
    } visitor;
    return std::visit(visitor, d);
}

}  // namespace pidkit
