#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace pidkit {

using Point = std::uint32_t;
using Symbol = std::uint32_t;
using Index = std::size_t;

/// Sorted, duplicate-free point indices.
using Block = std::vector<Point>;
/// Codeword: one symbol per coordinate.
using Word = std::vector<Symbol>;
/// Sorted, duplicate-free indices into SetSystem::blocks() or Code::words().
using Coalition = std::vector<Index>;

/// Malformed or invalid input. The message names the offending location.
class FormatError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A search or enumeration would exceed its configured work budget.
class BudgetExceeded : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A (w, v) set system: distinct w-subsets of the point set {0, ..., v-1}.
/// Blocks are kept in lexicographic order, so two systems with the same
/// blocks compare and serialize identically.
class SetSystem {
public:
    SetSystem(std::size_t v, std::size_t w, std::vector<Block> blocks);

    std::size_t v() const noexcept { return v_; }
    std::size_t w() const noexcept { return w_; }
    std::size_t size() const noexcept { return blocks_.size(); }
    bool empty() const noexcept { return blocks_.empty(); }
    const std::vector<Block>& blocks() const noexcept { return blocks_; }
    const Block& block(Index i) const { return blocks_.at(i); }

    /// Lexicographic position of `b` among the blocks, or size() if absent.
    Index find(const Block& b) const;
    /// The system restricted to the given block indices.
    SetSystem restrict_to(std::span<const Index> indices) const;

    friend bool operator==(const SetSystem&, const SetSystem&) = default;

private:
    std::size_t v_;
    std::size_t w_;
    std::vector<Block> blocks_;
};

/// An (n, q) code: distinct words of length n over {0, ..., q-1}, kept in
/// lexicographic order.
class Code {
public:
    Code(std::size_t n, std::size_t q, std::vector<Word> words);

    std::size_t n() const noexcept { return n_; }
    std::size_t q() const noexcept { return q_; }
    std::size_t size() const noexcept { return words_.size(); }
    bool empty() const noexcept { return words_.empty(); }
    const std::vector<Word>& words() const noexcept { return words_; }
    const Word& word(Index i) const { return words_.at(i); }

    Index find(const Word& w) const;
    Code restrict_to(std::span<const Index> indices) const;

    friend bool operator==(const Code&, const Code&) = default;

private:
    std::size_t n_;
    std::size_t q_;
    std::vector<Word> words_;
};

// Descendants, one alternative per channel.

/// A w-subset of points (set-system channel).
struct PointSet {
    std::vector<Point> points;
    friend auto operator<=>(const PointSet&, const PointSet&) = default;
};

/// A single word from the coordinate product (classical IPP channel).
struct DescendantWord {
    Word symbols;
    friend auto operator<=>(const DescendantWord&, const DescendantWord&) = default;
};

/// Coordinate-wise symbol sets (averaging-attack channel).
struct ColumnSets {
    std::vector<std::vector<Symbol>> columns;
    friend auto operator<=>(const ColumnSets&, const ColumnSets&) = default;
};

/// Union of the coalition's blocks (OR channel).
struct UnionSet {
    std::vector<Point> points;
    friend auto operator<=>(const UnionSet&, const UnionSet&) = default;
};

using Descendant = std::variant<PointSet, DescendantWord, ColumnSets, UnionSet>;

/// Checks `c` is nonempty, sorted, duplicate-free and below `universe_size`.
void validate_coalition(const Coalition& c, std::size_t universe_size);

SetSystem parse_set_system(std::string_view text);
Code parse_code(std::string_view text);
std::string serialize(const SetSystem& s);
std::string serialize(const Code& c);

/// Parses {"kind": "point_set" | "word" | "column_sets" | "union_set", "value": ...}.
/// Sets inside the value are normalized (sorted); duplicates are rejected.
Descendant parse_descendant(std::string_view text);
std::string serialize(const Descendant& d);

}  // namespace pidkit
