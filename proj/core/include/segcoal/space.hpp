#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "segcoal/rational.hpp"
#include "segcoal/rng.hpp"

namespace segcoal {

/// Number of complexes each complex splits into. At least 2; letters are
/// stored in a byte so at most 255.
class Alphabet {
public:
    explicit Alphabet(int size);

    int size() const { return size_; }

    friend bool operator==(Alphabet, Alphabet) = default;

private:
    int size_;
};

using Letter = std::uint8_t;

/// Address of a complex K_w: a finite string over {1..|S|}. The empty word is
/// the whole space. A word of length exactly P also stands for a point of the
/// space at precision P (the depth-P cell containing it).
class Word {
public:
    Word() = default;
    explicit Word(std::vector<Letter> letters) : letters_(std::move(letters)) {}
    Word(std::initializer_list<Letter> letters) : letters_(letters) {}

    int level() const { return static_cast<int>(letters_.size()); }
    bool empty() const { return letters_.empty(); }
    Letter operator[](std::size_t i) const { return letters_[i]; }
    std::span<const Letter> letters() const { return letters_; }

    /// First n letters. Requires n <= level().
    Word prefix(int n) const;
    /// Drops the last letter. Requires a non-empty word.
    Word parent() const;
    void push_back(Letter l) { letters_.push_back(l); }
    void pop_back() { letters_.pop_back(); }

    /// Digits when every letter is below 10 ("121"), dot-separated otherwise
    /// ("10.3.7"). The empty word renders as "".
    std::string to_string() const;
    /// Round-trippable through parse(): dot-separated whenever |S| > 9.
    std::string to_string(Alphabet alphabet) const;
    static Word parse(std::string_view text, Alphabet alphabet);

    /// Checks every letter lies in [1, |S|].
    void validate(Alphabet alphabet) const;

    friend bool operator==(const Word&, const Word&) = default;
    /// Lexicographic; a proper prefix sorts first.
    friend std::strong_ordering operator<=>(const Word& a, const Word& b);

private:
    std::vector<Letter> letters_;
};

/// Shortlex: by level, then lexicographically.
struct LevelOrder {
    bool operator()(const Word& a, const Word& b) const {
        if (a.level() != b.level()) return a.level() < b.level();
        return a < b;
    }
};

Word child(const Word& w, int letter, Alphabet alphabet);

/// True iff w is a prefix of v, i.e. K_v is contained in K_w.
bool is_ancestor(const Word& w, const Word& v);

/// Uniform measure of K_w: |S|^-|w|.
Rational measure(const Word& w, Alphabet alphabet);

enum class GeometryKind { CantorSet, HalfOpenInterval };

std::string to_string(GeometryKind kind);
GeometryKind parse_geometry(std::string_view text);

/// Per-level contraction ratio of the embedding: 1/(2|S|-1) for the Cantor
/// set, 1/|S| for the unit interval.
Rational contraction_ratio(GeometryKind kind, Alphabet alphabet);

/// Upper bound on the diameter of a level-n complex: ratio^n.
Rational diameter_bound(GeometryKind kind, Alphabet alphabet, int level);

/// A subinterval of [0, 1]. Always closed on the right; the left end is open
/// for interval cells that do not touch the origin.
struct Interval {
    Rational lo;
    Rational hi;
    bool lo_closed = true;

    Rational width() const { return hi - lo; }
    friend bool operator==(const Interval&, const Interval&) = default;
};

/// Position of K_w inside [0,1].
///
/// CantorSet: the image of [0,1] under F_{w_1} o ... o F_{w_n}, where
/// F_i(x) = (2i - 2 + x) / (2|S| - 1).
///
/// HalfOpenInterval: the |S|-adic cell ((k-1)/|S|^n, k/|S|^n], with the left
/// end closed for the cell at the origin so that shared boundary points
/// belong to the complex nearer 0.
Interval embed(const Word& w, Alphabet alphabet, GeometryKind kind);

struct SpaceConfig {
    Alphabet alphabet{2};
    GeometryKind geometry = GeometryKind::CantorSet;
    int precision = 16;  // points are words of exactly this length

    void validate() const;
};

/// Extends w by P - |w| independent uniform letters. Under the uniform
/// measure this is exactly the conditional law of a point given K_w, at
/// precision P.
template <class Rng>
Word sample_uniform_point(const Word& w, int precision, Alphabet alphabet, Rng& rng);

/// Incremental stream key for a word: key(wi) = derive_key(key(w), i). Equal
/// words under equal roots get equal keys regardless of how they were built.
constexpr std::uint64_t extend_word_key(std::uint64_t parent_key, Letter letter) {
    return derive_key(parent_key, letter);
}

std::uint64_t word_key(std::uint64_t root_key, const Word& w);

// ---------------------------------------------------------------------------

void throw_precision_error(int level, int precision);

template <class Rng>
Word sample_uniform_point(const Word& w, int precision, Alphabet alphabet, Rng& rng) {
    if (w.level() > precision) throw_precision_error(w.level(), precision);
    Word out = w;
    const auto size = static_cast<std::uint64_t>(alphabet.size());
    for (int i = w.level(); i < precision; ++i) {
        out.push_back(static_cast<Letter>(1 + uniform_below(rng, size)));
    }
    return out;
}

}  // namespace segcoal

template <>
struct std::hash<segcoal::Word> {
    std::size_t operator()(const segcoal::Word& w) const noexcept {
        return static_cast<std::size_t>(segcoal::word_key(0x5e9c0a1ULL, w));
    }
};
