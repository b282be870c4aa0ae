#include "segcoal/space.hpp"

#include <algorithm>
#include <charconv>
#include <stdexcept>

namespace segcoal {

Alphabet::Alphabet(int size) : size_(size) {
    if (size < 2 || size > 255) {
        throw std::invalid_argument("alphabet size must lie in [2, 255], got " + std::to_string(size));
    }
}

Word Word::prefix(int n) const {
    if (n < 0 || n > level()) throw std::out_of_range("prefix length exceeds word length");
    return Word(std::vector<Letter>(letters_.begin(), letters_.begin() + n));
}

Word Word::parent() const {
    if (letters_.empty()) throw std::out_of_range("the empty word has no parent");
    return prefix(level() - 1);
}

namespace {

std::string render(std::span<const Letter> letters, bool dotted) {
    std::string out;
    for (std::size_t i = 0; i < letters.size(); ++i) {
        if (dotted) {
            if (i > 0) out.push_back('.');
            out += std::to_string(letters[i]);
        } else {
            out.push_back(static_cast<char>('0' + letters[i]));
        }
    }
    return out;
}

}  // namespace

std::string Word::to_string() const {
    bool dotted = std::any_of(letters_.begin(), letters_.end(), [](Letter l) { return l > 9; });
    return render(letters_, dotted);
}

std::string Word::to_string(Alphabet alphabet) const {
    return render(letters_, alphabet.size() > 9);
}

Word Word::parse(std::string_view text, Alphabet alphabet) {
    std::vector<Letter> letters;
    if (text == "" || text == "-") return Word{};
    auto push = [&](std::string_view tok) {
        int v = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (ec != std::errc{} || ptr != tok.data() + tok.size() || v < 1 || v > alphabet.size()) {
            throw std::invalid_argument("invalid letter '" + std::string(tok) + "' in word");
        }
        letters.push_back(static_cast<Letter>(v));
    };
    if (text.find('.') != std::string_view::npos) {
        std::size_t start = 0;
        while (start <= text.size()) {
            std::size_t dot = text.find('.', start);
            if (dot == std::string_view::npos) dot = text.size();
            push(text.substr(start, dot - start));
            start = dot + 1;
        }
    } else {
        if (alphabet.size() > 9) {
            push(text);  // a single letter
        } else {
            for (std::size_t i = 0; i < text.size(); ++i) push(text.substr(i, 1));
        }
    }
    return Word(std::move(letters));
}

void Word::validate(Alphabet alphabet) const {
    for (Letter l : letters_) {
        if (l < 1 || l > alphabet.size()) {
            throw std::invalid_argument("letter " + std::to_string(l) + " out of range [1, " +
                                        std::to_string(alphabet.size()) + "]");
        }
    }
}

std::strong_ordering operator<=>(const Word& a, const Word& b) {
    return std::lexicographical_compare_three_way(a.letters_.begin(), a.letters_.end(), b.letters_.begin(),
                                                  b.letters_.end());
}

Word child(const Word& w, int letter, Alphabet alphabet) {
    if (letter < 1 || letter > alphabet.size()) {
        throw std::invalid_argument("letter " + std::to_string(letter) + " out of range [1, " +
                                    std::to_string(alphabet.size()) + "]");
    }
    Word out = w;
    out.push_back(static_cast<Letter>(letter));
    return out;
}

bool is_ancestor(const Word& w, const Word& v) {
    if (w.level() > v.level()) return false;
    auto a = w.letters();
    auto b = v.letters();
    return std::equal(a.begin(), a.end(), b.begin());
}

Rational measure(const Word& w, Alphabet alphabet) {
    return Rational(1, checked_pow(alphabet.size(), w.level()));
}

std::string to_string(GeometryKind kind) {
    return kind == GeometryKind::CantorSet ? "cantor" : "interval";
}

GeometryKind parse_geometry(std::string_view text) {
    if (text == "cantor" || text == "CantorSet") return GeometryKind::CantorSet;
    if (text == "interval" || text == "HalfOpenInterval") return GeometryKind::HalfOpenInterval;
    throw std::invalid_argument("unknown geometry '" + std::string(text) + "' (expected cantor|interval)");
}

Rational contraction_ratio(GeometryKind kind, Alphabet alphabet) {
    const int s = alphabet.size();
    return kind == GeometryKind::CantorSet ? Rational(1, 2 * s - 1) : Rational(1, s);
}

Rational diameter_bound(GeometryKind kind, Alphabet alphabet, int level) {
    const int s = alphabet.size();
    const int base = kind == GeometryKind::CantorSet ? 2 * s - 1 : s;
    return Rational(1, checked_pow(base, level));
}

Interval embed(const Word& w, Alphabet alphabet, GeometryKind kind) {
    const int s = alphabet.size();
    if (kind == GeometryKind::CantorSet) {
        // Compose the maps innermost-last: x -> (2i - 2 + x)/(2s - 1).
        const Rational::Int base = 2 * s - 1;
        Rational::Int offset = 0;  // numerator of lo over base^n
        for (int i = 0; i < w.level(); ++i) {
            offset = offset * base + 2 * (w[i] - 1);
        }
        const Rational::Int den = checked_pow(base, w.level());
        return Interval{Rational(offset, den), Rational(offset + 1, den), true};
    }
    Rational::Int index = 0;  // zero-based cell index at level n
    for (int i = 0; i < w.level(); ++i) {
        index = index * s + (w[i] - 1);
    }
    const Rational::Int den = checked_pow(s, w.level());
    return Interval{Rational(index, den), Rational(index + 1, den), index == 0};
}

void SpaceConfig::validate() const {
    if (precision < 0) throw std::invalid_argument("precision must be nonnegative");
    // Cell counts |S|^P must fit the exact mass arithmetic.
    (void)checked_pow(alphabet.size(), precision);
}

std::uint64_t word_key(std::uint64_t root_key, const Word& w) {
    std::uint64_t key = root_key;
    for (Letter l : w.letters()) key = extend_word_key(key, l);
    return key;
}

void throw_precision_error(int level, int precision) {
    throw std::invalid_argument("word level " + std::to_string(level) + " exceeds precision " +
                                std::to_string(precision));
}

}  // namespace segcoal
