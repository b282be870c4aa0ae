#pragma once

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "segcoal/space.hpp"

namespace segcoal {

/// Tail data of a rate sequence that decides the phase. Infinite values are
/// stored as +inf.
struct TailMeta {
    bool sum_weighted_finite = false;  // sum_n |S|^n r_n < inf
    double sum = 0.0;                  // sum_n r_n, in (0, inf]
    double cesaro_limsup = 0.0;        // limsup_n (1/n) sum_{j=1}^n r_j, in [0, inf]

    /// Throws std::invalid_argument if the implications
    /// weighted finite => sum finite => limsup 0 are violated.
    void validate() const;

    friend bool operator==(const TailMeta&, const TailMeta&) = default;
};

class RateFamily;

namespace rate_kinds {
struct Constant {
    double c;
};
struct Geometric {
    double a;
    double q;
};
struct Harmonic {
    double c;
};
struct Linear {
    double c;
};
struct Truncated {
    std::shared_ptr<const RateFamily> inner;
    int depth;
};
/// r_0..r_{k-1} as listed; beyond the table the last value is held.
struct Table {
    std::vector<double> values;
    std::optional<TailMeta> declared_tail;
};
}  // namespace rate_kinds

/// How the sequence behaves beyond some index; used to bound tails of series
/// such as g^t without extrapolating from data.
struct TailShape {
    enum class Kind { EventuallyConstant, NonIncreasing, NonDecreasing };
    Kind kind;
    int from;  // the shape holds for every n >= from
};

/// The rate sequence (r_n)_{n>=0}: r_n is the event rate of each level-n
/// complex. Immutable.
class RateFamily {
public:
    using Kind = std::variant<rate_kinds::Constant, rate_kinds::Geometric, rate_kinds::Harmonic,
                              rate_kinds::Linear, rate_kinds::Truncated, rate_kinds::Table>;

    static RateFamily constant(double c);
    static RateFamily geometric(double a, double q);
    static RateFamily harmonic(double c);
    static RateFamily linear(double c);
    static RateFamily truncated(RateFamily inner, int depth);
    static RateFamily table(std::vector<double> values, std::optional<TailMeta> declared_tail = std::nullopt);
    /// r_n = 0 for all n. Not a valid model on its own (some rate must be
    /// positive) but the reference point for the unperturbed space.
    static RateFamily zero() { return constant(0.0); }

    /// Parses the command-line syntax:
    ///   constant:C  geometric:A:Q  harmonic:C  linear:C  zero
    ///   truncated:<family>:N
    ///   table:v0,v1,...[;weighted=finite|inf;sum=X|inf;limsup=X|inf]
    static RateFamily parse(std::string_view text);

    const Kind& kind() const { return kind_; }

    /// r_n.
    double rate(int n) const;

    /// sum_{j=lo}^{hi} r_j.
    double partial_sum(int lo, int hi) const;

    /// Exact tail metadata, derived symbolically from the family. Throws
    /// std::invalid_argument for a table without a declared tail.
    TailMeta analytics(Alphabet alphabet) const;

    TailShape tail_shape() const;

    /// True when every r_n is zero.
    bool is_zero() const;

    /// Canonical text form; parse(describe()) reproduces the family.
    std::string describe() const;

private:
    explicit RateFamily(Kind kind) : kind_(std::move(kind)) {}
    Kind kind_;
};

}  // namespace segcoal
