#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segcoal/rates.hpp"
#include "segcoal/rng.hpp"
#include "segcoal/space.hpp"

namespace segcoal {

/// The branching process of surviving complexes at a fixed time t: the root
/// survives with probability e^{-t r_0} and each level-n survivor has
/// Binomial(|S|, e^{-t r_{n+1}}) surviving children.
struct GwveSpec {
    Alphabet alphabet{2};
    RateFamily rates = RateFamily::zero();
    double t = 1.0;

    void validate() const;
};

/// log m_n^t = n log|S| - t sum_{j=1}^n r_j.
double log_m(const GwveSpec& spec, int n);

/// m_n^t, evaluated through log_m; may under/overflow to 0 or +inf for
/// extreme arguments, which is the correct limit.
double m(const GwveSpec& spec, int n);

/// E[B_n^t] = e^{-t r_0} m_n^t.
double mean_b(const GwveSpec& spec, int n);

/// One trajectory B_0..B_{n_max}. Throws std::overflow_error if a generation
/// would exceed 2^63 individuals.
std::vector<std::uint64_t> simulate(const GwveSpec& spec, int n_max, SplitMix64& rng);

/// P[B_n^t = 0] by composing the offspring generating functions backwards
/// from generation n.
double extinct_prob_by(const GwveSpec& spec, int n);

struct ExtinctionLimit {
    double value = 0.0;
    int n_reached = 0;
    bool converged = false;
    double tol = 0.0;
};

/// lim_n P[B_n^t = 0], evaluated at n = floor, 2 floor, 4 floor, ... until two
/// successive values differ by less than tol, or the cap is reached (then
/// converged = false).
ExtinctionLimit extinct_prob_limit(const GwveSpec& spec, double tol, int floor = 1000, int cap = 1'000'000);

/// f(x)/x^2 with f(x) = (1-x)^|S| + |S| x - 1 and x = e^{-rt}, evaluated
/// without cancellation. Lies in [|S|-1, |S|(|S|-1)/2].
double g_numerator_ratio(int alphabet_size, double rt);

/// Term n >= 1 of g^t: f(x)/(|S| x m_n^t) with x = e^{-t r_{n+1}}.
double g_term(const GwveSpec& spec, int n);

/// sum_{k=1}^n g_term(k).
double g_partial(const GwveSpec& spec, int n);

enum class InfM { Positive, Zero, Undecided };

struct GVerdict {
    enum class Kind { Finite, Diverges, Undecided };
    Kind kind = Kind::Undecided;
    double partial_sum = 0.0;  // sum of the first `terms` terms
    int terms = 0;
    double value = 0.0;        // Finite: certified estimate of g^t
    double error_bound = 0.0;  // Finite: value <= g^t <= value + error_bound
    std::string certificate;   // human-readable justification
};

struct DegeneracyReport {
    double t = 0.0;
    InfM inf_m = InfM::Undecided;
    std::string inf_m_reason;
    GVerdict g;
    bool degenerate = false;  // P[some B_n = 0] = 1
    bool decided = false;     // false when neither the criterion nor the fallback settled it
    std::string method;       // "criterion" or "extinction-fallback"
    std::optional<ExtinctionLimit> fallback;
    int horizon = 0;
    double tol = 0.0;
};

/// Relative distance within which t is treated as exactly the critical time.
inline constexpr double kCriticalSnap = 1e-9;

/// Degeneracy by the criterion: P[some B_n = 0] < 1 iff inf_n m_n > 0 and
/// g^t < inf. inf m is decided from the declared Cesaro limsup; g^t from
/// partial sums up to `horizon` plus a tail bound that follows from the
/// family's shape. Undecided cases fall back to extinct_prob_limit(tol).
DegeneracyReport degeneracy_test(const GwveSpec& spec, int horizon = 10'000, double tol = 1e-9);

std::string to_string(InfM v);
std::string to_string(GVerdict::Kind v);

}  // namespace segcoal
