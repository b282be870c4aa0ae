#include "segcoal/gwve.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

namespace segcoal {
namespace {

// Survival probabilities p_k = e^{-t r_k} for k = 0..n.
std::vector<long double> survival_probs(const GwveSpec& spec, int n) {
    std::vector<long double> p(static_cast<std::size_t>(n) + 1);
    for (int k = 0; k <= n; ++k) p[static_cast<std::size_t>(k)] = std::exp(-static_cast<long double>(spec.t) * spec.rates.rate(k));
    return p;
}

long double extinct_by(const std::vector<long double>& p, int n, int s) {
    long double q = 0.0L;
    for (int k = n - 1; k >= 0; --k) {
        const long double pk = p[static_cast<std::size_t>(k) + 1];
        q = std::pow(1.0L - pk + pk * q, static_cast<long double>(s));
    }
    return 1.0L - p[0] + p[0] * q;
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

// Log of term n of g^t given r_{n+1} and log m_n.
double log_g_term(int s, double t, double r_next, double log_mn) {
    const double rt = r_next * t;
    return -rt + std::log(g_numerator_ratio(s, rt)) - std::log(static_cast<double>(s)) - log_mn;
}

GVerdict g_verdict(const GwveSpec& spec, int horizon) {
    const int s = spec.alphabet.size();
    const double t = spec.t;
    const double log_s = std::log(static_cast<double>(s));
    const TailShape shape = spec.rates.tail_shape();

    GVerdict out;
    if (shape.kind == TailShape::Kind::EventuallyConstant) {
        // From n >= k on, r_{n+1} = c, so consecutive terms differ by the
        // fixed factor m_n / m_{n+1} = e^{ct} / |S|.
        const int k = std::max(shape.from, 1);
        const double c = spec.rates.rate(shape.from);
        const double ratio = std::exp(c * t) / s;
        double head = 0.0;
        for (int n = 1; n < k; ++n) head += g_term(spec, n);
        const double term_k = g_term(spec, k);
        out.terms = k;
        out.partial_sum = head + term_k;
        if (ratio >= 1.0 - kCriticalSnap) {
            out.kind = GVerdict::Kind::Diverges;
            out.certificate = "terms are geometric with ratio e^{ct}/|S| = " + fmt(ratio) + " >= 1 from n = " +
                              std::to_string(k) + " (term " + fmt(term_k) + ")";
        } else {
            out.kind = GVerdict::Kind::Finite;
            out.value = head + term_k / (1.0 - ratio);
            out.error_bound = 0.0;
            out.certificate = "closed form: geometric tail with ratio " + fmt(ratio) + " from n = " + std::to_string(k);
        }
        return out;
    }

    // Partial sum up to h with the running log m_n.
    const int h = std::max(horizon, shape.from);
    double log_mn = 0.0;
    double sum = 0.0;
    for (int n = 1; n <= h; ++n) {
        log_mn += log_s - t * spec.rates.rate(n);
        sum += std::exp(log_g_term(s, t, spec.rates.rate(n + 1), log_mn));
    }
    out.terms = h;
    out.partial_sum = sum;

    if (shape.kind == TailShape::Kind::NonIncreasing) {
        // For n > h: term_n <= (|S|-1)/2 / m_n and m_n >= m_h rho^{-(n-h)}
        // with rho = e^{t r_{h+1}} / |S|, since later rates are no larger.
        const double rho = std::exp(t * spec.rates.rate(h + 1)) / s;
        if (rho < 1.0) {
            out.kind = GVerdict::Kind::Finite;
            out.value = sum;
            out.error_bound = 0.5 * (s - 1) * std::exp(-log_mn) * rho / (1.0 - rho);
            out.certificate = "tail after n = " + std::to_string(h) + " bounded by a geometric series with ratio " +
                              fmt(rho) + " (upper comparison constant |S|(|S|-1)/2)";
        } else {
            out.certificate = "non-increasing rates but e^{t r_{h+1}}/|S| = " + fmt(rho) + " >= 1 at the horizon";
        }
        return out;
    }

    if (const auto* lin = std::get_if<rate_kinds::Linear>(&spec.rates.kind()); lin != nullptr && lin->c > 0.0) {
        // term_n >= (|S|-1)/|S| * a_n with a_n = e^{-t r_{n+1}} / m_n, and
        // log a_{n+1} - log a_n = t c n - log|S| > 0 beyond n*.
        const int n_star = static_cast<int>(std::floor(log_s / (t * lin->c))) + 1;
        double log_a = -t * lin->c * (n_star + 1) - log_m(spec, n_star);
        out.kind = GVerdict::Kind::Diverges;
        out.certificate = "linear rates: lower comparison terms increase from n = " + std::to_string(n_star) +
                          " (log a_n* = " + fmt(log_a) + ")";
        return out;
    }
    out.certificate = "no tail bound available for this family";
    return out;
}

}  // namespace

void GwveSpec::validate() const {
    if (!(t > 0.0) || !std::isfinite(t)) throw std::invalid_argument("time must be positive and finite");
}

double log_m(const GwveSpec& spec, int n) {
    if (n < 0) throw std::out_of_range("generation must be nonnegative");
    const double log_s = std::log(static_cast<double>(spec.alphabet.size()));
    double out = 0.0;
    for (int j = 1; j <= n; ++j) out += log_s - spec.t * spec.rates.rate(j);
    return out;
}

double m(const GwveSpec& spec, int n) { return std::exp(log_m(spec, n)); }

double mean_b(const GwveSpec& spec, int n) {
    return std::exp(-spec.t * spec.rates.rate(0) + log_m(spec, n));
}

std::vector<std::uint64_t> simulate(const GwveSpec& spec, int n_max, SplitMix64& rng) {
    spec.validate();
    if (n_max < 0) throw std::out_of_range("n_max must be nonnegative");
    const auto s = static_cast<std::uint64_t>(spec.alphabet.size());
    std::vector<std::uint64_t> out;
    out.reserve(static_cast<std::size_t>(n_max) + 1);
    const double p0 = std::exp(-spec.t * spec.rates.rate(0));
    std::uint64_t b = uniform01(rng) < p0 ? 1 : 0;
    out.push_back(b);
    for (int n = 1; n <= n_max; ++n) {
        if (b > 0) {
            if (b > (std::uint64_t{1} << 62) / s) throw std::overflow_error("GWVE population exceeds 2^62");
            const double p = std::exp(-spec.t * spec.rates.rate(n));
            if (p >= 1.0) {
                b *= s;
            } else if (p > 0.0) {
                std::binomial_distribution<std::uint64_t> offspring(b * s, p);
                b = offspring(rng);
            } else {
                b = 0;
            }
        }
        out.push_back(b);
    }
    return out;
}

double extinct_prob_by(const GwveSpec& spec, int n) {
    spec.validate();
    if (n < 0) throw std::out_of_range("generation must be nonnegative");
    return static_cast<double>(extinct_by(survival_probs(spec, n), n, spec.alphabet.size()));
}

ExtinctionLimit extinct_prob_limit(const GwveSpec& spec, double tol, int floor, int cap) {
    spec.validate();
    if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
    if (floor < 1) floor = 1;
    if (cap < floor) cap = floor;
    const int s = spec.alphabet.size();
    ExtinctionLimit out;
    out.tol = tol;

    const auto p = survival_probs(spec, cap);
    int n = floor;
    long double prev = extinct_by(p, n, s);
    while (true) {
        const int next = n > cap / 2 ? cap : 2 * n;
        if (next == n) break;
        const long double cur = extinct_by(p, next, s);
        n = next;
        out.n_reached = n;
        out.value = static_cast<double>(cur);
        if (std::fabs(static_cast<double>(cur - prev)) < tol) {
            out.converged = true;
            return out;
        }
        prev = cur;
    }
    out.n_reached = n;
    out.value = static_cast<double>(prev);
    return out;
}

double g_numerator_ratio(int alphabet_size, double rt) {
    const double s = alphabet_size;
    const double x = std::exp(-rt);
    if (s * x < 0.5) {
        // f(x)/x^2 = sum_{k>=2} C(s,k) (-x)^{k-2}: alternating with
        // decreasing terms in this regime.
        double term = 0.5 * s * (s - 1.0);
        double sum = term;
        for (int k = 2; k < alphabet_size; ++k) {
            term *= -x * (s - k) / (k + 1.0);
            sum += term;
            if (std::fabs(term) < 1e-18 * std::fabs(sum)) break;
        }
        return sum;
    }
    const double y = -std::expm1(-rt);  // 1 - x
    const double f = std::pow(y, s) + s * x - 1.0;
    return f / (x * x);
}

double g_term(const GwveSpec& spec, int n) {
    if (n < 1) throw std::out_of_range("g^t terms start at n = 1");
    return std::exp(log_g_term(spec.alphabet.size(), spec.t, spec.rates.rate(n + 1), log_m(spec, n)));
}

double g_partial(const GwveSpec& spec, int n) {
    if (n < 1) throw std::out_of_range("g^t partial sums start at n = 1");
    const int s = spec.alphabet.size();
    const double log_s = std::log(static_cast<double>(s));
    double log_mn = 0.0;
    double sum = 0.0;
    for (int k = 1; k <= n; ++k) {
        log_mn += log_s - spec.t * spec.rates.rate(k);
        sum += std::exp(log_g_term(s, spec.t, spec.rates.rate(k + 1), log_mn));
    }
    return sum;
}

DegeneracyReport degeneracy_test(const GwveSpec& spec, int horizon, double tol) {
    spec.validate();
    const TailMeta tail = spec.rates.analytics(spec.alphabet);
    const double limsup = tail.cesaro_limsup;
    const double log_s = std::log(static_cast<double>(spec.alphabet.size()));

    DegeneracyReport out;
    out.t = spec.t;
    out.horizon = horizon;
    out.tol = tol;

    if (std::isinf(limsup)) {
        out.inf_m = InfM::Zero;
        out.inf_m_reason = "Cesaro limsup is infinite: inf m_n = 0 for every t > 0";
    } else if (limsup == 0.0) {
        out.inf_m = InfM::Positive;
        out.inf_m_reason = "Cesaro limsup is 0: inf m_n > 0 for every t > 0";
    } else {
        const double t0 = log_s / limsup;
        const double rel = (spec.t - t0) / t0;
        if (rel < -kCriticalSnap) {
            out.inf_m = InfM::Positive;
            out.inf_m_reason = "t < t0 = " + fmt(t0);
        } else if (rel > kCriticalSnap) {
            out.inf_m = InfM::Zero;
            out.inf_m_reason = "t > t0 = " + fmt(t0);
        } else {
            const TailShape shape = spec.rates.tail_shape();
            if (shape.kind == TailShape::Kind::EventuallyConstant && spec.rates.rate(shape.from) == limsup) {
                // m_n is constant from n = from on, so the infimum is a finite
                // minimum of positive numbers.
                out.inf_m = InfM::Positive;
                out.inf_m_reason = "t = t0 with eventually constant rates: m_n is eventually constant";
            } else {
                out.inf_m = InfM::Undecided;
                out.inf_m_reason = "t = t0: inf m_n depends on more than the Cesaro limsup";
            }
        }
    }

    out.g = g_verdict(spec, horizon);

    out.method = "criterion";
    if (out.inf_m == InfM::Zero) {
        out.degenerate = true;
        out.decided = true;
    } else if (out.inf_m == InfM::Positive && out.g.kind == GVerdict::Kind::Finite) {
        out.degenerate = false;
        out.decided = true;
    } else if (out.inf_m == InfM::Positive && out.g.kind == GVerdict::Kind::Diverges) {
        out.degenerate = true;
        out.decided = true;
    } else {
        out.method = "extinction-fallback";
        out.fallback = extinct_prob_limit(spec, tol);
        out.decided = out.fallback->converged;
        out.degenerate = out.fallback->converged && out.fallback->value >= 1.0 - tol;
    }
    return out;
}

std::string to_string(InfM v) {
    switch (v) {
        case InfM::Positive: return "positive";
        case InfM::Zero: return "zero";
        case InfM::Undecided: return "undecided";
    }
    return "undecided";
}

std::string to_string(GVerdict::Kind v) {
    switch (v) {
        case GVerdict::Kind::Finite: return "finite";
        case GVerdict::Kind::Diverges: return "diverges";
        case GVerdict::Kind::Undecided: return "undecided";
    }
    return "undecided";
}

}  // namespace segcoal
