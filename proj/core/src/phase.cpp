#include "segcoal/phase.hpp"

#include <cmath>
#include <stdexcept>

namespace segcoal {

std::string to_string(PhaseLabel label) {
    switch (label) {
        case PhaseLabel::LowerSubcritical: return "LowerSubcritical";
        case PhaseLabel::UpperSubcritical: return "UpperSubcritical";
        case PhaseLabel::Semicritical: return "Semicritical";
        case PhaseLabel::Critical: return "Critical";
        case PhaseLabel::Supercritical: return "Supercritical";
    }
    return "?";
}

Phase classify(Alphabet alphabet, const TailMeta& tail) {
    tail.validate();
    if (tail.sum == 0.0) throw std::invalid_argument("all rates are zero; at least one r_n must be positive");
    if (tail.sum_weighted_finite) return Phase{PhaseLabel::LowerSubcritical, std::nullopt};
    if (std::isfinite(tail.sum)) return Phase{PhaseLabel::UpperSubcritical, std::nullopt};
    if (tail.cesaro_limsup == 0.0) return Phase{PhaseLabel::Semicritical, std::nullopt};
    if (std::isinf(tail.cesaro_limsup)) return Phase{PhaseLabel::Supercritical, std::nullopt};
    return Phase{PhaseLabel::Critical, critical_time(alphabet, tail.cesaro_limsup)};
}

double critical_time(Alphabet alphabet, double cesaro_limsup) {
    if (!(cesaro_limsup > 0.0) || !std::isfinite(cesaro_limsup)) {
        throw std::invalid_argument("critical time needs a Cesaro limsup in (0, inf)");
    }
    return std::log(static_cast<double>(alphabet.size())) / cesaro_limsup;
}

double cantor_dimension(Alphabet alphabet) {
    const double s = alphabet.size();
    return std::log(s) / std::log(2.0 * s - 1.0);
}

double dust_dimension_analytic(Alphabet alphabet, GeometryKind geometry, double cesaro_limsup, double t) {
    if (geometry != GeometryKind::CantorSet) {
        throw std::invalid_argument("the dimension formula needs compact similar complexes (Cantor geometry)");
    }
    if (!(t >= 0.0)) throw std::invalid_argument("time must be nonnegative");
    if (std::isinf(cesaro_limsup)) return 0.0;
    const double s = alphabet.size();
    const double d = (std::log(s) - t * cesaro_limsup) / std::log(2.0 * s - 1.0);
    return d > 0.0 ? d : 0.0;
}

std::optional<double> box_count_slope(std::span<const std::uint64_t> counts, Alphabet alphabet) {
    if (counts.empty()) throw std::invalid_argument("empty count vector");
    const int depth = static_cast<int>(counts.size()) - 1;
    if (depth < 1) throw std::invalid_argument("need at least one level below the root");
    if (counts.back() == 0) return std::nullopt;
    const double log_scale = std::log(2.0 * alphabet.size() - 1.0);
    const int from = (depth + 1) / 2;
    if (from == depth) {
        // One point: slope through the root count log B_0 = 0.
        return std::log(static_cast<double>(counts.back())) / (depth * log_scale);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int k = 0;
    for (int n = from; n <= depth; ++n) {
        const double x = n * log_scale;
        const double y = std::log(static_cast<double>(counts[static_cast<std::size_t>(n)]));
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++k;
    }
    return (k * sxy - sx * sy) / (k * sxx - sx * sx);
}

DimensionReport dust_dimension_empirical(std::span<const std::vector<std::uint64_t>> counts, Alphabet alphabet,
                                         GeometryKind geometry, double t) {
    if (geometry != GeometryKind::CantorSet) {
        throw std::invalid_argument("box counting is only calibrated for the Cantor geometry");
    }
    DimensionReport out;
    out.t = t;
    out.replicates_total = counts.size();
    std::vector<double> slopes;
    for (const auto& c : counts) {
        if (auto slope = box_count_slope(c, alphabet)) slopes.push_back(*slope);
        if (!c.empty()) {
            const int depth = static_cast<int>(c.size()) - 1;
            out.fit_from = (depth + 1) / 2;
            out.fit_to = depth;
        }
    }
    if (slopes.empty()) throw std::invalid_argument("no surviving replicates: the dust was empty in every run");
    double mean = 0.0;
    for (double v : slopes) mean += v;
    mean /= static_cast<double>(slopes.size());
    double var = 0.0;
    for (double v : slopes) var += (v - mean) * (v - mean);
    const double n = static_cast<double>(slopes.size());
    out.empirical_dim = mean;
    out.std_error = slopes.size() > 1 ? std::sqrt(var / (n - 1.0) / n) : 0.0;
    out.replicates_used = slopes.size();
    return out;
}

DimensionReport dust_dimension_empirical(std::span<const SurvivorTree> trees, Alphabet alphabet,
                                         GeometryKind geometry) {
    std::vector<std::vector<std::uint64_t>> counts;
    counts.reserve(trees.size());
    for (const auto& tree : trees) counts.push_back(tree.counts());
    return dust_dimension_empirical(counts, alphabet, geometry, trees.empty() ? 0.0 : trees.front().t);
}

}  // namespace segcoal
