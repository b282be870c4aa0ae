#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segcoal/flow.hpp"
#include "segcoal/rates.hpp"
#include "segcoal/space.hpp"

namespace segcoal {

enum class PhaseLabel { LowerSubcritical, UpperSubcritical, Semicritical, Critical, Supercritical };

std::string to_string(PhaseLabel label);

struct Phase {
    PhaseLabel label;
    std::optional<double> critical_time;  // present iff Critical
};

/// Phase from the tail data alone:
///   LowerSubcritical  sum |S|^n r_n < inf
///   UpperSubcritical  sum |S|^n r_n = inf, sum r_n < inf
///   Semicritical      sum r_n = inf, limsup = 0
///   Critical          limsup in (0, inf), with t0 = log|S| / limsup
///   Supercritical     limsup = inf
/// Throws std::invalid_argument for inconsistent tail data or the all-zero
/// sequence, which is not a model.
Phase classify(Alphabet alphabet, const TailMeta& tail);

/// log|S| / limsup; requires limsup in (0, inf).
double critical_time(Alphabet alphabet, double cesaro_limsup);

/// Hausdorff dimension of K under the Cantor embedding: log|S| / log(2|S|-1).
double cantor_dimension(Alphabet alphabet);

/// max(0, (log|S| - t L) / log(2|S|-1)), the dimension of the dust at time t
/// given that it is non-empty. Only defined for the Cantor geometry.
double dust_dimension_analytic(Alphabet alphabet, GeometryKind geometry, double cesaro_limsup, double t);

struct DimensionReport {
    double t = 0.0;
    double analytic_dim = 0.0;
    double empirical_dim = 0.0;
    double std_error = 0.0;  // sample standard error across surviving replicates
    bool conditioned_on_survival = true;
    std::size_t replicates_used = 0;
    std::size_t replicates_total = 0;
    int fit_from = 0;  // levels used in the per-replicate regression
    int fit_to = 0;
};

/// Least-squares slope of log B_n against n log(2|S|-1) over n in
/// [ceil(N/2), N], for each replicate with B_N >= 1; returns their mean and
/// standard error. `counts[i]` holds B_0..B_N of replicate i.
/// Throws std::invalid_argument if no replicate survives or the geometry is
/// not the Cantor set.
DimensionReport dust_dimension_empirical(std::span<const std::vector<std::uint64_t>> counts, Alphabet alphabet,
                                         GeometryKind geometry, double t);

DimensionReport dust_dimension_empirical(std::span<const SurvivorTree> trees, Alphabet alphabet,
                                         GeometryKind geometry);

/// Slope of one replicate's regression; nullopt if it did not survive.
std::optional<double> box_count_slope(std::span<const std::uint64_t> counts, Alphabet alphabet);

}  // namespace segcoal
