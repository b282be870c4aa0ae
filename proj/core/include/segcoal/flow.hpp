#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "segcoal/events.hpp"
#include "segcoal/rational.hpp"
#include "segcoal/space.hpp"

namespace segcoal {

/// One element E_m = (u_m, w_m, p_m) of a lineage: the event at time u_m in
/// complex w_m moved the lineage to point p_m.
struct LineageStep {
    double time;
    Word word;
    Word point;

    friend bool operator==(const LineageStep&, const LineageStep&) = default;
};

/// The events that determine where x at time s is carried by time t.
/// Levels |w_m| and times u_m are strictly increasing along `steps`.
struct Lineage {
    Word start;
    std::vector<LineageStep> steps;
    Word final;

    bool is_dust() const { return steps.empty(); }
};

/// Follows x from time s to time t. The first step is the latest event in
/// (s, t] at the lowest level whose complex contains x; each later step is
/// the latest event in [u_m, t] at the lowest strictly higher level whose
/// complex contains p_m. With finitely many levels this always terminates
/// after at most depth + 1 steps.
///
/// Throws std::invalid_argument unless |x| equals the store precision and
/// 0 <= s < t <= horizon.
Lineage trace_lineage(EventStore& store, const Word& x, double s, double t);

/// X_{s,t}(x): the final point of the lineage, or x itself for dust.
Word apply_flow(EventStore& store, const Word& x, double s, double t);

/// Complexes with no event in themselves or any ancestor during (0, t].
struct SurvivorTree {
    double t = 0.0;
    int depth = 0;
    std::vector<std::vector<Word>> survivors;  // survivors[n]: sorted level-n survivors

    /// B_n^t for n = 0..depth.
    std::vector<std::uint64_t> counts() const;
};

SurvivorTree survivor_tree(EventStore& store, double t);

/// B_n^t for n = 0..depth without storing the survivor words.
std::vector<std::uint64_t> survivor_counts(EventStore& store, double t);

/// Whether D_t is empty, i.e. some level has no survivors. Stops at the
/// first surviving depth-N complex.
bool dust_empty(EventStore& store, double t);

/// A non-trivial block: the maximal complex K_top all of whose points are
/// carried to `atom` by X_{0,t}.
struct Block {
    Word top;
    std::optional<Word> atom;  // empty when atoms were not traced
    Rational mass;
};

struct BlockDecomposition {
    double t = 0.0;
    int depth = 0;
    std::vector<Word> dust_words;  // surviving depth-N complexes; D_t is their union
    std::vector<Block> blocks;     // in shortlex order of `top`
    Rational dust_measure;
    std::vector<std::uint64_t> b_counts;
};

struct DecomposeOptions {
    bool trace_atoms = true;
};

/// Splits K at time t into dust and blocks. Blocks are the complexes hit by
/// an event in (0, t] none of whose ancestors were; each atom is found by
/// continuing the lineage from that complex's latest event. Masses are exact
/// and sum with the dust measure to 1 (checked; std::logic_error otherwise).
BlockDecomposition decompose(EventStore& store, double t, DecomposeOptions options = {});

struct FlowViolation {
    Word x;
    double s, t, v;
    Word direct;    // X_{s,v}(x)
    Word composed;  // X_{t,v}(X_{s,t}(x))
};

struct FlowCheckReport {
    std::size_t samples = 0;
    std::size_t violations = 0;
    std::optional<FlowViolation> first_violation;

    bool passed() const { return violations == 0; }
};

/// Checks X_{s,v} = X_{t,v} o X_{s,t} on `samples` random (x, s < t < v)
/// drawn from `rng`, all against the same realization.
FlowCheckReport verify_flow_property(EventStore& store, std::size_t samples, SplitMix64& rng);

}  // namespace segcoal
