#include "segcoal/flow.hpp"

#include <algorithm>
#include <stdexcept>

namespace segcoal {
namespace {

void check_times(const EventStore& store, double s, double t) {
    if (!(s >= 0.0 && s < t && t <= store.config().horizon)) {
        throw std::invalid_argument("need 0 <= s < t <= horizon");
    }
}

// Continues a lineage sitting at `point` since time `since`, looking at
// levels >= from_level and times in [since, t] (or (since, t] for the first
// step). Appends the steps it takes.
void extend_lineage(EventStore& store, Word& point, double since, bool closed, int from_level, double t,
                    std::vector<LineageStep>& steps) {
    const int depth = store.depth();
    int n = from_level;
    while (n <= depth) {
        bool moved = false;
        for (; n <= depth; ++n) {
            Word w = point.prefix(n);
            const Event* e = store.latest_in(w, TimeInterval{since, t, closed});
            if (e == nullptr) continue;
            steps.push_back(LineageStep{e->time, w, e->parent});
            point = e->parent;
            since = e->time;
            closed = true;
            ++n;
            moved = true;
            break;
        }
        if (!moved) break;
    }
}

// Breadth-first walk of the survivor subtree. `on_survivor(level, word)` is
// called for every survivor, `on_killed(word)` for every complex whose first
// event-bearing ancestor is itself.
template <class OnSurvivor, class OnKilled>
void walk_survivors(EventStore& store, double t, OnSurvivor&& on_survivor, OnKilled&& on_killed) {
    struct Node {
        Word word;
        std::uint64_t key;
    };
    const int s = store.alphabet().size();
    Word root;
    const std::uint64_t root_key = store.root_key();
    if (store.has_event_keyed(root, root_key, t)) {
        on_killed(root);
        return;
    }
    on_survivor(0, root);
    std::vector<Node> level{Node{root, root_key}};
    for (int n = 1; n <= store.depth() && !level.empty(); ++n) {
        std::vector<Node> next;
        next.reserve(level.size() * static_cast<std::size_t>(s));
        for (auto& node : level) {
            for (int i = 1; i <= s; ++i) {
                Word w = node.word;
                w.push_back(static_cast<Letter>(i));
                const std::uint64_t key = extend_word_key(node.key, static_cast<Letter>(i));
                if (store.has_event_keyed(w, key, t)) {
                    on_killed(w);
                } else {
                    on_survivor(n, w);
                    next.push_back(Node{std::move(w), key});
                }
            }
        }
        level = std::move(next);
    }
}

// Depth-first count of survivors; returns early once `stop_at_depth` is
// reached if requested.
bool dfs_survivors(EventStore& store, double t, Word& w, std::uint64_t key, std::vector<std::uint64_t>& counts,
                   bool stop_at_depth) {
    const int n = w.level();
    ++counts[static_cast<std::size_t>(n)];
    if (n == store.depth()) return stop_at_depth;
    const int s = store.alphabet().size();
    if (n + 1 >= store.silent_from()) {
        // Nothing below can be hit: the whole subtree survives.
        if (stop_at_depth) return true;
        std::uint64_t width = 1;
        for (int k = n + 1; k <= store.depth(); ++k) {
            if (width > (std::uint64_t{1} << 62) / static_cast<std::uint64_t>(s)) {
                throw std::overflow_error("survivor count exceeds 2^62");
            }
            width *= static_cast<std::uint64_t>(s);
            counts[static_cast<std::size_t>(k)] += width;
        }
        return false;
    }
    for (int i = 1; i <= s; ++i) {
        const auto letter = static_cast<Letter>(i);
        const std::uint64_t child_key = extend_word_key(key, letter);
        w.push_back(letter);
        bool done = false;
        if (!store.has_event_keyed(w, child_key, t)) {
            done = dfs_survivors(store, t, w, child_key, counts, stop_at_depth);
        }
        w.pop_back();
        if (done) return true;
    }
    return false;
}

}  // namespace

Lineage trace_lineage(EventStore& store, const Word& x, double s, double t) {
    if (x.level() != store.precision()) {
        throw std::invalid_argument("point has length " + std::to_string(x.level()) + " but store precision is " +
                                    std::to_string(store.precision()));
    }
    check_times(store, s, t);
    Lineage out{x, {}, x};
    extend_lineage(store, out.final, s, false, 0, t, out.steps);
    return out;
}

Word apply_flow(EventStore& store, const Word& x, double s, double t) {
    return trace_lineage(store, x, s, t).final;
}

std::vector<std::uint64_t> SurvivorTree::counts() const {
    std::vector<std::uint64_t> out;
    out.reserve(survivors.size());
    for (const auto& level : survivors) out.push_back(level.size());
    return out;
}

SurvivorTree survivor_tree(EventStore& store, double t) {
    check_times(store, 0.0, t);
    SurvivorTree tree;
    tree.t = t;
    tree.depth = store.depth();
    tree.survivors.resize(static_cast<std::size_t>(store.depth()) + 1);
    walk_survivors(
        store, t, [&](int n, const Word& w) { tree.survivors[static_cast<std::size_t>(n)].push_back(w); },
        [](const Word&) {});
    return tree;
}

std::vector<std::uint64_t> survivor_counts(EventStore& store, double t) {
    check_times(store, 0.0, t);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(store.depth()) + 1, 0);
    Word root;
    if (store.has_event_keyed(root, store.root_key(), t)) return counts;
    dfs_survivors(store, t, root, store.root_key(), counts, false);
    return counts;
}

bool dust_empty(EventStore& store, double t) {
    check_times(store, 0.0, t);
    std::vector<std::uint64_t> counts(static_cast<std::size_t>(store.depth()) + 1, 0);
    Word root;
    if (store.has_event_keyed(root, store.root_key(), t)) return true;
    return !dfs_survivors(store, t, root, store.root_key(), counts, true);
}

BlockDecomposition decompose(EventStore& store, double t, DecomposeOptions options) {
    check_times(store, 0.0, t);
    const Alphabet alphabet = store.alphabet();
    const int depth = store.depth();

    BlockDecomposition out;
    out.t = t;
    out.depth = depth;
    out.b_counts.assign(static_cast<std::size_t>(depth) + 1, 0);

    walk_survivors(
        store, t,
        [&](int n, const Word& w) {
            ++out.b_counts[static_cast<std::size_t>(n)];
            if (n == depth) out.dust_words.push_back(w);
        },
        [&](const Word& w) { out.blocks.push_back(Block{w, std::nullopt, measure(w, alphabet)}); });

    // Exact bookkeeping in units of depth-N cells.
    const Rational::Int cells = checked_pow(alphabet.size(), depth);
    out.dust_measure = Rational(static_cast<Rational::Int>(out.dust_words.size()), cells);

    Rational total = out.dust_measure;
    for (const auto& b : out.blocks) total += b.mass;
    if (total != Rational(1)) {
        throw std::logic_error("block masses and dust measure sum to " + total.to_string() + ", not 1");
    }

    if (options.trace_atoms) {
        std::vector<LineageStep> steps;
        for (auto& b : out.blocks) {
            const Event* top = store.latest_in(b.top, TimeInterval{0.0, t, false});
            if (top == nullptr) throw std::logic_error("block without an event in its top complex");
            Word point = top->parent;
            const double since = top->time;
            steps.clear();
            extend_lineage(store, point, since, true, b.top.level() + 1, t, steps);
            if (!is_ancestor(b.top, point)) {
                throw std::logic_error("atom of block " + b.top.to_string() + " left its complex");
            }
            b.atom = std::move(point);
        }
        // Blocks are disjoint complexes and each atom lies in its own block,
        // so atoms are distinct; a collision means the precision is too low
        // to separate them.
        std::vector<Word> atoms;
        atoms.reserve(out.blocks.size());
        for (const auto& b : out.blocks) atoms.push_back(*b.atom);
        std::sort(atoms.begin(), atoms.end());
        if (std::adjacent_find(atoms.begin(), atoms.end()) != atoms.end()) {
            throw std::logic_error("two blocks share an atom; increase the point precision");
        }
    }
    return out;
}

FlowCheckReport verify_flow_property(EventStore& store, std::size_t samples, SplitMix64& rng) {
    const double horizon = store.config().horizon;
    FlowCheckReport report;
    for (std::size_t i = 0; i < samples; ++i) {
        Word x = sample_uniform_point(Word{}, store.precision(), store.alphabet(), rng);
        double times[3];
        do {
            for (double& u : times) u = horizon - uniform01(rng) * horizon;
            std::sort(std::begin(times), std::end(times));
        } while (!(times[0] < times[1] && times[1] < times[2]));
        const double s = times[0], t = times[1], v = times[2];

        Word direct = apply_flow(store, x, s, v);
        Word composed = apply_flow(store, apply_flow(store, x, s, t), t, v);
        ++report.samples;
        if (direct != composed) {
            ++report.violations;
            if (!report.first_violation) {
                report.first_violation = FlowViolation{x, s, t, v, std::move(direct), std::move(composed)};
            }
        }
    }
    return report;
}

}  // namespace segcoal
