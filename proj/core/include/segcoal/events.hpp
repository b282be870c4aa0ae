#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <unordered_map>
#include <vector>

#include "segcoal/rates.hpp"
#include "segcoal/space.hpp"

namespace segcoal {

/// A reproduction event: at `time`, every point of K_word jumps to `parent`.
struct Event {
    double time = 0.0;
    Word word;
    Word parent;  // a point: length equals the store precision, has `word` as prefix

    friend bool operator==(const Event&, const Event&) = default;
};

/// A time interval with an open left end by default: (lo, hi], or [lo, hi]
/// when lo_closed is set.
struct TimeInterval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;

    bool contains(double t) const { return t <= hi && (lo_closed ? t >= lo : t > lo); }
    double length() const { return hi - lo; }
};

struct StoreConfig {
    SpaceConfig space;
    RateFamily rates = RateFamily::zero();
    int depth = 12;         // complexes of level > depth carry no events
    double horizon = 1.0;   // the window is (0, horizon]
    std::uint64_t seed = 0;

    void validate() const;
};

/// One realization of the Poisson process of reproduction events on
/// (0, horizon] x {words of level <= depth} x K.
///
/// The events of each word are a pure function of (seed, word): the word's
/// stream is keyed by hashing its letters onto the seed, so the realization
/// does not depend on which words are queried or in which order. Event lists
/// are materialized on first use and memoized.
///
/// Not safe for concurrent mutation; use one store per thread.
class EventStore {
public:
    explicit EventStore(StoreConfig config);

    const StoreConfig& config() const { return config_; }
    Alphabet alphabet() const { return config_.space.alphabet; }
    int depth() const { return config_.depth; }
    int precision() const { return config_.space.precision; }
    TimeInterval window() const { return TimeInterval{0.0, config_.horizon, false}; }

    /// Events of K_w inside `interval`, sorted by time.
    std::vector<Event> events_in(const Word& w, TimeInterval interval);

    /// Latest event of K_w inside `interval`, if any.
    const Event* latest_in(const Word& w, TimeInterval interval);

    /// Whether K_w has an event inside `interval`. Does not materialize the
    /// word's parent points.
    bool has_event(const Word& w, TimeInterval interval);

    /// has_event over (0, t] for a word whose stream key (key_of(w)) is
    /// already known; the fast path for tree traversals.
    bool has_event_keyed(const Word& w, std::uint64_t key, double t);

    std::uint64_t root_key() const { return root_key_; }

    /// Smallest level L such that no complex of level >= L can carry an
    /// event (zero rates from L on and no pinned events there); depth + 1 if
    /// there is none.
    int silent_from() const { return silent_from_; }
    std::uint64_t key_of(const Word& w) const { return word_key(root_key_, w); }

    /// Replaces the realization on K_w by the given events (handcrafted
    /// scenarios). Events must lie in the window and have parents in K_w.
    void pin(const Word& w, std::vector<Event> events);

    /// Fault injection for negative controls: every later query of K_w
    /// redraws its events from a fresh stream, breaking realization
    /// consistency for that word.
    void corrupt(const Word& w);

    /// Every materialized or pinned event, sorted by (level, word, time).
    std::vector<Event> materialized() const;

    /// Materializes every word up to `max_level` and returns all events,
    /// sorted by (level, word, time).
    std::vector<Event> all_events(int max_level);

private:
    const std::vector<Event>& stream(const Word& w);
    std::vector<Event> generate(const Word& w, std::uint64_t key) const;
    void check_query(const Word& w, TimeInterval interval) const;

    StoreConfig config_;
    std::uint64_t root_key_;
    std::unordered_map<Word, std::vector<Event>> memo_;
    std::unordered_map<Word, std::vector<Event>> pinned_;
    std::unordered_map<Word, std::uint64_t> corrupted_;  // word -> query counter
    std::vector<Event> scratch_;
    std::vector<double> empty_prob_;
    int silent_from_ = 0;  // e^{-r_n horizon} for n = 0..depth
};

/// CSV with header `time,word,parent`, rows sorted by (level, word, time).
/// With a seed, every row also carries it in a trailing `seed` column.
void write_events_csv(std::ostream& out, const std::vector<Event>& events, Alphabet alphabet,
                      std::optional<std::uint64_t> seed = std::nullopt);

/// Number of Poisson(mean) events encoded by the uniform u in [0, 1), by
/// inversion of the CDF. Throws std::domain_error for means too large to
/// invert in double precision.
std::uint64_t poisson_inverse(double u, double mean);

}  // namespace segcoal
