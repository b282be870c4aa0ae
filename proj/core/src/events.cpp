#include "segcoal/events.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>

namespace segcoal {
namespace {

// exp(-mean) underflows to a denormal/zero beyond ~745.
constexpr double kMaxPoissonMean = 700.0;

// Draws the event times of one word stream: count ~ Poisson(mean) from the
// first uniform, then `count` uniform times in (0, horizon]. The order of
// draws is fixed so that has_event and generate agree.
template <class Rng>
std::uint64_t draw_count(Rng& rng, double mean) {
    if (mean <= 0.0) return 0;
    return poisson_inverse(uniform01(rng), mean);
}

template <class Rng>
double draw_time(Rng& rng, double horizon) {
    return horizon - uniform01(rng) * horizon;  // in (0, horizon]
}

bool by_level_word_time(const Event& a, const Event& b) {
    if (a.word.level() != b.word.level()) return a.word.level() < b.word.level();
    if (a.word != b.word) return a.word < b.word;
    return a.time < b.time;
}

}  // namespace

std::uint64_t poisson_inverse(double u, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw std::domain_error("Poisson mean must be finite and >= 0");
    if (mean == 0.0) return 0;
    if (mean > kMaxPoissonMean) {
        throw std::domain_error("Poisson mean " + std::to_string(mean) +
                                " too large for exact inversion; shorten the window or truncate the rates");
    }
    double p = std::exp(-mean);
    double cdf = p;
    std::uint64_t k = 0;
    while (u >= cdf) {
        ++k;
        p *= mean / static_cast<double>(k);
        if (p == 0.0 || cdf + p == cdf) break;  // CDF has saturated in double precision
        cdf += p;
    }
    return k;
}

void StoreConfig::validate() const {
    space.validate();
    if (depth < 0) throw std::invalid_argument("truncation depth must be nonnegative");
    if (space.precision < depth) {
        throw std::invalid_argument("precision (" + std::to_string(space.precision) +
                                    ") must be at least the truncation depth (" + std::to_string(depth) + ")");
    }
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw std::invalid_argument("time horizon must be positive");
    for (int n = 0; n <= depth; ++n) {
        if (rates.rate(n) * horizon > kMaxPoissonMean) {
            throw std::invalid_argument("rate r_" + std::to_string(n) + " x horizon exceeds the supported range");
        }
    }
}

EventStore::EventStore(StoreConfig config) : config_(std::move(config)), root_key_(derive_key(config_.seed, 0)) {
    config_.validate();
    empty_prob_.reserve(static_cast<std::size_t>(config_.depth) + 1);
    for (int n = 0; n <= config_.depth; ++n) empty_prob_.push_back(std::exp(-config_.rates.rate(n) * config_.horizon));
    silent_from_ = config_.depth + 1;
    while (silent_from_ > 0 && config_.rates.rate(silent_from_ - 1) == 0.0) --silent_from_;
}

void EventStore::check_query(const Word& w, TimeInterval interval) const {
    if (w.level() > config_.depth) {
        throw std::out_of_range("word level " + std::to_string(w.level()) + " exceeds truncation depth " +
                                std::to_string(config_.depth));
    }
    if (interval.lo < 0.0 || interval.hi > config_.horizon || interval.lo > interval.hi) {
        throw std::out_of_range("time interval outside the window (0, " + std::to_string(config_.horizon) + "]");
    }
}

std::vector<Event> EventStore::generate(const Word& w, std::uint64_t key) const {
    const double mean = config_.rates.rate(w.level()) * config_.horizon;
    SplitMix64 rng(key);
    const std::uint64_t count = draw_count(rng, mean);
    std::vector<Event> out;
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) out.push_back(Event{draw_time(rng, config_.horizon), w, Word{}});
    std::sort(out.begin(), out.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
    for (auto& e : out) e.parent = sample_uniform_point(w, config_.space.precision, config_.space.alphabet, rng);
    return out;
}

const std::vector<Event>& EventStore::stream(const Word& w) {
    if (auto it = pinned_.find(w); it != pinned_.end()) return it->second;
    if (auto it = corrupted_.find(w); it != corrupted_.end()) {
        scratch_ = generate(w, derive_key(key_of(w), ++it->second));
        return scratch_;
    }
    auto it = memo_.find(w);
    if (it == memo_.end()) it = memo_.emplace(w, generate(w, key_of(w))).first;
    return it->second;
}

std::vector<Event> EventStore::events_in(const Word& w, TimeInterval interval) {
    check_query(w, interval);
    std::vector<Event> out;
    for (const auto& e : stream(w)) {
        if (interval.contains(e.time)) out.push_back(e);
    }
    return out;
}

const Event* EventStore::latest_in(const Word& w, TimeInterval interval) {
    check_query(w, interval);
    const auto& events = stream(w);
    for (auto it = events.rbegin(); it != events.rend(); ++it) {
        if (interval.contains(it->time)) return &*it;
    }
    return nullptr;
}

bool EventStore::has_event(const Word& w, TimeInterval interval) {
    check_query(w, interval);
    if (!pinned_.empty() || !corrupted_.empty() || memo_.count(w) != 0) {
        const auto& events = stream(w);
        return std::any_of(events.begin(), events.end(), [&](const Event& e) { return interval.contains(e.time); });
    }
    const double mean = config_.rates.rate(w.level()) * config_.horizon;
    SplitMix64 rng(key_of(w));
    const std::uint64_t count = draw_count(rng, mean);
    for (std::uint64_t i = 0; i < count; ++i) {
        if (interval.contains(draw_time(rng, config_.horizon))) return true;
    }
    return false;
}

bool EventStore::has_event_keyed(const Word& w, std::uint64_t key, double t) {
    if (!pinned_.empty() || !corrupted_.empty()) return has_event(w, TimeInterval{0.0, t, false});
    SplitMix64 rng(key);
    // Same draws as draw_count, short-circuiting the common empty case.
    const double u = uniform01(rng);
    if (u < empty_prob_[static_cast<std::size_t>(w.level())]) return false;
    const std::uint64_t count = poisson_inverse(u, config_.rates.rate(w.level()) * config_.horizon);
    for (std::uint64_t i = 0; i < count; ++i) {
        if (draw_time(rng, config_.horizon) <= t) return true;
    }
    return false;
}

void EventStore::pin(const Word& w, std::vector<Event> events) {
    check_query(w, window());
    for (auto& e : events) {
        if (e.word.empty() && !w.empty()) e.word = w;
        if (e.word != w) throw std::invalid_argument("pinned event word does not match");
        if (!window().contains(e.time)) throw std::invalid_argument("pinned event time outside the window");
        if (e.parent.level() != config_.space.precision || !is_ancestor(w, e.parent)) {
            throw std::invalid_argument("pinned event parent must be a point of K_w at store precision");
        }
        e.parent.validate(config_.space.alphabet);
    }
    std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
    if (!events.empty()) silent_from_ = std::max(silent_from_, w.level() + 1);
    pinned_[w] = std::move(events);
}

void EventStore::corrupt(const Word& w) {
    check_query(w, window());
    corrupted_.emplace(w, 0);
}

std::vector<Event> EventStore::materialized() const {
    std::vector<Event> out;
    for (const auto& [w, events] : memo_) {
        if (pinned_.count(w) == 0) out.insert(out.end(), events.begin(), events.end());
    }
    for (const auto& [w, events] : pinned_) out.insert(out.end(), events.begin(), events.end());
    std::sort(out.begin(), out.end(), by_level_word_time);
    return out;
}

std::vector<Event> EventStore::all_events(int max_level) {
    if (max_level > config_.depth) max_level = config_.depth;
    std::vector<Event> out;
    std::vector<Word> level{Word{}};
    for (int n = 0; n <= max_level; ++n) {
        std::vector<Word> next;
        for (const auto& w : level) {
            const auto& events = stream(w);
            out.insert(out.end(), events.begin(), events.end());
            if (n < max_level) {
                for (int i = 1; i <= alphabet().size(); ++i) next.push_back(child(w, i, alphabet()));
            }
        }
        level = std::move(next);
    }
    std::sort(out.begin(), out.end(), by_level_word_time);
    return out;
}

void write_events_csv(std::ostream& out, const std::vector<Event>& events, Alphabet alphabet,
                      std::optional<std::uint64_t> seed) {
    std::vector<Event> sorted = events;
    std::sort(sorted.begin(), sorted.end(), by_level_word_time);
    out << (seed ? "time,word,parent,seed\n" : "time,word,parent\n");
    char buf[64];
    for (const auto& e : sorted) {
        std::snprintf(buf, sizeof buf, "%.17g", e.time);
        out << buf << ',' << e.word.to_string(alphabet) << ',' << e.parent.to_string(alphabet);
        if (seed) out << ',' << *seed;
        out << '\n';
    }
}

}  // namespace segcoal
