#include <doctest.h>

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "oracles.hpp"
#include "segcoal/events.hpp"

using namespace segcoal;

namespace {

StoreConfig make_config(int s, RateFamily rates, int depth, double horizon, std::uint64_t seed, int precision = -1) {
    StoreConfig c;
    c.space = SpaceConfig{Alphabet(s), GeometryKind::CantorSet, precision < 0 ? depth : precision};
    c.rates = std::move(rates);
    c.depth = depth;
    c.horizon = horizon;
    c.seed = seed;
    return c;
}

}  // namespace

TEST_CASE("poisson inversion") {
    CHECK(poisson_inverse(0.0, 1.0) == 0);
    CHECK(poisson_inverse(std::exp(-1.0) - 1e-12, 1.0) == 0);
    CHECK(poisson_inverse(std::exp(-1.0) + 1e-12, 1.0) == 1);
    CHECK(poisson_inverse(0.5, 0.0) == 0);
    CHECK(poisson_inverse(0.9999999, 3.0) > 5);
    CHECK_THROWS_AS(poisson_inverse(0.5, -1.0), std::domain_error);
    CHECK_THROWS_AS(poisson_inverse(0.5, 1e6), std::domain_error);
}

TEST_CASE("realizations are a pure function of (seed, word)") {
    const auto cfg = make_config(2, RateFamily::constant(2), 6, 1.0, 99);
    EventStore a(cfg), b(cfg);
    const std::vector<Word> words{{}, {1}, {2, 1}, {1, 2, 2, 1}, {2, 2, 2, 2, 2, 2}};
    std::vector<std::vector<Event>> forward, backward(words.size());
    for (const auto& w : words) forward.push_back(a.events_in(w, a.window()));
    for (std::size_t i = words.size(); i-- > 0;) backward[i] = b.events_in(words[i], b.window());
    CHECK(forward == backward);
    for (std::size_t i = 0; i < words.size(); ++i) CHECK(a.events_in(words[i], a.window()) == forward[i]);

    EventStore other(make_config(2, RateFamily::constant(2), 6, 1.0, 100));
    bool differs = false;
    for (const auto& w : words) differs |= other.events_in(w, other.window()) != a.events_in(w, a.window());
    CHECK(differs);
}

TEST_CASE("events are sorted, inside the window, and have parents in their complex") {
    EventStore store(make_config(3, RateFamily::constant(3), 4, 2.0, 5, 7));
    for (const auto& e : store.all_events(4)) {
        CHECK(e.time > 0.0);
        CHECK(e.time <= 2.0);
        CHECK(e.parent.level() == 7);
        CHECK(is_ancestor(e.word, e.parent));
    }
    const auto evs = store.events_in(Word{1, 3}, store.window());
    for (std::size_t i = 1; i < evs.size(); ++i) CHECK(evs[i - 1].time < evs[i].time);
}

TEST_CASE("sub-interval queries filter the same stream") {
    EventStore store(make_config(2, RateFamily::constant(5), 3, 1.0, 11));
    const Word w{2, 1};
    const auto all = store.events_in(w, store.window());
    const auto early = store.events_in(w, TimeInterval{0.0, 0.5, false});
    const auto late = store.events_in(w, TimeInterval{0.5, 1.0, false});
    CHECK(early.size() + late.size() == all.size());
    for (const auto& e : early) CHECK(e.time <= 0.5);
    const Event* last = store.latest_in(w, TimeInterval{0.0, 0.5, false});
    if (early.empty()) {
        CHECK(last == nullptr);
    } else {
        CHECK(*last == early.back());
    }
    CHECK(store.has_event(w, store.window()) == !all.empty());
}

TEST_CASE("the keyed fast path agrees with the memoized stream") {
    EventStore fast(make_config(2, RateFamily::constant(1), 8, 1.0, 3));
    EventStore slow(make_config(2, RateFamily::constant(1), 8, 1.0, 3));
    SplitMix64 rng(1);
    for (int i = 0; i < 2000; ++i) {
        const Word w = sample_uniform_point(Word{}, 1 + static_cast<int>(uniform_below(rng, 8)), Alphabet(2), rng);
        const double t = uniform01(rng);
        const auto evs = slow.events_in(w, TimeInterval{0.0, t, false});
        REQUIRE(fast.has_event_keyed(w, fast.key_of(w), t) == !evs.empty());
        REQUIRE(fast.has_event(w, TimeInterval{0.0, t, false}) == !evs.empty());
    }
}

TEST_CASE("query errors") {
    EventStore store(make_config(2, RateFamily::constant(1), 3, 1.0, 1));
    CHECK_THROWS_AS(store.events_in(Word{1, 1, 1, 1}, store.window()), std::out_of_range);
    CHECK_THROWS_AS(store.events_in(Word{1}, TimeInterval{0.0, 1.5, false}), std::out_of_range);
    CHECK_THROWS_AS(store.events_in(Word{1}, TimeInterval{0.6, 0.5, false}), std::out_of_range);
    CHECK_THROWS_AS(EventStore(make_config(2, RateFamily::constant(1), 5, 1.0, 1, 4)), std::invalid_argument);
    CHECK_THROWS_AS(EventStore(make_config(2, RateFamily::constant(1000), 2, 1.0, 1)), std::invalid_argument);
    CHECK_THROWS_AS(EventStore(make_config(2, RateFamily::constant(1), 2, 0.0, 1)), std::invalid_argument);
}

TEST_CASE("an event occurs by t = ln 2 with probability 1/2 under unit rates") {
    const int seeds = 10000;
    const double t = std::log(2.0);
    const Word w{1, 2, 1};
    int hits = 0;
    for (int s = 0; s < seeds; ++s) {
        EventStore store(make_config(2, RateFamily::constant(1), 3, t, static_cast<std::uint64_t>(s)));
        hits += store.has_event(w, store.window()) ? 1 : 0;
    }
    const double p = 1.0 - std::exp(-t);
    const double sigma = std::sqrt(p * (1 - p) / seeds);
    CHECK(std::abs(hits / static_cast<double>(seeds) - p) < 3 * sigma);
}

TEST_CASE("event counts are Poisson with mean r |I| and uniform times") {
    const int seeds = 10000;
    const double rate = 2.5, horizon = 1.2;
    std::vector<double> counts, sub_counts, times;
    for (int s = 0; s < seeds; ++s) {
        EventStore store(make_config(2, RateFamily::constant(rate), 2, horizon, static_cast<std::uint64_t>(s)));
        const auto evs = store.events_in(Word{2, 2}, store.window());
        counts.push_back(static_cast<double>(evs.size()));
        sub_counts.push_back(static_cast<double>(store.events_in(Word{2, 2}, TimeInterval{0.2, 0.5, false}).size()));
        for (const auto& e : evs) times.push_back(e.time / horizon);
    }
    const auto c = oracle::mean_se(counts);
    CHECK(std::abs(c.mean - rate * horizon) < 3 * c.se);
    double var = 0.0;
    for (double x : counts) var += (x - c.mean) * (x - c.mean);
    var /= seeds - 1.0;
    // Var of the sample variance for Poisson(mu) is about (mu + 2 mu^2) / n.
    const double mu = rate * horizon;
    CHECK(std::abs(var - mu) < 3 * std::sqrt((mu + 2 * mu * mu) / seeds));
    const auto sc = oracle::mean_se(sub_counts);
    CHECK(std::abs(sc.mean - rate * 0.3) < 3 * sc.se);
    const auto tm = oracle::mean_se(times);
    CHECK(std::abs(tm.mean - 0.5) < 3 * tm.se);
}

TEST_CASE("counts of distinct words are uncorrelated") {
    const int seeds = 10000;
    std::vector<double> a, b;
    for (int s = 0; s < seeds; ++s) {
        EventStore store(make_config(2, RateFamily::constant(2), 2, 1.0, static_cast<std::uint64_t>(s)));
        a.push_back(static_cast<double>(store.events_in(Word{1, 1}, store.window()).size()));
        b.push_back(static_cast<double>(store.events_in(Word{1, 2}, store.window()).size()));
    }
    const auto ma = oracle::mean_se(a), mb = oracle::mean_se(b);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (int i = 0; i < seeds; ++i) {
        cov += (a[i] - ma.mean) * (b[i] - mb.mean);
        va += (a[i] - ma.mean) * (a[i] - ma.mean);
        vb += (b[i] - mb.mean) * (b[i] - mb.mean);
    }
    const double corr = cov / std::sqrt(va * vb);
    // Under independence corr * sqrt(n) is approximately standard normal.
    CHECK(std::abs(corr) * std::sqrt(static_cast<double>(seeds)) < 3.5);
}

TEST_CASE("pinned realizations replace the random stream") {
    EventStore store(make_config(2, RateFamily::zero(), 3, 1.0, 1));
    store.pin(Word{1}, {Event{0.4, Word{}, Word{1, 2, 2}}, Event{0.2, Word{1}, Word{1, 1, 1}}});
    const auto evs = store.events_in(Word{1}, store.window());
    REQUIRE(evs.size() == 2);
    CHECK(evs[0].time == 0.2);
    CHECK(evs[1].word == Word{1});
    CHECK(store.has_event_keyed(Word{1}, store.key_of(Word{1}), 0.3));
    CHECK_FALSE(store.has_event_keyed(Word{1}, store.key_of(Word{1}), 0.1));
    CHECK(store.silent_from() == 2);
    CHECK_THROWS_AS(store.pin(Word{2}, {Event{0.4, Word{2}, Word{1, 2, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(store.pin(Word{2}, {Event{1.4, Word{2}, Word{2, 2, 2}}}), std::invalid_argument);
    CHECK_THROWS_AS(store.pin(Word{2}, {Event{0.4, Word{2}, Word{2, 2}}}), std::invalid_argument);
}

TEST_CASE("a corrupted word no longer answers consistently") {
    EventStore store(make_config(2, RateFamily::constant(3), 2, 1.0, 8));
    const Word w{2};
    const auto before = store.events_in(w, store.window());
    store.corrupt(w);
    bool changed = false;
    for (int i = 0; i < 5; ++i) changed |= store.events_in(w, store.window()) != before;
    CHECK(changed);
}

TEST_CASE("silent levels") {
    EventStore zero(make_config(2, RateFamily::zero(), 4, 1.0, 1));
    CHECK(zero.silent_from() == 0);
    EventStore trunc(make_config(2, RateFamily::truncated(RateFamily::constant(1), 2), 6, 1.0, 1));
    CHECK(trunc.silent_from() == 3);
    EventStore live(make_config(2, RateFamily::constant(1), 4, 1.0, 1));
    CHECK(live.silent_from() == 5);
}

TEST_CASE("events csv") {
    EventStore store(make_config(2, RateFamily::truncated(RateFamily::constant(1), 1), 2, 1.0, 4));
    std::ostringstream out;
    const auto evs = store.all_events(2);
    write_events_csv(out, evs, Alphabet(2), 4);
    const std::string text = out.str();
    CHECK(text.rfind("time,word,parent,seed\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : text) lines += ch == '\n';
    CHECK(lines == evs.size() + 1);
}
