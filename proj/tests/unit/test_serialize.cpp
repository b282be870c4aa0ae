#include <doctest.h>

#include <cmath>
#include <limits>
#include <sstream>

#include "segcoal/serialize.hpp"

using namespace segcoal;

TEST_CASE("infinite values serialize as strings") {
    CHECK(number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(number(1.5) == 1.5);
    const Json tail = to_json(TailMeta{false, std::numeric_limits<double>::infinity(), 1.0});
    CHECK(tail.dump() == R"({"sum_weighted_finite":false,"sum":"inf","cesaro_limsup":1.0})");
}

TEST_CASE("phase json") {
    CHECK(to_json(Phase{PhaseLabel::Semicritical, std::nullopt}).dump() == R"({"phase":"Semicritical"})");
    const Json crit = to_json(Phase{PhaseLabel::Critical, std::log(2.0)});
    CHECK(crit["t0"].get<double>() == std::log(2.0));
}

TEST_CASE("decomposition json layout") {
    StoreConfig c;
    c.space = SpaceConfig{Alphabet(2), GeometryKind::CantorSet, 3};
    c.rates = RateFamily::zero();
    c.depth = 2;
    c.horizon = 1.0;
    EventStore store(c);
    store.pin(Word{2}, {Event{0.5, Word{2}, Word{2, 1, 2}}});
    const Json j = to_json(decompose(store, 1.0), Alphabet(2));
    CHECK(j["dust_measure"] == "1/2");
    CHECK(j["blocks"].size() == 1);
    CHECK(j["blocks"][0]["word"] == "2");
    CHECK(j["blocks"][0]["atom"] == "212");
    CHECK(j["blocks"][0]["mass"] == "1/2");
    CHECK(j["b_counts"] == Json::array({1, 1, 2}));
    std::vector<std::string> keys;
    for (const auto& [k, v] : j.items()) keys.push_back(k);
    CHECK(keys == std::vector<std::string>{"t", "depth", "dust_measure", "dust_measure_value", "blocks", "b_counts"});
}

TEST_CASE("regression csv keeps surviving replicates only") {
    const std::vector<std::vector<std::uint64_t>> counts{{1, 2, 4, 8}, {1, 1, 0, 0}, {1, 2, 2, 3}};
    std::ostringstream out;
    write_regression_csv(out, 0.25, counts, 7);
    write_regression_csv(out, 0.5, counts, 7, false);
    const std::string text = out.str();
    CHECK(text.rfind("t,replicate,n,log_b,seed\n", 0) == 0);
    std::size_t lines = 0;
    for (char ch : text) lines += ch == '\n';
    // Two survivors x levels {2, 3} x two times, plus the header.
    CHECK(lines == 1 + 2 * 2 * 2);
    CHECK(text.find("0.25,2,3,1.0986122886681098,7\n") != std::string::npos);
    CHECK(text.find(",1,") == std::string::npos);
}
