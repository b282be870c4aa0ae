#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include <nlohmann/json.hpp>

#include "segcoal/flow.hpp"
#include "segcoal/gwve.hpp"
#include "segcoal/phase.hpp"
#include "segcoal/rates.hpp"

namespace segcoal {

using Json = nlohmann::ordered_json;

inline constexpr const char* kSchema = "segcoal/1";

/// Finite numbers as numbers, infinities as the strings "inf" / "-inf".
Json number(double v);

Json to_json(const TailMeta& tail);
Json to_json(const Phase& phase);
Json to_json(const BlockDecomposition& d, Alphabet alphabet);
Json to_json(const GVerdict& g);
Json to_json(const DegeneracyReport& r);
Json to_json(const ExtinctionLimit& e);
Json to_json(const DimensionReport& r);
Json to_json(const FlowCheckReport& r, Alphabet alphabet);

/// Rows (t, replicate, n, log_b, seed) for every surviving replicate's
/// regression levels. The header is written only when `header` is set, so
/// several times can share one file.
void write_regression_csv(std::ostream& out, double t, std::span<const std::vector<std::uint64_t>> counts,
                          std::uint64_t seed, bool header = true);

}  // namespace segcoal
