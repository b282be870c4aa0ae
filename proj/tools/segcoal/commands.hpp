#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "segcoal/space.hpp"

namespace segcoal::cli {

/// Used when neither --seed nor SEGCOAL_SEED is given.
inline constexpr std::uint64_t kDefaultSeed = 20240611;

enum class OutputFormat { Json, Csv };

struct ExperimentConfig {
    std::string command;
    int alphabet_size = 2;
    std::string rates = "constant:1";
    std::optional<double> t;
    std::vector<double> t_grid;
    bool relative_to_t0 = false;  // interpret t / t_grid as multiples of t0
    int depth = 12;
    std::optional<int> precision;  // defaults to depth
    std::uint64_t seed = kDefaultSeed;
    std::optional<std::size_t> replicates;  // per-command default when unset
    std::optional<OutputFormat> output;  // per-command default when unset
    GeometryKind geometry = GeometryKind::CantorSet;
    double tol = 1e-9;
    int horizon = 10'000;  // g^t partial-sum horizon
    bool limit = false;    // gwve: also report lim P[B_n = 0]
    bool monte_carlo = false;  // gwve: also simulate B_0..B_N directly
    bool emit_blocks = false;  // simulate: full decompositions with atoms
    std::size_t samples = 1000;
    unsigned threads = 0;  // 0: hardware concurrency
    std::string regression_csv;

    int effective_precision() const { return precision.value_or(depth); }
    void validate() const;
};

/// Bad user input: rates spec, config or flag combination. Maps to exit 2.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Seed from SEGCOAL_SEED if set and parseable, else kDefaultSeed.
std::uint64_t default_seed();

/// Seed of replicate `index` of an experiment seeded with `seed`.
std::uint64_t replicate_seed(std::uint64_t seed, std::size_t index);

/// Runs body(i) for i in [0, count) on up to `threads` workers. Results must
/// be written to per-index slots; the first exception is rethrown.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body);

int cmd_classify(const ExperimentConfig& config, std::ostream& out);
int cmd_simulate(const ExperimentConfig& config, std::ostream& out);
int cmd_gwve(const ExperimentConfig& config, std::ostream& out);
int cmd_dimension(const ExperimentConfig& config, std::ostream& out);
int cmd_flowcheck(const ExperimentConfig& config, std::ostream& out);
int cmd_events(const ExperimentConfig& config, std::ostream& out);

/// Dispatches on config.command. Returns the process exit code: 0 on
/// success, 1 for a failed check (flowcheck), 2 for invalid input (message
/// written to `err`).
int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

}  // namespace segcoal::cli
