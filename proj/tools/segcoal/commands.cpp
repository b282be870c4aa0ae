#include "commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <ostream>
#include <thread>

#include "segcoal/events.hpp"
#include "segcoal/flow.hpp"
#include "segcoal/gwve.hpp"
#include "segcoal/phase.hpp"
#include "segcoal/rates.hpp"
#include "segcoal/rng.hpp"
#include "segcoal/serialize.hpp"

namespace segcoal::cli {

namespace {

struct Stat {
    double mean = 0.0;
    double se = 0.0;
};

Stat summarize(const std::vector<double>& xs) {
    Stat s;
    if (xs.empty()) return s;
    for (double x : xs) s.mean += x;
    const double n = static_cast<double>(xs.size());
    s.mean /= n;
    if (xs.size() < 2) return s;
    double var = 0.0;
    for (double x : xs) var += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(var / (n - 1.0) / n);
    return s;
}

Json to_json(const Stat& s, std::size_t replicates) {
    return Json{{"mean", number(s.mean)}, {"se", number(s.se)}, {"replicates", replicates}};
}

std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

RateFamily parse_rates(const std::string& text) {
    try {
        return RateFamily::parse(text);
    } catch (const std::invalid_argument& e) {
        throw ConfigError("invalid rates spec '" + text + "': " + e.what());
    }
}

TailMeta tail_of(const RateFamily& rates, Alphabet alphabet) {
    try {
        return rates.analytics(alphabet);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

double critical_time_of(const ExperimentConfig& config) {
    const Alphabet alphabet(config.alphabet_size);
    const Phase phase = classify(alphabet, tail_of(parse_rates(config.rates), alphabet));
    if (!phase.critical_time) {
        throw ConfigError("times relative to t0 need a Critical family, but '" + config.rates + "' is " +
                          to_string(phase.label));
    }
    return *phase.critical_time;
}

double resolve_time(const ExperimentConfig& config, double t) {
    return config.relative_to_t0 ? t * critical_time_of(config) : t;
}

double required_time(const ExperimentConfig& config) {
    if (!config.t) throw ConfigError(config.command + " needs --t");
    return resolve_time(config, *config.t);
}

StoreConfig store_config(const ExperimentConfig& config, const RateFamily& rates, double horizon,
                         std::uint64_t seed) {
    StoreConfig sc;
    sc.space = SpaceConfig{Alphabet(config.alphabet_size), config.geometry, config.effective_precision()};
    sc.rates = rates;
    sc.depth = config.depth;
    sc.horizon = horizon;
    sc.seed = seed;
    try {
        sc.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    return sc;
}

Json header(const ExperimentConfig& config) {
    return Json{{"schema", kSchema}, {"command", config.command}, {"seed", config.seed}};
}

Json config_json(const ExperimentConfig& config, const RateFamily& rates) {
    return Json{{"alphabet_size", config.alphabet_size},
                {"rates", rates.describe()},
                {"depth", config.depth},
                {"precision", config.effective_precision()},
                {"geometry", to_string(config.geometry)}};
}

OutputFormat format_or(const ExperimentConfig& config, OutputFormat fallback) {
    return config.output.value_or(fallback);
}

void emit(std::ostream& out, const Json& j) { out << j.dump(2) << '\n'; }

std::uint64_t block_count(const std::vector<std::uint64_t>& counts, int s) {
    std::uint64_t blocks = 1 - counts[0];
    for (std::size_t n = 1; n < counts.size(); ++n) blocks += static_cast<std::uint64_t>(s) * counts[n - 1] - counts[n];
    return blocks;
}

}  // namespace

void ExperimentConfig::validate() const {
    try {
        Alphabet alphabet(alphabet_size);
        (void)alphabet;
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (depth < 0) throw ConfigError("depth must be nonnegative");
    if (effective_precision() < depth) {
        throw ConfigError("precision " + std::to_string(effective_precision()) + " is below depth " +
                          std::to_string(depth));
    }
    if (replicates && *replicates < 1) throw ConfigError("replicates must be at least 1");
    if (t && !(*t > 0.0 && std::isfinite(*t))) throw ConfigError("t must be positive and finite");
    for (double v : t_grid) {
        if (!(v > 0.0 && std::isfinite(v))) throw ConfigError("every t in the grid must be positive and finite");
    }
    if (!(tol > 0.0)) throw ConfigError("tolerance must be positive");
    if (horizon < 1) throw ConfigError("horizon must be at least 1");
}

std::uint64_t default_seed() {
    if (const char* env = std::getenv("SEGCOAL_SEED")) {
        char* end = nullptr;
        const unsigned long long v = std::strtoull(env, &end, 0);
        if (end != env && *end == '\0') return v;
    }
    return kDefaultSeed;
}

std::uint64_t replicate_seed(std::uint64_t seed, std::size_t index) { return derive_key(seed, index + 1); }

void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i) body(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        for (std::size_t i = next++; i < count; i = next++) {
            try {
                body(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = count;
            }
        }
    };
    std::vector<std::thread> pool;
    for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

int cmd_classify(const ExperimentConfig& config, std::ostream& out) {
    const Alphabet alphabet(config.alphabet_size);
    const RateFamily rates = parse_rates(config.rates);
    const TailMeta tail = tail_of(rates, alphabet);
    Phase phase;
    try {
        phase = classify(alphabet, tail);
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    if (format_or(config, OutputFormat::Json) == OutputFormat::Csv) {
        out << "alphabet_size,rates,phase,t0,seed\n"
            << config.alphabet_size << ',' << rates.describe() << ',' << to_string(phase.label) << ','
            << (phase.critical_time ? fmt(*phase.critical_time) : "") << ',' << config.seed << '\n';
        return 0;
    }
    Json j = header(config);
    j["phase"] = to_string(phase.label);
    if (phase.critical_time) j["t0"] = *phase.critical_time;
    j["alphabet_size"] = config.alphabet_size;
    j["rates"] = rates.describe();
    j["tail"] = to_json(tail);
    emit(out, j);
    return 0;
}

int cmd_simulate(const ExperimentConfig& config, std::ostream& out) {
    const RateFamily rates = parse_rates(config.rates);
    const double t = required_time(config);
    const std::size_t replicates = config.replicates.value_or(1000);
    const int s = config.alphabet_size;
    store_config(config, rates, t, config.seed);

    struct Result {
        std::vector<std::uint64_t> counts;
        std::optional<BlockDecomposition> decomposition;
    };
    std::vector<Result> results(replicates);
    parallel_for(replicates, config.threads, [&](std::size_t i) {
        EventStore store(store_config(config, rates, t, replicate_seed(config.seed, i)));
        if (config.emit_blocks) {
            auto d = decompose(store, t, DecomposeOptions{true});
            results[i].counts = d.b_counts;
            results[i].decomposition = std::move(d);
        } else {
            results[i].counts = survivor_counts(store, t);
        }
    });

    const double cells = std::pow(static_cast<double>(s), config.depth);
    std::vector<double> empty, measure, blocks;
    std::vector<std::vector<double>> per_level(static_cast<std::size_t>(config.depth) + 1);
    Json rows = Json::array();
    for (std::size_t i = 0; i < replicates; ++i) {
        const auto& c = results[i].counts;
        const double m = static_cast<double>(c.back()) / cells;
        const std::uint64_t nb = block_count(c, s);
        empty.push_back(c.back() == 0 ? 1.0 : 0.0);
        measure.push_back(m);
        blocks.push_back(static_cast<double>(nb));
        for (std::size_t n = 0; n < c.size(); ++n) per_level[n].push_back(static_cast<double>(c[n]));
        Json row{{"replicate", i}, {"seed", replicate_seed(config.seed, i)}, {"dust_empty", c.back() == 0}};
        try {
            row["dust_measure"] =
                Rational(static_cast<Rational::Int>(c.back()), checked_pow(s, config.depth)).to_string();
        } catch (const std::overflow_error&) {
            row["dust_measure"] = nullptr;
        }
        row["dust_measure_value"] = m;
        row["block_count"] = nb;
        if (results[i].decomposition) {
            row["decomposition"] = to_json(*results[i].decomposition, Alphabet(s));
        } else {
            row["b_counts"] = c;
        }
        rows.push_back(std::move(row));
    }

    const Stat empty_stat = summarize(empty);
    const Stat measure_stat = summarize(measure);
    const Stat block_stat = summarize(blocks);
    const double expected_measure = std::exp(-t * rates.partial_sum(0, config.depth));

    if (format_or(config, OutputFormat::Json) == OutputFormat::Csv) {
        out << "quantity,mean,se,replicates,seed\n";
        auto line = [&](const std::string& name, const Stat& st) {
            out << name << ',' << fmt(st.mean) << ',' << fmt(st.se) << ',' << replicates << ',' << config.seed
                << '\n';
        };
        line("dust_empty_frequency", empty_stat);
        line("dust_measure", measure_stat);
        line("block_count", block_stat);
        for (std::size_t n = 0; n < per_level.size(); ++n) line("b_" + std::to_string(n), summarize(per_level[n]));
        return 0;
    }

    Json j = header(config);
    j["config"] = config_json(config, rates);
    j["config"]["t"] = t;
    j["config"]["replicates"] = replicates;
    Json agg{{"replicates", replicates},
             {"dust_empty_frequency", to_json(empty_stat, replicates)},
             {"dust_measure", to_json(measure_stat, replicates)},
             {"block_count", to_json(block_stat, replicates)},
             {"expected_dust_measure", expected_measure}};
    Json levels = Json::array();
    for (std::size_t n = 0; n < per_level.size(); ++n) {
        const Stat st = summarize(per_level[n]);
        levels.push_back(Json{{"n", n}, {"mean", st.mean}, {"se", st.se}});
    }
    agg["b_counts"] = std::move(levels);
    j["aggregate"] = std::move(agg);
    j["replicates"] = std::move(rows);
    emit(out, j);
    return 0;
}

int cmd_gwve(const ExperimentConfig& config, std::ostream& out) {
    const RateFamily rates = parse_rates(config.rates);
    const double t = required_time(config);
    GwveSpec spec{Alphabet(config.alphabet_size), rates, t};
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
    const auto levels = static_cast<std::size_t>(config.depth) + 1;

    std::vector<Stat> mc;
    std::size_t replicates = 0;
    if (config.monte_carlo) {
        replicates = config.replicates.value_or(1000);
        std::vector<std::vector<std::uint64_t>> runs(replicates);
        parallel_for(replicates, config.threads, [&](std::size_t i) {
            SplitMix64 rng(replicate_seed(config.seed, i));
            runs[i] = simulate(spec, config.depth, rng);
        });
        for (std::size_t n = 0; n < levels; ++n) {
            std::vector<double> xs;
            xs.reserve(replicates);
            for (const auto& r : runs) xs.push_back(static_cast<double>(r[n]));
            mc.push_back(summarize(xs));
        }
    }
    std::optional<ExtinctionLimit> limit;
    if (config.limit) limit = extinct_prob_limit(spec, config.tol);

    if (format_or(config, OutputFormat::Json) == OutputFormat::Csv) {
        out << "n,m,mean_b,extinct_prob_by";
        if (config.monte_carlo) out << ",mc_mean_b,mc_se,replicates";
        out << ",seed\n";
        for (std::size_t n = 0; n < levels; ++n) {
            const int k = static_cast<int>(n);
            out << n << ',' << fmt(m(spec, k)) << ',' << fmt(mean_b(spec, k)) << ',' << fmt(extinct_prob_by(spec, k));
            if (config.monte_carlo) out << ',' << fmt(mc[n].mean) << ',' << fmt(mc[n].se) << ',' << replicates;
            out << ',' << config.seed << '\n';
        }
        if (limit) {
            out << "inf,,," << fmt(limit->value);
            if (config.monte_carlo) out << ",,,";
            out << ',' << config.seed << '\n';
        }
        return 0;
    }

    Json j = header(config);
    j["config"] = Json{{"alphabet_size", config.alphabet_size},
                       {"rates", rates.describe()},
                       {"t", t},
                       {"depth", config.depth},
                       {"tol", config.tol}};
    if (limit) j["extinct_prob_limit"] = to_json(*limit);
    j["extinct_prob_by"] = Json{{"n", config.depth}, {"value", extinct_prob_by(spec, config.depth)}};
    Json table = Json::array();
    for (std::size_t n = 0; n < levels; ++n) {
        const int k = static_cast<int>(n);
        Json row{{"n", n},
                 {"m", number(m(spec, k))},
                 {"mean_b", number(mean_b(spec, k))},
                 {"extinct_prob_by", extinct_prob_by(spec, k)}};
        if (config.monte_carlo) row["monte_carlo"] = to_json(mc[n], replicates);
        table.push_back(std::move(row));
    }
    j["levels"] = std::move(table);
    try {
        j["degeneracy"] = to_json(degeneracy_test(spec, config.horizon, config.tol));
    } catch (const std::invalid_argument& e) {
        j["degeneracy"] = Json{{"error", e.what()}};
    }
    emit(out, j);
    return 0;
}

int cmd_dimension(const ExperimentConfig& config, std::ostream& out) {
    const Alphabet alphabet(config.alphabet_size);
    const RateFamily rates = parse_rates(config.rates);
    const TailMeta tail = tail_of(rates, alphabet);
    if (config.geometry != GeometryKind::CantorSet) {
        throw ConfigError("dimension estimates need the cantor geometry");
    }
    if (config.depth < 1) throw ConfigError("dimension estimates need depth >= 1");
    std::vector<double> times;
    if (!config.t_grid.empty()) {
        for (double v : config.t_grid) times.push_back(resolve_time(config, v));
    } else {
        times.push_back(required_time(config));
    }
    const std::size_t replicates = config.replicates.value_or(1000);

    std::ofstream regression;
    if (!config.regression_csv.empty()) {
        regression.open(config.regression_csv);
        if (!regression) throw ConfigError("cannot write " + config.regression_csv);
    }

    std::vector<DimensionReport> reports;
    for (std::size_t k = 0; k < times.size(); ++k) {
        const double t = times[k];
        const std::uint64_t seed = derive_key(config.seed, 0x64696dULL + k);
        store_config(config, rates, t, seed);
        std::vector<std::vector<std::uint64_t>> counts(replicates);
        parallel_for(replicates, config.threads, [&](std::size_t i) {
            EventStore store(store_config(config, rates, t, replicate_seed(seed, i)));
            counts[i] = survivor_counts(store, t);
        });
        DimensionReport r;
        try {
            r = dust_dimension_empirical(counts, alphabet, config.geometry, t);
        } catch (const std::invalid_argument&) {
            r.t = t;
            r.empirical_dim = std::numeric_limits<double>::quiet_NaN();
            r.std_error = std::numeric_limits<double>::quiet_NaN();
            r.replicates_total = replicates;
            r.fit_from = (config.depth + 1) / 2;
            r.fit_to = config.depth;
        }
        r.analytic_dim = dust_dimension_analytic(alphabet, config.geometry, tail.cesaro_limsup, t);
        reports.push_back(r);
        if (regression.is_open()) write_regression_csv(regression, t, counts, config.seed, k == 0);
    }

    double ss_res = 0.0, ss_tot = 0.0, mean_emp = 0.0;
    std::size_t fitted = 0;
    for (const auto& r : reports) {
        if (std::isnan(r.empirical_dim)) continue;
        mean_emp += r.empirical_dim;
        ++fitted;
    }
    if (fitted) mean_emp /= static_cast<double>(fitted);
    for (const auto& r : reports) {
        if (std::isnan(r.empirical_dim)) continue;
        ss_res += (r.empirical_dim - r.analytic_dim) * (r.empirical_dim - r.analytic_dim);
        ss_tot += (r.empirical_dim - mean_emp) * (r.empirical_dim - mean_emp);
    }
    const double r_squared =
        fitted >= 2 && ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : std::numeric_limits<double>::quiet_NaN();

    if (format_or(config, OutputFormat::Csv) == OutputFormat::Csv) {
        out << "t,analytic,empirical,stderr,replicates_used,replicates_total,seed\n";
        for (const auto& r : reports) {
            out << fmt(r.t) << ',' << fmt(r.analytic_dim) << ',' << fmt(r.empirical_dim) << ',' << fmt(r.std_error)
                << ',' << r.replicates_used << ',' << r.replicates_total << ',' << config.seed << '\n';
        }
        return 0;
    }
    Json j = header(config);
    j["config"] = config_json(config, rates);
    j["config"]["replicates"] = replicates;
    Json pts = Json::array();
    for (const auto& r : reports) {
        Json jr = to_json(r);
        jr["empirical_dim"] = number(r.empirical_dim);
        jr["std_error"] = number(r.std_error);
        pts.push_back(std::move(jr));
    }
    j["points"] = std::move(pts);
    j["r_squared"] = number(r_squared);
    emit(out, j);
    return 0;
}

int cmd_flowcheck(const ExperimentConfig& config, std::ostream& out) {
    const RateFamily rates = parse_rates(config.rates);
    const double horizon = config.t ? resolve_time(config, *config.t) : 1.0;
    const std::size_t stores = config.replicates.value_or(1);
    store_config(config, rates, horizon, config.seed);

    std::vector<FlowCheckReport> reports(stores);
    parallel_for(stores, config.threads, [&](std::size_t i) {
        const std::uint64_t seed = replicate_seed(config.seed, i);
        EventStore store(store_config(config, rates, horizon, seed));
        SplitMix64 rng(derive_key(seed, 0x666c6f77ULL));
        reports[i] = verify_flow_property(store, config.samples, rng);
    });
    std::size_t samples = 0, violations = 0;
    for (const auto& r : reports) {
        samples += r.samples;
        violations += r.violations;
    }

    if (format_or(config, OutputFormat::Json) == OutputFormat::Csv) {
        out << "replicate,seed,samples,violations\n";
        for (std::size_t i = 0; i < stores; ++i) {
            out << i << ',' << replicate_seed(config.seed, i) << ',' << reports[i].samples << ','
                << reports[i].violations << '\n';
        }
    } else {
        Json j = header(config);
        j["config"] = config_json(config, rates);
        j["config"]["horizon"] = horizon;
        j["config"]["stores"] = stores;
        j["samples"] = samples;
        j["violations"] = violations;
        j["passed"] = violations == 0;
        Json per = Json::array();
        for (std::size_t i = 0; i < stores; ++i) {
            Json r = to_json(reports[i], Alphabet(config.alphabet_size));
            r["replicate"] = i;
            r["seed"] = replicate_seed(config.seed, i);
            per.push_back(std::move(r));
        }
        j["stores"] = std::move(per);
        emit(out, j);
    }
    return violations == 0 ? 0 : 1;
}

int cmd_events(const ExperimentConfig& config, std::ostream& out) {
    const RateFamily rates = parse_rates(config.rates);
    const double horizon = config.t ? resolve_time(config, *config.t) : 1.0;
    EventStore store(store_config(config, rates, horizon, config.seed));
    const auto events = store.all_events(config.depth);
    if (format_or(config, OutputFormat::Csv) == OutputFormat::Json) {
        Json j = header(config);
        j["config"] = config_json(config, rates);
        j["config"]["horizon"] = horizon;
        Json list = Json::array();
        const Alphabet alphabet(config.alphabet_size);
        for (const auto& e : events) {
            list.push_back(
                Json{{"time", e.time}, {"word", e.word.to_string(alphabet)}, {"parent", e.parent.to_string(alphabet)}});
        }
        j["events"] = std::move(list);
        emit(out, j);
        return 0;
    }
    write_events_csv(out, events, Alphabet(config.alphabet_size), config.seed);
    return 0;
}

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err) {
    try {
        config.validate();
        if (config.command == "classify") return cmd_classify(config, out);
        if (config.command == "simulate") return cmd_simulate(config, out);
        if (config.command == "gwve") return cmd_gwve(config, out);
        if (config.command == "dimension") return cmd_dimension(config, out);
        if (config.command == "flowcheck") return cmd_flowcheck(config, out);
        if (config.command == "events") return cmd_events(config, out);
        throw ConfigError("unknown command '" + config.command + "'");
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        err << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
}

}  // namespace segcoal::cli
