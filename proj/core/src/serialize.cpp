#include "segcoal/serialize.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace segcoal {

Json number(double v) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (std::isnan(v)) return "nan";
    return v;
}

Json to_json(const TailMeta& tail) {
    return Json{{"sum_weighted_finite", tail.sum_weighted_finite},
                {"sum", number(tail.sum)},
                {"cesaro_limsup", number(tail.cesaro_limsup)}};
}

Json to_json(const Phase& phase) {
    Json j{{"phase", to_string(phase.label)}};
    if (phase.critical_time) j["t0"] = *phase.critical_time;
    return j;
}

Json to_json(const BlockDecomposition& d, Alphabet alphabet) {
    Json blocks = Json::array();
    for (const auto& b : d.blocks) {
        Json jb{{"word", b.top.to_string(alphabet)}};
        jb["atom"] = b.atom ? Json(b.atom->to_string(alphabet)) : Json(nullptr);
        jb["mass"] = b.mass.to_string();
        blocks.push_back(std::move(jb));
    }
    return Json{{"t", d.t},
                {"depth", d.depth},
                {"dust_measure", d.dust_measure.to_string()},
                {"dust_measure_value", d.dust_measure.to_double()},
                {"blocks", std::move(blocks)},
                {"b_counts", d.b_counts}};
}

Json to_json(const GVerdict& g) {
    Json j{{"verdict", to_string(g.kind)},
           {"partial_sum", number(g.partial_sum)},
           {"terms", g.terms},
           {"certificate", g.certificate}};
    if (g.kind == GVerdict::Kind::Finite) {
        j["value"] = number(g.value);
        j["error_bound"] = number(g.error_bound);
    }
    return j;
}

Json to_json(const ExtinctionLimit& e) {
    return Json{{"value", e.value}, {"n_reached", e.n_reached}, {"converged", e.converged}, {"tol", e.tol}};
}

Json to_json(const DegeneracyReport& r) {
    Json j{{"t", r.t},
           {"inf_m", to_string(r.inf_m)},
           {"inf_m_positive", r.inf_m == InfM::Positive},
           {"inf_m_reason", r.inf_m_reason},
           {"g", to_json(r.g)},
           {"degenerate", r.degenerate},
           {"decided", r.decided},
           {"method", r.method},
           {"horizon", r.horizon},
           {"tol", r.tol}};
    if (r.fallback) j["fallback"] = to_json(*r.fallback);
    return j;
}

Json to_json(const DimensionReport& r) {
    return Json{{"t", r.t},
                {"analytic_dim", r.analytic_dim},
                {"empirical_dim", r.empirical_dim},
                {"std_error", r.std_error},
                {"conditioned_on_survival", r.conditioned_on_survival},
                {"replicates_used", r.replicates_used},
                {"replicates_total", r.replicates_total},
                {"fit_levels", Json::array({r.fit_from, r.fit_to})}};
}

Json to_json(const FlowCheckReport& r, Alphabet alphabet) {
    Json j{{"samples", r.samples}, {"violations", r.violations}, {"passed", r.passed()}};
    if (r.first_violation) {
        const auto& v = *r.first_violation;
        j["counterexample"] = Json{{"x", v.x.to_string(alphabet)},
                                   {"s", v.s},
                                   {"t", v.t},
                                   {"v", v.v},
                                   {"direct", v.direct.to_string(alphabet)},
                                   {"composed", v.composed.to_string(alphabet)}};
    }
    return j;
}

void write_regression_csv(std::ostream& out, double t, std::span<const std::vector<std::uint64_t>> counts,
                          std::uint64_t seed, bool header) {
    if (header) out << "t,replicate,n,log_b,seed\n";
    char buf[64];
    char tbuf[64];
    std::snprintf(tbuf, sizeof tbuf, "%.17g", t);
    for (std::size_t i = 0; i < counts.size(); ++i) {
        const auto& c = counts[i];
        if (c.empty() || c.back() == 0) continue;
        const int depth = static_cast<int>(c.size()) - 1;
        for (int n = (depth + 1) / 2; n <= depth; ++n) {
            std::snprintf(buf, sizeof buf, "%.17g", std::log(static_cast<double>(c[static_cast<std::size_t>(n)])));
            out << tbuf << ',' << i << ',' << n << ',' << buf << ',' << seed << '\n';
        }
    }
}

}  // namespace segcoal
