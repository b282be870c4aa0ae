#include "segcoal/rates.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace segcoal {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

template <class... Ts>
struct Overloaded : Ts... {
    using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void require_rate(double v, const char* what) {
    if (!std::isfinite(v) || v < 0.0) {
        throw std::invalid_argument(std::string(what) + " must be a finite nonnegative number");
    }
}

double parse_number(std::string_view tok, const char* what) {
    if (tok == "inf") return kInf;
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw std::invalid_argument("cannot parse " + std::string(what) + " from '" + std::string(tok) + "'");
    }
    return v;
}

int parse_int(std::string_view tok, const char* what) {
    int v = 0;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
        throw std::invalid_argument("cannot parse " + std::string(what) + " from '" + std::string(tok) + "'");
    }
    return v;
}

std::string format_number(double v) {
    if (std::isinf(v)) return "inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

std::vector<std::string_view> split(std::string_view text, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = text.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(text.substr(start));
            return out;
        }
        out.push_back(text.substr(start, pos - start));
        start = pos + 1;
    }
}

TailMeta zero_tail() { return TailMeta{true, 0.0, 0.0}; }

RateFamily parse_table(std::string_view body) {
    auto parts = split(body, ';');
    std::vector<double> values;
    for (auto tok : split(parts[0], ',')) values.push_back(parse_number(tok, "table rate"));
    if (parts.size() == 1) return RateFamily::table(std::move(values));

    std::optional<bool> weighted;
    std::optional<double> sum;
    std::optional<double> limsup;
    for (std::size_t i = 1; i < parts.size(); ++i) {
        auto eq = parts[i].find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("table tail entries must be key=value, got '" + std::string(parts[i]) + "'");
        }
        auto key = parts[i].substr(0, eq);
        auto val = parts[i].substr(eq + 1);
        if (key == "weighted") {
            if (val == "finite") {
                weighted = true;
            } else if (val == "inf") {
                weighted = false;
            } else {
                throw std::invalid_argument("weighted must be 'finite' or 'inf'");
            }
        } else if (key == "sum") {
            sum = parse_number(val, "sum");
        } else if (key == "limsup") {
            limsup = parse_number(val, "limsup");
        } else {
            throw std::invalid_argument("unknown table tail key '" + std::string(key) + "'");
        }
    }
    if (!weighted || !sum || !limsup) {
        throw std::invalid_argument("a table tail declaration needs all of weighted=, sum= and limsup=");
    }
    return RateFamily::table(std::move(values), TailMeta{*weighted, *sum, *limsup});
}

}  // namespace

void TailMeta::validate() const {
    if (std::isnan(sum) || sum < 0.0) throw std::invalid_argument("tail sum must lie in [0, inf]");
    if (std::isnan(cesaro_limsup) || cesaro_limsup < 0.0) {
        throw std::invalid_argument("Cesaro limsup must lie in [0, inf]");
    }
    if (sum_weighted_finite && std::isinf(sum)) {
        throw std::invalid_argument("inconsistent tail: weighted sum finite but plain sum infinite");
    }
    if (std::isfinite(sum) && cesaro_limsup != 0.0) {
        throw std::invalid_argument("inconsistent tail: finite sum forces a zero Cesaro limsup");
    }
}

RateFamily RateFamily::constant(double c) {
    require_rate(c, "constant rate");
    return RateFamily(rate_kinds::Constant{c});
}

RateFamily RateFamily::geometric(double a, double q) {
    require_rate(a, "geometric prefactor");
    if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("geometric ratio must lie in (0, 1)");
    return RateFamily(rate_kinds::Geometric{a, q});
}

RateFamily RateFamily::harmonic(double c) {
    require_rate(c, "harmonic constant");
    return RateFamily(rate_kinds::Harmonic{c});
}

RateFamily RateFamily::linear(double c) {
    require_rate(c, "linear slope");
    return RateFamily(rate_kinds::Linear{c});
}

RateFamily RateFamily::truncated(RateFamily inner, int depth) {
    if (depth < 0) throw std::invalid_argument("truncation depth must be nonnegative");
    return RateFamily(rate_kinds::Truncated{std::make_shared<const RateFamily>(std::move(inner)), depth});
}

RateFamily RateFamily::table(std::vector<double> values, std::optional<TailMeta> declared_tail) {
    if (values.empty()) throw std::invalid_argument("rate table must not be empty");
    for (double v : values) require_rate(v, "table rate");
    if (declared_tail) declared_tail->validate();
    return RateFamily(rate_kinds::Table{std::move(values), declared_tail});
}

RateFamily RateFamily::parse(std::string_view text) {
    auto colon = text.find(':');
    auto head = text.substr(0, colon);
    auto rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);

    if (head == "zero" && rest.empty()) return zero();
    if (head == "truncated") {
        auto last = rest.rfind(':');
        if (last == std::string_view::npos) {
            throw std::invalid_argument("truncated rates need the form truncated:<family>:N");
        }
        return truncated(parse(rest.substr(0, last)), parse_int(rest.substr(last + 1), "truncation depth"));
    }
    if (head == "table") {
        if (rest.empty()) throw std::invalid_argument("table rates need at least one value");
        return parse_table(rest);
    }

    auto args = rest.empty() ? std::vector<std::string_view>{} : split(rest, ':');
    auto expect = [&](std::size_t n) {
        if (args.size() != n) {
            throw std::invalid_argument("rate family '" + std::string(head) + "' takes " + std::to_string(n) +
                                        " parameter(s)");
        }
    };
    if (head == "constant") {
        expect(1);
        return constant(parse_number(args[0], "constant rate"));
    }
    if (head == "geometric") {
        expect(2);
        return geometric(parse_number(args[0], "geometric prefactor"), parse_number(args[1], "geometric ratio"));
    }
    if (head == "harmonic") {
        expect(1);
        return harmonic(parse_number(args[0], "harmonic constant"));
    }
    if (head == "linear") {
        expect(1);
        return linear(parse_number(args[0], "linear slope"));
    }
    throw std::invalid_argument("unknown rate family '" + std::string(text) + "'");
}

double RateFamily::rate(int n) const {
    if (n < 0) throw std::out_of_range("rate index must be nonnegative");
    return std::visit(Overloaded{
                          [](const rate_kinds::Constant& k) { return k.c; },
                          [n](const rate_kinds::Geometric& k) { return k.a * std::pow(k.q, n); },
                          [n](const rate_kinds::Harmonic& k) { return n == 0 ? 0.0 : k.c / n; },
                          [n](const rate_kinds::Linear& k) { return k.c * n; },
                          [n](const rate_kinds::Truncated& k) { return n > k.depth ? 0.0 : k.inner->rate(n); },
                          [n](const rate_kinds::Table& k) {
                              auto i = std::min<std::size_t>(static_cast<std::size_t>(n), k.values.size() - 1);
                              return k.values[i];
                          },
                      },
                      kind_);
}

double RateFamily::partial_sum(int lo, int hi) const {
    double s = 0.0;
    for (int n = lo; n <= hi; ++n) s += rate(n);
    return s;
}

TailMeta RateFamily::analytics(Alphabet alphabet) const {
    if (is_zero()) return zero_tail();
    const double s = alphabet.size();
    return std::visit(Overloaded{
                          [](const rate_kinds::Constant& k) { return TailMeta{false, kInf, k.c}; },
                          [s](const rate_kinds::Geometric& k) {
                              return TailMeta{k.q * s < 1.0, k.a / (1.0 - k.q), 0.0};
                          },
                          [](const rate_kinds::Harmonic&) { return TailMeta{false, kInf, 0.0}; },
                          [](const rate_kinds::Linear&) { return TailMeta{false, kInf, kInf}; },
                          [this](const rate_kinds::Truncated& k) {
                              return TailMeta{true, partial_sum(0, k.depth), 0.0};
                          },
                          [](const rate_kinds::Table& k) {
                              if (!k.declared_tail) {
                                  throw std::invalid_argument(
                                      "rate table has no declared tail: the phase depends on sum |S|^n r_n, "
                                      "sum r_n and limsup (1/n) sum r_j, none of which a finite table "
                                      "determines; append ;weighted=finite|inf;sum=X|inf;limsup=X|inf");
                              }
                              return *k.declared_tail;
                          },
                      },
                      kind_);
}

TailShape RateFamily::tail_shape() const {
    using K = TailShape::Kind;
    return std::visit(Overloaded{
                          [](const rate_kinds::Constant&) { return TailShape{K::EventuallyConstant, 0}; },
                          [](const rate_kinds::Geometric&) { return TailShape{K::NonIncreasing, 0}; },
                          [](const rate_kinds::Harmonic&) { return TailShape{K::NonIncreasing, 1}; },
                          [](const rate_kinds::Linear&) { return TailShape{K::NonDecreasing, 0}; },
                          [](const rate_kinds::Truncated& k) { return TailShape{K::EventuallyConstant, k.depth + 1}; },
                          [](const rate_kinds::Table& k) {
                              return TailShape{K::EventuallyConstant, static_cast<int>(k.values.size()) - 1};
                          },
                      },
                      kind_);
}

bool RateFamily::is_zero() const {
    return std::visit(Overloaded{
                          [](const rate_kinds::Constant& k) { return k.c == 0.0; },
                          [](const rate_kinds::Geometric& k) { return k.a == 0.0; },
                          [](const rate_kinds::Harmonic& k) { return k.c == 0.0; },
                          [](const rate_kinds::Linear& k) { return k.c == 0.0; },
                          [](const rate_kinds::Truncated& k) {
                              if (k.inner->is_zero()) return true;
                              for (int n = 0; n <= k.depth; ++n) {
                                  if (k.inner->rate(n) > 0.0) return false;
                              }
                              return true;
                          },
                          [](const rate_kinds::Table& k) {
                              for (double v : k.values) {
                                  if (v > 0.0) return false;
                              }
                              return true;
                          },
                      },
                      kind_);
}

std::string RateFamily::describe() const {
    return std::visit(
        Overloaded{
            [](const rate_kinds::Constant& k) { return "constant:" + format_number(k.c); },
            [](const rate_kinds::Geometric& k) {
                return "geometric:" + format_number(k.a) + ":" + format_number(k.q);
            },
            [](const rate_kinds::Harmonic& k) { return "harmonic:" + format_number(k.c); },
            [](const rate_kinds::Linear& k) { return "linear:" + format_number(k.c); },
            [](const rate_kinds::Truncated& k) {
                return "truncated:" + k.inner->describe() + ":" + std::to_string(k.depth);
            },
            [](const rate_kinds::Table& k) {
                std::string out = "table:";
                for (std::size_t i = 0; i < k.values.size(); ++i) {
                    if (i > 0) out += ",";
                    out += format_number(k.values[i]);
                }
                if (k.declared_tail) {
                    out += std::string(";weighted=") + (k.declared_tail->sum_weighted_finite ? "finite" : "inf");
                    out += ";sum=" + format_number(k.declared_tail->sum);
                    out += ";limsup=" + format_number(k.declared_tail->cesaro_limsup);
                }
                return out;
            },
        },
        kind_);
}

}  // namespace segcoal
