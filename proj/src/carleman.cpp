#include "eseries/carleman.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "eseries/exact_coeffs.hpp"
#include "eseries/expansion.hpp"

namespace eseries {

namespace {

void validate(const WeightFamily& f) {
    switch (f.kind) {
        case WeightFamily::Kind::yang_param:
            if (f.c <= 0) throw std::domain_error("WeightFamily: yang parameter c must be > 0");
            break;
        case WeightFamily::Kind::b_series:
        case WeightFamily::Kind::d_series:
            if (f.depth < 1) throw std::domain_error("WeightFamily: series depth K must be >= 1");
            break;
        default:
            break;
    }
}

Rational series_weight_exact(const WeightFamily& f, long n) {
    const bool is_b = f.kind == WeightFamily::Kind::b_series;
    Rational t = is_b ? Rational(1, n + 1) : Rational(12, 12 * n + 11);
    Rational sum(0);
    for (std::size_t k = f.depth; k >= 1; --k) {
        sum = (sum + (is_b ? b_coeff(k) : d_from_recurrence(k))) * t;
    }
    return Rational(1) - sum;
}

int env_workers() {
    const char* raw = std::getenv("ESERIES_WORKERS");
    if (raw == nullptr) return 1;
    long v = std::strtol(raw, nullptr, 10);
    long hw = static_cast<long>(std::thread::hardware_concurrency());
    if (hw < 1) hw = 1;
    return static_cast<int>(std::clamp(v, 1L, hw));
}

// Fixed-size chunks: the decomposition never depends on the worker count,
// only the assignment of chunks to threads does.
constexpr long kChunk = 2048;

template <typename PerChunk>
void run_chunked(long n_max, int workers, PerChunk&& per_chunk) {
    const long chunks = (n_max + kChunk - 1) / kChunk;
    if (workers <= 1) {
        for (long c = 0; c < chunks; ++c) per_chunk(c);
        return;
    }
    std::atomic<long> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (long c = next.fetch_add(1); c < chunks && !failed.load(); c = next.fetch_add(1)) {
            try {
                per_chunk(c);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) error = std::current_exception();
            }
        }
        mpfr_free_cache();  // drop this thread's transcendental caches
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(error);
}

void warm_tables(const std::vector<WeightFamily>& families) {
    for (const auto& f : families) {
        if (f.kind == WeightFamily::Kind::b_series) b_coeff(f.depth);
        if (f.kind == WeightFamily::Kind::d_series) d_from_recurrence(f.depth);
    }
}

}  // namespace

WeightFamily WeightFamily::classical() { return {Kind::classical_e, Rational(1), 0}; }
WeightFamily WeightFamily::bicheng() { return {Kind::bicheng_debnath, Rational(1), 0}; }
WeightFamily WeightFamily::ping() { return {Kind::ping_guozheng, Rational(1), 0}; }
WeightFamily WeightFamily::yang(Rational c) {
    WeightFamily f{Kind::yang_param, std::move(c), 0};
    validate(f);
    return f;
}
WeightFamily WeightFamily::b_weights(std::size_t depth) {
    WeightFamily f{Kind::b_series, Rational(1), depth};
    validate(f);
    return f;
}
WeightFamily WeightFamily::d_weights(std::size_t depth) {
    WeightFamily f{Kind::d_series, Rational(1), depth};
    validate(f);
    return f;
}

WeightFamily WeightFamily::parse(std::string_view text) {
    auto colon = text.find(':');
    std::string_view head = text.substr(0, colon);
    std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    auto depth_of = [&](std::string_view s) {
        if (s.empty()) throw std::invalid_argument("weight family: missing series depth K");
        return static_cast<std::size_t>(std::stoul(std::string(s)));
    };
    if (head == "classical" || head == "classical-e") return classical();
    if (head == "bicheng-debnath") return bicheng();
    if (head == "ping-guozheng") return ping();
    if (head == "yang") return yang(arg.empty() ? Rational(1) : parse_rational(arg));
    if (head == "b-series") return b_weights(depth_of(arg));
    if (head == "d-series") return d_weights(depth_of(arg));
    throw std::invalid_argument("unknown weight family: '" + std::string(text) + "'");
}

std::string WeightFamily::name() const {
    switch (kind) {
        case Kind::classical_e: return "classical";
        case Kind::bicheng_debnath: return "bicheng-debnath";
        case Kind::ping_guozheng: return "ping-guozheng";
        case Kind::yang_param: return "yang:" + to_string(c);
        case Kind::b_series: return "b-series:" + std::to_string(depth);
        case Kind::d_series: return "d-series:" + std::to_string(depth);
    }
    throw std::invalid_argument("unknown weight family kind");
}

std::optional<Rational> weight_exact(const WeightFamily& family, long n) {
    if (n < 1) throw std::domain_error("weight: requires n >= 1");
    validate(family);
    switch (family.kind) {
        case WeightFamily::Kind::classical_e:
            return Rational(1);
        case WeightFamily::Kind::bicheng_debnath:
            return Rational(1) - Rational(1, 2 * n + 2);
        case WeightFamily::Kind::b_series:
        case WeightFamily::Kind::d_series:
            return series_weight_exact(family, n);
        default:
            return std::nullopt;
    }
}

Real weight(const WeightFamily& family, long n, const PrecisionContext& ctx) {
    if (auto q = weight_exact(family, n)) return ctx.real(*q);
    if (family.kind == WeightFamily::Kind::ping_guozheng) {
        // (1 + 1/(n+1/5))^{-1/2} == sqrt((5n+1)/(5n+6))
        return sqrt(ctx.real(Rational(5 * n + 1, 5 * n + 6)));
    }
    // yang: (1 - 1/(2cn + 4c/3 + 1/2))^c
    Rational den = 2 * family.c * n + Rational(4) * family.c / 3 + Rational(1, 2);
    Rational base = Rational(1) - Rational(1) / den;
    if (base <= 0) {
        throw std::domain_error("weight: yang base is not positive at n=" + std::to_string(n) +
                                " for c=" + to_string(family.c));
    }
    return pow(ctx.real(base), ctx.real(family.c));
}

Real weight_accumulated(const WeightFamily& family, long n, const PrecisionContext& ctx) {
    if (n < 1) throw std::domain_error("weight_accumulated: requires n >= 1");
    validate(family);
    if (family.kind != WeightFamily::Kind::b_series && family.kind != WeightFamily::Kind::d_series) {
        return weight(family, n, ctx);
    }
    const bool is_b = family.kind == WeightFamily::Kind::b_series;
    Real t = 1L / (ctx.real(n) + ctx.real(is_b ? Rational(1) : Rational(11, 12)));
    Real sum = ctx.real(0L);
    for (std::size_t k = family.depth; k >= 1; --k) {
        sum = (sum + ctx.real(is_b ? b_coeff(k) : d_from_recurrence(k))) * t;
    }
    return 1L - sum;
}

std::vector<MarginScan> margin_scan(const std::vector<WeightFamily>& families, long n_max,
                                    const PrecisionContext& ctx, int workers) {
    if (n_max < 1) throw std::domain_error("margin_scan: requires N >= 1");
    for (const auto& f : families) validate(f);
    warm_tables(families);
    if (workers <= 0) workers = env_workers();

    const Real e = ctx.e();
    const long chunks = (n_max + kChunk - 1) / kChunk;
    // Per chunk, per family: (min, argmin).
    std::vector<std::vector<std::pair<Real, long>>> partial(
        static_cast<std::size_t>(chunks));

    run_chunked(n_max, workers, [&](long c) {
        std::vector<std::pair<Real, long>> local;
        local.reserve(families.size());
        const long lo = c * kChunk + 1;
        const long hi = std::min(n_max, (c + 1) * kChunk);
        for (long n = lo; n <= hi; ++n) {
            Real p = pow_expr(n, ctx);
            for (std::size_t fi = 0; fi < families.size(); ++fi) {
                Real margin = e * weight(families[fi], n, ctx) - p;
                if (n == lo) {
                    local.emplace_back(margin, n);
                } else if (margin < local[fi].first) {
                    local[fi] = {margin, n};
                }
            }
        }
        partial[static_cast<std::size_t>(c)] = std::move(local);
    });

    std::vector<MarginScan> out;
    out.reserve(families.size());
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
        MarginScan scan{partial[0][fi].first, partial[0][fi].second, n_max};
        for (long c = 1; c < chunks; ++c) {
            if (partial[static_cast<std::size_t>(c)][fi].first < scan.min_margin) {
                scan.min_margin = partial[static_cast<std::size_t>(c)][fi].first;
                scan.argmin = partial[static_cast<std::size_t>(c)][fi].second;
            }
        }
        out.push_back(std::move(scan));
    }
    return out;
}

Real pointwise_margin(const WeightFamily& family, long n_max, const PrecisionContext& ctx) {
    return margin_scan({family}, n_max, ctx)[0].min_margin;
}

SequenceSpec SequenceSpec::geometric(Rational ratio) {
    SequenceSpec s{Kind::geometric, std::move(ratio), {}};
    s.validate();
    return s;
}
SequenceSpec SequenceSpec::power_decay(Rational exponent) {
    SequenceSpec s{Kind::power_decay, std::move(exponent), {}};
    s.validate();
    return s;
}
SequenceSpec SequenceSpec::finite_support(std::vector<Rational> values) {
    SequenceSpec s{Kind::finite_support, Rational(0), std::move(values)};
    s.validate();
    return s;
}

SequenceSpec SequenceSpec::parse(std::string_view text) {
    auto colon = text.find(':');
    std::string_view head = text.substr(0, colon);
    std::string_view arg = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
    if (head == "geometric") return geometric(arg.empty() ? Rational(1, 2) : parse_rational(arg));
    if (head == "power") return power_decay(arg.empty() ? Rational(2) : parse_rational(arg));
    if (head == "finite") {
        std::vector<Rational> vals;
        std::string buf(arg);
        std::size_t pos = 0;
        while (pos <= buf.size() && !buf.empty()) {
            std::size_t comma = buf.find(',', pos);
            std::string piece = buf.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
            if (!piece.empty()) vals.push_back(parse_rational(piece));
            if (comma == std::string::npos) break;
            pos = comma + 1;
        }
        if (vals.empty()) vals.emplace_back(1);
        return finite_support(std::move(vals));
    }
    throw std::invalid_argument("unknown sequence spec: '" + std::string(text) + "'");
}

std::string SequenceSpec::name() const {
    switch (kind) {
        case Kind::geometric: return "geometric:" + eseries::to_string(param);
        case Kind::power_decay: return "power:" + eseries::to_string(param);
        case Kind::finite_support: {
            std::string s = "finite:";
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) s += ',';
                s += eseries::to_string(values[i]);
            }
            return s;
        }
    }
    throw std::invalid_argument("unknown sequence kind");
}

void SequenceSpec::validate() const {
    switch (kind) {
        case Kind::geometric:
            if (param <= 0 || param >= 1) {
                throw std::domain_error("SequenceSpec: geometric ratio must lie in (0,1)");
            }
            break;
        case Kind::power_decay:
            if (param <= 1) {
                throw std::domain_error("SequenceSpec: power-decay exponent must be > 1 for a finite sum");
            }
            break;
        case Kind::finite_support: {
            if (values.empty()) throw std::domain_error("SequenceSpec: finite support needs values");
            bool any_positive = false;
            for (const auto& v : values) {
                if (v < 0) throw std::domain_error("SequenceSpec: terms must be nonnegative");
                if (v > 0) any_positive = true;
            }
            if (!any_positive) throw std::domain_error("SequenceSpec: sum must be positive");
            break;
        }
    }
}

InequalityReport finite_carleman_report(const SequenceSpec& seq, const WeightFamily& family,
                                        long n_max, const PrecisionContext& ctx) {
    if (n_max < 1) throw std::domain_error("finite_carleman_report: requires N >= 1");
    seq.validate();
    validate(family);

    const Real e = ctx.e();
    Real lhs = ctx.real(0L);
    Real rhs_sum = ctx.real(0L);
    Real log_prefix = ctx.real(0L);
    bool hit_zero = false;  // a zero term makes every later geometric mean 0

    Real log_ratio = ctx.real(0L);
    if (seq.kind == SequenceSpec::Kind::geometric) log_ratio = log(ctx.real(seq.param));
    Real p_exp = ctx.real(seq.param);

    for (long n = 1; n <= n_max; ++n) {
        Real log_a = ctx.real(0L);
        Real a = ctx.real(0L);
        bool a_zero = false;
        switch (seq.kind) {
            case SequenceSpec::Kind::geometric:
                log_a = log_ratio * n;
                a = exp(log_a);
                break;
            case SequenceSpec::Kind::power_decay:
                log_a = -p_exp * log(ctx.real(n));
                a = exp(log_a);
                break;
            case SequenceSpec::Kind::finite_support:
                if (n <= static_cast<long>(seq.values.size()) &&
                    seq.values[static_cast<std::size_t>(n - 1)] > 0) {
                    a = ctx.real(seq.values[static_cast<std::size_t>(n - 1)]);
                    log_a = log(a);
                } else {
                    a_zero = true;
                }
                break;
        }
        if (!hit_zero) {
            if (a_zero) {
                hit_zero = true;
            } else {
                log_prefix += log_a;
                lhs += exp(log_prefix / n);
            }
        }
        if (!a_zero) rhs_sum += weight(family, n, ctx) * a;
    }

    InequalityReport report{family, seq, n_max, lhs, e * rhs_sum, ctx.real(0L), false};
    report.min_margin = pointwise_margin(family, n_max, ctx);
    report.holds = report.lhs < report.rhs;
    return report;
}

std::vector<RankedFamily> tightness_ranking(const std::vector<WeightFamily>& families,
                                            long n_max, const PrecisionContext& ctx) {
    if (families.empty()) throw std::domain_error("tightness_ranking: family list is empty");
    if (n_max < 1) throw std::domain_error("tightness_ranking: requires N >= 1");
    for (const auto& f : families) validate(f);
    warm_tables(families);

    const int workers = env_workers();
    const Real e = ctx.e();
    const long chunks = (n_max + kChunk - 1) / kChunk;
    std::vector<std::vector<Real>> partial(static_cast<std::size_t>(chunks));

    run_chunked(n_max, workers, [&](long c) {
        std::vector<Real> sums(families.size(), ctx.real(0L));
        const long lo = c * kChunk + 1;
        const long hi = std::min(n_max, (c + 1) * kChunk);
        for (long n = lo; n <= hi; ++n) {
            Real p = pow_expr(n, ctx);
            for (std::size_t fi = 0; fi < families.size(); ++fi) {
                sums[fi] += e * weight(families[fi], n, ctx) - p;
            }
        }
        partial[static_cast<std::size_t>(c)] = std::move(sums);
    });

    std::vector<RankedFamily> ranked;
    ranked.reserve(families.size());
    for (std::size_t fi = 0; fi < families.size(); ++fi) {
        Real total = ctx.real(0L);
        for (long c = 0; c < chunks; ++c) total += partial[static_cast<std::size_t>(c)][fi];
        ranked.push_back({families[fi], total});
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const RankedFamily& a, const RankedFamily& b) {
                         return a.total_slack < b.total_slack;
                     });
    return ranked;
}

}  // namespace eseries
