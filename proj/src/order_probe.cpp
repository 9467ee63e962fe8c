#include "eseries/order_probe.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace eseries {

namespace {

// Differences carry ~k log2(n) bits of cancellation; keep at least 60
// significant bits at the top of the grid.
PrecisionContext working_context(const PrecisionContext& ctx, long n_max) {
    long need = 128 + 4 * static_cast<long>(std::ceil(std::log2(static_cast<double>(n_max))));
    return PrecisionContext(std::max(ctx.mantissa_bits, need), ctx.comparison_tolerance);
}

std::vector<long> geometric_grid(long n_min, long n_max) {
    if (n_min < 1 || n_max <= n_min) {
        throw std::domain_error("order_probe: range must satisfy 1 <= n_min < n_max");
    }
    std::vector<long> grid;
    for (long n = n_min; n <= n_max && n > 0; n *= 2) grid.push_back(n);
    if (grid.size() < 3) {
        throw std::domain_error("order_probe: range too narrow (need n_min, 2 n_min, 4 n_min <= n_max)");
    }
    return grid;
}

struct Extrapolated {
    Real limit;
    Real stability;  // |last diagonal correction|
};

// Richardson on samples v[i] = S(n0 2^i), assuming S(n) = L + a/n + b/n^2 + ...
// Column m cancels the 1/n^m term: T_m(i) = (2^m T_{m-1}(i+1) - T_{m-1}(i)) / (2^m - 1).
Extrapolated richardson(std::vector<Real> column, const PrecisionContext& wc) {
    Real previous = column.back();
    Real estimate = column.back();
    Real stability = abs(estimate - column.front());
    for (std::size_t m = 1; column.size() > 1; ++m) {
        Real factor = pow(wc.real(2L), static_cast<long>(m));
        std::vector<Real> next;
        next.reserve(column.size() - 1);
        for (std::size_t i = 0; i + 1 < column.size(); ++i) {
            next.push_back((factor * column[i + 1] - column[i]) / (factor - 1L));
        }
        column = std::move(next);
        previous = estimate;
        estimate = column.back();
        stability = abs(estimate - previous);
    }
    return {estimate, stability};
}

Real checked_limit(const Extrapolated& ext, double tolerance, const char* what) {
    if (!ext.limit.is_finite() || !ext.stability.is_finite()) {
        throw ProbeError(std::string(what) + ": extrapolation produced a non-finite value");
    }
    Real bound = max(Real::of(1.0, ext.limit.precision()), abs(ext.limit)) *
                 Real::of(tolerance, ext.limit.precision());
    if (ext.stability > bound) {
        throw ProbeError(std::string(what) + ": sequence shows no convergent limit at the probed range");
    }
    return ext.limit;
}

}  // namespace

OrderEstimate order_probe(const SequenceFn& omega, const Real& k, long n_min, long n_max,
                          const PrecisionContext& ctx, double convergence_tolerance) {
    if (!(k > 1L)) throw std::domain_error("order_probe: requires k > 1");
    if (convergence_tolerance <= 0) convergence_tolerance = ctx.comparison_tolerance;
    const PrecisionContext wc = working_context(ctx, n_max);
    const std::vector<long> grid = geometric_grid(n_min, n_max);
    const Real kk = wc.promote(k);

    std::vector<Real> diffs, scaled;
    diffs.reserve(grid.size());
    scaled.reserve(grid.size());
    for (long n : grid) {
        Real w_n = omega(n, wc);
        Real w_next = omega(n + 1, wc);
        Real nn = wc.real(n);
        diffs.push_back(pow(nn, kk) * (w_n - w_next));
        scaled.push_back(pow(nn, kk - 1L) * w_n);
    }

    Extrapolated l = richardson(std::move(diffs), wc);
    Extrapolated c = richardson(std::move(scaled), wc);

    OrderEstimate est{kk - 1L,
                      checked_limit(c, convergence_tolerance, "order_probe (sequence limit)"),
                      checked_limit(l, convergence_tolerance, "order_probe (difference limit)"),
                      l.stability, grid.front(), grid.back()};
    return est;
}

namespace {

constexpr long kFitGridMin = 512;
constexpr long kFitGridMax = 65536;

ExpansionSpec fit_spec(FitSlot slot, const Rational& param) {
    const Rational half(1, 2);
    if (slot == FitSlot::quadratic_term) {
        return ExpansionSpec(Rational(11, 12), {half, param});
    }
    return ExpansionSpec(Rational(11, 12), {half, Rational(0), param});
}

Real measured_coefficient(FitSlot slot, const Rational& param, const PrecisionContext& ctx) {
    const long k = slot == FitSlot::quadratic_term ? 3 : 4;
    ExpansionSpec spec = fit_spec(slot, param);
    SequenceFn omega = [&spec](long n, const PrecisionContext& c) {
        return relative_error_seq(n, spec, c);
    };
    return order_probe(omega, ctx.real(k), kFitGridMin, kFitGridMax, ctx, 1e-6).difference_limit;
}

Rational predicted_coefficient(FitSlot slot, const Rational& param) {
    if (slot == FitSlot::quadratic_term) return 2 * param;
    return 3 * param - Rational(5, 96);
}

}  // namespace

FitReport fit_leading_coeffs(FitSlot slot, const std::vector<Rational>& params,
                             const PrecisionContext& ctx) {
    if (params.empty()) throw std::domain_error("fit_leading_coeffs: parameter list is empty");

    FitReport report{slot,
                     slot == FitSlot::quadratic_term ? 3 : 4,
                     {},
                     ctx.real(0L),
                     slot == FitSlot::quadratic_term ? Rational(0) : Rational(5, 288),
                     kFitGridMin,
                     kFitGridMax};

    std::vector<Rational> sorted = params;
    std::sort(sorted.begin(), sorted.end());
    for (const Rational& p : sorted) {
        report.samples.push_back({p, measured_coefficient(slot, p, ctx), predicted_coefficient(slot, p)});
    }

    // Locate a sign change between adjacent samples.
    std::size_t lo_idx = report.samples.size();
    for (std::size_t i = 0; i + 1 < report.samples.size(); ++i) {
        int s0 = report.samples[i].measured.sign();
        int s1 = report.samples[i + 1].measured.sign();
        if (s0 == 0) {
            report.root = ctx.real(report.samples[i].param);
            return report;
        }
        if (s0 != s1) {
            lo_idx = i;
            break;
        }
    }
    if (lo_idx == report.samples.size()) {
        if (report.samples.back().measured.sign() == 0) {
            report.root = ctx.real(report.samples.back().param);
            return report;
        }
        throw ProbeError("fit_leading_coeffs: no sign change brackets the root");
    }

    Rational lo = report.samples[lo_idx].param;
    Rational hi = report.samples[lo_idx + 1].param;
    int sign_lo = report.samples[lo_idx].measured.sign();
    const Rational width_stop(1, 1000000000L);  // bisect well below the 1e-6 contract
    while (hi - lo > width_stop) {
        Rational mid = (lo + hi) / 2;
        int s = measured_coefficient(slot, mid, ctx).sign();
        if (s == 0) {
            lo = hi = mid;
            break;
        }
        if (s == sign_lo) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    report.root = ctx.real((lo + hi) / 2);
    return report;
}

OrderEstimate truncation_order_report(const Rational& eps, std::size_t depth,
                                      const PrecisionContext& ctx) {
    if (depth < 1) throw std::domain_error("truncation_order_report: depth must be >= 1");
    ExpansionSpec spec = eps == 1 ? ExpansionSpec::b_series(depth)
                        : eps == Rational(11, 12)
                            ? ExpansionSpec::d_series(depth)
                            : throw std::invalid_argument(
                                  "truncation_order_report: shift must be 1 or 11/12");

    const long base = 1L << 13;
    const long top = 1L << 16;
    const PrecisionContext wc = working_context(ctx, 2 * top);

    // Dyadic slope p(n) = log2 |w_n| - log2 |w_2n| tends to p with O(1/n) error.
    std::vector<Real> slopes;
    for (long n = base; n <= top; n *= 2) {
        Real w1 = relative_error_seq(n, spec, wc);
        Real w2 = relative_error_seq(2 * n, spec, wc);
        slopes.push_back(log2(abs(w1)) - log2(abs(w2)));
    }
    Extrapolated p = richardson(std::move(slopes), wc);
    Real exponent = checked_limit(p, 1e-4, "truncation_order_report");

    // Companion limits at the nearest integer order.
    long p_int = exponent.to_long();
    SequenceFn omega = [&spec](long n, const PrecisionContext& c) {
        return relative_error_seq(n, spec, c);
    };
    OrderEstimate at_integer =
        order_probe(omega, wc.real(p_int + 1), base, top, ctx, 1e-6);

    return OrderEstimate{exponent, at_integer.limit_constant, at_integer.difference_limit,
                         p.stability, base, 2 * top};
}

}  // namespace eseries
