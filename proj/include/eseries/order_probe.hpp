#pragma once

// Empirical convergence-order estimation.
//
// For a sequence w_n -> 0 with lim n^k (w_n - w_{n+1}) = l and k > 1, the
// sequence also satisfies lim n^{k-1} w_n = l/(k-1). The probe measures both
// limits independently on a geometrically spaced grid (n, 2n, 4n, ...) and
// accelerates them by Richardson extrapolation; the pair doubles as an
// internal consistency check. On top of it sit the leading-coefficient
// fitting experiments and the truncation-order reports for the two series
// shifts.

#include <functional>
#include <vector>

#include "eseries/expansion.hpp"
#include "eseries/rational.hpp"
#include "eseries/real.hpp"

namespace eseries {

// A sequence accessor: n -> w_n at the given working precision.
using SequenceFn = std::function<Real(long, const PrecisionContext&)>;

struct ProbeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OrderEstimate {
    Real exponent;         // estimated decay exponent of w_n (k-1, or measured p)
    Real limit_constant;   // estimated lim n^exponent w_n
    Real difference_limit; // estimated l = lim n^{exponent+1} (w_n - w_{n+1})
    Real stability;        // last Richardson correction on difference_limit
    long n_min = 0;
    long n_max = 0;
};

// Estimates l = lim n^k (w_n - w_{n+1}) and lim n^{k-1} w_n over the grid
// n_min, 2 n_min, ... <= n_max (at least 3 points). Requires k > 1. Raises
// ProbeError when the Richardson diagonal fails to settle within
// convergence_tolerance (ctx.comparison_tolerance when <= 0), i.e. when no
// finite limit is detectable.
OrderEstimate order_probe(const SequenceFn& omega, const Real& k, long n_min, long n_max,
                          const PrecisionContext& ctx, double convergence_tolerance = 0);

// Which coefficient slot of e(1 - (1/2)/(n+11/12) - ...) is being fitted.
enum class FitSlot {
    quadratic_term,  // c at 1/(n+11/12)^2; difference limit 2c at order n^-3
    cubic_term,      // d at 1/(n+11/12)^3; difference limit 3d - 5/96 at order n^-4
};

struct FitSample {
    Rational param;
    Real measured;       // measured dominant coefficient of w_n - w_{n+1}
    Rational predicted;  // closed-form value of that coefficient
};

struct FitReport {
    FitSlot slot;
    long difference_order;  // k: 3 for the quadratic slot, 4 for the cubic one
    std::vector<FitSample> samples;
    Real root;               // bisection root of the measured coefficient
    Rational predicted_root; // 0 resp. 5/288
    long n_min = 0;
    long n_max = 0;
};

// Measures the dominant coefficient at each parameter value and bisects it
// to the parameter nullifying it. Throws ProbeError when no sign change
// brackets a root.
FitReport fit_leading_coeffs(FitSlot slot, const std::vector<Rational>& params,
                             const PrecisionContext& ctx);

// Measures the empirical decay exponent of |w_n| for the series with the
// given shift (1 or 11/12) truncated at depth K >= 1.
OrderEstimate truncation_order_report(const Rational& eps, std::size_t depth,
                                      const PrecisionContext& ctx);

}  // namespace eseries
