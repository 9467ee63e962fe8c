#pragma once

// Extended-precision evaluation of (1+1/x)^x and of truncated expansions
//   e (1 - sum_{k=1}^{K} c_k / (x+eps)^k),   eps in (0, 1],
// together with the relative error sequence w_n defined by
//   (1+1/n)^n = [truncated value] * exp(w_n).
//
// For integer n the inner series is accumulated in exact rationals and
// rounded once, so w_n keeps full working precision even when it is many
// orders below the values it is carved from.

#include <cstddef>
#include <vector>

#include "eseries/exact_coeffs.hpp"
#include "eseries/rational.hpp"
#include "eseries/real.hpp"

namespace eseries {

struct ExpansionSpec {
    Rational shift;                     // eps
    std::vector<Rational> coefficients; // c_1 .. c_K

    ExpansionSpec(Rational eps, std::vector<Rational> coeffs);

    std::size_t depth() const { return coefficients.size(); }

    // e (1 - sum b_k/(x+1)^k) truncated at depth K.
    static ExpansionSpec b_series(std::size_t depth);
    // e (1 - sum d_k/(x+11/12)^k) truncated at depth K.
    static ExpansionSpec d_series(std::size_t depth);
};

// (1+1/x)^x as exp(x log1p(1/x)) at context precision. Requires x > 0.
Real pow_expr(const Real& x, const PrecisionContext& ctx);
Real pow_expr(long n, const PrecisionContext& ctx);

// Horner evaluation of the truncated expansion in 1/(x+eps); depth 0 gives e.
// Requires x > 0.
Real eval_truncated(const Real& x, const ExpansionSpec& spec, const PrecisionContext& ctx);

// sum_{k=1}^{K} c_k / (n+eps)^k as an exact rational (integer n >= 1).
Rational truncated_inner_exact(long n, const ExpansionSpec& spec);

// w_n = ln (1+1/n)^n - ln [e (1 - inner)] with the inner sum exact.
// Throws std::domain_error when the truncated approximant is <= 0.
Real relative_error_seq(long n, const ExpansionSpec& spec, const PrecisionContext& ctx);

}  // namespace eseries
