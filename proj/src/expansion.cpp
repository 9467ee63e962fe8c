#include "eseries/expansion.hpp"

#include <stdexcept>

namespace eseries {

ExpansionSpec::ExpansionSpec(Rational eps, std::vector<Rational> coeffs)
    : shift(std::move(eps)), coefficients(std::move(coeffs)) {
    if (shift <= 0 || shift > 1) {
        throw std::domain_error("ExpansionSpec: shift must lie in (0, 1]");
    }
}

ExpansionSpec ExpansionSpec::b_series(std::size_t depth) {
    std::vector<Rational> coeffs;
    coeffs.reserve(depth);
    for (std::size_t k = 1; k <= depth; ++k) coeffs.push_back(b_coeff(k));
    return ExpansionSpec(Rational(1), std::move(coeffs));
}

ExpansionSpec ExpansionSpec::d_series(std::size_t depth) {
    std::vector<Rational> coeffs;
    coeffs.reserve(depth);
    for (std::size_t k = 1; k <= depth; ++k) coeffs.push_back(d_from_recurrence(k));
    return ExpansionSpec(Rational(11, 12), std::move(coeffs));
}

Real pow_expr(const Real& x, const PrecisionContext& ctx) {
    if (!x.is_finite() || x.sign() <= 0) {
        throw std::domain_error("pow_expr: requires x > 0");
    }
    Real xx = ctx.promote(x);
    return exp(xx * log1p(1L / xx));
}

Real pow_expr(long n, const PrecisionContext& ctx) {
    return pow_expr(ctx.real(n), ctx);
}

Real eval_truncated(const Real& x, const ExpansionSpec& spec, const PrecisionContext& ctx) {
    if (!x.is_finite() || x.sign() <= 0) {
        throw std::domain_error("eval_truncated: requires x > 0");
    }
    Real t = 1L / (ctx.promote(x) + ctx.real(spec.shift));
    Real inner = ctx.real(0L);
    for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it) {
        inner = (inner + ctx.real(*it)) * t;
    }
    return ctx.e() * (1L - inner);
}

Rational truncated_inner_exact(long n, const ExpansionSpec& spec) {
    if (n < 1) throw std::domain_error("truncated_inner_exact: requires n >= 1");
    Rational t = Rational(1) / (Rational(n) + spec.shift);
    Rational inner(0);
    for (auto it = spec.coefficients.rbegin(); it != spec.coefficients.rend(); ++it) {
        inner = (inner + *it) * t;
    }
    return inner;
}

Real relative_error_seq(long n, const ExpansionSpec& spec, const PrecisionContext& ctx) {
    Rational inner = truncated_inner_exact(n, spec);
    if (inner >= 1) {
        throw std::domain_error("relative_error_seq: truncated approximant is not positive");
    }
    Real nn = ctx.real(n);
    // ln (1+1/n)^n - 1  and  ln(1 - inner), both as log1p of small arguments.
    return nn * log1p(1L / nn) - 1L - log1p(-ctx.real(inner));
}

}  // namespace eseries
