#pragma once

// Extended-precision floating point built on MPFR.
//
// Every Real carries its own mantissa width. Binary operations round once,
// to the wider of the two operand widths (MPFR round-to-nearest), so a
// computation seeded from one PrecisionContext stays at that context's
// precision throughout and is bit-reproducible across runs and thread
// counts. Nothing here ever consults global state.

#include <mpfr.h>

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

#include "eseries/rational.hpp"

namespace eseries {

class Real {
public:
    explicit Real(mpfr_prec_t prec = 64) {
        mpfr_init2(v_, prec);
        mpfr_set_zero(v_, 1);
    }
    Real(const Real& o) {
        mpfr_init2(v_, mpfr_get_prec(o.v_));
        mpfr_set(v_, o.v_, MPFR_RNDN);
    }
    Real(Real&& o) noexcept {
        mpfr_init2(v_, 64);
        mpfr_swap(v_, o.v_);
    }
    Real& operator=(const Real& o) {
        if (this != &o) {
            mpfr_set_prec(v_, mpfr_get_prec(o.v_));
            mpfr_set(v_, o.v_, MPFR_RNDN);
        }
        return *this;
    }
    Real& operator=(Real&& o) noexcept {
        mpfr_swap(v_, o.v_);
        return *this;
    }
    ~Real() { mpfr_clear(v_); }

    static Real of(long x, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_si(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real of(double x, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_d(r.v_, x, MPFR_RNDN);
        return r;
    }
    static Real of(const Rational& q, mpfr_prec_t prec) {
        Real r(prec);
        mpfr_set_q(r.v_, q.get_mpq_t(), MPFR_RNDN);
        return r;
    }
    // Parses decimal/scientific notation ("1e-12", "0.25", ...).
    static Real parse(std::string_view text, mpfr_prec_t prec);

    mpfr_prec_t precision() const { return mpfr_get_prec(v_); }
    mpfr_ptr raw() { return v_; }
    mpfr_srcptr raw() const { return v_; }

    bool is_finite() const { return mpfr_number_p(v_) != 0; }
    bool is_zero() const { return mpfr_zero_p(v_) != 0; }
    int sign() const { return mpfr_sgn(v_); }

    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }
    long to_long() const { return mpfr_get_si(v_, MPFR_RNDN); }
    // Scientific notation with the given number of significant digits.
    std::string str(int digits = 30) const;

    friend Real operator-(const Real& a) {
        Real r(a.precision());
        mpfr_neg(r.v_, a.v_, MPFR_RNDN);
        return r;
    }

#define ESERIES_REAL_BINOP(op, fn, fn_si)                        \
    friend Real operator op(const Real& a, const Real& b) {      \
        Real r(std::max(a.precision(), b.precision()));          \
        fn(r.v_, a.v_, b.v_, MPFR_RNDN);                         \
        return r;                                                \
    }                                                            \
    friend Real operator op(const Real& a, long b) {             \
        Real r(a.precision());                                   \
        fn_si(r.v_, a.v_, b, MPFR_RNDN);                         \
        return r;                                                \
    }

    ESERIES_REAL_BINOP(+, mpfr_add, mpfr_add_si)
    ESERIES_REAL_BINOP(-, mpfr_sub, mpfr_sub_si)
    ESERIES_REAL_BINOP(*, mpfr_mul, mpfr_mul_si)
    ESERIES_REAL_BINOP(/, mpfr_div, mpfr_div_si)
#undef ESERIES_REAL_BINOP

    friend Real operator+(long a, const Real& b) { return b + a; }
    friend Real operator*(long a, const Real& b) { return b * a; }
    friend Real operator-(long a, const Real& b) {
        Real r(b.precision());
        mpfr_si_sub(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real operator/(long a, const Real& b) {
        Real r(b.precision());
        mpfr_si_div(r.v_, a, b.v_, MPFR_RNDN);
        return r;
    }

    Real& operator+=(const Real& o) { return *this = *this + o; }
    Real& operator-=(const Real& o) { return *this = *this - o; }
    Real& operator*=(const Real& o) { return *this = *this * o; }
    Real& operator/=(const Real& o) { return *this = *this / o; }

    friend bool operator==(const Real& a, const Real& b) { return mpfr_equal_p(a.v_, b.v_) != 0; }
    friend bool operator!=(const Real& a, const Real& b) { return !(a == b); }
    friend bool operator<(const Real& a, const Real& b) { return mpfr_less_p(a.v_, b.v_) != 0; }
    friend bool operator>(const Real& a, const Real& b) { return mpfr_greater_p(a.v_, b.v_) != 0; }
    friend bool operator<=(const Real& a, const Real& b) { return mpfr_lessequal_p(a.v_, b.v_) != 0; }
    friend bool operator>=(const Real& a, const Real& b) { return mpfr_greaterequal_p(a.v_, b.v_) != 0; }

    friend bool operator<(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) < 0; }
    friend bool operator>(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) > 0; }
    friend bool operator<=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) <= 0; }
    friend bool operator>=(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) >= 0; }
    friend bool operator==(const Real& a, long b) { return mpfr_cmp_si(a.v_, b) == 0; }

#define ESERIES_REAL_FN1(name, fn)          \
    friend Real name(const Real& a) {       \
        Real r(a.precision());              \
        fn(r.v_, a.v_, MPFR_RNDN);          \
        return r;                           \
    }

    ESERIES_REAL_FN1(exp, mpfr_exp)
    ESERIES_REAL_FN1(expm1, mpfr_expm1)
    ESERIES_REAL_FN1(log, mpfr_log)
    ESERIES_REAL_FN1(log1p, mpfr_log1p)
    ESERIES_REAL_FN1(log2, mpfr_log2)
    ESERIES_REAL_FN1(sin, mpfr_sin)
    ESERIES_REAL_FN1(cos, mpfr_cos)
    ESERIES_REAL_FN1(sinh, mpfr_sinh)
    ESERIES_REAL_FN1(cosh, mpfr_cosh)
    ESERIES_REAL_FN1(sqrt, mpfr_sqrt)
    ESERIES_REAL_FN1(abs, mpfr_abs)
#undef ESERIES_REAL_FN1

    friend Real pow(const Real& a, const Real& b) {
        Real r(std::max(a.precision(), b.precision()));
        mpfr_pow(r.v_, a.v_, b.v_, MPFR_RNDN);
        return r;
    }
    friend Real pow(const Real& a, long b) {
        Real r(a.precision());
        mpfr_pow_si(r.v_, a.v_, b, MPFR_RNDN);
        return r;
    }
    friend Real min(const Real& a, const Real& b) { return a <= b ? a : b; }
    friend Real max(const Real& a, const Real& b) { return a >= b ? a : b; }

    // One unit in the last place of a (0 for a = 0).
    friend Real ulp(const Real& a) {
        Real r(a.precision());
        if (mpfr_zero_p(a.v_)) {
            mpfr_set_zero(r.v_, 1);
        } else {
            mpfr_set_ui_2exp(r.v_, 1, mpfr_get_exp(a.v_) - a.precision(), MPFR_RNDN);
        }
        return r;
    }

private:
    mpfr_t v_;
};

// Declares the mantissa width (and thereby the rounding granularity) for a
// computation. Factory methods seed leaves at that width; everything derived
// from them inherits it through operand-precision propagation.
struct PrecisionContext {
    static constexpr long kMinBits = 64;

    long mantissa_bits = 256;
    // Default closeness threshold for convergence checks run under this
    // context (the order probes use it when no explicit tolerance is given).
    double comparison_tolerance = 1e-6;

    explicit PrecisionContext(long bits = 256, double tolerance = 1e-6)
        : mantissa_bits(bits), comparison_tolerance(tolerance) {
        if (bits < kMinBits) throw std::domain_error("PrecisionContext: mantissa_bits must be >= 64");
        if (!(tolerance > 0)) {
            throw std::domain_error("PrecisionContext: comparison_tolerance must be > 0");
        }
    }

    Real real(long x) const { return Real::of(x, mantissa_bits); }
    Real real(int x) const { return Real::of(static_cast<long>(x), mantissa_bits); }
    Real real(double x) const { return Real::of(x, mantissa_bits); }
    Real real(const Rational& q) const { return Real::of(q, mantissa_bits); }
    Real parse(std::string_view s) const { return Real::parse(s, mantissa_bits); }

    // Rounds (or zero-pads) x into this context's width.
    Real promote(const Real& x) const {
        Real r(mantissa_bits);
        mpfr_set(r.raw(), x.raw(), MPFR_RNDN);
        return r;
    }

    Real e() const { return exp(real(1L)); }
    Real pi() const {
        Real r(mantissa_bits);
        mpfr_const_pi(r.raw(), MPFR_RNDN);
        return r;
    }
};

}  // namespace eseries
