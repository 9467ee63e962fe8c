#pragma once

// Weight families w_n for sharpened Carleman inequalities
//   sum (a_1...a_n)^{1/n} < e sum w_n a_n,
// their pointwise validity margins e w_n - (1+1/n)^n, finite-sum inequality
// reports for concrete sequences, and a tightness ranking.
//
// The classical, two-term and series weights are exact rationals: those are
// accumulated in mpq and rounded once. Scans over n may be split across
// worker threads; chunk boundaries are fixed, so results are bit-identical
// for any worker count.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "eseries/rational.hpp"
#include "eseries/real.hpp"

namespace eseries {

struct WeightFamily {
    enum class Kind {
        classical_e,      // w_n = 1
        bicheng_debnath,  // w_n = 1 - 1/(2n+2)
        ping_guozheng,    // w_n = (1 + 1/(n+1/5))^{-1/2}
        yang_param,       // w_n = (1 - 1/(2cn + 4c/3 + 1/2))^c, c > 0
        b_series,         // w_n = 1 - sum_{k<=K} b_k/(n+1)^k
        d_series,         // w_n = 1 - sum_{k<=K} d_k/(n+11/12)^k
    };

    Kind kind = Kind::classical_e;
    Rational c = Rational(1);  // yang_param only
    std::size_t depth = 0;     // series kinds only, K >= 1

    static WeightFamily classical();
    static WeightFamily bicheng();
    static WeightFamily ping();
    static WeightFamily yang(Rational c);
    static WeightFamily b_weights(std::size_t depth);
    static WeightFamily d_weights(std::size_t depth);

    // "classical" | "bicheng-debnath" | "ping-guozheng" | "yang[:c]" |
    // "b-series:K" | "d-series:K"
    static WeightFamily parse(std::string_view text);
    std::string name() const;
};

// w_n at context precision; exact-rational families are summed in mpq and
// rounded once. Throws std::domain_error when a base turns non-positive
// (small-c yang at small n) or n < 1.
Real weight(const WeightFamily& family, long n, const PrecisionContext& ctx);

// The exact value, for the families whose weight is rational.
std::optional<Rational> weight_exact(const WeightFamily& family, long n);

// Floating Horner accumulation of the series weights; cross-check route for
// the exact-then-round path (agreement within a couple of ulp).
Real weight_accumulated(const WeightFamily& family, long n, const PrecisionContext& ctx);

struct MarginScan {
    Real min_margin;  // min over 1 <= n <= N of e w_n - (1+1/n)^n
    long argmin = 0;  // smallest n attaining the minimum
    long n_max = 0;
};

// Shared scan: one (1+1/n)^n evaluation per n serves every family.
std::vector<MarginScan> margin_scan(const std::vector<WeightFamily>& families, long n_max,
                                    const PrecisionContext& ctx, int workers = 0);

// min_{1<=n<=N} [e weight(family,n) - (1+1/n)^n]; positive certifies the
// refinement on the scanned range.
Real pointwise_margin(const WeightFamily& family, long n_max, const PrecisionContext& ctx);

struct SequenceSpec {
    enum class Kind {
        geometric,       // a_n = r^n, 0 < r < 1
        power_decay,     // a_n = n^{-p}, p > 1
        finite_support,  // a_1..a_m given, 0 afterwards
    };

    Kind kind = Kind::geometric;
    Rational param = Rational(1, 2);  // r or p
    std::vector<Rational> values;     // finite_support

    static SequenceSpec geometric(Rational ratio);
    static SequenceSpec power_decay(Rational exponent);
    static SequenceSpec finite_support(std::vector<Rational> values);

    // "geometric:r" | "power:p" | "finite:v1,v2,..."
    static SequenceSpec parse(std::string_view text);
    std::string name() const;

    // Throws std::domain_error unless a_n >= 0 with 0 < sum a_n < infinity.
    void validate() const;
};

struct InequalityReport {
    WeightFamily family;
    SequenceSpec sequence;
    long n_max = 0;
    Real lhs;         // sum of geometric means
    Real rhs;         // e sum w_n a_n
    Real min_margin;  // min over n <= N of e w_n - (1+1/n)^n
    bool holds = false;
};

InequalityReport finite_carleman_report(const SequenceSpec& seq, const WeightFamily& family,
                                        long n_max, const PrecisionContext& ctx);

struct RankedFamily {
    WeightFamily family;
    Real total_slack;  // sum_{n<=N} [e w_n - (1+1/n)^n]; smaller = tighter
};

// Ascending by total slack; ties keep input order.
std::vector<RankedFamily> tightness_ranking(const std::vector<WeightFamily>& families,
                                            long n_max, const PrecisionContext& ctx);

}  // namespace eseries
