#include "eseries/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <utility>

#include "eseries/expansion.hpp"

namespace eseries {

namespace {

// ---------------------------------------------------------------------------
// tanh-sinh: s = (1 + tanh((pi/2) sinh t))/2, weights w(t) = (pi/4) cosh t /
// cosh^2((pi/2) sinh t). Nodes are generated in complementary pairs
// (delta, 1-delta) with delta = 1/(e^{2u}+1) computed directly, so endpoint
// distances stay accurate far below rounding of 1-s.
// ---------------------------------------------------------------------------

struct DeNode {
    Real delta;   // distance to the nearer endpoint
    Real weight;  // w(t), before the h and interval factors
};

class DeLevelSums {
public:
    DeLevelSums(const Integrand& f, const PrecisionContext& wc)
        : f_(f), wc_(wc), half_pi_(wc.pi() / 2L), cutoff_(wc.real(2L)) {
        mpfr_set_ui_2exp(cutoff_.raw(), 1, -(wc.mantissa_bits + 8), MPFR_RNDN);
    }

    // Sum of w(t_j) f-pair over j = start, start+step, ... until the node
    // pair collapses into the endpoints at working precision.
    Real strip_sum(const Real& h, long start, long step, long& nodes) {
        Real total = wc_.real(0L);
        for (long j = start;; j += step) {
            Real t = h * j;
            Real u = half_pi_ * sinh(t);
            Real ch = cosh(u);
            Real w = half_pi_ * cosh(t) / (ch * ch);
            Real delta = 1L / (exp(u + u) + 1L);
            if (delta < cutoff_) break;
            total += w * (f_(delta) + f_(1L - delta));
            nodes += 2;
        }
        return total;
    }

    Real center(long& nodes) {
        ++nodes;
        return half_pi_ * f_(wc_.real(Rational(1, 2)));
    }

private:
    const Integrand& f_;
    const PrecisionContext& wc_;
    Real half_pi_;
    Real cutoff_;
};

QuadratureResult tanh_sinh(const Integrand& f, const QuadratureConfig& cfg,
                           const PrecisionContext& wc) {
    QuadratureResult res;
    const Real tol = wc.real(cfg.target_abs_tolerance);
    DeLevelSums sums(f, wc);

    long nodes = 0;
    Real h = wc.real(1L);
    Real node_sum = sums.center(nodes) + sums.strip_sum(h, 1, 1, nodes);
    Real value = h * node_sum / 2L;
    Real previous = value;

    for (int level = 1; level <= cfg.max_levels; ++level) {
        h = h / 2L;
        node_sum += sums.strip_sum(h, 1, 2, nodes);
        value = h * node_sum / 2L;
        Real err = abs(value - previous);
        res.level_errors.push_back(err);
        previous = value;
        if (err <= tol) {
            res.value = value;
            res.error_estimate = err;
            res.nodes_used = nodes;
            res.levels_used = level;
            res.converged = true;
            return res;
        }
    }
    res.value = value;
    res.error_estimate = res.level_errors.empty() ? abs(value) : res.level_errors.back();
    res.nodes_used = nodes;
    res.levels_used = cfg.max_levels;
    res.converged = false;
    return res;
}

// ---------------------------------------------------------------------------
// Composite Gauss-Legendre: a fixed 16-point rule per panel, panels doubled
// per level. Nodes are Newton-refined Legendre roots at working precision,
// cached per precision.
// ---------------------------------------------------------------------------

constexpr int kGaussOrder = 16;

struct GaussRule {
    std::vector<Real> nodes;    // on (-1, 1), ascending
    std::vector<Real> weights;
};

// Legendre P_m(x) and P_m'(x) by the three-term recurrence.
std::pair<Real, Real> legendre(int m, const Real& x, const PrecisionContext& wc) {
    Real p0 = wc.real(1L);
    Real p1 = x;
    for (int k = 2; k <= m; ++k) {
        Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = std::move(p1);
        p1 = std::move(p2);
    }
    Real dp = m * (x * p1 - p0) / (x * x - 1L);
    return {p1, dp};
}

const GaussRule& gauss_rule(const PrecisionContext& wc) {
    static std::mutex mutex;
    static std::map<long, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto it = cache.find(wc.mantissa_bits);
    if (it != cache.end()) return it->second;

    GaussRule rule;
    const Real pi = wc.pi();
    for (int i = 1; i <= kGaussOrder; ++i) {
        // Chebyshev-style seed, then Newton to full precision.
        Real x = cos(pi * (wc.real(4 * i - 1)) / (4 * kGaussOrder + 2));
        for (int iter = 0; iter < 64; ++iter) {
            auto [p, dp] = legendre(kGaussOrder, x, wc);
            Real step = p / dp;
            x = x - step;
            if (abs(step) <= ulp(x) * 4L) break;
        }
        auto [p, dp] = legendre(kGaussOrder, x, wc);
        (void)p;
        rule.nodes.push_back(x);
        rule.weights.push_back(2L / ((1L - x * x) * dp * dp));
    }
    return cache.emplace(wc.mantissa_bits, std::move(rule)).first->second;
}

QuadratureResult composite_gauss(const Integrand& f, const QuadratureConfig& cfg,
                                 const PrecisionContext& wc) {
    QuadratureResult res;
    const Real tol = wc.real(cfg.target_abs_tolerance);
    const GaussRule& rule = gauss_rule(wc);

    long nodes = 0;
    Real previous = wc.real(0L);
    bool have_previous = false;

    for (int level = 0; level <= cfg.max_levels; ++level) {
        const long panels = 1L << level;
        Real width = wc.real(1L) / panels;
        Real total = wc.real(0L);
        for (long p = 0; p < panels; ++p) {
            Real mid = (wc.real(2 * p + 1)) / (2 * panels);
            Real panel = wc.real(0L);
            for (int i = 0; i < kGaussOrder; ++i) {
                panel += rule.weights[i] * f(mid + rule.nodes[i] * width / 2L);
            }
            total += panel * width / 2L;
            nodes += kGaussOrder;
        }
        if (have_previous) {
            Real err = abs(total - previous);
            res.level_errors.push_back(err);
            if (err <= tol) {
                res.value = total;
                res.error_estimate = err;
                res.nodes_used = nodes;
                res.levels_used = level;
                res.converged = true;
                return res;
            }
        }
        previous = total;
        have_previous = true;
    }
    res.value = previous;
    res.error_estimate = res.level_errors.empty() ? abs(previous) : res.level_errors.back();
    res.nodes_used = nodes;
    res.levels_used = cfg.max_levels;
    res.converged = false;
    return res;
}

void validate(const QuadratureConfig& cfg) {
    if (!(cfg.target_abs_tolerance > 0)) {
        throw std::domain_error("QuadratureConfig: target_abs_tolerance must be > 0");
    }
    if (cfg.max_levels < 1) {
        throw std::domain_error("QuadratureConfig: max_levels must be >= 1");
    }
}

QuadratureResult must_converge(QuadratureResult res, const char* what) {
    if (!res.converged) {
        std::string msg = std::string(what) + ": tolerance not reached within max_levels (estimate " +
                          res.error_estimate.str(6) + ")";
        throw QuadratureError(msg, std::move(res));
    }
    return res;
}

}  // namespace

QuadratureResult integrate_unit(const Integrand& f, const QuadratureConfig& cfg,
                                const PrecisionContext& ctx) {
    validate(cfg);
    return cfg.rule == QuadratureRule::double_exponential ? tanh_sinh(f, cfg, ctx)
                                                          : composite_gauss(f, cfg, ctx);
}

Real g_density(const Real& s, const PrecisionContext& ctx) {
    if (!s.is_finite() || s.sign() < 0 || s > 1L) {
        throw std::domain_error("g_density: requires 0 <= s <= 1");
    }
    if (s.is_zero() || s == 1L) return ctx.real(0L);
    // Evaluate through the smaller of (s, 1-s) so complementary arguments run
    // through identical operations and the s <-> 1-s symmetry is exact.
    Real a = ctx.promote(s);
    Real b = 1L - a;
    if (b < a) std::swap(a, b);
    Real entropy = exp(a * log(a) + b * log(b));
    return entropy * sin(ctx.pi() * a) / ctx.pi();
}

QuadratureResult g_mass(const QuadratureConfig& cfg, const PrecisionContext& ctx) {
    Integrand f = [&ctx](const Real& s) { return g_density(s, ctx); };
    return must_converge(integrate_unit(f, cfg, ctx), "g_mass");
}

Real alzer_h(const Real& x, HRoute route, const QuadratureConfig& cfg,
             const PrecisionContext& ctx) {
    if (!x.is_finite() || x.sign() <= 0) {
        throw std::domain_error("alzer_h: requires x > 0");
    }
    if (route == HRoute::direct) {
        Real xx = ctx.promote(x);
        return (xx + 1L) * (ctx.e() - pow_expr(xx, ctx));
    }
    return alzer_h_integral(x, cfg, ctx).value;
}

QuadratureResult alzer_h_integral(const Real& x, const QuadratureConfig& cfg,
                                  const PrecisionContext& ctx) {
    if (!x.is_finite() || x.sign() <= 0) {
        throw std::domain_error("alzer_h: requires x > 0");
    }
    Real xx = ctx.promote(x);
    Integrand f = [&ctx, &xx](const Real& s) { return g_density(s, ctx) / (xx + s); };
    QuadratureResult q = must_converge(integrate_unit(f, cfg, ctx), "alzer_h");
    q.value = ctx.e() / 2L + q.value;
    return q;
}

QuadratureResult d_from_integral(long n, const QuadratureConfig& cfg,
                                 const PrecisionContext& ctx) {
    if (n < 2) throw std::domain_error("d_from_integral: the representation holds for n >= 2");
    Integrand f = [&ctx, n](const Real& s) {
        // 12 * sum_{j=0}^{n-2} (12s-11)^j, Horner form; exact at s = 1.
        Real w = 12L * s - 11L;
        Real acc = ctx.real(0L);
        for (long j = 0; j < n - 1; ++j) acc = acc * w + 1L;
        return 12L * acc * g_density(s, ctx);
    };
    QuadratureResult q = must_converge(integrate_unit(f, cfg, ctx), "d_from_integral");

    Real scale(ctx.mantissa_bits);
    mpfr_ui_pow_ui(scale.raw(), 12, static_cast<unsigned long>(n - 1), MPFR_RNDN);
    Real sign = ctx.real(n % 2 == 0 ? 1L : -1L);
    Real e = ctx.e();
    QuadratureResult out = q;
    out.value = sign / scale * (q.value / e - ctx.real(Rational(1, 2)));
    out.error_estimate = q.error_estimate / (scale * e);
    return out;
}

}  // namespace eseries
