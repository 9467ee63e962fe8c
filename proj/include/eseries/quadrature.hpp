#pragma once

// High-precision quadrature over [0,1] and the integral route to the d_n
// coefficients.
//
// The density g(s) = s^s (1-s)^{1-s} sin(pi s) / pi is continuous on [0,1]
// but has infinite endpoint derivatives (through s ln s), which is exactly
// the regime the double-exponential (tanh-sinh) transform handles; a
// composite Gauss-Legendre rule is provided as an independent cross-check.
// The d_n integrand's removable singularity at s = 1 is eliminated
// algebraically: [(12s-11)^{n-1} - 1]/(s-1) == 12 sum_{j=0}^{n-2} (12s-11)^j.

#include <functional>
#include <stdexcept>
#include <vector>

#include "eseries/rational.hpp"
#include "eseries/real.hpp"

namespace eseries {

enum class QuadratureRule {
    double_exponential,
    composite_gauss,
};

struct QuadratureConfig {
    QuadratureRule rule = QuadratureRule::double_exponential;
    double target_abs_tolerance = 1e-14;
    int max_levels = 14;
};

struct QuadratureResult {
    Real value;
    Real error_estimate;
    long nodes_used = 0;
    int levels_used = 0;
    bool converged = false;
    std::vector<Real> level_errors;  // |I_l - I_{l-1}| per refinement level
};

struct QuadratureError : std::runtime_error {
    QuadratureError(const std::string& what, QuadratureResult partial)
        : std::runtime_error(what), result(std::move(partial)) {}
    QuadratureResult result;
};

using Integrand = std::function<Real(const Real&)>;

// Integrates f over [0,1], refining until |I_l - I_{l-1}| <= tolerance or
// max_levels is exhausted (converged = false in that case; no throw).
QuadratureResult integrate_unit(const Integrand& f, const QuadratureConfig& cfg,
                                const PrecisionContext& ctx);

// g(s) = s^s (1-s)^{1-s} sin(pi s) / pi for s in [0,1]; the endpoint values
// are 0 by branch, and g(s) == g(1-s) holds bit-exactly whenever s and 1-s
// are both representable.
Real g_density(const Real& s, const PrecisionContext& ctx);

// integral of g over [0,1]; equals e/24. Throws QuadratureError when the
// tolerance cannot be met within cfg.max_levels.
QuadratureResult g_mass(const QuadratureConfig& cfg, const PrecisionContext& ctx);

enum class HRoute {
    direct,    // (x+1) [e - (1+1/x)^x]
    integral,  // e/2 + integral of g(s)/(x+s)
};

// The two routes agree to quadrature accuracy for every x > 0.
Real alzer_h(const Real& x, HRoute route, const QuadratureConfig& cfg,
             const PrecisionContext& ctx);

// Integral route with the quadrature metadata (value = e/2 + integral,
// error estimate and node count from the refinement).
QuadratureResult alzer_h_integral(const Real& x, const QuadratureConfig& cfg,
                                  const PrecisionContext& ctx);

// d_n = (-1)^n 12^{-(n-1)} (-1/2 + (1/e) integral of 12 sum_j (12s-11)^j g(s)),
// defined for n >= 2. The result matches the exact rational d_n to quadrature
// accuracy.
QuadratureResult d_from_integral(long n, const QuadratureConfig& cfg,
                                 const PrecisionContext& ctx);

}  // namespace eseries
