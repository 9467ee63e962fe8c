#pragma once

// Exact coefficient sequences of the expansions
//
//   (1+1/x)^x = e (1 - sum_{k>=1} b_k / (x+1)^k)
//             = e (1 - sum_{k>=1} d_k / (x+11/12)^k)
//
// b_n comes from the series recurrence; d_n is computed by two independent
// routes (a binomial conversion of the b-series, and a generating-function
// recurrence through the auxiliary sequences a_n / c_n), whose exact
// agreement is the module's correctness oracle. Everything is mpq: no value
// in this header is ever rounded.

#include <cstddef>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "eseries/rational.hpp"

namespace eseries {

enum class Route {
    b_series,      // b_n, shift 1
    d_conversion,  // d_n via binomial conversion of the b-series
    d_recurrence,  // d_n via the generating-function recurrence
    a_sequence,    // a_n = coefficients of (ln g)'
    log_g,         // L_n = Maclaurin coefficients of ln g
};

Route route_from_name(std::string_view name);
std::string route_name(Route route);

// b_0 = 1, and for n >= 1
//   n b_n = 1/(n+1) - sum_{j=1}^{n-1} b_j / (n-j+1)
// (the empty sum gives b_1 = 1/2). Memoized; computing index n fills all
// lower indices.
Rational b_coeff(std::size_t n);

// d_s = (s-1)! sum_{k=1}^{s} (-1)^{s-k} b_k / ((s-k)! (k-1)! 12^{s-k}),
// s >= 1. Gamma factors are exact integer factorials.
Rational d_from_b(std::size_t s);

// Maclaurin coefficient L_n of ln g, where g(t) = ((1-11t/12)/(1+t/12))^(11/12-1/t):
//   L_0 = 1,
//   L_n = 12^{-(n+1)} [ ((-1)^n 11 - 11^{n+1})/n - ((-1)^{n-1} - 11^{n+1})/(n+1) ].
Rational log_g_coeff(std::size_t n);

// a_n = (n+1) L_{n+1}, in closed form.
Rational a_coeff(std::size_t n);

// d_n = -c_n where c_0 = 1 and n c_n = sum_{k=0}^{n-1} a_{n-k-1} c_k.
// Must agree exactly with d_from_b for every n >= 1.
Rational d_from_recurrence(std::size_t n);

struct CoefficientTable {
    Route route;
    // Contiguous in index from the route's smallest defined index upward
    // (0 for b/a/log-g, 1 for the d routes).
    std::vector<std::pair<std::size_t, Rational>> entries;
};

CoefficientTable coefficient_table(Route route, std::size_t n_max);

// First index at which a route is defined.
std::size_t route_first_index(Route route);

}  // namespace eseries
