#include "eseries/exact_coeffs.hpp"

#include <mutex>
#include <stdexcept>

namespace eseries {

namespace {

// Append-only memo for a recurrence-defined sequence. get() returns by value
// so callers never hold references into a table that may grow concurrently.
class MemoTable {
public:
    template <typename Extend>
    Rational get(std::size_t n, Extend&& extend) {
        std::lock_guard<std::mutex> lock(mutex_);
        while (values_.size() <= n) extend(values_);
        return values_[n];
    }

private:
    std::mutex mutex_;
    std::vector<Rational> values_;
};

Rational a_closed_form(std::size_t n) {
    // a_n = (n+1)/12^{n+2} * [ ((-1)^{n+1} 11 - 11^{n+2})/(n+1)
    //                          - ((-1)^n - 11^{n+2})/(n+2) ]
    const long sign = (n % 2 == 0) ? 1 : -1;
    Integer p11;
    mpz_ui_pow_ui(p11.get_mpz_t(), 11, n + 2);
    Integer p12;
    mpz_ui_pow_ui(p12.get_mpz_t(), 12, n + 2);
    Rational first(Integer(-sign * 11) - p11, Integer(static_cast<long>(n) + 1));
    first.canonicalize();
    Rational second(Integer(sign) - p11, Integer(static_cast<long>(n) + 2));
    second.canonicalize();
    Rational scale(Integer(static_cast<long>(n) + 1), p12);
    scale.canonicalize();
    return scale * (first - second);
}

}  // namespace

Route route_from_name(std::string_view name) {
    if (name == "b" || name == "b-series") return Route::b_series;
    if (name == "d-conversion") return Route::d_conversion;
    if (name == "d-recurrence") return Route::d_recurrence;
    if (name == "a" || name == "a-sequence") return Route::a_sequence;
    if (name == "log-g") return Route::log_g;
    throw std::invalid_argument("unknown coefficient route: '" + std::string(name) + "'");
}

std::string route_name(Route route) {
    switch (route) {
        case Route::b_series: return "b";
        case Route::d_conversion: return "d-conversion";
        case Route::d_recurrence: return "d-recurrence";
        case Route::a_sequence: return "a";
        case Route::log_g: return "log-g";
    }
    throw std::invalid_argument("unknown coefficient route enum value");
}

Rational b_coeff(std::size_t n) {
    static MemoTable table;
    return table.get(n, [](std::vector<Rational>& b) {
        const std::size_t m = b.size();
        if (m == 0) {
            b.emplace_back(1);
            return;
        }
        Rational sum(1, static_cast<unsigned long>(m) + 1);
        for (std::size_t j = 1; j < m; ++j) {
            sum -= b[j] / Rational(static_cast<unsigned long>(m - j) + 1);
        }
        sum /= static_cast<long>(m);
        sum.canonicalize();
        b.push_back(std::move(sum));
    });
}

Rational d_from_b(std::size_t s) {
    if (s < 1) throw std::domain_error("d_from_b: defined for s >= 1");
    Rational sum(0);
    for (std::size_t k = 1; k <= s; ++k) {
        Integer p12;
        mpz_ui_pow_ui(p12.get_mpz_t(), 12, static_cast<unsigned long>(s - k));
        Rational term = b_coeff(k) /
                        Rational(factorial(static_cast<unsigned long>(s - k)) *
                                 factorial(static_cast<unsigned long>(k - 1)) * p12);
        if ((s - k) % 2 == 1) term = -term;
        sum += term;
    }
    sum *= Rational(factorial(static_cast<unsigned long>(s - 1)));
    sum.canonicalize();
    return sum;
}

Rational log_g_coeff(std::size_t n) {
    if (n == 0) return Rational(1);
    const long sign = (n % 2 == 0) ? 1 : -1;
    Integer p11;
    mpz_ui_pow_ui(p11.get_mpz_t(), 11, n + 1);
    Integer p12;
    mpz_ui_pow_ui(p12.get_mpz_t(), 12, n + 1);
    Rational first(Integer(sign * 11) - p11, Integer(static_cast<long>(n)));
    first.canonicalize();
    Rational second(Integer(-sign) - p11, Integer(static_cast<long>(n) + 1));
    second.canonicalize();
    return Rational(Integer(1), p12) * (first - second);
}

Rational a_coeff(std::size_t n) {
    static MemoTable table;
    return table.get(n, [](std::vector<Rational>& a) {
        a.push_back(a_closed_form(a.size()));
    });
}

Rational d_from_recurrence(std::size_t n) {
    if (n < 1) throw std::domain_error("d_from_recurrence: defined for n >= 1");
    static MemoTable table;  // holds c_n; d_n = -c_n
    Rational c = table.get(n, [](std::vector<Rational>& cs) {
        const std::size_t m = cs.size();
        if (m == 0) {
            cs.emplace_back(1);
            return;
        }
        Rational sum(0);
        for (std::size_t k = 0; k < m; ++k) {
            sum += a_coeff(m - k - 1) * cs[k];
        }
        sum /= static_cast<long>(m);
        sum.canonicalize();
        cs.push_back(std::move(sum));
    });
    return -c;
}

std::size_t route_first_index(Route route) {
    switch (route) {
        case Route::d_conversion:
        case Route::d_recurrence:
            return 1;
        default:
            return 0;
    }
}

CoefficientTable coefficient_table(Route route, std::size_t n_max) {
    CoefficientTable table{route, {}};
    for (std::size_t n = route_first_index(route); n <= n_max; ++n) {
        switch (route) {
            case Route::b_series: table.entries.emplace_back(n, b_coeff(n)); break;
            case Route::d_conversion: table.entries.emplace_back(n, d_from_b(n)); break;
            case Route::d_recurrence: table.entries.emplace_back(n, d_from_recurrence(n)); break;
            case Route::a_sequence: table.entries.emplace_back(n, a_coeff(n)); break;
            case Route::log_g: table.entries.emplace_back(n, log_g_coeff(n)); break;
        }
    }
    return table;
}

}  // namespace eseries
