#include "eseries/real.hpp"

#include <cstdio>
#include <memory>
#include <vector>

namespace eseries {

Real Real::parse(std::string_view text, mpfr_prec_t prec) {
    Real r(prec);
    std::string buf(text);
    if (buf.empty() || mpfr_set_str(r.v_, buf.c_str(), 10, MPFR_RNDN) != 0) {
        throw std::invalid_argument("Real::parse: not a decimal number: '" + buf + "'");
    }
    return r;
}

std::string Real::str(int digits) const {
    if (digits < 2) digits = 2;
    char* out = nullptr;
    // %Re prints one digit before the point, so 'digits' significant digits
    // means digits-1 after it.
    int n = mpfr_asprintf(&out, "%.*Re", digits - 1, v_);
    if (n < 0) throw std::runtime_error("Real::str: formatting failed");
    std::string s(out);
    mpfr_free_str(out);
    return s;
}

Integer factorial(unsigned long n) {
    Integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

Rational parse_rational(std::string_view text) {
    std::string buf(text);
    if (buf.empty()) throw std::invalid_argument("parse_rational: empty string");
    Rational q;
    if (mpq_set_str(q.get_mpq_t(), buf.c_str(), 10) != 0) {
        throw std::invalid_argument("parse_rational: malformed rational: '" + buf + "'");
    }
    if (sgn(q.get_den()) == 0) throw std::invalid_argument("parse_rational: zero denominator");
    q.canonicalize();
    return q;
}

std::string to_string(const Rational& q) {
    return q.get_str();
}

}  // namespace eseries
