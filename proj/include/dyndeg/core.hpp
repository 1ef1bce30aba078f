#ifndef DYNDEG_CORE_HPP
#define DYNDEG_CORE_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

namespace dyndeg
{

using integer = mpz_class;
using rational = mpq_class;

// Malformed text or description input. The CLI maps this to exit code 2.
class input_error : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

// A request outside the supported range (dimension caps, unsupported system
// kinds). The CLI maps this to exit code 3.
class unsupported_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

// A mathematically invalid argument: singular matrix, non-dominant map,
// space mismatch.
class math_error : public std::domain_error
{
public:
    using std::domain_error::domain_error;
};

inline integer parse_integer(std::string_view s)
{
    std::string str(s);
    auto b = str.find_first_not_of(" \t");
    auto e = str.find_last_not_of(" \t");
    if (b == std::string::npos) {
        throw input_error("empty integer literal");
    }
    str = str.substr(b, e - b + 1);
    if (!str.empty() && str.front() == '+') {
        str.erase(0, 1);
    }
    std::size_t digits_from = (!str.empty() && str.front() == '-') ? 1 : 0;
    if (str.size() == digits_from) {
        throw input_error("malformed integer literal '" + std::string(s) + "'");
    }
    for (std::size_t i = digits_from; i < str.size(); ++i) {
        if (str[i] < '0' || str[i] > '9') {
            throw input_error("malformed integer literal '" + std::string(s) + "'");
        }
    }
    return integer(str, 10);
}

inline std::string to_string(const integer &z)
{
    return z.get_str(10);
}

inline std::string to_string(const rational &q)
{
    return q.get_str(10);
}

// n/d in lowest terms; mpq_class(n, d) alone does not reduce.
inline rational fraction(const integer &n, const integer &d)
{
    if (sgn(d) == 0) {
        throw math_error("fraction: zero denominator");
    }
    rational q(n, d);
    q.canonicalize();
    return q;
}

inline integer binomial(unsigned long n, unsigned long k)
{
    integer r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

inline integer factorial(unsigned long n)
{
    integer r;
    mpz_fac_ui(r.get_mpz_t(), n);
    return r;
}

inline integer ipow(const integer &base, unsigned long e)
{
    integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

// Natural log of a positive big integer, accurate for values far beyond the
// double range.
inline double log_of(const integer &z)
{
    if (sgn(z) <= 0) {
        throw math_error("log_of: nonpositive argument");
    }
    long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, z.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp2) * std::log(2.0);
}

} // namespace dyndeg

#endif
