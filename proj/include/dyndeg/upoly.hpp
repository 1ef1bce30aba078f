#ifndef DYNDEG_UPOLY_HPP
#define DYNDEG_UPOLY_HPP

#include <cstddef>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <dyndeg/core.hpp>

namespace dyndeg
{

// Dense univariate polynomial with big-integer coefficients, lowest degree
// first. The zero polynomial has no coefficients.
class UPoly
{
public:
    UPoly() = default;
    explicit UPoly(std::vector<integer> coeffs) : m_c(std::move(coeffs))
    {
        trim();
    }

    int degree() const
    {
        return static_cast<int>(m_c.size()) - 1;
    }
    bool is_zero() const
    {
        return m_c.empty();
    }
    const std::vector<integer> &coeffs() const
    {
        return m_c;
    }
    const integer &operator[](std::size_t i) const
    {
        return m_c[i];
    }
    const integer &leading() const
    {
        return m_c.back();
    }

    UPoly derivative() const
    {
        std::vector<integer> d;
        for (std::size_t i = 1; i < m_c.size(); ++i) {
            d.push_back(m_c[i] * static_cast<unsigned long>(i));
        }
        return UPoly(std::move(d));
    }

    integer content() const
    {
        integer g = 0;
        for (const auto &c : m_c) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
        }
        return g;
    }

    // Divides out the content and makes the leading coefficient positive.
    UPoly primitive() const
    {
        if (is_zero()) {
            return {};
        }
        integer g = content();
        if (sgn(leading()) < 0) {
            g = -g;
        }
        std::vector<integer> out(m_c.size());
        for (std::size_t i = 0; i < m_c.size(); ++i) {
            mpz_divexact(out[i].get_mpz_t(), m_c[i].get_mpz_t(), g.get_mpz_t());
        }
        return UPoly(std::move(out));
    }

    friend bool operator==(const UPoly &, const UPoly &) = default;

    std::string to_string(const std::string &var = "x") const
    {
        if (is_zero()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (int i = degree(); i >= 0; --i) {
            const integer &c = m_c[static_cast<std::size_t>(i)];
            if (sgn(c) == 0) {
                continue;
            }
            integer a = abs(c);
            if (first) {
                if (sgn(c) < 0) {
                    os << "-";
                }
            } else {
                os << (sgn(c) < 0 ? " - " : " + ");
            }
            first = false;
            bool unit = (a == 1);
            if (!unit || i == 0) {
                os << a;
            }
            if (i > 0) {
                if (!unit) {
                    os << "*";
                }
                os << var;
                if (i > 1) {
                    os << "^" << i;
                }
            }
        }
        return os.str();
    }

private:
    void trim()
    {
        while (!m_c.empty() && sgn(m_c.back()) == 0) {
            m_c.pop_back();
        }
    }

    std::vector<integer> m_c;
};

inline std::ostream &operator<<(std::ostream &os, const UPoly &p)
{
    return os << p.to_string();
}

namespace detail
{

// Pseudo-remainder of a by b (b nonzero).
inline UPoly pseudo_remainder(const UPoly &a, const UPoly &b)
{
    std::vector<integer> r = a.coeffs();
    const int db = b.degree();
    const integer &lb = b.leading();
    while (static_cast<int>(r.size()) - 1 >= db && !r.empty()) {
        const int dr = static_cast<int>(r.size()) - 1;
        integer lr = r.back();
        for (auto &c : r) {
            c *= lb;
        }
        for (int i = 0; i <= db; ++i) {
            r[static_cast<std::size_t>(dr - db + i)] -= lr * b[static_cast<std::size_t>(i)];
        }
        while (!r.empty() && sgn(r.back()) == 0) {
            r.pop_back();
        }
    }
    return UPoly(std::move(r));
}

// Exact quotient a / b over Z; throws if b does not divide a.
inline UPoly exact_quotient(const UPoly &a, const UPoly &b)
{
    if (b.is_zero()) {
        throw math_error("UPoly: division by zero");
    }
    std::vector<integer> r = a.coeffs();
    if (a.degree() < b.degree()) {
        if (a.is_zero()) {
            return {};
        }
        throw math_error("UPoly: inexact division");
    }
    std::vector<integer> q(static_cast<std::size_t>(a.degree() - b.degree() + 1));
    for (int i = a.degree() - b.degree(); i >= 0; --i) {
        integer &top = r[static_cast<std::size_t>(i + b.degree())];
        if (!mpz_divisible_p(top.get_mpz_t(), b.leading().get_mpz_t())) {
            throw math_error("UPoly: inexact division");
        }
        integer qi;
        mpz_divexact(qi.get_mpz_t(), top.get_mpz_t(), b.leading().get_mpz_t());
        for (int j = 0; j <= b.degree(); ++j) {
            r[static_cast<std::size_t>(i + j)] -= qi * b[static_cast<std::size_t>(j)];
        }
        q[static_cast<std::size_t>(i)] = qi;
    }
    for (const auto &c : r) {
        if (sgn(c) != 0) {
            throw math_error("UPoly: inexact division");
        }
    }
    return UPoly(std::move(q));
}

} // namespace detail

// Primitive gcd over Z[x] by the primitive remainder sequence.
inline UPoly gcd(const UPoly &a, const UPoly &b)
{
    if (a.is_zero()) {
        return b.primitive();
    }
    if (b.is_zero()) {
        return a.primitive();
    }
    UPoly x = a.primitive();
    UPoly y = b.primitive();
    if (x.degree() < y.degree()) {
        std::swap(x, y);
    }
    while (!y.is_zero()) {
        UPoly r = detail::pseudo_remainder(x, y);
        x = std::move(y);
        y = r.primitive();
    }
    return x.primitive();
}

// Square-free decomposition of p by repeated gcds: returns pairs
// (factor, multiplicity) with pairwise coprime primitive square-free factors
// whose product, with multiplicities, equals the primitive part of p.
inline std::vector<std::pair<UPoly, int>> squarefree_decomposition(const UPoly &p)
{
    std::vector<std::pair<UPoly, int>> out;
    if (p.degree() < 1) {
        return out;
    }
    UPoly f = p.primitive();
    UPoly a = gcd(f, f.derivative());
    UPoly b = detail::exact_quotient(f, a);
    for (int mult = 1; b.degree() > 0; ++mult) {
        UPoly g = gcd(b, a);
        UPoly factor = detail::exact_quotient(b, g);
        if (factor.degree() > 0) {
            out.emplace_back(factor.primitive(), mult);
        }
        a = detail::exact_quotient(a, g);
        b = std::move(g);
    }
    return out;
}

} // namespace dyndeg

#endif
