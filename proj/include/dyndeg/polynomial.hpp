#ifndef DYNDEG_POLYNOMIAL_HPP
#define DYNDEG_POLYNOMIAL_HPP

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <map>
#include <numeric>
#include <ostream>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include <dyndeg/core.hpp>

namespace dyndeg
{

using Exp = std::vector<std::int64_t>;

namespace detail
{

inline std::int64_t checked_add(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw unsupported_error("exponent overflow");
    }
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b)
{
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw unsupported_error("exponent overflow");
    }
    return r;
}

} // namespace detail

// Sparse polynomial in a fixed number of variables with big-integer
// coefficients. Terms are kept in lexicographic exponent order, so the last
// entry is the lex-leading term. Zero coefficients are never stored.
class Poly
{
public:
    using terms_type = std::map<Exp, integer>;

    Poly() = default;
    explicit Poly(std::size_t nvars) : m_nvars(nvars) {}

    static Poly constant(std::size_t nvars, const integer &c)
    {
        Poly p(nvars);
        p.add_term(Exp(nvars, 0), c);
        return p;
    }
    static Poly variable(std::size_t nvars, std::size_t i)
    {
        Exp e(nvars, 0);
        e.at(i) = 1;
        return monomial(std::move(e), integer(1));
    }
    static Poly monomial(Exp e, const integer &c)
    {
        Poly p(e.size());
        p.add_term(std::move(e), c);
        return p;
    }

    std::size_t nvars() const
    {
        return m_nvars;
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }
    std::size_t num_terms() const
    {
        return m_terms.size();
    }
    const terms_type &terms() const
    {
        return m_terms;
    }
    bool is_constant() const
    {
        return m_terms.empty() || (m_terms.size() == 1 && is_zero_exp(m_terms.begin()->first));
    }
    // Constant term value; only meaningful when is_constant().
    integer constant_value() const
    {
        return m_terms.empty() ? integer(0) : m_terms.begin()->second;
    }
    const std::pair<const Exp, integer> &leading_term() const
    {
        return *m_terms.rbegin();
    }

    void add_term(Exp e, const integer &c)
    {
        if (e.size() != m_nvars) {
            throw math_error("Poly: exponent length mismatch");
        }
        if (sgn(c) == 0) {
            return;
        }
        auto [it, inserted] = m_terms.try_emplace(std::move(e), c);
        if (!inserted) {
            it->second += c;
            if (sgn(it->second) == 0) {
                m_terms.erase(it);
            }
        }
    }

    // Total degree; -1 for the zero polynomial.
    std::int64_t total_degree() const
    {
        std::int64_t d = -1;
        for (const auto &[e, c] : m_terms) {
            d = std::max(d, exp_sum(e));
        }
        return d;
    }
    bool is_homogeneous() const
    {
        if (m_terms.empty()) {
            return true;
        }
        const std::int64_t d = exp_sum(m_terms.begin()->first);
        return std::all_of(m_terms.begin(), m_terms.end(), [&](const auto &t) { return exp_sum(t.first) == d; });
    }
    std::int64_t degree_in(std::size_t v) const
    {
        std::int64_t d = -1;
        for (const auto &[e, c] : m_terms) {
            d = std::max(d, e[v]);
        }
        return d;
    }
    bool uses_variable(std::size_t v) const
    {
        return std::any_of(m_terms.begin(), m_terms.end(), [&](const auto &t) { return t.first[v] != 0; });
    }
    // Componentwise minimum exponent (the largest monomial dividing p).
    Exp min_exponents() const
    {
        if (m_terms.empty()) {
            return Exp(m_nvars, 0);
        }
        Exp m = m_terms.begin()->first;
        for (const auto &[e, c] : m_terms) {
            for (std::size_t i = 0; i < m_nvars; ++i) {
                m[i] = std::min(m[i], e[i]);
            }
        }
        return m;
    }
    integer content() const
    {
        integer g = 0;
        for (const auto &[e, c] : m_terms) {
            mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
            if (g == 1) {
                break;
            }
        }
        return g;
    }

    Poly shifted_down(const Exp &m) const
    {
        Poly r(m_nvars);
        for (const auto &[e, c] : m_terms) {
            Exp f = e;
            for (std::size_t i = 0; i < m_nvars; ++i) {
                f[i] -= m[i];
                if (f[i] < 0) {
                    throw math_error("Poly: monomial does not divide");
                }
            }
            r.m_terms.emplace_hint(r.m_terms.end(), std::move(f), c);
        }
        return r;
    }
    Poly shifted_up(const Exp &m) const
    {
        Poly r(m_nvars);
        for (const auto &[e, c] : m_terms) {
            Exp f = e;
            for (std::size_t i = 0; i < m_nvars; ++i) {
                f[i] = detail::checked_add(f[i], m[i]);
            }
            r.m_terms.emplace_hint(r.m_terms.end(), std::move(f), c);
        }
        return r;
    }
    Poly divided_by(const integer &d) const
    {
        Poly r(m_nvars);
        for (const auto &[e, c] : m_terms) {
            integer q;
            mpz_divexact(q.get_mpz_t(), c.get_mpz_t(), d.get_mpz_t());
            r.m_terms.emplace_hint(r.m_terms.end(), e, q);
        }
        return r;
    }
    // Content removed, lex-leading coefficient positive.
    Poly primitive() const
    {
        if (m_terms.empty()) {
            return *this;
        }
        integer g = content();
        if (sgn(leading_term().second) < 0) {
            g = -g;
        }
        return g == 1 ? *this : divided_by(g);
    }

    friend Poly operator+(const Poly &a, const Poly &b)
    {
        Poly r = a;
        r += b;
        return r;
    }
    Poly &operator+=(const Poly &b)
    {
        check_space(b);
        for (const auto &[e, c] : b.m_terms) {
            add_term(e, c);
        }
        return *this;
    }
    friend Poly operator-(const Poly &a, const Poly &b)
    {
        Poly r = a;
        r -= b;
        return r;
    }
    Poly &operator-=(const Poly &b)
    {
        check_space(b);
        for (const auto &[e, c] : b.m_terms) {
            add_term(e, -c);
        }
        return *this;
    }
    friend Poly operator-(const Poly &a)
    {
        Poly r = a;
        for (auto &[e, c] : r.m_terms) {
            c = -c;
        }
        return r;
    }
    friend Poly operator*(const integer &s, const Poly &a)
    {
        if (sgn(s) == 0) {
            return Poly(a.m_nvars);
        }
        Poly r = a;
        for (auto &[e, c] : r.m_terms) {
            c *= s;
        }
        return r;
    }
    friend Poly operator*(const Poly &a, const Poly &b)
    {
        a.check_space(b);
        if (a.m_terms.size() == 1 && is_zero_exp(a.m_terms.begin()->first)) {
            return a.m_terms.begin()->second * b;
        }
        if (b.m_terms.size() == 1 && is_zero_exp(b.m_terms.begin()->first)) {
            return b.m_terms.begin()->second * a;
        }
        Poly r(a.m_nvars);
        Exp e(a.m_nvars);
        integer prod;
        for (const auto &[ea, ca] : a.m_terms) {
            for (const auto &[eb, cb] : b.m_terms) {
                for (std::size_t i = 0; i < a.m_nvars; ++i) {
                    e[i] = detail::checked_add(ea[i], eb[i]);
                }
                mpz_mul(prod.get_mpz_t(), ca.get_mpz_t(), cb.get_mpz_t());
                auto [it, inserted] = r.m_terms.try_emplace(e, prod);
                if (!inserted) {
                    it->second += prod;
                }
            }
        }
        std::erase_if(r.m_terms, [](const auto &t) { return sgn(t.second) == 0; });
        return r;
    }
    Poly &operator*=(const Poly &b)
    {
        *this = *this * b;
        return *this;
    }

    friend bool operator==(const Poly &a, const Poly &b)
    {
        return a.m_nvars == b.m_nvars && a.m_terms == b.m_terms;
    }

    Poly derivative(std::size_t v) const
    {
        Poly r(m_nvars);
        for (const auto &[e, c] : m_terms) {
            if (e[v] == 0) {
                continue;
            }
            Exp f = e;
            f[v] -= 1;
            r.add_term(std::move(f), c * integer(static_cast<long>(e[v])));
        }
        return r;
    }

    // Coefficients of p viewed as a polynomial in x_v; the keys are powers
    // of x_v and the values no longer involve x_v.
    std::map<std::int64_t, Poly> coefficients_in(std::size_t v) const
    {
        std::map<std::int64_t, Poly> out;
        for (const auto &[e, c] : m_terms) {
            Exp f = e;
            f[v] = 0;
            auto [it, ins] = out.try_emplace(e[v], Poly(m_nvars));
            it->second.m_terms.emplace(std::move(f), c);
        }
        return out;
    }

    template <typename Ring>
    Ring evaluate(const std::vector<Ring> &point) const
    {
        if (point.size() != m_nvars) {
            throw math_error("Poly: evaluation point has the wrong length");
        }
        Ring total = 0;
        for (const auto &[e, c] : m_terms) {
            Ring t = c;
            for (std::size_t i = 0; i < m_nvars; ++i) {
                if (e[i] != 0) {
                    t *= power(point[i], e[i]);
                }
            }
            total += t;
        }
        return total;
    }

    std::string to_string(const std::vector<std::string> &names) const
    {
        if (m_terms.empty()) {
            return "0";
        }
        std::string s;
        bool first = true;
        for (auto it = m_terms.rbegin(); it != m_terms.rend(); ++it) {
            const auto &[e, c] = *it;
            integer mag = abs(c);
            if (first) {
                s += sgn(c) < 0 ? "-" : "";
            } else {
                s += sgn(c) < 0 ? " - " : " + ";
            }
            first = false;
            bool any = false;
            if (mag != 1 || is_zero_exp(e)) {
                s += mag.get_str();
                any = true;
            }
            for (std::size_t i = 0; i < m_nvars; ++i) {
                if (e[i] == 0) {
                    continue;
                }
                s += any ? "*" : "";
                s += names.at(i);
                if (e[i] != 1) {
                    s += "^" + std::to_string(e[i]);
                }
                any = true;
            }
        }
        return s;
    }
    std::string to_string() const
    {
        std::vector<std::string> names;
        for (std::size_t i = 0; i < m_nvars; ++i) {
            names.push_back("x" + std::to_string(i));
        }
        return to_string(names);
    }

private:
    static bool is_zero_exp(const Exp &e)
    {
        return std::all_of(e.begin(), e.end(), [](std::int64_t x) { return x == 0; });
    }
    static std::int64_t exp_sum(const Exp &e)
    {
        std::int64_t s = 0;
        for (auto x : e) {
            s = detail::checked_add(s, x);
        }
        return s;
    }
    template <typename Ring>
    static Ring power(Ring base, std::int64_t e)
    {
        Ring r = 1;
        while (e > 0) {
            if (e & 1) {
                r *= base;
            }
            e >>= 1;
            if (e > 0) {
                base *= base;
            }
        }
        return r;
    }
    void check_space(const Poly &b) const
    {
        if (b.m_nvars != m_nvars) {
            throw math_error("Poly: variable count mismatch");
        }
    }

    std::size_t m_nvars = 0;
    terms_type m_terms;
};

inline std::ostream &operator<<(std::ostream &os, const Poly &p)
{
    return os << p.to_string();
}

inline Poly pow(const Poly &p, std::int64_t e)
{
    if (e < 0) {
        throw math_error("Poly: negative power");
    }
    Poly r = Poly::constant(p.nvars(), 1);
    if (p.num_terms() == 1) {
        const auto &[ex, c] = *p.terms().begin();
        Exp f = ex;
        for (auto &x : f) {
            x = detail::checked_mul(x, e);
        }
        return Poly::monomial(std::move(f), ipow(c, static_cast<unsigned long>(e)));
    }
    Poly base = p;
    while (e > 0) {
        if (e & 1) {
            r *= base;
        }
        e >>= 1;
        if (e > 0) {
            base *= base;
        }
    }
    return r;
}

// Exact division in Z[x]; throws when b does not divide a.
inline Poly divide_exact(const Poly &a, const Poly &b)
{
    if (b.is_zero()) {
        throw math_error("divide_exact: division by zero");
    }
    const std::size_t n = a.nvars();
    Poly q(n);
    Poly r = a;
    const auto &[eb, cb] = b.leading_term();
    if (b.num_terms() == 1) {
        for (const auto &[e, c] : a.terms()) {
            Exp f = e;
            for (std::size_t i = 0; i < n; ++i) {
                f[i] -= eb[i];
                if (f[i] < 0) {
                    throw math_error("divide_exact: not divisible");
                }
            }
            if (!mpz_divisible_p(c.get_mpz_t(), cb.get_mpz_t())) {
                throw math_error("divide_exact: not divisible");
            }
            integer qc;
            mpz_divexact(qc.get_mpz_t(), c.get_mpz_t(), cb.get_mpz_t());
            q.add_term(std::move(f), qc);
        }
        return q;
    }
    while (!r.is_zero()) {
        const auto &[er, cr] = r.leading_term();
        Exp f = er;
        for (std::size_t i = 0; i < n; ++i) {
            f[i] -= eb[i];
            if (f[i] < 0) {
                throw math_error("divide_exact: not divisible");
            }
        }
        if (!mpz_divisible_p(cr.get_mpz_t(), cb.get_mpz_t())) {
            throw math_error("divide_exact: not divisible");
        }
        integer qc;
        mpz_divexact(qc.get_mpz_t(), cr.get_mpz_t(), cb.get_mpz_t());
        Poly t = Poly::monomial(f, qc);
        q.add_term(std::move(f), qc);
        r -= t * b;
    }
    return q;
}

// Substitute polynomials (all in the same variable set) for the variables
// of p.
inline Poly substitute(const Poly &p, const std::vector<Poly> &values)
{
    if (values.size() != p.nvars()) {
        throw math_error("substitute: wrong number of values");
    }
    if (values.empty()) {
        return p;
    }
    const std::size_t n = values.front().nvars();
    std::vector<std::map<std::int64_t, Poly>> cache(values.size());
    auto power_of = [&](std::size_t v, std::int64_t e) -> const Poly & {
        auto it = cache[v].find(e);
        if (it != cache[v].end()) {
            return it->second;
        }
        return cache[v].emplace(e, pow(values[v], e)).first->second;
    };
    Poly out(n);
    for (const auto &[e, c] : p.terms()) {
        Poly t = Poly::constant(n, c);
        for (std::size_t v = 0; v < e.size(); ++v) {
            if (e[v] != 0) {
                t *= power_of(v, e[v]);
            }
        }
        out += t;
    }
    return out;
}

namespace detail
{

inline constexpr std::uint64_t gcd_prime = 2147483647u;

inline std::uint64_t mod_pow(std::uint64_t b, std::int64_t e, std::uint64_t p)
{
    std::uint64_t r = 1;
    b %= p;
    while (e > 0) {
        if (e & 1) {
            r = r * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    return r;
}

inline std::uint64_t mod_inv(std::uint64_t a, std::uint64_t p)
{
    return mod_pow(a, static_cast<std::int64_t>(p - 2), p);
}

inline std::uint64_t residue(const integer &c, std::uint64_t p)
{
    return mpz_fdiv_ui(c.get_mpz_t(), p);
}

// Dense image of a in F_p[x_v] after fixing the other variables.
inline std::vector<std::uint64_t> univariate_image(const Poly &a, std::size_t v, const std::vector<std::uint64_t> &point,
                                                   std::uint64_t p)
{
    std::vector<std::uint64_t> out(static_cast<std::size_t>(a.degree_in(v) + 1), 0);
    for (const auto &[e, c] : a.terms()) {
        std::uint64_t t = residue(c, p);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (i != v && e[i] != 0) {
                t = t * mod_pow(point[i], e[i], p) % p;
            }
        }
        auto &slot = out[static_cast<std::size_t>(e[v])];
        slot = (slot + t) % p;
    }
    return out;
}

inline void trim(std::vector<std::uint64_t> &a)
{
    while (!a.empty() && a.back() == 0) {
        a.pop_back();
    }
}

// Degree of gcd in F_p[x]; both inputs nonzero.
inline std::size_t mod_gcd_degree(std::vector<std::uint64_t> a, std::vector<std::uint64_t> b, std::uint64_t p)
{
    trim(a);
    trim(b);
    while (!b.empty()) {
        if (a.size() >= b.size()) {
            std::uint64_t inv = mod_inv(b.back(), p);
            while (a.size() >= b.size()) {
                std::uint64_t f = a.back() * inv % p;
                std::size_t shift = a.size() - b.size();
                for (std::size_t i = 0; i < b.size(); ++i) {
                    a[shift + i] = (a[shift + i] + p - f * b[i] % p) % p;
                }
                trim(a);
                if (a.empty()) {
                    break;
                }
            }
        }
        std::swap(a, b);
    }
    return a.size() - 1;
}

// True when gcd(a, b) provably has degree 0 in x_v: the images in F_p[x_v]
// keep their degrees and are coprime.
inline bool coprime_in_variable(const Poly &a, const Poly &b, std::size_t v, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<std::uint64_t> dist(1, gcd_prime - 1);
    for (int attempt = 0; attempt < 2; ++attempt) {
        std::vector<std::uint64_t> point(a.nvars());
        for (auto &x : point) {
            x = dist(rng);
        }
        auto ia = univariate_image(a, v, point, gcd_prime);
        auto ib = univariate_image(b, v, point, gcd_prime);
        if (ia.back() == 0 || ib.back() == 0) {
            continue;
        }
        if (mod_gcd_degree(ia, ib, gcd_prime) == 0) {
            return true;
        }
    }
    return false;
}

inline Poly poly_gcd(const Poly &a, const Poly &b, std::mt19937_64 &rng);

// gcd of the coefficients of p with respect to x_v.
inline Poly content_in(const Poly &p, std::size_t v, std::mt19937_64 &rng)
{
    auto coeffs = p.coefficients_in(v);
    Poly g(p.nvars());
    for (const auto &[d, c] : coeffs) {
        g = poly_gcd(g, c, rng);
        if (g.is_constant() && g.constant_value() == 1) {
            break;
        }
    }
    return g;
}

inline Poly primitive_in(const Poly &p, std::size_t v, std::mt19937_64 &rng)
{
    Poly c = content_in(p, v, rng);
    if (c.is_constant()) {
        return p.primitive();
    }
    return divide_exact(p, c).primitive();
}

// Pseudo-remainder of a by b with respect to x_v.
inline Poly prem_in(const Poly &a, const Poly &b, std::size_t v)
{
    const std::int64_t db = b.degree_in(v);
    auto bc = b.coefficients_in(v);
    const Poly lb = bc.rbegin()->second;
    Poly r = a;
    while (!r.is_zero() && r.degree_in(v) >= db) {
        const std::int64_t dr = r.degree_in(v);
        Poly lr = r.coefficients_in(v).rbegin()->second;
        Exp sh(a.nvars(), 0);
        sh[v] = dr - db;
        r = lb * r - lr.shifted_up(sh) * b;
    }
    return r;
}

inline Poly poly_gcd(const Poly &a, const Poly &b, std::mt19937_64 &rng)
{
    if (a.is_zero()) {
        return b.is_zero() || sgn(b.leading_term().second) > 0 ? b : -b;
    }
    if (b.is_zero()) {
        return sgn(a.leading_term().second) < 0 ? -a : a;
    }
    const std::size_t n = a.nvars();
    Exp ma = a.min_exponents();
    Exp mb = b.min_exponents();
    Exp mono(n);
    for (std::size_t i = 0; i < n; ++i) {
        mono[i] = std::min(ma[i], mb[i]);
    }
    Poly a1 = a.shifted_down(ma);
    Poly b1 = b.shifted_down(mb);
    integer c = gcd(a1.content(), b1.content());
    a1 = a1.primitive();
    b1 = b1.primitive();
    auto finish = [&](const Poly &g) { return (c * g).shifted_up(mono); };
    if (a1.is_constant() || b1.is_constant()) {
        return finish(Poly::constant(n, 1));
    }
    // Variables used by only one side can be eliminated through contents.
    for (bool changed = true; changed;) {
        changed = false;
        for (std::size_t v = 0; v < n; ++v) {
            bool ua = a1.uses_variable(v);
            bool ub = b1.uses_variable(v);
            if (ua && !ub) {
                a1 = content_in(a1, v, rng);
                changed = true;
            } else if (ub && !ua) {
                b1 = content_in(b1, v, rng);
                changed = true;
            }
            if (a1.is_constant() || b1.is_constant()) {
                return finish(Poly::constant(n, 1));
            }
        }
    }
    std::vector<std::size_t> vars;
    for (std::size_t v = 0; v < n; ++v) {
        if (a1.uses_variable(v)) {
            vars.push_back(v);
        }
    }
    if (std::all_of(vars.begin(), vars.end(), [&](std::size_t v) { return coprime_in_variable(a1, b1, v, rng); })) {
        return finish(Poly::constant(n, 1));
    }
    std::size_t main = vars.front();
    for (std::size_t v : vars) {
        if (std::max(a1.degree_in(v), b1.degree_in(v)) < std::max(a1.degree_in(main), b1.degree_in(main))) {
            main = v;
        }
    }
    Poly ca = content_in(a1, main, rng);
    Poly cb = content_in(b1, main, rng);
    Poly gc = poly_gcd(ca, cb, rng);
    Poly pa = ca.is_constant() ? a1 : divide_exact(a1, ca);
    Poly pb = cb.is_constant() ? b1 : divide_exact(b1, cb);
    if (pa.degree_in(main) < pb.degree_in(main)) {
        std::swap(pa, pb);
    }
    while (!pb.is_zero() && pb.degree_in(main) > 0) {
        Poly r = prem_in(pa, pb, main);
        pa = std::move(pb);
        pb = r.is_zero() ? r : primitive_in(r, main, rng);
    }
    Poly g = pb.is_zero() ? primitive_in(pa, main, rng) : Poly::constant(n, 1);
    Poly out = gc * g;
    return finish(sgn(out.leading_term().second) < 0 ? -out : out);
}

} // namespace detail

// Greatest common divisor in Z[x], normalized to a positive lex-leading
// coefficient.
inline Poly gcd(const Poly &a, const Poly &b)
{
    if (a.nvars() != b.nvars()) {
        throw math_error("gcd: variable count mismatch");
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    return detail::poly_gcd(a, b, rng);
}

inline Poly gcd(const std::vector<Poly> &polys)
{
    if (polys.empty()) {
        throw math_error("gcd: empty list");
    }
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL);
    Poly g(polys.front().nvars());
    for (const auto &p : polys) {
        g = detail::poly_gcd(g, p, rng);
    }
    return g;
}

} // namespace dyndeg

#endif
