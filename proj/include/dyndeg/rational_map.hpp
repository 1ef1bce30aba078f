#ifndef DYNDEG_RATIONAL_MAP_HPP
#define DYNDEG_RATIONAL_MAP_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <dyndeg/core.hpp>
#include <dyndeg/expr_parser.hpp>
#include <dyndeg/int_matrix.hpp>
#include <dyndeg/monomial.hpp>
#include <dyndeg/polynomial.hpp>

namespace dyndeg
{

// A rational self-map of P^k given by k+1 homogeneous polynomials of a
// common degree in x0..xk.
class ProjectiveRationalMap
{
public:
    ProjectiveRationalMap() = default;
    explicit ProjectiveRationalMap(std::vector<Poly> components, bool reduced = false)
        : m_components(std::move(components)), m_reduced(reduced)
    {
        if (m_components.size() < 2) {
            throw input_error("a self-map of P^k needs k+1 >= 2 components");
        }
        const std::size_t n = m_components.size();
        bool have_degree = false;
        for (std::size_t i = 0; i < n; ++i) {
            const Poly &c = m_components[i];
            if (c.nvars() != n) {
                throw input_error("component " + std::to_string(i + 1) + " uses " + std::to_string(c.nvars())
                                  + " variables, expected " + std::to_string(n));
            }
            if (c.is_zero()) {
                continue;
            }
            if (!c.is_homogeneous()) {
                throw input_error("component " + std::to_string(i + 1) + " inhomogeneous");
            }
            if (!have_degree) {
                m_degree = c.total_degree();
                have_degree = true;
            } else if (c.total_degree() != m_degree) {
                throw input_error("mixed degrees: component " + std::to_string(i + 1) + " has degree "
                                  + std::to_string(c.total_degree()) + ", expected " + std::to_string(m_degree));
            }
        }
        if (!have_degree) {
            throw math_error("all components are zero");
        }
    }

    std::size_t k() const
    {
        return m_components.size() - 1;
    }
    std::int64_t degree() const
    {
        return m_degree;
    }
    bool reduced() const
    {
        return m_reduced;
    }
    const std::vector<Poly> &components() const
    {
        return m_components;
    }
    const Poly &operator[](std::size_t i) const
    {
        return m_components[i];
    }

    friend bool operator==(const ProjectiveRationalMap &a, const ProjectiveRationalMap &b)
    {
        return a.m_components == b.m_components;
    }

    std::string to_string() const
    {
        std::string s = "[";
        for (std::size_t i = 0; i < m_components.size(); ++i) {
            s += (i ? ", " : "") + m_components[i].to_string();
        }
        return s + "]";
    }

private:
    std::vector<Poly> m_components;
    std::int64_t m_degree = 0;
    bool m_reduced = false;
};

inline std::ostream &operator<<(std::ostream &os, const ProjectiveRationalMap &f)
{
    return os << f.to_string();
}

inline ProjectiveRationalMap parse_map(std::string_view text, std::size_t k)
{
    auto comps = parse_poly_list(text, projective_names(k));
    if (comps.size() != k + 1) {
        throw input_error("expected " + std::to_string(k + 1) + " components, got " + std::to_string(comps.size()));
    }
    return ProjectiveRationalMap(std::move(comps));
}

inline ProjectiveRationalMap gcd_reduce(const ProjectiveRationalMap &f)
{
    if (f.reduced()) {
        return f;
    }
    Poly g = gcd(f.components());
    std::vector<Poly> out;
    out.reserve(f.components().size());
    if (g.is_constant()) {
        integer c = g.constant_value();
        for (const auto &p : f.components()) {
            out.push_back(c == 1 ? p : p.divided_by(c));
        }
    } else {
        for (const auto &p : f.components()) {
            out.push_back(divide_exact(p, g));
        }
    }
    return ProjectiveRationalMap(std::move(out), true);
}

// Unreduced f o g: g's components substituted into f.
inline ProjectiveRationalMap compose_raw(const ProjectiveRationalMap &f, const ProjectiveRationalMap &g)
{
    if (f.k() != g.k()) {
        throw math_error("compose: maps act on different projective spaces");
    }
    std::vector<Poly> out;
    out.reserve(f.components().size());
    bool all_zero = true;
    for (const auto &c : f.components()) {
        out.push_back(substitute(c, g.components()));
        all_zero = all_zero && out.back().is_zero();
    }
    if (all_zero) {
        throw math_error("compose: the composition is identically zero (non-dominant)");
    }
    return ProjectiveRationalMap(std::move(out));
}

inline ProjectiveRationalMap compose(const ProjectiveRationalMap &f, const ProjectiveRationalMap &g)
{
    return gcd_reduce(compose_raw(f, g));
}

// Full-rank test of the (k+1)x(k+1) Jacobian of the reduced lift at random
// integer points. A false result after all attempts can in principle be a
// false negative on an unlucky sample.
inline bool is_dominant(const ProjectiveRationalMap &f, std::uint64_t seed = 1, int attempts = 3)
{
    ProjectiveRationalMap r = gcd_reduce(f);
    if (r.degree() < 1) {
        return false;
    }
    const std::size_t n = r.k() + 1;
    std::vector<std::vector<Poly>> jac(n, std::vector<Poly>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            jac[i][j] = r[i].derivative(j);
        }
    }
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<long> coord(-97, 97);
    for (int a = 0; a < attempts; ++a) {
        std::vector<integer> pt(n);
        for (auto &x : pt) {
            x = coord(rng);
        }
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                m(i, j) = jac[i][j].evaluate(pt);
            }
        }
        if (sgn(determinant(m)) != 0) {
            return true;
        }
    }
    return false;
}

inline DegreeSequence degree_sequence_d1(const ProjectiveRationalMap &f, int n_max)
{
    if (n_max < 1) {
        throw math_error("degree_sequence_d1: N must be at least 1");
    }
    if (!is_dominant(f)) {
        throw math_error("degree_sequence_d1: the map is not dominant");
    }
    DegreeSequence seq;
    seq.p = 1;
    ProjectiveRationalMap base = gcd_reduce(f);
    ProjectiveRationalMap h = base;
    seq.values.push_back(integer(static_cast<long>(h.degree())));
    for (int n = 2; n <= n_max; ++n) {
        h = compose(base, h);
        seq.values.push_back(integer(static_cast<long>(h.degree())));
    }
    return seq;
}

struct D1Estimate {
    double estimate = 0;
    double upper_bound = 0;
};

// Fekete-style estimate of d_1 from lambda_1(f^n), n = 1..N. The bound
// min_n lambda_1(f^n)^(1/n) is rigorous by submultiplicativity; the estimate
// is the last ratio when the tail ratios move monotonically, otherwise the
// N-th root of the last value.
inline D1Estimate estimate_d1(const DegreeSequence &seq)
{
    const auto &v = seq.values;
    if (v.empty()) {
        throw math_error("estimate_d1: empty sequence");
    }
    std::vector<double> logs;
    for (const auto &x : v) {
        if (x < 1) {
            throw math_error("estimate_d1: degrees must be at least 1");
        }
        logs.push_back(log_of(x));
    }
    D1Estimate out;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t n = 0; n < logs.size(); ++n) {
        best = std::min(best, logs[n] / static_cast<double>(n + 1));
    }
    out.upper_bound = std::exp(best);
    const std::size_t N = logs.size();
    out.estimate = std::exp(logs.back() / static_cast<double>(N));
    if (N >= 3) {
        std::vector<double> ratios;
        for (std::size_t n = std::max<std::size_t>(1, N >= 4 ? N - 3 : 1); n < N; ++n) {
            ratios.push_back(logs[n] - logs[n - 1]);
        }
        bool nonincreasing = true;
        bool nondecreasing = true;
        for (std::size_t i = 1; i < ratios.size(); ++i) {
            const double slack = 1e-12 * std::max(1.0, std::abs(ratios[i - 1]));
            nonincreasing = nonincreasing && ratios[i] <= ratios[i - 1] + slack;
            nondecreasing = nondecreasing && ratios[i] >= ratios[i - 1] - slack;
        }
        bool positive = std::all_of(ratios.begin(), ratios.end(), [](double r) { return r >= 0; });
        if ((nonincreasing || nondecreasing) && positive) {
            out.estimate = std::exp(ratios.back());
        }
    } else if (N == 2 && logs[1] >= logs[0]) {
        out.estimate = std::exp(logs[1] - logs[0]);
    }
    out.estimate = std::min(out.estimate, out.upper_bound);
    return out;
}

// M o f o M^{-1} with M acting linearly on homogeneous coordinates. The
// adjugate stands in for the inverse since scalars do not matter
// projectively.
inline ProjectiveRationalMap conjugate(const ProjectiveRationalMap &f, const IntMatrix &m)
{
    const std::size_t n = f.k() + 1;
    if (m.rows() != n || m.cols() != n) {
        throw math_error("conjugate: matrix size does not match the map");
    }
    if (sgn(determinant(m)) == 0) {
        throw math_error("conjugate: singular matrix");
    }
    IntMatrix adj = adjugate(m);
    std::vector<Poly> lin;
    for (std::size_t j = 0; j < n; ++j) {
        Poly l(n);
        for (std::size_t i = 0; i < n; ++i) {
            if (sgn(adj(j, i)) != 0) {
                l += adj(j, i) * Poly::variable(n, i);
            }
        }
        lin.push_back(std::move(l));
    }
    std::vector<Poly> g;
    for (const auto &c : f.components()) {
        g.push_back(substitute(c, lin));
    }
    std::vector<Poly> out;
    for (std::size_t i = 0; i < n; ++i) {
        Poly h(n);
        for (std::size_t j = 0; j < n; ++j) {
            if (sgn(m(i, j)) != 0) {
                h += m(i, j) * g[j];
            }
        }
        out.push_back(std::move(h));
    }
    return gcd_reduce(ProjectiveRationalMap(std::move(out)));
}

// The homogenized monomial map [X^{v_0 - m} : ... : X^{v_k - m}] with
// v_0 = 0, v_i = (-rowsum_i, a_i) and m the componentwise minimum.
inline ProjectiveRationalMap monomial_map(const ExponentMatrix &a)
{
    const std::size_t k = a.dim();
    std::vector<Exp> vs(k + 1, Exp(k + 1, 0));
    for (std::size_t i = 0; i < k; ++i) {
        for (std::size_t j = 0; j < k; ++j) {
            if (!a(i, j).fits_slong_p()) {
                throw unsupported_error("monomial_map: exponent too large");
            }
            std::int64_t e = a(i, j).get_si();
            vs[i + 1][j + 1] = e;
            vs[i + 1][0] = detail::checked_add(vs[i + 1][0], -e);
        }
    }
    Exp mn = vs[0];
    for (const auto &v : vs) {
        for (std::size_t c = 0; c <= k; ++c) {
            mn[c] = std::min(mn[c], v[c]);
        }
    }
    std::vector<Poly> comps;
    for (auto &v : vs) {
        for (std::size_t c = 0; c <= k; ++c) {
            v[c] -= mn[c];
        }
        comps.push_back(Poly::monomial(v, integer(1)));
    }
    return ProjectiveRationalMap(std::move(comps), true);
}

} // namespace dyndeg

#endif
