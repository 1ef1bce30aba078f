#ifndef DYNDEG_COHOMOLOGY_HPP
#define DYNDEG_COHOMOLOGY_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <dyndeg/core.hpp>

namespace dyndeg
{

// A product P^{n_1} x ... x P^{n_r} of projective spaces.
class MultiProjSpace
{
public:
    MultiProjSpace() = default;
    explicit MultiProjSpace(std::vector<int> factor_dims) : m_dims(std::move(factor_dims))
    {
        if (m_dims.empty()) {
            throw math_error("MultiProjSpace: at least one factor is required");
        }
        for (int n : m_dims) {
            if (n < 1) {
                throw math_error("MultiProjSpace: factor dimensions must be positive");
            }
        }
        m_total = std::accumulate(m_dims.begin(), m_dims.end(), 0);
    }

    const std::vector<int> &factor_dims() const
    {
        return m_dims;
    }
    std::size_t factors() const
    {
        return m_dims.size();
    }
    int total_dim() const
    {
        return m_total;
    }

    friend bool operator==(const MultiProjSpace &, const MultiProjSpace &) = default;

private:
    std::vector<int> m_dims;
    int m_total = 0;
};

using Exponents = std::vector<int>;

// A class of bidegree (p,p) in the cohomology ring Q[t_1..t_r]/(t_i^{n_i+1}),
// stored sparsely over the Kuenneth monomial basis. The top monomial
// t_1^{n_1}...t_r^{n_r} integrates to 1.
class CohomologyClass
{
public:
    using terms_type = std::map<Exponents, rational>;

    CohomologyClass(MultiProjSpace space, int degree) : m_space(std::move(space)), m_degree(degree)
    {
        if (degree < 0 || degree > m_space.total_dim()) {
            throw math_error("CohomologyClass: degree out of range");
        }
    }

    static CohomologyClass one(const MultiProjSpace &space)
    {
        CohomologyClass c(space, 0);
        c.m_terms.emplace(Exponents(space.factors(), 0), rational(1));
        return c;
    }

    // t_i, the pullback of the hyperplane class of factor i.
    static CohomologyClass generator(const MultiProjSpace &space, std::size_t i)
    {
        if (i >= space.factors()) {
            throw math_error("CohomologyClass::generator: factor index out of range");
        }
        Exponents e(space.factors(), 0);
        e[i] = 1;
        return monomial(space, e, rational(1));
    }

    static CohomologyClass monomial(const MultiProjSpace &space, const Exponents &e, const rational &coeff)
    {
        if (e.size() != space.factors()) {
            throw math_error("CohomologyClass::monomial: exponent length mismatch");
        }
        int deg = 0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 0) {
                throw math_error("CohomologyClass::monomial: negative exponent");
            }
            deg += e[i];
        }
        CohomologyClass c(space, deg);
        c.add_term(e, coeff);
        return c;
    }

    // omega = t_1 + ... + t_r.
    static CohomologyClass kahler(const MultiProjSpace &space)
    {
        CohomologyClass c(space, 1);
        for (std::size_t i = 0; i < space.factors(); ++i) {
            Exponents e(space.factors(), 0);
            e[i] = 1;
            c.add_term(e, rational(1));
        }
        return c;
    }

    const MultiProjSpace &space() const
    {
        return m_space;
    }
    int degree() const
    {
        return m_degree;
    }
    const terms_type &terms() const
    {
        return m_terms;
    }
    bool is_zero() const
    {
        return m_terms.empty();
    }

    rational coefficient(const Exponents &e) const
    {
        auto it = m_terms.find(e);
        return it == m_terms.end() ? rational(0) : it->second;
    }

    // Adds coeff * t^e. Monomials killed by the truncation relations are
    // dropped; a total degree different from the class degree is an error.
    void add_term(const Exponents &e, const rational &coeff)
    {
        if (e.size() != m_space.factors()) {
            throw math_error("CohomologyClass: exponent length mismatch");
        }
        int deg = 0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (e[i] < 0) {
                throw math_error("CohomologyClass: negative exponent");
            }
            if (e[i] > m_space.factor_dims()[i]) {
                return;
            }
            deg += e[i];
        }
        if (deg != m_degree) {
            throw math_error("CohomologyClass: monomial degree differs from class degree");
        }
        if (sgn(coeff) == 0) {
            return;
        }
        auto [it, inserted] = m_terms.emplace(e, coeff);
        if (inserted) {
            it->second.canonicalize();
        } else {
            it->second += coeff;
            if (sgn(it->second) == 0) {
                m_terms.erase(it);
            }
        }
    }

    CohomologyClass &operator+=(const CohomologyClass &o)
    {
        check_compatible(o);
        for (const auto &[e, c] : o.m_terms) {
            add_term(e, c);
        }
        return *this;
    }
    CohomologyClass &operator-=(const CohomologyClass &o)
    {
        check_compatible(o);
        for (const auto &[e, c] : o.m_terms) {
            add_term(e, -c);
        }
        return *this;
    }
    CohomologyClass &operator*=(const rational &s)
    {
        if (sgn(s) == 0) {
            m_terms.clear();
            return *this;
        }
        for (auto &[e, c] : m_terms) {
            c *= s;
        }
        return *this;
    }

    friend CohomologyClass operator+(CohomologyClass a, const CohomologyClass &b)
    {
        return a += b;
    }
    friend CohomologyClass operator-(CohomologyClass a, const CohomologyClass &b)
    {
        return a -= b;
    }
    friend CohomologyClass operator*(const rational &s, CohomologyClass a)
    {
        return a *= s;
    }

    friend bool operator==(const CohomologyClass &a, const CohomologyClass &b)
    {
        return a.m_space == b.m_space && a.m_degree == b.m_degree && a.m_terms == b.m_terms;
    }

    std::string to_string() const
    {
        if (m_terms.empty()) {
            return "0";
        }
        std::ostringstream os;
        bool first = true;
        for (const auto &[e, c] : m_terms) {
            if (!first) {
                os << " + ";
            }
            first = false;
            os << c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] > 0) {
                    os << "*t" << (i + 1);
                    if (e[i] > 1) {
                        os << '^' << e[i];
                    }
                }
            }
        }
        return os.str();
    }

private:
    void check_compatible(const CohomologyClass &o) const
    {
        if (!(m_space == o.m_space)) {
            throw math_error("CohomologyClass: space mismatch");
        }
        if (m_degree != o.m_degree) {
            throw math_error("CohomologyClass: degree mismatch in sum");
        }
    }

    MultiProjSpace m_space;
    int m_degree;
    terms_type m_terms;
};

inline std::ostream &operator<<(std::ostream &os, const CohomologyClass &c)
{
    return os << c.to_string();
}

inline CohomologyClass cup(const CohomologyClass &c1, const CohomologyClass &c2)
{
    if (!(c1.space() == c2.space())) {
        throw math_error("cup: space mismatch");
    }
    int deg = c1.degree() + c2.degree();
    if (deg > c1.space().total_dim()) {
        throw math_error("cup: degree " + std::to_string(deg) + " exceeds the dimension "
                         + std::to_string(c1.space().total_dim()));
    }
    CohomologyClass out(c1.space(), deg);
    const auto &dims = c1.space().factor_dims();
    Exponents e(dims.size());
    for (const auto &[e1, a] : c1.terms()) {
        for (const auto &[e2, b] : c2.terms()) {
            bool vanishes = false;
            for (std::size_t i = 0; i < dims.size(); ++i) {
                e[i] = e1[i] + e2[i];
                vanishes = vanishes || e[i] > dims[i];
            }
            if (!vanishes) {
                out.add_term(e, a * b);
            }
        }
    }
    return out;
}

inline CohomologyClass cup_power(const CohomologyClass &c, int e)
{
    if (e < 0) {
        throw math_error("cup_power: negative exponent");
    }
    CohomologyClass r = CohomologyClass::one(c.space());
    for (int i = 0; i < e; ++i) {
        r = cup(r, c);
    }
    return r;
}

// Coefficient of the top monomial; zero below top degree.
inline rational integrate(const CohomologyClass &c)
{
    if (c.degree() != c.space().total_dim()) {
        return rational(0);
    }
    return c.coefficient(c.space().factor_dims());
}

inline rational pairing(const CohomologyClass &a, const CohomologyClass &b)
{
    return integrate(cup(a, b));
}

// <c, kaehler^{k-p}>.
inline rational mass(const CohomologyClass &c, const CohomologyClass &kaehler)
{
    if (!(c.space() == kaehler.space())) {
        throw math_error("mass: space mismatch");
    }
    if (kaehler.degree() != 1) {
        throw math_error("mass: the Kaehler class must have degree 1");
    }
    if (kaehler.terms().size() != c.space().factors()) {
        throw math_error("mass: the Kaehler class must be strictly positive on every factor");
    }
    for (const auto &[e, coeff] : kaehler.terms()) {
        if (sgn(coeff) <= 0) {
            throw math_error("mass: the Kaehler class must be strictly positive on every factor");
        }
    }
    return integrate(cup(c, cup_power(kaehler, c.space().total_dim() - c.degree())));
}

// alpha_j(c) = <c, t_1^{l-j} t_2^{m-p+j}> on P^l x P^m, for
// max(0, p-m) <= j <= min(l, p). Keyed by j.
inline std::map<int, rational> alpha_coeffs(const CohomologyClass &c)
{
    const auto &space = c.space();
    if (space.factors() != 2) {
        throw math_error("alpha_coeffs: the space must have exactly two factors");
    }
    const int l = space.factor_dims()[0];
    const int m = space.factor_dims()[1];
    const int p = c.degree();
    std::map<int, rational> out;
    for (int j = std::max(0, p - m); j <= std::min(l, p); ++j) {
        auto dual = CohomologyClass::monomial(space, {l - j, m - p + j}, rational(1));
        out.emplace(j, pairing(c, dual));
    }
    return out;
}

// Coefficientwise nonnegativity over the Kuenneth basis, the positivity
// notion of the nef cone of a product of projective spaces.
inline bool is_effective(const CohomologyClass &c)
{
    return std::all_of(c.terms().begin(), c.terms().end(),
                       [](const auto &kv) { return sgn(kv.second) >= 0; });
}

} // namespace dyndeg

#endif
