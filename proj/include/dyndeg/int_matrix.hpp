#ifndef DYNDEG_INT_MATRIX_HPP
#define DYNDEG_INT_MATRIX_HPP

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <ostream>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <dyndeg/core.hpp>
#include <dyndeg/upoly.hpp>

namespace dyndeg
{

// Dense square or rectangular matrix of big integers, row-major.
class IntMatrix
{
public:
    IntMatrix() = default;
    IntMatrix(std::size_t rows, std::size_t cols) : m_rows(rows), m_cols(cols), m_data(rows * cols) {}
    IntMatrix(std::initializer_list<std::initializer_list<long>> rows)
    {
        m_rows = rows.size();
        m_cols = m_rows ? rows.begin()->size() : 0;
        m_data.reserve(m_rows * m_cols);
        for (const auto &r : rows) {
            if (r.size() != m_cols) {
                throw math_error("IntMatrix: ragged initializer");
            }
            for (long v : r) {
                m_data.emplace_back(v);
            }
        }
    }
    explicit IntMatrix(const std::vector<std::vector<integer>> &rows)
    {
        m_rows = rows.size();
        m_cols = m_rows ? rows.front().size() : 0;
        m_data.reserve(m_rows * m_cols);
        for (const auto &r : rows) {
            if (r.size() != m_cols) {
                throw math_error("IntMatrix: ragged rows");
            }
            m_data.insert(m_data.end(), r.begin(), r.end());
        }
    }

    static IntMatrix identity(std::size_t n)
    {
        IntMatrix m(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            m(i, i) = 1;
        }
        return m;
    }

    std::size_t rows() const
    {
        return m_rows;
    }
    std::size_t cols() const
    {
        return m_cols;
    }
    bool is_square() const
    {
        return m_rows == m_cols;
    }

    integer &operator()(std::size_t i, std::size_t j)
    {
        return m_data[i * m_cols + j];
    }
    const integer &operator()(std::size_t i, std::size_t j) const
    {
        return m_data[i * m_cols + j];
    }

    std::vector<integer> row(std::size_t i) const
    {
        return {m_data.begin() + static_cast<std::ptrdiff_t>(i * m_cols),
                m_data.begin() + static_cast<std::ptrdiff_t>((i + 1) * m_cols)};
    }

    IntMatrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const
    {
        IntMatrix b(nr, nc);
        for (std::size_t i = 0; i < nr; ++i) {
            for (std::size_t j = 0; j < nc; ++j) {
                b(i, j) = (*this)(r0 + i, c0 + j);
            }
        }
        return b;
    }

    IntMatrix transpose() const
    {
        IntMatrix t(m_cols, m_rows);
        for (std::size_t i = 0; i < m_rows; ++i) {
            for (std::size_t j = 0; j < m_cols; ++j) {
                t(j, i) = (*this)(i, j);
            }
        }
        return t;
    }

    friend IntMatrix operator*(const IntMatrix &a, const IntMatrix &b)
    {
        if (a.m_cols != b.m_rows) {
            throw math_error("IntMatrix: shape mismatch in product");
        }
        IntMatrix c(a.m_rows, b.m_cols);
        for (std::size_t i = 0; i < a.m_rows; ++i) {
            for (std::size_t k = 0; k < a.m_cols; ++k) {
                const integer &aik = a(i, k);
                if (sgn(aik) == 0) {
                    continue;
                }
                for (std::size_t j = 0; j < b.m_cols; ++j) {
                    c(i, j) += aik * b(k, j);
                }
            }
        }
        return c;
    }

    friend bool operator==(const IntMatrix &, const IntMatrix &) = default;

    std::string to_string() const
    {
        std::ostringstream os;
        os << '[';
        for (std::size_t i = 0; i < m_rows; ++i) {
            os << (i ? ", [" : "[");
            for (std::size_t j = 0; j < m_cols; ++j) {
                os << (j ? ", " : "") << (*this)(i, j);
            }
            os << ']';
        }
        os << ']';
        return os.str();
    }

private:
    std::size_t m_rows = 0;
    std::size_t m_cols = 0;
    std::vector<integer> m_data;
};

inline std::ostream &operator<<(std::ostream &os, const IntMatrix &m)
{
    return os << m.to_string();
}

inline IntMatrix matrix_power(IntMatrix base, unsigned long e)
{
    if (!base.is_square()) {
        throw math_error("matrix_power: square matrix required");
    }
    IntMatrix r = IntMatrix::identity(base.rows());
    while (e > 0) {
        if (e & 1u) {
            r = r * base;
        }
        e >>= 1u;
        if (e > 0) {
            base = base * base;
        }
    }
    return r;
}

// Fraction-free Gaussian elimination (Bareiss).
inline integer determinant(const IntMatrix &m)
{
    if (!m.is_square()) {
        throw math_error("determinant: square matrix required");
    }
    const std::size_t n = m.rows();
    if (n == 0) {
        return 1;
    }
    IntMatrix a = m;
    integer prev = 1;
    int sign = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
        if (sgn(a(k, k)) == 0) {
            std::size_t piv = k + 1;
            while (piv < n && sgn(a(piv, k)) == 0) {
                ++piv;
            }
            if (piv == n) {
                return 0;
            }
            for (std::size_t j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
            }
            sign = -sign;
        }
        for (std::size_t i = k + 1; i < n; ++i) {
            for (std::size_t j = k + 1; j < n; ++j) {
                integer t = a(i, j) * a(k, k) - a(i, k) * a(k, j);
                mpz_divexact(a(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
            }
        }
        prev = a(k, k);
    }
    integer d = a(n - 1, n - 1);
    return sign > 0 ? d : integer(-d);
}

// Rank over Q, by fraction-free elimination.
inline std::size_t rank(const IntMatrix &m)
{
    IntMatrix a = m;
    std::size_t r = 0;
    for (std::size_t c = 0; c < a.cols() && r < a.rows(); ++c) {
        std::size_t piv = r;
        while (piv < a.rows() && sgn(a(piv, c)) == 0) {
            ++piv;
        }
        if (piv == a.rows()) {
            continue;
        }
        for (std::size_t j = 0; j < a.cols(); ++j) {
            std::swap(a(r, j), a(piv, j));
        }
        for (std::size_t i = r + 1; i < a.rows(); ++i) {
            if (sgn(a(i, c)) == 0) {
                continue;
            }
            integer f = a(i, c);
            integer p = a(r, c);
            for (std::size_t j = c; j < a.cols(); ++j) {
                a(i, j) = a(i, j) * p - a(r, j) * f;
            }
        }
        ++r;
    }
    return r;
}

// Adjugate, so that m * adjugate(m) = det(m) * I.
inline IntMatrix adjugate(const IntMatrix &m)
{
    if (!m.is_square()) {
        throw math_error("adjugate: square matrix required");
    }
    const std::size_t n = m.rows();
    IntMatrix adj(n, n);
    if (n == 1) {
        adj(0, 0) = 1;
        return adj;
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            IntMatrix minor(n - 1, n - 1);
            for (std::size_t r = 0, mr = 0; r < n; ++r) {
                if (r == i) {
                    continue;
                }
                for (std::size_t c = 0, mc = 0; c < n; ++c) {
                    if (c == j) {
                        continue;
                    }
                    minor(mr, mc++) = m(r, c);
                }
                ++mr;
            }
            integer d = determinant(minor);
            adj(j, i) = ((i + j) % 2 == 0) ? d : integer(-d);
        }
    }
    return adj;
}

// Characteristic polynomial det(x I - A), by the division-free
// Samuelson-Berkowitz recursion on trailing principal submatrices.
inline UPoly char_poly(const IntMatrix &a)
{
    if (!a.is_square()) {
        throw math_error("char_poly: square matrix required");
    }
    const std::size_t n = a.rows();
    if (n == 0) {
        return UPoly({integer(1)});
    }
    // Coefficients in descending powers while iterating.
    std::vector<integer> p{integer(1), integer(-a(n - 1, n - 1))};
    for (std::size_t ii = n - 1; ii-- > 0;) {
        const std::size_t s = n - 1 - ii;
        // Toeplitz column: 1, -a_ii, -R C, -R S C, ..., -R S^{s-1} C.
        std::vector<integer> t(s + 2);
        t[0] = 1;
        t[1] = -a(ii, ii);
        std::vector<integer> v(s);
        for (std::size_t r = 0; r < s; ++r) {
            v[r] = a(ii + 1 + r, ii);
        }
        for (std::size_t j = 0; j < s; ++j) {
            integer rv = 0;
            for (std::size_t c = 0; c < s; ++c) {
                rv += a(ii, ii + 1 + c) * v[c];
            }
            t[j + 2] = -rv;
            if (j + 1 < s) {
                std::vector<integer> nv(s);
                for (std::size_t r = 0; r < s; ++r) {
                    for (std::size_t c = 0; c < s; ++c) {
                        nv[r] += a(ii + 1 + r, ii + 1 + c) * v[c];
                    }
                }
                v = std::move(nv);
            }
        }
        std::vector<integer> q(s + 2);
        for (std::size_t r = 0; r < s + 2; ++r) {
            for (std::size_t c = 0; c <= std::min(r, s); ++c) {
                q[r] += t[r - c] * p[c];
            }
        }
        p = std::move(q);
    }
    return UPoly(std::vector<integer>(p.rbegin(), p.rend()));
}

// Random element of GL(k, Z): a product of elementary transvections with
// small multipliers and a random signed permutation. Returns (M, M^{-1}).
template <typename Rng>
std::pair<IntMatrix, IntMatrix> random_unimodular(std::size_t k, Rng &rng, int steps = 6, int max_mult = 2)
{
    IntMatrix m = IntMatrix::identity(k);
    IntMatrix inv = IntMatrix::identity(k);
    if (k == 1) {
        if (std::bernoulli_distribution(0.5)(rng)) {
            m(0, 0) = -1;
            inv(0, 0) = -1;
        }
        return {m, inv};
    }
    std::uniform_int_distribution<std::size_t> idx(0, k - 1);
    std::uniform_int_distribution<int> mult(-max_mult, max_mult);
    for (int s = 0; s < steps; ++s) {
        std::size_t i = idx(rng);
        std::size_t j = idx(rng);
        int c = mult(rng);
        if (i == j || c == 0) {
            continue;
        }
        // m <- E m with E = I + c e_i e_j^T; inv <- inv E^{-1}.
        for (std::size_t col = 0; col < k; ++col) {
            m(i, col) += c * m(j, col);
        }
        for (std::size_t row = 0; row < k; ++row) {
            inv(row, j) -= c * inv(row, i);
        }
    }
    std::vector<std::size_t> perm(k);
    for (std::size_t i = 0; i < k; ++i) {
        perm[i] = i;
    }
    std::shuffle(perm.begin(), perm.end(), rng);
    IntMatrix p(k, k);
    IntMatrix pinv(k, k);
    for (std::size_t i = 0; i < k; ++i) {
        int s = std::bernoulli_distribution(0.5)(rng) ? -1 : 1;
        p(i, perm[i]) = s;
        pinv(perm[i], i) = s;
    }
    return {p * m, inv * pinv};
}

} // namespace dyndeg

#endif
