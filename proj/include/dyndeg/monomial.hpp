#ifndef DYNDEG_MONOMIAL_HPP
#define DYNDEG_MONOMIAL_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <dyndeg/core.hpp>
#include <dyndeg/int_matrix.hpp>
#include <dyndeg/parallel.hpp>
#include <dyndeg/polytope.hpp>
#include <dyndeg/roots.hpp>
#include <dyndeg/upoly.hpp>

namespace dyndeg
{

inline constexpr std::size_t max_spectral_dim = 8;

// Exponent matrix of a dominant monomial map x_i -> prod_j x_j^{a_ij}.
class ExponentMatrix
{
public:
    explicit ExponentMatrix(IntMatrix a) : m_a(std::move(a))
    {
        if (!m_a.is_square() || m_a.rows() == 0) {
            throw math_error("exponent matrix must be square and nonempty");
        }
        m_det = determinant(m_a);
        if (sgn(m_det) == 0) {
            throw math_error("singular exponent matrix: the monomial map is not dominant");
        }
    }
    ExponentMatrix(std::initializer_list<std::initializer_list<long>> rows) : ExponentMatrix(IntMatrix(rows)) {}

    std::size_t dim() const
    {
        return m_a.rows();
    }
    const IntMatrix &matrix() const
    {
        return m_a;
    }
    const integer &det() const
    {
        return m_det;
    }
    const integer &operator()(std::size_t i, std::size_t j) const
    {
        return m_a(i, j);
    }

    ExponentMatrix power(unsigned long n) const
    {
        return ExponentMatrix(matrix_power(m_a, n), ipow(m_det, n));
    }

    friend bool operator==(const ExponentMatrix &a, const ExponentMatrix &b)
    {
        return a.m_a == b.m_a;
    }

private:
    ExponentMatrix(IntMatrix a, integer det) : m_a(std::move(a)), m_det(std::move(det)) {}

    IntMatrix m_a;
    integer m_det;
};

// d_0, ..., d_k with float shadows. Exact profiles also carry the
// characteristic polynomial they were derived from and exact integer values
// where those are known (d_0 and d_k). Orders that cannot be certified are
// NaN.
struct DegreeProfile {
    std::vector<double> values;
    bool exact = false;
    std::optional<UPoly> characteristic;
    std::vector<std::optional<integer>> exact_values;
    // Representation tolerance (relative) used by comparisons.
    double tolerance = 1e-9;

    std::size_t size() const
    {
        return values.size();
    }
    double operator[](std::size_t p) const
    {
        return values[p];
    }
    bool known(std::size_t p) const
    {
        return p < values.size() && !std::isnan(values[p]);
    }
};

struct DegreeSequence {
    int p = 0;
    // values[n - 1] = lambda_p(f^n).
    std::vector<integer> values;
};

struct LogConcavityResult {
    bool ok = true;
    std::optional<int> first_violation;
};

inline integer homogenization_degree(const ExponentMatrix &a)
{
    const std::size_t k = a.dim();
    // Component c of the lift: the zero vector for X_0, and (-rowsum_i, a_i)
    // for the others. D = -sum_c min_i v_i[c].
    integer max_rowsum = 0;
    integer total = 0;
    for (std::size_t i = 0; i < k; ++i) {
        integer s = 0;
        for (std::size_t j = 0; j < k; ++j) {
            s += a(i, j);
        }
        max_rowsum = std::max(max_rowsum, s);
    }
    total = max_rowsum;
    for (std::size_t j = 0; j < k; ++j) {
        integer mn = 0;
        for (std::size_t i = 0; i < k; ++i) {
            mn = std::min(mn, a(i, j));
        }
        total -= mn;
    }
    return total;
}

// hull{0, rows of A}: the Newton polytope of the affine components.
inline LatticePolytope newton_polytope(const ExponentMatrix &a)
{
    std::vector<LatticePoint> pts{LatticePoint(a.dim())};
    for (std::size_t i = 0; i < a.dim(); ++i) {
        pts.push_back(a.matrix().row(i));
    }
    return convex_hull(std::move(pts), static_cast<int>(a.dim()));
}

inline integer delta_p(const ExponentMatrix &a, int p)
{
    const int k = static_cast<int>(a.dim());
    if (p < 0 || p > k) {
        throw math_error("delta_p: order " + std::to_string(p) + " outside 0.." + std::to_string(k));
    }
    if (p == 0) {
        return 1;
    }
    if (p == k) {
        return abs(a.det());
    }
    if (p == 1) {
        return homogenization_degree(a);
    }
    if (k > max_polytope_dim) {
        throw unsupported_error("delta_p: intermediate orders need k <= " + std::to_string(max_polytope_dim) + ", got k = "
                                + std::to_string(k));
    }
    rational mv = mixed_volume_repeated({{newton_polytope(a), p}, {standard_simplex(k), k - p}});
    if (mv.get_den() != 1) {
        throw math_error("delta_p: non-integral mixed volume");
    }
    return mv.get_num();
}

// Same quantity through the mixed-volume engine for every p, including p = 1.
inline integer delta_p_by_mixed_volume(const ExponentMatrix &a, int p)
{
    const int k = static_cast<int>(a.dim());
    if (p < 0 || p > k) {
        throw math_error("delta_p: order out of range");
    }
    if (p == 0) {
        return 1;
    }
    if (k > max_polytope_dim) {
        throw unsupported_error("delta_p: mixed volumes need k <= " + std::to_string(max_polytope_dim));
    }
    std::vector<std::pair<LatticePolytope, int>> bodies{{newton_polytope(a), p}};
    if (p < k) {
        bodies.emplace_back(standard_simplex(k), k - p);
    }
    rational mv = mixed_volume_repeated(bodies);
    if (mv.get_den() != 1) {
        throw math_error("delta_p: non-integral mixed volume");
    }
    return mv.get_num();
}

inline DegreeSequence degree_sequence(const ExponentMatrix &a, int p, int n_max)
{
    if (n_max < 1) {
        throw math_error("degree_sequence: N must be at least 1");
    }
    const int k = static_cast<int>(a.dim());
    if (p < 0 || p > k) {
        throw math_error("degree_sequence: order out of range");
    }
    if (p > 1 && p < k && k > max_polytope_dim) {
        throw unsupported_error("degree_sequence: intermediate orders need k <= " + std::to_string(max_polytope_dim));
    }
    DegreeSequence seq;
    seq.p = p;
    seq.values = parallel_map(static_cast<std::size_t>(n_max),
                              [&](std::size_t i) { return delta_p(a.power(i + 1), p); });
    return seq;
}

inline DegreeProfile dynamical_degrees_exact(const ExponentMatrix &a)
{
    const std::size_t k = a.dim();
    if (k > max_spectral_dim) {
        throw unsupported_error("dynamical degrees need k <= " + std::to_string(max_spectral_dim));
    }
    DegreeProfile prof;
    prof.exact = true;
    prof.characteristic = char_poly(a.matrix());
    auto moduli = root_moduli(*prof.characteristic);
    prof.values.assign(k + 1, 1.0);
    prof.exact_values.assign(k + 1, std::nullopt);
    prof.exact_values[0] = integer(1);
    real50 prod = 1;
    for (std::size_t p = 1; p <= k; ++p) {
        prod *= moduli[p - 1];
        prof.values[p] = static_cast<double>(prod);
    }
    prof.exact_values[k] = abs(a.det());
    prof.values[k] = prof.exact_values[k]->get_d();
    return prof;
}

struct BlockFibration {
    IntMatrix base;
    IntMatrix fiber;
};

inline BlockFibration block_fibration(const IntMatrix &a, std::size_t l)
{
    if (!a.is_square()) {
        throw math_error("block_fibration: square matrix required");
    }
    const std::size_t k = a.rows();
    if (l < 1 || l >= k) {
        throw math_error("block_fibration: base dimension must satisfy 1 <= l < k");
    }
    for (std::size_t i = 0; i < l; ++i) {
        for (std::size_t j = l; j < k; ++j) {
            if (sgn(a(i, j)) != 0) {
                throw math_error("the map does not preserve the coordinate fibration");
            }
        }
    }
    BlockFibration f{a.block(0, 0, l, l), a.block(l, l, k - l, k - l)};
    if (sgn(determinant(f.base)) == 0) {
        throw math_error("singular base block: the base map is not dominant");
    }
    if (sgn(determinant(f.fiber)) == 0) {
        throw math_error("singular fiber block: the fiber restriction is not dominant");
    }
    return f;
}

inline DegreeProfile relative_degrees_exact(const IntMatrix &fiber_block)
{
    return dynamical_degrees_exact(ExponentMatrix(fiber_block));
}

inline LogConcavityResult check_log_concavity(const std::vector<double> &d, double eps = 1e-9)
{
    for (std::size_t p = 1; p + 1 < d.size(); ++p) {
        if (std::isnan(d[p - 1]) || std::isnan(d[p]) || std::isnan(d[p + 1])) {
            continue;
        }
        if (d[p - 1] * d[p + 1] > d[p] * d[p] * (1 + eps)) {
            return {false, static_cast<int>(p)};
        }
    }
    return {};
}

inline LogConcavityResult check_log_concavity(const DegreeProfile &prof)
{
    return check_log_concavity(prof.values, prof.tolerance);
}

inline LogConcavityResult check_log_concavity(const std::vector<integer> &d)
{
    for (std::size_t p = 1; p + 1 < d.size(); ++p) {
        if (d[p - 1] * d[p + 1] > d[p] * d[p]) {
            return {false, static_cast<int>(p)};
        }
    }
    return {};
}

} // namespace dyndeg

#endif
