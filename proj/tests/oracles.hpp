#ifndef DYNDEG_TESTS_ORACLES_HPP
#define DYNDEG_TESTS_ORACLES_HPP

// Reference computations that share no code with the library engines.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <random>
#include <vector>

#include <dyndeg/int_matrix.hpp>

namespace oracle
{

using dyndeg::IntMatrix;
using dyndeg::integer;
using dyndeg::rational;

// Coefficients c_0..c_k of det(tI - A), monic, by Faddeev-LeVerrier over Q.
inline std::vector<rational> faddeev_leverrier(const IntMatrix &a)
{
    const std::size_t k = a.rows();
    std::vector<std::vector<rational>> m(k, std::vector<rational>(k, rational(0)));
    std::vector<rational> c(k + 1, rational(0));
    c[k] = 1;
    for (std::size_t step = 1; step <= k; ++step) {
        // M_step = A M_{step-1} + c_{k-step+1} I
        std::vector<std::vector<rational>> next(k, std::vector<rational>(k, rational(0)));
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                rational s = 0;
                for (std::size_t t = 0; t < k; ++t) {
                    s += rational(a(i, t)) * m[t][j];
                }
                next[i][j] = s;
            }
            next[i][i] += c[k - step + 1];
        }
        m = std::move(next);
        rational tr = 0;
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t t = 0; t < k; ++t) {
                tr += rational(a(i, t)) * m[t][i];
            }
        }
        c[k - step] = -tr / rational(static_cast<long>(step));
    }
    return c;
}

// All complex roots of a monic polynomial by Durand-Kerner.
inline std::vector<std::complex<long double>> durand_kerner(const std::vector<rational> &coeffs)
{
    using cx = std::complex<long double>;
    const std::size_t k = coeffs.size() - 1;
    std::vector<long double> c;
    for (const auto &q : coeffs) {
        c.push_back(static_cast<long double>(q.get_d()));
    }
    auto eval = [&](cx z) {
        cx r = 0;
        for (std::size_t i = k + 1; i-- > 0;) {
            r = r * z + c[i];
        }
        return r;
    };
    long double radius = 1;
    for (std::size_t i = 0; i < k; ++i) {
        radius = std::max(radius, 1 + std::abs(c[i]));
    }
    std::vector<cx> z(k);
    for (std::size_t i = 0; i < k; ++i) {
        z[i] = std::polar(radius * 0.9L, 0.4L + 2 * 3.14159265358979323846L * static_cast<long double>(i) / k);
    }
    for (int it = 0; it < 5000; ++it) {
        long double move = 0;
        for (std::size_t i = 0; i < k; ++i) {
            cx den = 1;
            for (std::size_t j = 0; j < k; ++j) {
                if (j != i) {
                    den *= z[i] - z[j];
                }
            }
            cx d = eval(z[i]) / den;
            z[i] -= d;
            move = std::max(move, std::abs(d));
        }
        if (move < 1e-30L) {
            break;
        }
    }
    return z;
}

inline std::vector<long double> eigen_moduli(const IntMatrix &a)
{
    std::vector<long double> out;
    for (auto z : durand_kerner(faddeev_leverrier(a))) {
        out.push_back(std::abs(z));
    }
    return out;
}

struct SubsetOptimum {
    long double value = 0;
    int witness = 0;
};

// Max over size-p subsets of base moduli u and fiber moduli v of the product,
// and the smallest number j of base moduli in any near-optimal subset.
inline SubsetOptimum subset_optimum(const std::vector<long double> &u, const std::vector<long double> &v, int p,
                                    long double rel_tol = 1e-5L)
{
    const std::size_t l = u.size();
    const std::size_t n = l + v.size();
    std::vector<std::pair<long double, int>> cands;
    for (unsigned mask = 0; mask < (1u << n); ++mask) {
        if (__builtin_popcount(mask) != p) {
            continue;
        }
        long double prod = 1;
        int j = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (mask & (1u << i)) {
                prod *= i < l ? u[i] : v[i - l];
                j += i < l ? 1 : 0;
            }
        }
        cands.emplace_back(prod, j);
    }
    SubsetOptimum best;
    for (const auto &c : cands) {
        best.value = std::max(best.value, c.first);
    }
    best.witness = std::numeric_limits<int>::max();
    for (const auto &c : cands) {
        if (c.first >= best.value * (1 - rel_tol)) {
            best.witness = std::min(best.witness, c.second);
        }
    }
    return best;
}

// Block-lower-triangular matrix with nonsingular diagonal blocks of sizes l
// and k - l, entries uniform in [-range, range].
inline IntMatrix random_block_triangular(std::size_t k, std::size_t l, std::mt19937_64 &rng, int range)
{
    std::uniform_int_distribution<int> entry(-range, range);
    for (;;) {
        IntMatrix a(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                if (i < l && j >= l) {
                    continue;
                }
                a(i, j) = entry(rng);
            }
        }
        if (sgn(dyndeg::determinant(a.block(0, 0, l, l))) != 0
            && sgn(dyndeg::determinant(a.block(l, l, k - l, k - l))) != 0) {
            return a;
        }
    }
}

inline IntMatrix random_nonsingular(std::size_t k, std::mt19937_64 &rng, int range)
{
    std::uniform_int_distribution<int> entry(-range, range);
    for (;;) {
        IntMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                m(i, j) = entry(rng);
            }
        }
        if (sgn(dyndeg::determinant(m)) != 0) {
            return m;
        }
    }
}

} // namespace oracle

#endif
