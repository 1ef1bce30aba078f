#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <dyndeg/int_matrix.hpp>
#include <dyndeg/roots.hpp>

using namespace dyndeg;

namespace
{

IntMatrix random_matrix(std::size_t n, std::mt19937_64 &rng, int range = 4)
{
    std::uniform_int_distribution<int> entry(-range, range);
    IntMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            m(i, j) = entry(rng);
        }
    }
    return m;
}

// Cofactor expansion along the first row.
integer det_oracle(const IntMatrix &m)
{
    const std::size_t n = m.rows();
    if (n == 1) {
        return m(0, 0);
    }
    integer d = 0;
    for (std::size_t j = 0; j < n; ++j) {
        IntMatrix minor(n - 1, n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            for (std::size_t c = 0, mc = 0; c < n; ++c) {
                if (c != j) {
                    minor(r - 1, mc++) = m(r, c);
                }
            }
        }
        integer t = m(0, j) * det_oracle(minor);
        d += (j % 2 == 0) ? t : integer(-t);
    }
    return d;
}

// Evaluate det(x I - A) at an integer x with the oracle determinant.
integer char_poly_at(const IntMatrix &a, long x)
{
    IntMatrix m(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m(i, j) = (i == j ? integer(x) : integer(0)) - a(i, j);
        }
    }
    return det_oracle(m);
}

integer eval(const UPoly &p, long x)
{
    integer v = 0;
    for (int i = p.degree(); i >= 0; --i) {
        v = v * x + p[static_cast<std::size_t>(i)];
    }
    return v;
}

} // namespace

TEST(IntMatrix, DeterminantExamples)
{
    EXPECT_EQ(determinant(IntMatrix{{2, 1}, {1, 1}}), 1);
    EXPECT_EQ(determinant(IntMatrix{{0, 1}, {1, 0}}), -1);
    EXPECT_EQ(determinant(IntMatrix{{1, 2}, {2, 4}}), 0);
    EXPECT_EQ(determinant(IntMatrix{{0, 0, 1}, {0, 1, 0}, {1, 0, 0}}), -1);
}

TEST(IntMatrix, DeterminantMatchesCofactorExpansion)
{
    std::mt19937_64 rng(1);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 20; ++trial) {
            auto m = random_matrix(n, rng, n > 4 ? 1 : 4);
            EXPECT_EQ(determinant(m), det_oracle(m)) << m;
        }
    }
}

TEST(IntMatrix, CharPolyExamples)
{
    auto p = char_poly(IntMatrix{{2, 1}, {1, 1}});
    EXPECT_EQ(p, UPoly({integer(1), integer(-3), integer(1)}));
    auto q = char_poly(IntMatrix{{-1, 0}, {0, -1}});
    EXPECT_EQ(q, UPoly({integer(1), integer(2), integer(1)}));
}

TEST(IntMatrix, CharPolyMatchesDeterminantAtPoints)
{
    std::mt19937_64 rng(2);
    for (std::size_t n = 1; n <= 6; ++n) {
        for (int trial = 0; trial < 10; ++trial) {
            auto m = random_matrix(n, rng, 3);
            auto p = char_poly(m);
            EXPECT_EQ(p.degree(), static_cast<int>(n));
            EXPECT_EQ(p.leading(), 1);
            for (long x = -3; x <= 3; ++x) {
                EXPECT_EQ(eval(p, x), char_poly_at(m, x));
            }
        }
    }
}

TEST(IntMatrix, AdjugateAndRank)
{
    std::mt19937_64 rng(3);
    for (std::size_t n = 1; n <= 5; ++n) {
        auto m = random_matrix(n, rng);
        auto prod = m * adjugate(m);
        auto d = determinant(m);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < n; ++j) {
                EXPECT_EQ(prod(i, j), i == j ? d : integer(0));
            }
        }
    }
    EXPECT_EQ(rank(IntMatrix{{1, 2}, {2, 4}}), 1u);
    EXPECT_EQ(rank(IntMatrix{{1, 2, 3}, {4, 5, 6}}), 2u);
    EXPECT_EQ(rank(IntMatrix(3, 3)), 0u);
}

TEST(IntMatrix, PowerMatchesRepeatedProduct)
{
    IntMatrix a{{2, 1}, {1, 1}};
    IntMatrix r = IntMatrix::identity(2);
    for (unsigned long e = 0; e < 12; ++e) {
        EXPECT_EQ(matrix_power(a, e), r);
        r = r * a;
    }
}

TEST(IntMatrix, RandomUnimodularInverse)
{
    std::mt19937_64 rng(4);
    for (std::size_t k = 1; k <= 5; ++k) {
        for (int trial = 0; trial < 10; ++trial) {
            auto [m, inv] = random_unimodular(k, rng);
            EXPECT_EQ(m * inv, IntMatrix::identity(k));
            EXPECT_EQ(abs(determinant(m)), 1);
        }
    }
}

TEST(UPoly, GcdAndSquarefree)
{
    // (x - 1)^2 (x + 2)
    UPoly p({integer(2), integer(-3), integer(0), integer(1)});
    auto sq = squarefree_decomposition(p);
    ASSERT_EQ(sq.size(), 2u);
    EXPECT_EQ(sq[0].first, UPoly({integer(2), integer(1)}));
    EXPECT_EQ(sq[0].second, 1);
    EXPECT_EQ(sq[1].first, UPoly({integer(-1), integer(1)}));
    EXPECT_EQ(sq[1].second, 2);
    EXPECT_EQ(gcd(p, p.derivative()), UPoly({integer(-1), integer(1)}));
}

TEST(Roots, ModuliOfKnownPolynomials)
{
    auto m = root_moduli(char_poly(IntMatrix{{2, 1}, {1, 1}}));
    ASSERT_EQ(m.size(), 2u);
    EXPECT_NEAR(static_cast<double>(m[0]), (3 + std::sqrt(5.0)) / 2, 1e-14);
    EXPECT_NEAR(static_cast<double>(m[1]), (3 - std::sqrt(5.0)) / 2, 1e-14);

    // (x^2 + 4)(x - 1)^3
    auto p = UPoly({integer(4), integer(0), integer(1)});
    UPoly q({integer(-1), integer(1)});
    UPoly prod({integer(-4), integer(12), integer(-13), integer(7), integer(-3), integer(1)});
    auto mm = root_moduli(prod);
    ASSERT_EQ(mm.size(), 5u);
    EXPECT_NEAR(static_cast<double>(mm[0]), 2, 1e-14);
    EXPECT_NEAR(static_cast<double>(mm[1]), 2, 1e-14);
    for (int i = 2; i < 5; ++i) {
        EXPECT_NEAR(static_cast<double>(mm[static_cast<std::size_t>(i)]), 1, 1e-14);
    }
}

TEST(Roots, ProductOfModuliIsConstantTerm)
{
    std::mt19937_64 rng(5);
    for (std::size_t n = 2; n <= 6; ++n) {
        for (int trial = 0; trial < 5; ++trial) {
            auto a = random_matrix(n, rng, 3);
            auto d = determinant(a);
            if (d == 0) {
                continue;
            }
            auto mods = root_moduli(char_poly(a));
            real50 prod = 1;
            for (const auto &x : mods) {
                prod *= x;
            }
            EXPECT_NEAR(static_cast<double>(prod) / std::abs(d.get_d()), 1.0, 1e-12);
        }
    }
}
