#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <dyndeg/cohomology.hpp>

using namespace dyndeg;

namespace
{

CohomologyClass random_class(const MultiProjSpace &space, int degree, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> coeff(-4, 4);
    CohomologyClass c(space, degree);
    // Enumerate all exponent tuples of the right total degree.
    std::vector<int> e(space.factors(), 0);
    auto rec = [&](auto &&self, std::size_t i, int left) -> void {
        if (i + 1 == space.factors()) {
            if (left <= space.factor_dims()[i]) {
                e[i] = left;
                c.add_term(e, fraction(coeff(rng), static_cast<long>(1 + rng() % 3)));
            }
            return;
        }
        for (int a = 0; a <= std::min(left, space.factor_dims()[i]); ++a) {
            e[i] = a;
            self(self, i + 1, left - a);
        }
    };
    rec(rec, 0, degree);
    return c;
}

} // namespace

TEST(MultiProjSpace, Validation)
{
    EXPECT_THROW(MultiProjSpace(std::vector<int>{}), math_error);
    EXPECT_THROW(MultiProjSpace({2, 0}), math_error);
    MultiProjSpace s({1, 2, 3});
    EXPECT_EQ(s.total_dim(), 6);
    EXPECT_EQ(s.factors(), 3u);
}

TEST(Cup, GeneratorSquareOnP2)
{
    MultiProjSpace p2({2});
    auto t = CohomologyClass::generator(p2, 0);
    auto t2 = cup(t, t);
    EXPECT_EQ(t2.degree(), 2);
    EXPECT_EQ(t2.coefficient({2}), 1);
    EXPECT_EQ(t2.terms().size(), 1u);
}

TEST(Cup, TruncationOnP1xP1)
{
    MultiProjSpace s({1, 1});
    auto w = CohomologyClass::kahler(s);
    auto w2 = cup(w, w);
    EXPECT_EQ(w2.terms().size(), 1u);
    EXPECT_EQ(w2.coefficient({1, 1}), 2);
}

TEST(Cup, CubeOnP1xP2)
{
    MultiProjSpace s({1, 2});
    auto w3 = cup_power(CohomologyClass::kahler(s), 3);
    EXPECT_EQ(w3.terms().size(), 1u);
    EXPECT_EQ(w3.coefficient({1, 2}), 3);
}

TEST(Cup, Errors)
{
    MultiProjSpace a({2});
    MultiProjSpace b({1, 1});
    EXPECT_THROW(cup(CohomologyClass::generator(a, 0), CohomologyClass::generator(b, 0)), math_error);
    auto t2 = CohomologyClass::monomial(a, {2}, rational(1));
    EXPECT_THROW(cup(t2, CohomologyClass::generator(a, 0)), math_error);
}

TEST(Integrate, Examples)
{
    MultiProjSpace p2({2});
    EXPECT_EQ(integrate(CohomologyClass::monomial(p2, {2}, rational(1))), 1);
    MultiProjSpace s({1, 2});
    EXPECT_EQ(integrate(CohomologyClass::monomial(s, {1, 2}, rational(3))), 3);
    MultiProjSpace p1({1});
    EXPECT_EQ(integrate(CohomologyClass::one(p1)), 0);
}

TEST(Mass, Examples)
{
    MultiProjSpace s({1, 1});
    auto w = CohomologyClass::kahler(s);
    EXPECT_EQ(mass(w, w), 2);

    MultiProjSpace s12({1, 2});
    auto w12 = CohomologyClass::kahler(s12);
    EXPECT_EQ(mass(w12, w12), 3);

    MultiProjSpace p2({2});
    auto five_t = rational(5) * CohomologyClass::generator(p2, 0);
    EXPECT_EQ(mass(five_t, CohomologyClass::kahler(p2)), 5);

    EXPECT_THROW(mass(w, cup(w, w)), math_error);
    EXPECT_THROW(mass(w, CohomologyClass::generator(s, 0)), math_error);
}

TEST(AlphaCoeffs, Examples)
{
    MultiProjSpace s({2, 2});
    CohomologyClass c(s, 2);
    c.add_term({2, 0}, rational(2));
    c.add_term({1, 1}, rational(3));
    auto a = alpha_coeffs(c);
    EXPECT_EQ(a.at(2), 2);
    EXPECT_EQ(a.at(1), 3);
    EXPECT_EQ(a.at(0), 0);
    EXPECT_EQ(a.size(), 3u);

    EXPECT_THROW(alpha_coeffs(CohomologyClass::one(MultiProjSpace({1, 1, 1}))), math_error);
}

TEST(AlphaCoeffs, BasisClassesAreDual)
{
    for (int l = 1; l <= 3; ++l) {
        for (int m = 1; m <= 3; ++m) {
            MultiProjSpace s({l, m});
            for (int p = 0; p <= l + m; ++p) {
                for (int j = std::max(0, p - m); j <= std::min(l, p); ++j) {
                    auto c = CohomologyClass::monomial(s, {j, p - j}, rational(1));
                    for (const auto &[i, v] : alpha_coeffs(c)) {
                        EXPECT_EQ(v, i == j ? 1 : 0) << l << m << p << j << i;
                    }
                }
            }
        }
    }
}

TEST(AlphaCoeffs, KahlerPowerGivesBinomials)
{
    // Oracle: the coefficient of t1^j t2^(p-j) in (t1+t2)^p is C(p, j).
    for (int l = 1; l <= 3; ++l) {
        for (int m = 1; m <= 3; ++m) {
            MultiProjSpace s({l, m});
            auto w = CohomologyClass::kahler(s);
            for (int p = 0; p <= l + m; ++p) {
                auto a = alpha_coeffs(cup_power(w, p));
                for (int j = std::max(0, p - m); j <= std::min(l, p); ++j) {
                    EXPECT_EQ(a.at(j), rational(binomial(static_cast<unsigned long>(p), static_cast<unsigned long>(j))));
                }
            }
        }
    }
}

TEST(Effective, Examples)
{
    MultiProjSpace s({1, 1});
    auto t1 = CohomologyClass::generator(s, 0);
    auto t2 = CohomologyClass::generator(s, 1);
    EXPECT_TRUE(is_effective(t1 + t2));
    EXPECT_FALSE(is_effective(t1 - t2));
    EXPECT_TRUE(is_effective(CohomologyClass(s, 1)));
}

TEST(CohomologyProperties, RingAxiomsOnRandomClasses)
{
    std::mt19937_64 rng(7);
    const std::vector<std::vector<int>> shapes{{2}, {1, 1}, {1, 2}, {2, 2}, {1, 1, 2}};
    for (const auto &dims : shapes) {
        MultiProjSpace s(dims);
        const int k = s.total_dim();
        for (int trial = 0; trial < 20; ++trial) {
            int pa = static_cast<int>(rng() % static_cast<unsigned>(k + 1));
            int pb = static_cast<int>(rng() % static_cast<unsigned>(k - pa + 1));
            int pc = static_cast<int>(rng() % static_cast<unsigned>(k - pa - pb + 1));
            auto a = random_class(s, pa, rng);
            auto b = random_class(s, pb, rng);
            auto c = random_class(s, pc, rng);
            EXPECT_EQ(cup(a, b), cup(b, a));
            EXPECT_EQ(cup(cup(a, b), c), cup(a, cup(b, c)));
            EXPECT_EQ(cup(a, b).degree(), pa + pb);

            // Symmetric bilinear pairing in complementary degree.
            auto b2 = random_class(s, k - pa, rng);
            auto b3 = random_class(s, k - pa, rng);
            EXPECT_EQ(pairing(a, b2), pairing(b2, a));
            rational lam(3, 2);
            EXPECT_EQ(pairing(a, b2 + lam * b3), pairing(a, b2) + lam * pairing(a, b3));
        }
    }
}

TEST(CohomologyProperties, AlphaRecoversTheClass)
{
    std::mt19937_64 rng(11);
    for (int l = 1; l <= 3; ++l) {
        for (int m = 1; m <= 3; ++m) {
            MultiProjSpace s({l, m});
            for (int p = 0; p <= l + m; ++p) {
                auto c = random_class(s, p, rng);
                CohomologyClass rebuilt(s, p);
                for (const auto &[j, v] : alpha_coeffs(c)) {
                    rebuilt.add_term({j, p - j}, v);
                }
                EXPECT_EQ(rebuilt, c);
            }
        }
    }
}

TEST(CohomologyProperties, MassOfEffectiveClassIsNonnegative)
{
    std::mt19937_64 rng(3);
    MultiProjSpace s({2, 1});
    for (int trial = 0; trial < 40; ++trial) {
        int p = static_cast<int>(rng() % 4);
        auto c = random_class(s, p, rng);
        CohomologyClass eff(s, p);
        for (const auto &[e, v] : c.terms()) {
            eff.add_term(e, abs(v));
        }
        CohomologyClass k(s, 1);
        k.add_term({1, 0}, rational(1 + static_cast<long>(rng() % 3)));
        k.add_term({0, 1}, rational(1 + static_cast<long>(rng() % 3)));
        EXPECT_GE(mass(eff, k), 0);
    }
}
