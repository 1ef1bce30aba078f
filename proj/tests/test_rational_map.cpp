#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include <dyndeg/rational_map.hpp>

using namespace dyndeg;

namespace
{

Poly random_poly(std::size_t nvars, int max_deg, int n_terms, std::mt19937_64 &rng, bool homogeneous = false)
{
    std::uniform_int_distribution<int> coeff(-5, 5);
    std::uniform_int_distribution<int> deg(0, max_deg);
    Poly p(nvars);
    for (int t = 0; t < n_terms; ++t) {
        Exp e(nvars, 0);
        int d = homogeneous ? max_deg : deg(rng);
        for (int i = 0; i < d; ++i) {
            e[rng() % nvars] += 1;
        }
        p.add_term(e, coeff(rng));
    }
    return p;
}

ProjectiveRationalMap random_map(std::size_t k, int degree, std::mt19937_64 &rng)
{
    for (;;) {
        std::vector<Poly> comps;
        for (std::size_t i = 0; i <= k; ++i) {
            comps.push_back(random_poly(k + 1, degree, 3, rng, true));
        }
        try {
            ProjectiveRationalMap f(comps);
            if (is_dominant(f)) {
                return f;
            }
        } catch (const std::exception &) {
        }
    }
}

std::vector<rational> random_point(std::size_t n, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<int> v(-9, 9);
    std::vector<rational> pt;
    for (std::size_t i = 0; i < n; ++i) {
        pt.push_back(fraction(v(rng), 1 + static_cast<long>(rng() % 4)));
    }
    return pt;
}

IntMatrix random_nonsingular(std::size_t k, std::mt19937_64 &rng, int range)
{
    std::uniform_int_distribution<int> entry(-range, range);
    for (;;) {
        IntMatrix m(k, k);
        for (std::size_t i = 0; i < k; ++i) {
            for (std::size_t j = 0; j < k; ++j) {
                m(i, j) = entry(rng);
            }
        }
        if (sgn(determinant(m)) != 0) {
            return m;
        }
    }
}

} // namespace

TEST(Poly, ArithmeticAgreesWithEvaluation)
{
    std::mt19937_64 rng(1);
    for (int trial = 0; trial < 50; ++trial) {
        auto a = random_poly(3, 4, 5, rng);
        auto b = random_poly(3, 4, 5, rng);
        auto pt = random_point(3, rng);
        rational va = a.evaluate(pt);
        rational vb = b.evaluate(pt);
        EXPECT_EQ((a + b).evaluate(pt), va + vb);
        EXPECT_EQ((a - b).evaluate(pt), va - vb);
        EXPECT_EQ((a * b).evaluate(pt), va * vb);
        rational cube = va * va * va;
        EXPECT_EQ(pow(a, 3).evaluate(pt), cube);
    }
}

TEST(Poly, SubstituteAgreesWithEvaluation)
{
    std::mt19937_64 rng(2);
    for (int trial = 0; trial < 30; ++trial) {
        auto p = random_poly(3, 3, 4, rng);
        std::vector<Poly> vals;
        for (int i = 0; i < 3; ++i) {
            vals.push_back(random_poly(2, 2, 3, rng));
        }
        auto pt = random_point(2, rng);
        std::vector<rational> inner;
        for (const auto &v : vals) {
            inner.push_back(v.evaluate(pt));
        }
        EXPECT_EQ(substitute(p, vals).evaluate(pt), p.evaluate(inner));
    }
}

TEST(Poly, DivideExact)
{
    std::mt19937_64 rng(3);
    for (int trial = 0; trial < 30; ++trial) {
        auto a = random_poly(3, 3, 4, rng);
        auto b = random_poly(3, 3, 4, rng);
        if (b.is_zero()) {
            continue;
        }
        EXPECT_EQ(divide_exact(a * b, b), a);
    }
    auto x = Poly::variable(2, 0);
    auto y = Poly::variable(2, 1);
    EXPECT_THROW(divide_exact(x + y, x), math_error);
}

TEST(Poly, GcdOfConstructedFactors)
{
    std::mt19937_64 rng(4);
    for (std::size_t n = 1; n <= 4; ++n) {
        for (int trial = 0; trial < 25; ++trial) {
            auto g = random_poly(n, 3, 3, rng);
            auto u = random_poly(n, 3, 3, rng);
            auto v = random_poly(n, 3, 3, rng);
            if (g.is_zero() || u.is_zero() || v.is_zero()) {
                continue;
            }
            auto a = g * u;
            auto b = g * v;
            auto h = gcd(a, b);
            // h divides both inputs and g divides h.
            EXPECT_NO_THROW(divide_exact(a, h));
            EXPECT_NO_THROW(divide_exact(b, h));
            EXPECT_NO_THROW(divide_exact(h, g.primitive())) << "g=" << g << " u=" << u << " v=" << v << " h=" << h;
            EXPECT_GT(h.leading_term().second, 0);
            // The cofactors are coprime.
            auto ca = divide_exact(a, h);
            auto cb = divide_exact(b, h);
            EXPECT_TRUE(gcd(ca, cb).is_constant());
        }
    }
}

TEST(Poly, GcdMonomialAndContent)
{
    auto x = Poly::variable(3, 0);
    auto y = Poly::variable(3, 1);
    auto z = Poly::variable(3, 2);
    EXPECT_EQ(gcd(integer(6) * x * x * y, integer(4) * x * y * z), integer(2) * x * y);
    EXPECT_EQ(gcd(x + y, x - y), Poly::constant(3, 1));
    EXPECT_EQ(gcd(x * x - y * y, x * x + integer(2) * x * y + y * y), x + y);
    EXPECT_EQ(gcd(Poly(3), -x), x);
}

TEST(Parser, Examples)
{
    auto sigma = parse_map("x1*x2, x0*x2, x0*x1", 2);
    EXPECT_EQ(sigma.degree(), 2);
    EXPECT_EQ(sigma.k(), 2u);
    auto sq = parse_map("x0^2, x1^2, x2^2", 2);
    EXPECT_EQ(sq.degree(), 2);
    try {
        parse_map("x0 + x1^2, x1, x2", 2);
        FAIL();
    } catch (const input_error &e) {
        EXPECT_NE(std::string(e.what()).find("component 1 inhomogeneous"), std::string::npos);
    }
    EXPECT_THROW(parse_map("x0^2, x1, x2", 2), input_error);
    EXPECT_THROW(parse_map("x0, x1", 2), input_error);
    EXPECT_THROW(parse_map("x0, x1, x3", 2), input_error);
    EXPECT_THROW(parse_map("x0, x1, ", 2), input_error);
    EXPECT_THROW(parse_map("x0, (x1, x2", 2), input_error);
    EXPECT_THROW(parse_map("0, 0, 0", 2), math_error);
}

TEST(Parser, ErrorsCarryPosition)
{
    try {
        parse_map("x0*x1, x1 $ x2, x2^2", 2);
        FAIL();
    } catch (const input_error &e) {
        EXPECT_NE(std::string(e.what()).find("position 10"), std::string::npos) << e.what();
    }
}

TEST(Parser, ExpressionsExpand)
{
    auto f = parse_map("(x0 + x1)^2 - 2*x0*x1, \xE2\x88\x92x1^2 + 3*x2^2, -(-x0*x2)", 2);
    EXPECT_EQ(f[0], parse_poly("x0^2 + x1^2", projective_names(2)));
    EXPECT_EQ(f[1], parse_poly("3*x2^2 - x1^2", projective_names(2)));
    EXPECT_EQ(f[2], parse_poly("x2*x0", projective_names(2)));
}

TEST(GcdReduce, Examples)
{
    auto raw = parse_map("x0^2*x1*x2, x0*x1^2*x2, x0*x1*x2^2", 2);
    EXPECT_EQ(gcd_reduce(raw), parse_map("x0, x1, x2", 2));
    auto id = parse_map("x0, x1, x2", 2);
    EXPECT_EQ(gcd_reduce(id), id);
    EXPECT_EQ(gcd_reduce(parse_map("2*x0, 2*x1, 2*x2", 2)), id);
    EXPECT_TRUE(gcd_reduce(raw).reduced());
}

TEST(GcdReduce, IdempotentAndDegreeMinimal)
{
    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        auto f = random_map(2, 2, rng);
        auto common = random_poly(3, 1, 2, rng, true);
        if (common.is_zero()) {
            continue;
        }
        std::vector<Poly> comps;
        for (const auto &c : f.components()) {
            comps.push_back(c * common);
        }
        auto r = gcd_reduce(ProjectiveRationalMap(comps));
        EXPECT_LE(r.degree(), f.degree());
        EXPECT_EQ(gcd_reduce(ProjectiveRationalMap(r.components())), r);
    }
}

TEST(Compose, Examples)
{
    auto sigma = parse_map("x1*x2, x0*x2, x0*x1", 2);
    auto raw = compose_raw(sigma, sigma);
    EXPECT_EQ(raw, parse_map("x0^2*x1*x2, x0*x1^2*x2, x0*x1*x2^2", 2));
    auto ss = compose(sigma, sigma);
    EXPECT_EQ(ss, parse_map("x0, x1, x2", 2));
    EXPECT_EQ(ss.degree(), 1);

    auto sq = parse_map("x0^2, x1^2, x2^2", 2);
    EXPECT_EQ(compose(sq, sq), parse_map("x0^4, x1^4, x2^4", 2));

    auto id = parse_map("x0, x1, x2", 2);
    auto f = parse_map("2*x0*x1, 2*x1^2, 2*x2*x1", 2);
    EXPECT_EQ(compose(f, id), gcd_reduce(f));

    auto collapse = parse_map("x0, x0, x0", 2);
    auto kill = parse_map("x1 - x2, x1 - x2, x2 - x1", 2);
    EXPECT_THROW(compose(kill, collapse), math_error);
    EXPECT_THROW(compose(sigma, parse_map("x0, x1", 1)), math_error);
}

TEST(Compose, BezoutSubmultiplicativity)
{
    std::mt19937_64 rng(6);
    for (int trial = 0; trial < 15; ++trial) {
        auto f = random_map(2, 1 + static_cast<int>(rng() % 2), rng);
        auto g = random_map(2, 1 + static_cast<int>(rng() % 2), rng);
        EXPECT_LE(compose(f, g).degree(), f.degree() * g.degree());
    }
}

TEST(DegreeSequenceD1, Examples)
{
    auto sigma = parse_map("x1*x2, x0*x2, x0*x1", 2);
    EXPECT_EQ(degree_sequence_d1(sigma, 4).values, (std::vector<integer>{2, 1, 2, 1}));
    EXPECT_EQ(degree_sequence_d1(parse_map("x0^2, x1^2, x2^2", 2), 3).values, (std::vector<integer>{2, 4, 8}));
    auto m = monomial_map(ExponentMatrix{{2, 1}, {1, 1}});
    EXPECT_EQ(degree_sequence_d1(m, 2).values, (std::vector<integer>{3, 8}));
    EXPECT_THROW(degree_sequence_d1(parse_map("x0^2, x0*x1, x1^2", 2), 3), math_error);
}

TEST(DegreeSequenceD1, MonomialMapHomogenization)
{
    // [[2,1],[1,1]] is [X^2 Y : X Y Z : Z^3] in coordinates (Z, X, Y) = (x0, x1, x2).
    auto m = monomial_map(ExponentMatrix{{2, 1}, {1, 1}});
    EXPECT_EQ(m, parse_map("x0^3, x1^2*x2, x0*x1*x2", 2));
    auto d = monomial_map(ExponentMatrix{{2, 0}, {0, 3}});
    EXPECT_EQ(d, parse_map("x0^3, x0*x1^2, x2^3", 2));
}

TEST(DegreeSequenceD1, RunningReductionMatchesDirectExpansion)
{
    std::mt19937_64 rng(7);
    std::vector<ProjectiveRationalMap> maps{parse_map("x1*x2, x0*x2, x0*x1", 2),
                                            parse_map("x0^2, x0*x1 + x2^2, x1*x2", 2),
                                            parse_map("x0*x1, x1^2, x2*x0 + x1^2", 2)};
    maps.push_back(random_map(2, 2, rng));
    for (const auto &f : maps) {
        auto seq = degree_sequence_d1(f, 4).values;
        ProjectiveRationalMap raw = f;
        for (int n = 1; n <= 4; ++n) {
            EXPECT_EQ(integer(static_cast<long>(gcd_reduce(raw).degree())), seq[static_cast<std::size_t>(n - 1)]) << f;
            if (n < 4) {
                raw = compose_raw(f, raw);
            }
        }
    }
}

TEST(DegreeSequenceD1, AgreesWithMonomialEngine)
{
    std::mt19937_64 rng(8);
    for (std::size_t k = 2; k <= 3; ++k) {
        for (int trial = 0; trial < 6; ++trial) {
            ExponentMatrix a(random_nonsingular(k, rng, 2));
            auto via_maps = degree_sequence_d1(monomial_map(a), 6).values;
            auto via_matrix = degree_sequence(a, 1, 6).values;
            EXPECT_EQ(via_maps, via_matrix) << a.matrix();
        }
    }
}

TEST(EstimateD1, Examples)
{
    auto e = estimate_d1(DegreeSequence{1, {2, 1, 2, 1}});
    EXPECT_DOUBLE_EQ(e.upper_bound, 1);
    EXPECT_DOUBLE_EQ(e.estimate, 1);
    auto g = estimate_d1(DegreeSequence{1, {2, 4, 8}});
    EXPECT_NEAR(g.estimate, 2, 1e-12);
    EXPECT_NEAR(g.upper_bound, 2, 1e-12);
    auto seq = degree_sequence(ExponentMatrix{{2, 1}, {1, 1}}, 1, 20);
    auto m = estimate_d1(seq);
    EXPECT_NEAR(m.estimate, (3 + std::sqrt(5.0)) / 2, 1e-4);
    EXPECT_THROW(estimate_d1(DegreeSequence{1, {}}), math_error);
    EXPECT_THROW(estimate_d1(DegreeSequence{1, {0}}), math_error);
}

TEST(EstimateD1, UpperBoundDecreasesAndDominatesTruth)
{
    std::mt19937_64 rng(9);
    for (std::size_t k = 2; k <= 4; ++k) {
        for (int trial = 0; trial < 5; ++trial) {
            ExponentMatrix a(random_nonsingular(k, rng, 3));
            auto full = degree_sequence(a, 1, 15);
            double truth = dynamical_degrees_exact(a)[1];
            double prev = std::numeric_limits<double>::infinity();
            for (std::size_t n = 1; n <= 15; ++n) {
                DegreeSequence part{1, {full.values.begin(), full.values.begin() + static_cast<std::ptrdiff_t>(n)}};
                double ub = estimate_d1(part).upper_bound;
                EXPECT_LE(ub, prev);
                EXPECT_GE(ub, truth * (1 - 1e-12));
                prev = ub;
            }
        }
    }
}

TEST(IsDominant, Examples)
{
    EXPECT_TRUE(is_dominant(parse_map("x1*x2, x0*x2, x0*x1", 2)));
    EXPECT_TRUE(is_dominant(parse_map("x0^2, x0*x1, x0*x2", 2)));
    EXPECT_FALSE(is_dominant(parse_map("x0^2, x0*x1, x1^2", 2)));
    EXPECT_FALSE(is_dominant(parse_map("x0 + x1, x0 + x1, x2", 2)));
}

TEST(Conjugate, Examples)
{
    auto sigma = parse_map("x1*x2, x0*x2, x0*x1", 2);
    EXPECT_EQ(conjugate(sigma, IntMatrix::identity(3)), sigma);
    auto sq = parse_map("x0^2, x1^2, x2^2", 2);
    EXPECT_EQ(conjugate(sq, IntMatrix{{0, 1, 0}, {0, 0, 1}, {1, 0, 0}}), sq);
    EXPECT_THROW(conjugate(sq, IntMatrix{{1, 1, 0}, {1, 1, 0}, {0, 0, 1}}), math_error);
}

TEST(Conjugate, LinearConjugationPreservesDegrees)
{
    std::mt19937_64 rng(10);
    auto sigma = parse_map("x1*x2, x0*x2, x0*x1", 2);
    for (int trial = 0; trial < 5; ++trial) {
        auto m = random_nonsingular(3, rng, 2);
        auto c = conjugate(sigma, m);
        EXPECT_EQ(degree_sequence_d1(c, 4).values, (std::vector<integer>{2, 1, 2, 1})) << m;
        EXPECT_DOUBLE_EQ(estimate_d1(degree_sequence_d1(c, 4)).upper_bound, 1);
    }
    auto f = monomial_map(ExponentMatrix{{2, 1}, {1, 1}});
    auto base = degree_sequence_d1(f, 3).values;
    for (int trial = 0; trial < 2; ++trial) {
        auto [m, minv] = random_unimodular(3, rng, 3, 1);
        EXPECT_EQ(degree_sequence_d1(conjugate(f, m), 3).values, base) << m;
    }
}
