#ifndef DYNDEG_FIBERED_HPP
#define DYNDEG_FIBERED_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include <dyndeg/cohomology.hpp>
#include <dyndeg/core.hpp>
#include <dyndeg/expr_parser.hpp>
#include <dyndeg/monomial.hpp>
#include <dyndeg/rational_map.hpp>

namespace dyndeg
{

// A dominant self-map of a single projective space, either monomial or given
// by explicit polynomials.
class FactorMap
{
public:
    FactorMap(ExponentMatrix a) : m_map(std::move(a)) {}
    FactorMap(ProjectiveRationalMap f) : m_map(gcd_reduce(f))
    {
        if (!is_dominant(rational())) {
            throw math_error("the map is not dominant");
        }
    }

    bool is_monomial() const
    {
        return std::holds_alternative<ExponentMatrix>(m_map);
    }
    const ExponentMatrix &monomial() const
    {
        return std::get<ExponentMatrix>(m_map);
    }
    const ProjectiveRationalMap &rational() const
    {
        return std::get<ProjectiveRationalMap>(m_map);
    }
    std::size_t dim() const
    {
        return is_monomial() ? monomial().dim() : rational().k();
    }
    ProjectiveRationalMap as_rational_map() const
    {
        return is_monomial() ? monomial_map(monomial()) : rational();
    }

    FactorMap power(unsigned long n) const
    {
        if (n < 1) {
            throw math_error("power: exponent must be positive");
        }
        if (is_monomial()) {
            return FactorMap(monomial().power(n));
        }
        ProjectiveRationalMap h = rational();
        for (unsigned long i = 1; i < n; ++i) {
            h = compose(rational(), h);
        }
        return FactorMap(h);
    }

private:
    std::variant<ExponentMatrix, ProjectiveRationalMap> m_map;
};

// lambda_a(h^n), n = 1..N, wherever it can be computed exactly.
inline std::vector<integer> factor_degree_sequence(const FactorMap &h, int a, int n_max)
{
    const int k = static_cast<int>(h.dim());
    if (a < 0 || a > k) {
        throw math_error("order " + std::to_string(a) + " out of range 0.." + std::to_string(k));
    }
    if (n_max < 1) {
        throw math_error("N must be at least 1");
    }
    if (a == 0) {
        return std::vector<integer>(static_cast<std::size_t>(n_max), integer(1));
    }
    if (h.is_monomial()) {
        return degree_sequence(h.monomial(), a, n_max).values;
    }
    if (a == 1 && k == 1) {
        // Resultants multiply under composition, so reduced maps of P^1 stay
        // reduced and degrees are exactly multiplicative.
        std::vector<integer> out;
        integer d(static_cast<long>(h.rational().degree()));
        for (int n = 1; n <= n_max; ++n) {
            out.push_back(ipow(d, static_cast<unsigned long>(n)));
        }
        return out;
    }
    if (a == 1) {
        return degree_sequence_d1(h.rational(), n_max).values;
    }
    throw unsupported_error("lambda_" + std::to_string(a) + " of a non-monomial map is not computable; only orders 0 and 1 are");
}

// Relative tolerance attached to a sequence estimate of d_1. When the tail
// ratios settle monotonically the remaining error is taken as twice the
// geometric tail of their differences; otherwise the distance to the upper
// bound.
inline double estimate_tolerance(const std::vector<integer> &v, const D1Estimate &est)
{
    if (est.upper_bound == 1.0) {
        // Degrees are at least 1, so the bound pins d_1.
        return 1e-9;
    }
    const double gap = (est.upper_bound - est.estimate) / est.upper_bound;
    const std::size_t n = v.size();
    if (n < 4) {
        return std::max(gap, 1e-9);
    }
    double r[3];
    for (int i = 0; i < 3; ++i) {
        r[i] = std::exp(log_of(v[n - 3 + static_cast<std::size_t>(i)]) - log_of(v[n - 4 + static_cast<std::size_t>(i)]));
    }
    const double j1 = std::abs(r[2] - r[1]), j0 = std::abs(r[1] - r[0]);
    const double eps = 1e-12 * r[2];
    const bool monotone = (r[0] <= r[1] + eps && r[1] <= r[2] + eps) || (r[0] + eps >= r[1] && r[1] + eps >= r[2]);
    if (!monotone) {
        return std::max({gap, j1 / est.estimate, 1e-9});
    }
    double tail = j1;
    if (j0 > 0 && j1 < j0) {
        tail = j1 / (1 - j1 / j0);
    }
    return std::max(2 * tail / est.estimate, 1e-9);
}

inline DegreeProfile estimated_profile(std::size_t k, const std::vector<integer> &d1_sequence)
{
    DegreeProfile prof;
    prof.exact = false;
    prof.values.assign(k + 1, std::numeric_limits<double>::quiet_NaN());
    prof.exact_values.assign(k + 1, std::nullopt);
    prof.values[0] = 1;
    prof.exact_values[0] = integer(1);
    DegreeSequence seq{1, d1_sequence};
    D1Estimate est = estimate_d1(seq);
    prof.values[1] = est.estimate;
    prof.tolerance = estimate_tolerance(d1_sequence, est);
    return prof;
}

// Exact profile for monomial maps and maps of P^1; estimated d_1 otherwise.
inline DegreeProfile factor_profile(const FactorMap &h, int n_max)
{
    if (h.is_monomial()) {
        return dynamical_degrees_exact(h.monomial());
    }
    if (h.dim() == 1) {
        DegreeProfile prof;
        prof.exact = true;
        integer d(static_cast<long>(h.rational().degree()));
        prof.values = {1.0, d.get_d()};
        prof.exact_values = {integer(1), d};
        return prof;
    }
    return estimated_profile(h.dim(), degree_sequence_d1(h.rational(), n_max).values);
}

// A fiber family tau_y: P^m -> P^m whose coefficients are polynomials in the
// affine base coordinates y1..yl. Variables are x0..xm, y1..yl in that order.
class FiberFamily
{
public:
    FiberFamily() = default;
    FiberFamily(std::size_t base_dim, std::vector<Poly> components)
        : m_l(base_dim), m_components(std::move(components))
    {
        if (m_components.size() < 2) {
            throw input_error("the fiber map needs at least 2 components");
        }
        const std::size_t m = m_components.size() - 1;
        std::optional<std::int64_t> deg;
        for (std::size_t i = 0; i < m_components.size(); ++i) {
            const Poly &c = m_components[i];
            if (c.nvars() != m + 1 + m_l) {
                throw input_error("fiber component " + std::to_string(i + 1) + " has the wrong number of variables");
            }
            std::map<Exp, Poly> coeffs;
            for (const auto &[e, a] : c.terms()) {
                Exp ex(e.begin(), e.begin() + static_cast<std::ptrdiff_t>(m + 1));
                Exp ey(e.begin() + static_cast<std::ptrdiff_t>(m + 1), e.end());
                std::int64_t d = 0;
                for (auto v : ex) {
                    d += v;
                }
                if (deg && *deg != d) {
                    throw input_error("fiber component " + std::to_string(i + 1) + " is not homogeneous of degree "
                                      + std::to_string(*deg) + " in x");
                }
                deg = d;
                auto [it, ins] = coeffs.try_emplace(ex, Poly(m_l));
                it->second += Poly::monomial(ey, a);
            }
            m_coeffs.push_back(std::move(coeffs));
        }
        if (!deg) {
            throw math_error("all fiber components are zero");
        }
    }

    static FiberFamily parse(std::size_t base_dim, std::size_t fiber_dim, std::string_view text)
    {
        auto names = projective_names(fiber_dim);
        for (std::size_t i = 1; i <= base_dim; ++i) {
            names.push_back("y" + std::to_string(i));
        }
        auto comps = parse_poly_list(text, names);
        if (comps.size() != fiber_dim + 1) {
            throw input_error("expected " + std::to_string(fiber_dim + 1) + " fiber components, got "
                              + std::to_string(comps.size()));
        }
        return FiberFamily(base_dim, std::move(comps));
    }

    std::size_t base_dim() const
    {
        return m_l;
    }
    std::size_t fiber_dim() const
    {
        return m_components.size() - 1;
    }
    const std::vector<Poly> &components() const
    {
        return m_components;
    }

    // tau_y with denominators cleared, or nullopt when some coefficient that
    // is not identically zero vanishes at y.
    std::optional<ProjectiveRationalMap> specialize(const std::vector<rational> &y) const
    {
        const std::size_t n = fiber_dim() + 1;
        std::vector<std::vector<std::pair<Exp, rational>>> vals(n);
        integer den = 1;
        for (std::size_t i = 0; i < n; ++i) {
            for (const auto &[ex, cy] : m_coeffs[i]) {
                rational v = cy.evaluate(y);
                if (sgn(v) == 0) {
                    return std::nullopt;
                }
                mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), v.get_den_mpz_t());
                vals[i].emplace_back(ex, v);
            }
        }
        std::vector<Poly> comps;
        for (std::size_t i = 0; i < n; ++i) {
            Poly p(n);
            for (const auto &[ex, v] : vals[i]) {
                rational s = v * den;
                p.add_term(ex, s.get_num());
            }
            comps.push_back(std::move(p));
        }
        return gcd_reduce(ProjectiveRationalMap(std::move(comps)));
    }

private:
    std::size_t m_l = 0;
    std::vector<Poly> m_components;
    std::vector<std::map<Exp, Poly>> m_coeffs;
};

struct ProductKind {
    FactorMap base;
    FactorMap fiber;
};

struct SkewKind {
    FactorMap base;
    FiberFamily fiber;
};

struct TriangularKind {
    ExponentMatrix matrix;
    std::size_t l = 0;
    BlockFibration blocks;
};

// f: X -> X over g: Y -> Y with pi the coordinate projection, built so that
// pi o f = g o pi.
class FiberedSystem
{
public:
    static FiberedSystem product(FactorMap g, FactorMap h)
    {
        return FiberedSystem(ProductKind{std::move(g), std::move(h)});
    }
    static FiberedSystem skew(FactorMap g, FiberFamily tau)
    {
        if (tau.base_dim() != g.dim()) {
            throw input_error("the fiber family uses " + std::to_string(tau.base_dim())
                              + " base coordinates but the base has dimension " + std::to_string(g.dim()));
        }
        return FiberedSystem(SkewKind{std::move(g), std::move(tau)});
    }
    static FiberedSystem monomial_triangular(const ExponentMatrix &a, std::size_t l)
    {
        BlockFibration b = block_fibration(a.matrix(), l);
        return FiberedSystem(TriangularKind{a, l, std::move(b)});
    }

    bool is_product() const
    {
        return std::holds_alternative<ProductKind>(m_kind);
    }
    bool is_skew() const
    {
        return std::holds_alternative<SkewKind>(m_kind);
    }
    bool is_triangular() const
    {
        return std::holds_alternative<TriangularKind>(m_kind);
    }
    const ProductKind &as_product() const
    {
        return std::get<ProductKind>(m_kind);
    }
    const SkewKind &as_skew() const
    {
        return std::get<SkewKind>(m_kind);
    }
    const TriangularKind &as_triangular() const
    {
        return std::get<TriangularKind>(m_kind);
    }

    std::size_t base_dim() const
    {
        if (is_triangular()) {
            return as_triangular().l;
        }
        return is_product() ? as_product().base.dim() : as_skew().base.dim();
    }
    std::size_t fiber_dim() const
    {
        if (is_triangular()) {
            return as_triangular().matrix.dim() - as_triangular().l;
        }
        return is_product() ? as_product().fiber.dim() : as_skew().fiber.fiber_dim();
    }
    std::size_t dim() const
    {
        return base_dim() + fiber_dim();
    }
    MultiProjSpace base_space() const
    {
        return MultiProjSpace({static_cast<int>(base_dim())});
    }
    MultiProjSpace fiber_space() const
    {
        return MultiProjSpace({static_cast<int>(fiber_dim())});
    }
    FactorMap base_map() const
    {
        if (is_triangular()) {
            return FactorMap(ExponentMatrix(as_triangular().blocks.base));
        }
        return is_product() ? as_product().base : as_skew().base;
    }

    FiberedSystem power(unsigned long n) const
    {
        if (is_product()) {
            return product(as_product().base.power(n), as_product().fiber.power(n));
        }
        if (is_triangular()) {
            return monomial_triangular(as_triangular().matrix.power(n), as_triangular().l);
        }
        throw unsupported_error("powers of skew systems are not constructed");
    }

private:
    explicit FiberedSystem(std::variant<ProductKind, SkewKind, TriangularKind> kind) : m_kind(std::move(kind)) {}

    std::variant<ProductKind, SkewKind, TriangularKind> m_kind;
};

struct RelativeSequence {
    int p = 1;
    std::vector<integer> values;
    std::optional<std::vector<rational>> base_point;
    int samples = 0;
};

inline RelativeSequence relative_sequence_product(const FiberedSystem &sys, int p, int n_max)
{
    if (!sys.is_product()) {
        throw math_error("relative_sequence_product: product system required");
    }
    if (p < 0 || p > static_cast<int>(sys.fiber_dim())) {
        throw math_error("relative order " + std::to_string(p) + " out of range 0.." + std::to_string(sys.fiber_dim()));
    }
    RelativeSequence out;
    out.p = p;
    out.values = factor_degree_sequence(sys.as_product().fiber, p, n_max);
    return out;
}

namespace detail
{

inline std::vector<rational> random_base_point(std::size_t l, std::mt19937_64 &rng)
{
    std::uniform_int_distribution<long> num(-19, 19);
    std::uniform_int_distribution<long> den(1, 13);
    std::vector<rational> y;
    for (std::size_t i = 0; i < l; ++i) {
        long a = 0;
        while (a == 0) {
            a = num(rng);
        }
        y.push_back(fraction(integer(a), integer(den(rng))));
    }
    return y;
}

// g(y) in the affine chart x0 != 0, or nullopt when the orbit leaves it.
inline std::optional<std::vector<rational>> base_step(const ProjectiveRationalMap &g, const std::vector<rational> &y)
{
    std::vector<rational> hom{rational(1)};
    hom.insert(hom.end(), y.begin(), y.end());
    std::vector<rational> img;
    for (const auto &c : g.components()) {
        img.push_back(c.evaluate(hom));
    }
    if (sgn(img[0]) == 0) {
        return std::nullopt;
    }
    std::vector<rational> out;
    for (std::size_t i = 1; i < img.size(); ++i) {
        out.push_back(img[i] / img[0]);
    }
    return out;
}

struct OrbitFailure {
    int step = 0;
    std::string reason;
};

inline std::variant<std::vector<integer>, OrbitFailure> orbit_degrees(const ProjectiveRationalMap &g,
                                                                      const FiberFamily &tau,
                                                                      std::int64_t generic_degree,
                                                                      std::vector<rational> y, int n_max)
{
    std::vector<integer> values;
    std::optional<ProjectiveRationalMap> h;
    for (int n = 1; n <= n_max; ++n) {
        auto step = tau.specialize(y);
        if (!step) {
            return OrbitFailure{n, "a fiber coefficient vanishes at the orbit point"};
        }
        if (step->degree() != generic_degree) {
            return OrbitFailure{n, "the fiber map drops degree at the orbit point"};
        }
        try {
            h = h ? compose(*step, *h) : *step;
        } catch (const math_error &) {
            return OrbitFailure{n, "the fiber composition degenerates"};
        }
        values.push_back(integer(static_cast<long>(h->degree())));
        if (n < n_max) {
            auto next = base_step(g, y);
            if (!next) {
                return OrbitFailure{n, "the base orbit leaves the affine chart"};
            }
            y = std::move(*next);
        }
    }
    return values;
}

} // namespace detail

inline constexpr int orbit_resamples = 5;

// Degrees of h_n = tau_{g^{n-1}(y)} o ... o tau_y. A degenerate y is replaced
// by a fresh random point up to orbit_resamples times.
inline RelativeSequence relative_sequence_orbit(const FiberedSystem &sys, int n_max,
                                                std::optional<std::vector<rational>> y = std::nullopt,
                                                std::uint64_t seed = 1)
{
    if (!sys.is_skew()) {
        throw math_error("relative_sequence_orbit: skew system required");
    }
    if (n_max < 1) {
        throw math_error("N must be at least 1");
    }
    const auto &sk = sys.as_skew();
    const std::size_t l = sys.base_dim();
    if (y && y->size() != l) {
        throw input_error("the base point needs " + std::to_string(l) + " coordinates");
    }
    ProjectiveRationalMap g = sk.base.as_rational_map();

    std::mt19937_64 probe(seed ^ 0x9e3779b97f4a7c15ULL);
    std::int64_t generic = -1;
    for (int i = 0; i < 3; ++i) {
        auto t = sk.fiber.specialize(detail::random_base_point(l, probe));
        if (t) {
            generic = std::max(generic, t->degree());
        }
    }
    if (generic < 1) {
        throw math_error("the generic fiber map is constant or degenerate");
    }

    std::mt19937_64 rng(seed);
    detail::OrbitFailure last;
    for (int attempt = 0; attempt <= orbit_resamples; ++attempt) {
        std::vector<rational> pt = (attempt == 0 && y) ? *y : detail::random_base_point(l, rng);
        auto res = detail::orbit_degrees(g, sk.fiber, generic, pt, n_max);
        if (auto *vals = std::get_if<std::vector<integer>>(&res)) {
            RelativeSequence out;
            out.p = 1;
            out.values = std::move(*vals);
            out.base_point = std::move(pt);
            out.samples = attempt + 1;
            return out;
        }
        last = std::get<detail::OrbitFailure>(res);
    }
    throw math_error("orbit degenerates at step " + std::to_string(last.step) + " for every sampled base point: "
                     + last.reason);
}

// Pullback (f^n)^* omega^p on P^l x P^m for a product system, assembled from
// the factor degrees lam_g[a] = lambda_a(g^n) and lam_h[b] = lambda_b(h^n).
inline CohomologyClass product_pullback(int l, int m, int p, const std::vector<integer> &lam_g,
                                        const std::vector<integer> &lam_h)
{
    MultiProjSpace space({l, m});
    CohomologyClass c(space, p);
    for (int a = std::max(0, p - m); a <= std::min(p, l); ++a) {
        rational coeff = binomial(static_cast<unsigned long>(p), static_cast<unsigned long>(a))
                         * lam_g[static_cast<std::size_t>(a)] * lam_h[static_cast<std::size_t>(p - a)];
        c += CohomologyClass::monomial(space, {a, p - a}, coeff);
    }
    return c;
}

struct AbcTable {
    int p = 0;
    int q_min = 0;
    int q_max = 0;
    // a[q - q_min][n - 1]
    std::vector<std::vector<integer>> a;
    std::vector<integer> b;
    std::vector<integer> c;
    // lambda_p(f^n) on the total space with omega = t1 + t2.
    std::vector<integer> total;
};

namespace detail
{

inline std::vector<std::vector<integer>> factor_tables(const FactorMap &h, int top, int n_max)
{
    // tables[a][n-1] = lambda_a(h^n) for a = 0..top.
    std::vector<std::vector<integer>> t;
    for (int a = 0; a <= top; ++a) {
        t.push_back(factor_degree_sequence(h, a, n_max));
    }
    return t;
}

inline integer to_integer(const rational &q)
{
    if (q.get_den() != 1) {
        throw math_error("expected an integral intersection number, got " + dyndeg::to_string(q));
    }
    return q.get_num();
}

} // namespace detail

inline AbcTable abc_sequences(const FiberedSystem &sys, int p, int n_max)
{
    if (!sys.is_product()) {
        throw unsupported_error("a/b/c sequences are computed for product systems only");
    }
    const int l = static_cast<int>(sys.base_dim());
    const int m = static_cast<int>(sys.fiber_dim());
    const int k = l + m;
    if (p < 0 || p > k) {
        throw math_error("order " + std::to_string(p) + " out of range 0.." + std::to_string(k));
    }
    if (n_max < 1) {
        throw math_error("N must be at least 1");
    }
    const auto &pr = sys.as_product();
    auto tg = detail::factor_tables(pr.base, std::min(p, l), n_max);
    auto th = detail::factor_tables(pr.fiber, std::min(p, m), n_max);

    AbcTable out;
    out.p = p;
    out.q_min = std::max(0, p - l);
    out.q_max = std::min(p, m);
    out.a.assign(static_cast<std::size_t>(out.q_max - out.q_min + 1), {});
    MultiProjSpace space({l, m});
    CohomologyClass omega = CohomologyClass::kahler(space);
    CohomologyClass omega_y = CohomologyClass::generator(space, 0);
    for (int n = 1; n <= n_max; ++n) {
        std::vector<integer> lg(static_cast<std::size_t>(l + 1), integer(0));
        std::vector<integer> lh(static_cast<std::size_t>(m + 1), integer(0));
        for (std::size_t a = 0; a < tg.size(); ++a) {
            lg[a] = tg[a][static_cast<std::size_t>(n - 1)];
        }
        for (std::size_t b = 0; b < th.size(); ++b) {
            lh[b] = th[b][static_cast<std::size_t>(n - 1)];
        }
        CohomologyClass pull = product_pullback(l, m, p, lg, lh);
        integer b = 0;
        for (int q = out.q_min; q <= out.q_max; ++q) {
            CohomologyClass test = cup(cup_power(omega_y, l - p + q), cup_power(omega, m - q));
            integer a = detail::to_integer(pairing(pull, test));
            out.a[static_cast<std::size_t>(q - out.q_min)].push_back(a);
            b += a;
        }
        out.b.push_back(b);
        out.c.push_back(p <= l ? lg[static_cast<std::size_t>(p)] : integer(0));
        out.total.push_back(detail::to_integer(mass(pull, omega)));
    }
    return out;
}

// Relative degree sequence for any kind: lambda_p(f^n | pi).
inline RelativeSequence relative_sequence(const FiberedSystem &sys, int p, int n_max, std::uint64_t seed = 1)
{
    if (sys.is_product()) {
        return relative_sequence_product(sys, p, n_max);
    }
    if (p < 0 || p > static_cast<int>(sys.fiber_dim())) {
        throw math_error("relative order " + std::to_string(p) + " out of range 0.." + std::to_string(sys.fiber_dim()));
    }
    if (sys.is_triangular()) {
        RelativeSequence out;
        out.p = p;
        out.values = degree_sequence(ExponentMatrix(sys.as_triangular().blocks.fiber), p, n_max).values;
        return out;
    }
    if (p == 0) {
        RelativeSequence out;
        out.p = 0;
        out.values.assign(static_cast<std::size_t>(n_max), integer(1));
        return out;
    }
    if (p != 1) {
        throw unsupported_error("relative degrees of skew systems are computed for p = 1 only");
    }
    return relative_sequence_orbit(sys, n_max, std::nullopt, seed);
}

// Total degree sequence lambda_p(f^n).
inline std::vector<integer> total_degree_sequence(const FiberedSystem &sys, int p, int n_max)
{
    if (sys.is_triangular()) {
        return degree_sequence(sys.as_triangular().matrix, p, n_max).values;
    }
    if (sys.is_product()) {
        return abc_sequences(sys, p, n_max).total;
    }
    throw unsupported_error("total degree sequences of skew systems are not computed");
}

struct SystemProfiles {
    DegreeProfile total;
    DegreeProfile base;
    DegreeProfile relative;
};

namespace detail
{

inline IntMatrix block_diagonal(const IntMatrix &a, const IntMatrix &b)
{
    IntMatrix m(a.rows() + b.rows(), a.cols() + b.cols());
    for (std::size_t i = 0; i < a.rows(); ++i) {
        for (std::size_t j = 0; j < a.cols(); ++j) {
            m(i, j) = a(i, j);
        }
    }
    for (std::size_t i = 0; i < b.rows(); ++i) {
        for (std::size_t j = 0; j < b.cols(); ++j) {
            m(a.rows() + i, a.cols() + j) = b(i, j);
        }
    }
    return m;
}

// d_p from the sequence lambda_p(f^n) by the d_1 estimator, which only
// assumes submultiplicativity.
inline std::pair<double, double> sequence_estimate(const std::vector<integer> &v)
{
    DegreeSequence seq{0, v};
    D1Estimate est = estimate_d1(seq);
    return {est.estimate, estimate_tolerance(v, est)};
}

} // namespace detail

inline SystemProfiles system_profiles(const FiberedSystem &sys, int n_max, std::uint64_t seed = 1)
{
    SystemProfiles out;
    const std::size_t k = sys.dim();
    if (sys.is_triangular()) {
        const auto &t = sys.as_triangular();
        out.total = dynamical_degrees_exact(t.matrix);
        out.base = dynamical_degrees_exact(ExponentMatrix(t.blocks.base));
        out.relative = relative_degrees_exact(t.blocks.fiber);
        return out;
    }
    if (sys.is_product()) {
        const auto &pr = sys.as_product();
        out.base = factor_profile(pr.base, n_max);
        out.relative = factor_profile(pr.fiber, n_max);
        if (pr.base.is_monomial() && pr.fiber.is_monomial()) {
            out.total = dynamical_degrees_exact(
                ExponentMatrix(detail::block_diagonal(pr.base.monomial().matrix(), pr.fiber.monomial().matrix())));
            return out;
        }
        out.total.exact = false;
        out.total.values.assign(k + 1, std::numeric_limits<double>::quiet_NaN());
        out.total.exact_values.assign(k + 1, std::nullopt);
        out.total.values[0] = 1;
        out.total.exact_values[0] = integer(1);
        double tol = 1e-9;
        for (std::size_t p = 1; p <= k; ++p) {
            try {
                auto [v, t] = detail::sequence_estimate(total_degree_sequence(sys, static_cast<int>(p), n_max));
                out.total.values[p] = v;
                tol = std::max(tol, t);
            } catch (const unsupported_error &) {
            }
        }
        out.total.tolerance = tol;
        return out;
    }
    const auto &sk = sys.as_skew();
    out.base = factor_profile(sk.base, n_max);
    out.relative = estimated_profile(sys.fiber_dim(), relative_sequence_orbit(sys, n_max, std::nullopt, seed).values);
    out.total.exact = false;
    out.total.values.assign(k + 1, std::numeric_limits<double>::quiet_NaN());
    out.total.exact_values.assign(k + 1, std::nullopt);
    out.total.values[0] = 1;
    out.total.exact_values[0] = integer(1);
    return out;
}

enum class CheckStatus { holds, fails, indistinguishable, unsupported };

inline const char *to_string(CheckStatus s)
{
    switch (s) {
    case CheckStatus::holds:
        return "holds";
    case CheckStatus::fails:
        return "fails";
    case CheckStatus::indistinguishable:
        return "indistinguishable";
    case CheckStatus::unsupported:
        return "unsupported";
    }
    return "?";
}

struct TheoremEntry {
    int p = 0;
    CheckStatus status = CheckStatus::unsupported;
    std::optional<int> witness;
    std::vector<int> ties;
    double residual = std::numeric_limits<double>::quiet_NaN();
    double tolerance = 0;
};

struct TheoremReport {
    std::vector<TheoremEntry> entries;
    bool passed = false;
    bool supported = false;
};

// d_p(f) = max over j of d_j(g) d_{p-j}(f|pi), compared on the log scale.
inline TheoremReport verify_theorem_1_1(const DegreeProfile &d_f, const DegreeProfile &d_g, const DegreeProfile &d_rel)
{
    if (d_f.size() < 1 || d_g.size() < 1 || d_rel.size() < 1 || d_f.size() != d_g.size() + d_rel.size() - 1) {
        throw math_error("profile lengths are inconsistent: total " + std::to_string(d_f.size()) + ", base "
                         + std::to_string(d_g.size()) + ", relative " + std::to_string(d_rel.size()));
    }
    const int k = static_cast<int>(d_f.size()) - 1;
    const int l = static_cast<int>(d_g.size()) - 1;
    const int m = k - l;
    const bool all_exact = d_f.exact && d_g.exact && d_rel.exact;
    double tol = 1e-9;
    if (!all_exact) {
        tol += (d_f.exact ? 0 : d_f.tolerance) + (d_g.exact ? 0 : d_g.tolerance)
               + (d_rel.exact ? 0 : d_rel.tolerance);
    }
    TheoremReport rep;
    for (int p = 0; p <= k; ++p) {
        TheoremEntry e;
        e.p = p;
        e.tolerance = tol;
        std::vector<std::pair<int, double>> cands;
        bool known = d_f.known(static_cast<std::size_t>(p));
        for (int j = std::max(0, p - m); j <= std::min(p, l); ++j) {
            std::size_t a = static_cast<std::size_t>(j), b = static_cast<std::size_t>(p - j);
            if (!d_g.known(a) || !d_rel.known(b)) {
                known = false;
                break;
            }
            cands.emplace_back(j, std::log(d_g[a]) + std::log(d_rel[b]));
        }
        if (!known) {
            rep.entries.push_back(e);
            continue;
        }
        double best = -std::numeric_limits<double>::infinity();
        for (const auto &c : cands) {
            best = std::max(best, c.second);
        }
        for (const auto &[j, v] : cands) {
            if (v >= best - 1e-12) {
                if (!e.witness) {
                    e.witness = j;
                }
            }
            if (v >= best - tol) {
                e.ties.push_back(j);
            }
        }
        e.residual = std::abs(std::log(d_f[static_cast<std::size_t>(p)]) - best);
        if (e.residual > tol) {
            e.status = CheckStatus::fails;
        } else if (!all_exact && std::any_of(cands.begin(), cands.end(), [&](const auto &c) {
                       return c.second < best - 1e-12 && c.second >= best - tol;
                   })) {
            // Estimated inputs cannot separate the candidate maxima.
            e.status = CheckStatus::indistinguishable;
        } else {
            e.status = CheckStatus::holds;
        }
        rep.entries.push_back(e);
    }
    // p = 0 reads 1 = 1 and certifies nothing.
    rep.supported = std::any_of(rep.entries.begin(), rep.entries.end(), [](const TheoremEntry &e) {
        return e.p > 0 && e.status != CheckStatus::unsupported;
    });
    rep.passed = rep.supported && std::all_of(rep.entries.begin(), rep.entries.end(), [](const TheoremEntry &e) {
                     return e.status == CheckStatus::holds || e.status == CheckStatus::unsupported;
                 });
    return rep;
}

// 1 = d_0 and d_p != d_{p+1} for every p; nullopt when an entry is unknown.
inline std::optional<bool> consecutive_distinct(const DegreeProfile &d)
{
    const double eps = d.exact ? 1e-9 : std::max(1e-9, d.tolerance);
    for (std::size_t p = 0; p + 1 < d.size(); ++p) {
        if (!d.known(p) || !d.known(p + 1)) {
            return std::nullopt;
        }
    }
    for (std::size_t p = 0; p + 1 < d.size(); ++p) {
        double a = d[p], b = d[p + 1];
        if (std::abs(a - b) <= eps * std::max(a, b)) {
            return false;
        }
    }
    return true;
}

struct CorollaryReport {
    std::optional<bool> total;
    std::optional<bool> base;
    std::optional<bool> relative;
    bool vacuous = false;
    bool passed = false;
    bool supported = true;
};

inline CorollaryReport verify_corollary_1_3(const DegreeProfile &d_f, const DegreeProfile &d_g,
                                            const DegreeProfile &d_rel)
{
    CorollaryReport r;
    r.total = consecutive_distinct(d_f);
    r.base = consecutive_distinct(d_g);
    r.relative = consecutive_distinct(d_rel);
    if (r.total && !*r.total) {
        r.vacuous = true;
        r.passed = true;
        return r;
    }
    if (!r.total || !r.base || !r.relative) {
        r.supported = false;
        return r;
    }
    r.passed = *r.base && *r.relative;
    return r;
}

struct PowerRuleEntry {
    int p = 0;
    double expected = 0;
    double actual = 0;
    double relative_error = 0;
    bool ok = true;
};

struct PowerRuleReport {
    unsigned long n = 0;
    std::vector<PowerRuleEntry> entries;
    bool passed = false;
    bool supported = false;
};

// d_p(f^n) against d_p(f)^n entrywise, skipping unknown orders.
inline PowerRuleReport verify_power_rule(const DegreeProfile &d_f, const DegreeProfile &d_fn, unsigned long n)
{
    if (d_f.size() != d_fn.size()) {
        throw math_error("power rule: profile lengths differ");
    }
    double tol = 1e-9;
    if (!d_f.exact || !d_fn.exact) {
        tol += static_cast<double>(n) * (d_f.exact ? 0 : d_f.tolerance) + (d_fn.exact ? 0 : d_fn.tolerance);
    }
    PowerRuleReport r;
    r.n = n;
    r.passed = true;
    for (std::size_t p = 0; p < d_f.size(); ++p) {
        if (!d_f.known(p) || !d_fn.known(p)) {
            continue;
        }
        PowerRuleEntry e;
        e.p = static_cast<int>(p);
        e.expected = std::pow(d_f[p], static_cast<double>(n));
        e.actual = d_fn[p];
        e.relative_error = std::abs(e.actual - e.expected) / e.expected;
        e.ok = e.relative_error <= tol;
        r.passed = r.passed && e.ok;
        r.supported = true;
        r.entries.push_back(e);
    }
    r.passed = r.passed && r.supported;
    return r;
}

struct RelativeProfileReport {
    bool d0_is_one = false;
    bool at_least_one = false;
    LogConcavityResult log_concave;
    bool passed = false;
};

inline RelativeProfileReport verify_relative_profile(const DegreeProfile &rel)
{
    RelativeProfileReport r;
    r.d0_is_one = rel.known(0) && rel[0] == 1.0
                  && (!rel.exact_values.size() || !rel.exact_values[0] || *rel.exact_values[0] == 1);
    r.at_least_one = true;
    const double eps = rel.exact ? 1e-9 : std::max(1e-9, rel.tolerance);
    for (std::size_t p = 0; p < rel.size(); ++p) {
        if (rel.known(p) && rel[p] < 1 - eps) {
            r.at_least_one = false;
        }
    }
    r.log_concave = check_log_concavity(rel.values, eps);
    r.passed = r.d0_is_one && r.at_least_one && r.log_concave.ok;
    return r;
}

// max_p d_p(f) >= max_p d_p(g) over the known entries.
inline bool max_degree_dominates(const DegreeProfile &d_f, const DegreeProfile &d_g)
{
    double mf = 0, mg = 0;
    for (std::size_t p = 0; p < d_f.size(); ++p) {
        if (d_f.known(p)) {
            mf = std::max(mf, d_f[p]);
        }
    }
    for (std::size_t p = 0; p < d_g.size(); ++p) {
        if (d_g.known(p)) {
            mg = std::max(mg, d_g[p]);
        }
    }
    const double eps = (d_f.exact ? 1e-9 : d_f.tolerance) + (d_g.exact ? 1e-9 : d_g.tolerance);
    return mf >= mg * (1 - eps);
}

struct Lemma42Report {
    int p = 0;
    double target = 0;
    std::vector<integer> b;
    std::vector<double> gaps;
    std::optional<int> monotone_from;
    double decay_ratio = 0;
    bool passed = false;
};

inline Lemma42Report lemma_4_2_from_sequence(int p, const std::vector<integer> &b, double d_p_of_f)
{
    const int n_max = static_cast<int>(b.size());
    if (n_max < 2) {
        throw math_error("lemma4.2 needs N >= 2");
    }
    Lemma42Report r;
    r.p = p;
    r.target = d_p_of_f;
    r.b = b;
    const double logd = std::log(d_p_of_f);
    for (std::size_t i = 0; i < b.size(); ++i) {
        double n = static_cast<double>(i + 1);
        r.gaps.push_back(std::abs(std::exp(log_of(b[i]) / n) - d_p_of_f));
    }
    const double slack = 1e-12 * std::max(1.0, d_p_of_f);
    int from = n_max;
    for (int n = n_max - 1; n >= 1; --n) {
        if (r.gaps[static_cast<std::size_t>(n)] <= r.gaps[static_cast<std::size_t>(n - 1)] + slack) {
            from = n;
        } else {
            break;
        }
    }
    if (from < n_max) {
        r.monotone_from = from;
    }
    const int lo = n_max / 2 + 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0, cnt = 0;
    for (int n = lo; n <= n_max; ++n) {
        double y = log_of(b[static_cast<std::size_t>(n - 1)]) - n * logd;
        sx += n;
        sy += y;
        sxx += static_cast<double>(n) * n;
        sxy += n * y;
        cnt += 1;
    }
    double denom = cnt * sxx - sx * sx;
    r.decay_ratio = denom > 0 ? std::exp((cnt * sxy - sx * sy) / denom) : 1.0;
    r.passed = r.gaps.back() <= 1e-9 * std::max(1.0, d_p_of_f)
               || (r.monotone_from && *r.monotone_from <= std::max(1, n_max / 2));
    return r;
}

// |b_p(n)^{1/n} - d_p(f)| for n = 1..N, the first n after which the gap never
// increases, and exp of the least-squares slope of log(b_p(n) / d^n) over the
// second half of the range.
inline Lemma42Report verify_lemma_4_2(const FiberedSystem &sys, int p, int n_max, double d_p_of_f)
{
    if (n_max < 2) {
        throw math_error("lemma4.2 needs N >= 2");
    }
    return lemma_4_2_from_sequence(p, abc_sequences(sys, p, n_max).b, d_p_of_f);
}

} // namespace dyndeg

#endif
