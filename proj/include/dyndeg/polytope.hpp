#ifndef DYNDEG_POLYTOPE_HPP
#define DYNDEG_POLYTOPE_HPP

#include <algorithm>
#include <cstddef>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <dyndeg/core.hpp>
#include <dyndeg/int_matrix.hpp>
#include <dyndeg/parallel.hpp>

namespace dyndeg
{

using LatticePoint = std::vector<integer>;

inline constexpr int max_polytope_dim = 4;

// Convex hull of finitely many points of Z^d (d <= 4), kept as its vertex
// set in lexicographic order. Lower-dimensional hulls live in the ambient
// space and have volume zero.
class LatticePolytope
{
public:
    LatticePolytope() = default;

    int dim() const
    {
        return m_dim;
    }
    // Dimension of the affine hull of the vertices.
    int affine_dim() const
    {
        return m_affine_dim;
    }
    const std::vector<LatticePoint> &vertices() const
    {
        return m_vertices;
    }
    const rational &volume() const
    {
        return m_volume;
    }
    bool is_full_dimensional() const
    {
        return m_affine_dim == m_dim;
    }

    // Outward facet inequalities normal . x <= offset, available for
    // full-dimensional polytopes (possibly repeated per facet piece).
    const std::vector<std::pair<LatticePoint, integer>> &facet_inequalities() const
    {
        return m_facets;
    }

    // Exact membership test: inside or on the boundary.
    bool contains(const LatticePoint &x) const;

    friend bool operator==(const LatticePolytope &a, const LatticePolytope &b)
    {
        return a.m_dim == b.m_dim && a.m_vertices == b.m_vertices;
    }

    std::string to_string() const
    {
        std::string s = "hull{";
        for (std::size_t i = 0; i < m_vertices.size(); ++i) {
            s += (i ? ", (" : "(");
            for (std::size_t j = 0; j < m_vertices[i].size(); ++j) {
                s += (j ? "," : "") + m_vertices[i][j].get_str();
            }
            s += ")";
        }
        return s + "}";
    }

private:
    friend LatticePolytope convex_hull(std::vector<LatticePoint> points, int dim);

    int m_dim = 0;
    int m_affine_dim = -1;
    std::vector<LatticePoint> m_vertices;
    rational m_volume;
    // Only set for full-dimensional hulls.
    std::vector<std::pair<LatticePoint, integer>> m_facets;
};

inline std::ostream &operator<<(std::ostream &os, const LatticePolytope &p)
{
    return os << p.to_string();
}

namespace detail
{

// Integer normal of the hyperplane through e points of Z^e (generalized
// cross product of the edge vectors from pts[0]).
inline LatticePoint hyperplane_normal(const std::vector<const LatticePoint *> &pts)
{
    const std::size_t e = pts.size();
    LatticePoint n(e);
    if (e == 1) {
        n[0] = 1;
        return n;
    }
    IntMatrix edges(e - 1, e);
    for (std::size_t r = 1; r < e; ++r) {
        for (std::size_t c = 0; c < e; ++c) {
            edges(r - 1, c) = (*pts[r])[c] - (*pts[0])[c];
        }
    }
    for (std::size_t j = 0; j < e; ++j) {
        IntMatrix minor(e - 1, e - 1);
        for (std::size_t r = 0; r < e - 1; ++r) {
            for (std::size_t c = 0, mc = 0; c < e; ++c) {
                if (c != j) {
                    minor(r, mc++) = edges(r, c);
                }
            }
        }
        integer d = determinant(minor);
        n[j] = (j % 2 == 0) ? d : integer(-d);
    }
    return n;
}

inline integer dot(const LatticePoint &a, const LatticePoint &b)
{
    integer s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        s += a[i] * b[i];
    }
    return s;
}

struct HullFacet {
    std::vector<std::size_t> verts; // sorted
    LatticePoint normal;            // outward
    integer offset;
    bool alive = true;
};

// Beneath-beyond over full-dimensional points in Z^e, 2 <= e <= 4, starting
// from the affinely independent simplex `seed`. The boundary is kept as a
// simplicial complex; coplanar pieces of one facet are separate simplices.
struct BeneathBeyond {
    const std::vector<LatticePoint> &pts;
    std::size_t e;
    LatticePoint interior_scaled; // (e+1) * centroid of the seed simplex
    std::vector<HullFacet> facets;

    BeneathBeyond(const std::vector<LatticePoint> &points, std::size_t dim, const std::vector<std::size_t> &seed)
        : pts(points), e(dim), interior_scaled(dim)
    {
        for (std::size_t i : seed) {
            for (std::size_t c = 0; c < e; ++c) {
                interior_scaled[c] += pts[i][c];
            }
        }
        for (std::size_t skip = 0; skip < seed.size(); ++skip) {
            std::vector<std::size_t> f;
            for (std::size_t i = 0; i < seed.size(); ++i) {
                if (i != skip) {
                    f.push_back(seed[i]);
                }
            }
            add_facet(std::move(f));
        }
        std::vector<bool> in_seed(pts.size(), false);
        for (std::size_t i : seed) {
            in_seed[i] = true;
        }
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (!in_seed[i]) {
                insert(i);
            }
        }
    }

    void add_facet(std::vector<std::size_t> verts)
    {
        std::sort(verts.begin(), verts.end());
        std::vector<const LatticePoint *> vp;
        for (std::size_t i : verts) {
            vp.push_back(&pts[i]);
        }
        HullFacet f;
        f.normal = hyperplane_normal(vp);
        f.offset = dot(f.normal, pts[verts[0]]);
        // Orient so that the interior point lies strictly beneath.
        integer side = dot(f.normal, interior_scaled) - static_cast<long>(e + 1) * f.offset;
        if (sgn(side) > 0) {
            for (auto &c : f.normal) {
                c = -c;
            }
            f.offset = -f.offset;
        }
        f.verts = std::move(verts);
        facets.push_back(std::move(f));
    }

    void insert(std::size_t q)
    {
        std::vector<std::size_t> visible;
        for (std::size_t fi = 0; fi < facets.size(); ++fi) {
            const auto &f = facets[fi];
            if (f.alive && dot(f.normal, pts[q]) > f.offset) {
                visible.push_back(fi);
            }
        }
        if (visible.empty()) {
            return;
        }
        std::map<std::vector<std::size_t>, int> ridge_count;
        for (std::size_t fi : visible) {
            const auto &vs = facets[fi].verts;
            for (std::size_t skip = 0; skip < vs.size(); ++skip) {
                std::vector<std::size_t> ridge;
                for (std::size_t i = 0; i < vs.size(); ++i) {
                    if (i != skip) {
                        ridge.push_back(vs[i]);
                    }
                }
                ++ridge_count[ridge];
            }
        }
        for (std::size_t fi : visible) {
            facets[fi].alive = false;
        }
        for (auto &[ridge, count] : ridge_count) {
            if (count == 1) {
                auto f = ridge;
                f.push_back(q);
                add_facet(std::move(f));
            }
        }
        // Compact dead facets occasionally.
        if (facets.size() > 64 && visible.size() * 4 > facets.size() / 4) {
            std::erase_if(facets, [](const HullFacet &f) { return !f.alive; });
        }
    }
};

} // namespace detail

// Hull of `points` in Z^dim. Duplicate and non-extreme points are dropped.
inline LatticePolytope convex_hull(std::vector<LatticePoint> points, int dim)
{
    if (dim < 1) {
        throw math_error("convex_hull: dimension must be positive");
    }
    if (dim > max_polytope_dim) {
        throw unsupported_error("convex_hull: dimension " + std::to_string(dim) + " exceeds the cap of "
                                + std::to_string(max_polytope_dim));
    }
    if (points.empty()) {
        throw math_error("convex_hull: empty point set");
    }
    for (const auto &p : points) {
        if (p.size() != static_cast<std::size_t>(dim)) {
            throw math_error("convex_hull: point of wrong dimension");
        }
    }
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());

    LatticePolytope out;
    out.m_dim = dim;

    // Greedy affine basis; its rank is the affine dimension.
    std::vector<std::size_t> basis{0};
    std::vector<LatticePoint> diffs;
    for (std::size_t i = 1; i < points.size() && diffs.size() < static_cast<std::size_t>(dim); ++i) {
        LatticePoint d(static_cast<std::size_t>(dim));
        for (int c = 0; c < dim; ++c) {
            d[static_cast<std::size_t>(c)] = points[i][static_cast<std::size_t>(c)] - points[0][static_cast<std::size_t>(c)];
        }
        IntMatrix m(diffs.size() + 1, static_cast<std::size_t>(dim));
        for (std::size_t r = 0; r < diffs.size(); ++r) {
            for (int c = 0; c < dim; ++c) {
                m(r, static_cast<std::size_t>(c)) = diffs[r][static_cast<std::size_t>(c)];
            }
        }
        for (int c = 0; c < dim; ++c) {
            m(diffs.size(), static_cast<std::size_t>(c)) = d[static_cast<std::size_t>(c)];
        }
        if (rank(m) == diffs.size() + 1) {
            diffs.push_back(std::move(d));
            basis.push_back(i);
        }
    }
    const std::size_t e = diffs.size();
    out.m_affine_dim = static_cast<int>(e);

    // Coordinates on which the projection is injective on the affine hull.
    std::vector<std::size_t> chart;
    {
        std::vector<std::size_t> cols;
        for (std::size_t c = 0; c < static_cast<std::size_t>(dim) && chart.size() < e; ++c) {
            cols.push_back(c);
            IntMatrix m(e, cols.size());
            for (std::size_t r = 0; r < e; ++r) {
                for (std::size_t j = 0; j < cols.size(); ++j) {
                    m(r, j) = diffs[r][cols[j]];
                }
            }
            if (rank(m) == cols.size()) {
                chart.push_back(c);
            } else {
                cols.pop_back();
            }
        }
    }

    if (e == 0) {
        out.m_vertices = {points[0]};
        out.m_volume = 0;
        return out;
    }
    std::vector<LatticePoint> proj(points.size(), LatticePoint(e));
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = 0; j < e; ++j) {
            proj[i][j] = points[i][chart[j]];
        }
    }
    if (e == 1) {
        auto [lo, hi] = std::minmax_element(proj.begin(), proj.end());
        out.m_vertices = {points[static_cast<std::size_t>(lo - proj.begin())],
                          points[static_cast<std::size_t>(hi - proj.begin())]};
        std::sort(out.m_vertices.begin(), out.m_vertices.end());
        if (dim == 1) {
            out.m_volume = rational((*hi)[0] - (*lo)[0]);
            out.m_facets = {{LatticePoint{integer(1)}, (*hi)[0]}, {LatticePoint{integer(-1)}, integer(-(*lo)[0])}};
        } else {
            out.m_volume = 0;
        }
        return out;
    }

    detail::BeneathBeyond bb(proj, e, basis);
    std::vector<const detail::HullFacet *> alive;
    for (const auto &f : bb.facets) {
        if (f.alive) {
            alive.push_back(&f);
        }
    }
    std::map<std::size_t, std::vector<const detail::HullFacet *>> incident;
    for (const auto *f : alive) {
        for (std::size_t v : f->verts) {
            incident[v].push_back(f);
        }
    }
    for (const auto &[v, fs] : incident) {
        IntMatrix normals(fs.size(), e);
        for (std::size_t r = 0; r < fs.size(); ++r) {
            for (std::size_t c = 0; c < e; ++c) {
                normals(r, c) = fs[r]->normal[c];
            }
        }
        if (rank(normals) == e) {
            out.m_vertices.push_back(points[v]);
        }
    }
    std::sort(out.m_vertices.begin(), out.m_vertices.end());

    if (e == static_cast<std::size_t>(dim)) {
        // Cone every boundary simplex from the scaled interior point.
        const auto scale = static_cast<long>(e + 1);
        integer total = 0;
        for (const auto *f : alive) {
            IntMatrix m(e, e);
            for (std::size_t r = 0; r < e; ++r) {
                for (std::size_t c = 0; c < e; ++c) {
                    m(r, c) = scale * proj[f->verts[r]][c] - bb.interior_scaled[c];
                }
            }
            total += abs(determinant(m));
            out.m_facets.emplace_back(f->normal, f->offset);
        }
        out.m_volume = fraction(total, ipow(integer(scale), static_cast<unsigned long>(e)) * factorial(e));
        out.m_volume.canonicalize();
    } else {
        out.m_volume = 0;
    }
    return out;
}

inline bool LatticePolytope::contains(const LatticePoint &x) const
{
    if (x.size() != static_cast<std::size_t>(m_dim)) {
        throw math_error("contains: point of wrong dimension");
    }
    if (is_full_dimensional()) {
        return std::all_of(m_facets.begin(), m_facets.end(),
                           [&](const auto &f) { return detail::dot(f.first, x) <= f.second; });
    }
    // Lower-dimensional: x is inside iff adding it changes neither the
    // affine dimension nor the vertex set.
    auto pts = m_vertices;
    pts.push_back(x);
    auto h = convex_hull(std::move(pts), m_dim);
    return h.m_affine_dim == m_affine_dim && h.m_vertices == m_vertices;
}

inline LatticePolytope minkowski_sum(const LatticePolytope &p, const LatticePolytope &q)
{
    if (p.dim() != q.dim()) {
        throw math_error("minkowski_sum: dimension mismatch");
    }
    std::vector<LatticePoint> sums;
    sums.reserve(p.vertices().size() * q.vertices().size());
    for (const auto &a : p.vertices()) {
        for (const auto &b : q.vertices()) {
            LatticePoint s(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) {
                s[i] = a[i] + b[i];
            }
            sums.push_back(std::move(s));
        }
    }
    return convex_hull(std::move(sums), p.dim());
}

// c * P for a nonnegative integer c.
inline LatticePolytope dilate(const LatticePolytope &p, long c)
{
    if (c < 0) {
        throw math_error("dilate: negative factor");
    }
    std::vector<LatticePoint> pts;
    for (const auto &v : p.vertices()) {
        LatticePoint w(v.size());
        for (std::size_t i = 0; i < v.size(); ++i) {
            w[i] = c * v[i];
        }
        pts.push_back(std::move(w));
    }
    return convex_hull(std::move(pts), p.dim());
}

// hull{0, e_1, ..., e_d}.
inline LatticePolytope standard_simplex(int dim)
{
    std::vector<LatticePoint> pts(1, LatticePoint(static_cast<std::size_t>(dim)));
    for (int i = 0; i < dim; ++i) {
        LatticePoint e(static_cast<std::size_t>(dim));
        e[static_cast<std::size_t>(i)] = 1;
        pts.push_back(std::move(e));
    }
    return convex_hull(std::move(pts), dim);
}

// Mixed volume normalized so that MV(simplex, ..., simplex) = 1, by
// inclusion-exclusion over Minkowski sums of subsets.
inline rational mixed_volume(const std::vector<LatticePolytope> &bodies)
{
    if (bodies.empty()) {
        throw math_error("mixed_volume: no bodies");
    }
    const int k = bodies.front().dim();
    if (k > max_polytope_dim) {
        throw unsupported_error("mixed_volume: dimension exceeds the cap of " + std::to_string(max_polytope_dim));
    }
    if (bodies.size() != static_cast<std::size_t>(k)) {
        throw math_error("mixed_volume: expected " + std::to_string(k) + " bodies, got "
                         + std::to_string(bodies.size()));
    }
    for (const auto &b : bodies) {
        if (b.dim() != k) {
            throw math_error("mixed_volume: dimension mismatch");
        }
    }
    const std::size_t n_masks = std::size_t{1} << k;
    std::vector<std::optional<LatticePolytope>> sums(n_masks);
    // Layer by subset size: each sum extends a smaller subset's sum by its
    // highest body.
    for (int size = 1; size <= k; ++size) {
        std::vector<std::size_t> layer;
        for (std::size_t mask = 1; mask < n_masks; ++mask) {
            if (__builtin_popcountll(mask) == size) {
                layer.push_back(mask);
            }
        }
        auto results = parallel_map(layer.size(), [&](std::size_t i) {
            std::size_t mask = layer[i];
            int top = 63 - __builtin_clzll(mask);
            std::size_t rest = mask & ~(std::size_t{1} << top);
            if (rest == 0) {
                return bodies[static_cast<std::size_t>(top)];
            }
            return minkowski_sum(*sums[rest], bodies[static_cast<std::size_t>(top)]);
        });
        for (std::size_t i = 0; i < layer.size(); ++i) {
            sums[layer[i]] = std::move(results[i]);
        }
    }
    rational mv = 0;
    for (std::size_t mask = 1; mask < n_masks; ++mask) {
        int size = __builtin_popcountll(mask);
        if ((k - size) % 2 == 0) {
            mv += sums[mask]->volume();
        } else {
            mv -= sums[mask]->volume();
        }
    }
    return mv;
}

// Mixed volume of a list given as (body, multiplicity) pairs. Only one
// Minkowski sum per multiplicity pattern is needed:
// MV = sum over c != 0 of (-1)^(k-|c|) prod C(m_i, c_i) vol(sum c_i K_i).
inline rational mixed_volume_repeated(const std::vector<std::pair<LatticePolytope, int>> &bodies)
{
    if (bodies.empty()) {
        throw math_error("mixed_volume: no bodies");
    }
    const int k = bodies.front().first.dim();
    if (k > max_polytope_dim) {
        throw unsupported_error("mixed_volume: dimension exceeds the cap of " + std::to_string(max_polytope_dim));
    }
    int total = 0;
    for (const auto &[b, m] : bodies) {
        if (b.dim() != k) {
            throw math_error("mixed_volume: dimension mismatch");
        }
        if (m < 0) {
            throw math_error("mixed_volume: negative multiplicity");
        }
        total += m;
    }
    if (total != k) {
        throw math_error("mixed_volume: expected " + std::to_string(k) + " bodies, got " + std::to_string(total));
    }
    std::vector<std::vector<int>> patterns{{}};
    for (const auto &[b, m] : bodies) {
        std::vector<std::vector<int>> next;
        for (const auto &pat : patterns) {
            for (int c = 0; c <= m; ++c) {
                auto q = pat;
                q.push_back(c);
                next.push_back(std::move(q));
            }
        }
        patterns = std::move(next);
    }
    auto terms = parallel_map(patterns.size(), [&](std::size_t idx) -> rational {
        const auto &pat = patterns[idx];
        int size = 0;
        integer weight = 1;
        std::optional<LatticePolytope> sum;
        for (std::size_t i = 0; i < pat.size(); ++i) {
            if (pat[i] == 0) {
                continue;
            }
            size += pat[i];
            weight *= binomial(static_cast<unsigned long>(bodies[i].second), static_cast<unsigned long>(pat[i]));
            auto scaled = dilate(bodies[i].first, pat[i]);
            sum = sum ? minkowski_sum(*sum, scaled) : scaled;
        }
        if (size == 0) {
            return 0;
        }
        rational v = sum->volume() * weight;
        return (k - size) % 2 == 0 ? v : rational(-v);
    });
    rational mv = 0;
    for (const auto &t : terms) {
        mv += t;
    }
    return mv;
}

} // namespace dyndeg

#endif
