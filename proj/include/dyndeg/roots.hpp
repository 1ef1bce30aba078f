#ifndef DYNDEG_ROOTS_HPP
#define DYNDEG_ROOTS_HPP

#include <algorithm>
#include <cstddef>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <boost/multiprecision/cpp_complex.hpp>

#include <dyndeg/core.hpp>
#include <dyndeg/upoly.hpp>

namespace dyndeg
{

// Root moduli of integer polynomials, in extended precision. Multiple roots
// are separated out exactly by square-free decomposition first, so the
// simultaneous iteration only ever sees simple roots.

using real50 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<50>>;
using real100 = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<100>>;

class root_finding_error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

namespace detail
{

template <unsigned Digits>
using mp_real = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<Digits>>;
template <unsigned Digits>
using mp_complex = boost::multiprecision::number<boost::multiprecision::cpp_complex_backend<Digits>>;

// Aberth-Ehrlich iteration on a square-free polynomial of degree >= 1.
// Returns false when the iteration fails to converge.
template <unsigned Digits>
bool aberth_roots(const UPoly &p, std::vector<mp_complex<Digits>> &roots, int max_iter = 2000)
{
    using R = mp_real<Digits>;
    using C = mp_complex<Digits>;
    const int n = p.degree();
    std::vector<C> coeff(static_cast<std::size_t>(n + 1));
    for (int i = 0; i <= n; ++i) {
        coeff[static_cast<std::size_t>(i)] = C(R(p[static_cast<std::size_t>(i)].get_str()));
    }
    if (n == 1) {
        roots = {-coeff[0] / coeff[1]};
        return true;
    }
    // Cauchy bound on root moduli.
    R lead = abs(R(p.leading().get_str()));
    R bound = 0;
    for (int i = 0; i < n; ++i) {
        bound = std::max(bound, R(abs(R(p[static_cast<std::size_t>(i)].get_str())) / lead));
    }
    bound += 1;
    const R pi = boost::math::constants::pi<R>();
    roots.assign(static_cast<std::size_t>(n), C());
    for (int j = 0; j < n; ++j) {
        R ang = 2 * pi * j / n + R(0.4);
        roots[static_cast<std::size_t>(j)] = C(bound * R(0.5) * cos(ang), bound * R(0.5) * sin(ang));
    }
    const R tol = pow(R(10), -static_cast<int>(Digits) + 8);
    for (int it = 0; it < max_iter; ++it) {
        bool done = true;
        for (int i = 0; i < n; ++i) {
            C z = roots[static_cast<std::size_t>(i)];
            C val = coeff[static_cast<std::size_t>(n)];
            C der = 0;
            for (int c = n - 1; c >= 0; --c) {
                der = der * z + val;
                val = val * z + coeff[static_cast<std::size_t>(c)];
            }
            if (abs(val) == 0) {
                continue;
            }
            C ratio = val / der;
            C sum = 0;
            for (int j = 0; j < n; ++j) {
                if (j != i) {
                    C diff = z - roots[static_cast<std::size_t>(j)];
                    if (abs(diff) == 0) {
                        diff = C(tol, tol);
                    }
                    sum += C(1) / diff;
                }
            }
            C w = ratio / (C(1) - ratio * sum);
            roots[static_cast<std::size_t>(i)] = z - w;
            if (abs(w) > tol * (1 + abs(z))) {
                done = false;
            }
        }
        if (done) {
            return true;
        }
    }
    return false;
}

template <unsigned Digits>
std::vector<mp_real<Digits>> root_moduli_at(const UPoly &p)
{
    std::vector<mp_real<Digits>> out;
    for (const auto &[factor, mult] : squarefree_decomposition(p)) {
        std::vector<mp_complex<Digits>> roots;
        if (!aberth_roots<Digits>(factor, roots)) {
            throw root_finding_error("root iteration did not converge at " + std::to_string(Digits) + " digits");
        }
        for (const auto &z : roots) {
            for (int m = 0; m < mult; ++m) {
                out.push_back(abs(z));
            }
        }
    }
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

} // namespace detail

// Moduli of the complex roots of p (with multiplicity), in descending order.
// Tries 50 digits, then 100, then fails.
inline std::vector<real50> root_moduli(const UPoly &p)
{
    if (p.degree() < 1) {
        return {};
    }
    try {
        return detail::root_moduli_at<50>(p);
    } catch (const root_finding_error &) {
    }
    auto hi = detail::root_moduli_at<100>(p);
    std::vector<real50> out;
    out.reserve(hi.size());
    for (const auto &m : hi) {
        out.emplace_back(m);
    }
    return out;
}

} // namespace dyndeg

#endif
