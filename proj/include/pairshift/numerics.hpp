#pragma once

#include <algorithm>
#include <climits>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace pairshift {

using cplx = std::complex<double>;

inline constexpr double pi = 3.14159265358979323846;

/// Gauss-Legendre rule on [-1, 1]. Nodes are strictly increasing and exactly
/// symmetric about 0; weights sum to 2 up to roundoff.
struct QuadratureRule {
    int order = 0;
    std::vector<double> nodes;
    std::vector<double> weights;
};

namespace detail {

/// Legendre P_n(x) and its derivative by forward recursion.
inline void legendre_pair(int n, double x, double& p, double& dp)
{
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        p = p0;
        dp = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    p = p1;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
}

inline const double* factorial_table()
{
    static const std::vector<double> table = [] {
        std::vector<double> t(171);
        t[0] = 1.0;
        for (std::size_t i = 1; i < t.size(); ++i) t[i] = t[i - 1] * static_cast<double>(i);
        return t;
    }();
    return table.data();
}

inline double factorial(int n)
{
    if (n < 0 || n > 170) throw std::invalid_argument("factorial: argument out of range");
    return factorial_table()[n];
}

}  // namespace detail

/// Newton iteration on the Chebyshev initial guesses; one half of the nodes is
/// computed and mirrored so the rule is symmetric to the last bit.
inline QuadratureRule gauss_legendre(int order)
{
    if (order < 1) throw std::invalid_argument("gauss_legendre: order must be >= 1");
    QuadratureRule rule;
    rule.order = order;
    rule.nodes.assign(order, 0.0);
    rule.weights.assign(order, 0.0);

    const int half = (order + 1) / 2;
    for (int i = 0; i < half; ++i) {
        double x = std::cos(pi * (i + 0.75) / (order + 0.5));
        double p = 0.0, dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            detail::legendre_pair(order, x, p, dp);
            const double dx = p / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        detail::legendre_pair(order, x, p, dp);
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.nodes[i] = -std::abs(x);
        rule.nodes[order - 1 - i] = std::abs(x);
        rule.weights[i] = w;
        rule.weights[order - 1 - i] = w;
    }
    if (order % 2 == 1) rule.nodes[order / 2] = 0.0;
    return rule;
}

/// Legendre polynomial P_l(x) on [-1, 1].
inline double legendre_p(int l, double x)
{
    if (l < 0) throw std::invalid_argument("legendre_p: l must be >= 0");
    if (std::abs(x) > 1.0) throw std::invalid_argument("legendre_p: |x| must be <= 1");
    double p0 = 1.0, p1 = x;
    if (l == 0) return p0;
    for (int k = 2; k <= l; ++k) {
        const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    return p1;
}

/// Legendre function of the second kind Q_l(z) for z > 1.
/// Near the branch point the upward recursion from
/// Q_0 = (1/2) ln((z+1)/(z-1)) is stable; for large z the recursion cancels
/// catastrophically, so the asymptotic hypergeometric series
///   Q_l = l!/(2l+1)!! z^-(l+1) 2F1((l+1)/2, (l+2)/2; l+3/2; z^-2)
/// takes over.
inline double legendre_q(int l, double z)
{
    if (l < 0) throw std::invalid_argument("legendre_q: l must be >= 0");
    if (!(z > 1.0)) throw std::invalid_argument("legendre_q: z must be > 1");
    if (z < 2.0) {
        const double q0 = 0.5 * std::log1p(2.0 / (z - 1.0));
        if (l == 0) return q0;
        double qm = q0, q = z * q0 - 1.0;
        for (int k = 2; k <= l; ++k) {
            const double qn = ((2 * k - 1) * z * q - (k - 1) * qm) / k;
            qm = q;
            q = qn;
        }
        return q;
    }
    double prefactor = 1.0;
    for (int k = 1; k <= l; ++k) prefactor *= static_cast<double>(k) / (2 * k + 1);
    const double w = 1.0 / (z * z);
    const double a = 0.5 * (l + 1), b = 0.5 * (l + 2), c = l + 1.5;
    double term = 1.0, sum = 1.0;
    for (int n = 0; n < 200; ++n) {
        term *= (a + n) * (b + n) / ((c + n) * (n + 1)) * w;
        sum += term;
        if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    }
    return prefactor * std::pow(z, -(l + 1)) * sum;
}

namespace detail {

/// Associated Legendre P_l^m(x) for m >= 0, Condon-Shortley phase included.
inline double assoc_legendre(int l, int m, double x)
{
    double pmm = 1.0;
    if (m > 0) {
        const double s = std::sqrt((1.0 - x) * (1.0 + x));
        double f = 1.0;
        for (int i = 0; i < m; ++i) {
            pmm *= -f * s;
            f += 2.0;
        }
    }
    if (l == m) return pmm;
    double pm1 = x * (2 * m + 1) * pmm;
    if (l == m + 1) return pm1;
    for (int k = m + 2; k <= l; ++k) {
        const double pk = ((2 * k - 1) * x * pm1 - (k + m - 1) * pmm) / (k - m);
        pmm = pm1;
        pm1 = pk;
    }
    return pm1;
}

}  // namespace detail

/// Orthonormal spherical harmonic Y_lm(theta, phi), Condon-Shortley convention.
inline cplx spherical_harmonic(int l, int m, double theta, double phi)
{
    if (l < 0) throw std::invalid_argument("spherical_harmonic: l must be >= 0");
    if (std::abs(m) > l) throw std::invalid_argument("spherical_harmonic: |m| must be <= l");
    const int am = std::abs(m);
    const double pref = std::sqrt((2 * l + 1) / (4.0 * pi) * detail::factorial(l - am) /
                                  detail::factorial(l + am));
    const double plm = detail::assoc_legendre(l, am, std::cos(theta));
    cplx y = pref * plm * cplx{std::cos(am * phi), std::sin(am * phi)};
    if (m < 0) {
        y = std::conj(y);
        if (am % 2 == 1) y = -y;
    }
    return y;
}

namespace detail {

// Half-integers are handled as doubled integers. Returns INT_MIN for values
// that are not half-integral.
inline int doubled(double j)
{
    const double t = 2.0 * j;
    const double r = std::round(t);
    if (std::abs(t - r) > 1e-9) return INT_MIN;
    return static_cast<int>(r);
}

inline double fact2(int two_n)
{
    // factorial of a doubled even integer
    return factorial(two_n / 2);
}

}  // namespace detail

/// Clebsch-Gordan coefficient <j1 m1 j2 m2 | J M> in the Condon-Shortley
/// convention, evaluated with the Racah formula. Half-integer arguments are
/// accepted; anything else is rejected. Selection-rule failures give 0.
inline double clebsch_gordan(double j1, double m1, double j2, double m2, double J, double M)
{
    const int tj1 = detail::doubled(j1), tm1 = detail::doubled(m1);
    const int tj2 = detail::doubled(j2), tm2 = detail::doubled(m2);
    const int tJ = detail::doubled(J), tM = detail::doubled(M);
    if (tj1 == INT_MIN || tm1 == INT_MIN || tj2 == INT_MIN || tm2 == INT_MIN || tJ == INT_MIN ||
        tM == INT_MIN)
        throw std::invalid_argument("clebsch_gordan: arguments must be half-integers");
    if (tj1 < 0 || tj2 < 0 || tJ < 0)
        throw std::invalid_argument("clebsch_gordan: angular momenta must be >= 0");

    // m must match the integer/half-integer character of j
    if ((tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tJ + tM) % 2 != 0) return 0.0;
    if (tm1 + tm2 != tM) return 0.0;
    if (std::abs(tm1) > tj1 || std::abs(tm2) > tj2 || std::abs(tM) > tJ) return 0.0;
    if (tJ < std::abs(tj1 - tj2) || tJ > tj1 + tj2) return 0.0;
    if ((tj1 + tj2 + tJ) % 2 != 0) return 0.0;

    using detail::fact2;
    double pref = (tJ + 1) * fact2(tj1 + tj2 - tJ) * fact2(tj1 - tj2 + tJ) *
                  fact2(-tj1 + tj2 + tJ) / fact2(tj1 + tj2 + tJ + 2);
    pref *= fact2(tj1 + tm1) * fact2(tj1 - tm1) * fact2(tj2 + tm2) * fact2(tj2 - tm2) *
            fact2(tJ + tM) * fact2(tJ - tM);

    int kmin = 0;
    kmin = std::max(kmin, (tj2 - tJ - tm1) / 2);
    kmin = std::max(kmin, (tj1 + tm2 - tJ) / 2);
    const int kmax =
        std::min({(tj1 + tj2 - tJ) / 2, (tj1 - tm1) / 2, (tj2 + tm2) / 2});

    double sum = 0.0;
    for (int k = kmin; k <= kmax; ++k) {
        const double den = detail::factorial(k) * fact2(tj1 + tj2 - tJ - 2 * k) *
                           fact2(tj1 - tm1 - 2 * k) * fact2(tj2 + tm2 - 2 * k) *
                           fact2(tJ - tj2 + tm1 + 2 * k) * fact2(tJ - tj1 - tm2 + 2 * k);
        sum += (k % 2 == 0 ? 1.0 : -1.0) / den;
    }
    return std::sqrt(pref) * sum;
}

}  // namespace pairshift
