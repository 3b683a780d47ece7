#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <utility>

#include "pairshift/dirac_amplitude.hpp"
#include "pairshift/kinematics.hpp"
#include "pairshift/numerics.hpp"
#include "pairshift/operator_amplitude.hpp"

namespace pairshift {

/// M^l = (1/8 pi) int_{-1}^{1} dx P_l(x) amplitude(x)
template <class F>
cplx project_l(F&& amplitude, int l, const QuadratureRule& quad)
{
    if (l < 0) throw std::invalid_argument("project_l: l must be >= 0");
    cplx acc = 0.0;
    for (int i = 0; i < quad.order; ++i) {
        acc += quad.weights[i] * legendre_p(l, quad.nodes[i]) * amplitude(quad.nodes[i]);
    }
    return acc / (8.0 * pi);
}

struct ProjectionResult {
    cplx value{};
    int quad_order = 0;      ///< order of the final (accepted) rule
    bool converged = false;  ///< order-doubling changed the value by <= rel_tol
    double rel_change = 0.0; ///< last observed relative change under doubling
    double amp_scale = 0.0;  ///< max |amplitude| seen on the nodes
};

/// Order-doubling driver for project_l. Convergence means the relative change
/// under doubling is <= rel_tol; an absolute floor tied to the amplitude scale
/// keeps identically-vanishing projections from failing the relative test.
template <class F>
ProjectionResult project_l_adaptive(F&& amplitude, int l, int base_order = 64,
                                    double rel_tol = 1e-8, int max_order = 8192)
{
    if (base_order < 1) throw std::invalid_argument("project_l_adaptive: base_order must be >= 1");
    ProjectionResult res;
    double scale = 0.0;
    const auto tracked = [&](double x) {
        const cplx v = amplitude(x);
        scale = std::max(scale, std::abs(v));
        return v;
    };

    int order = base_order;
    cplx prev = project_l(tracked, l, gauss_legendre(order));
    while (2 * order <= max_order) {
        const cplx cur = project_l(tracked, l, gauss_legendre(2 * order));
        const double diff = std::abs(cur - prev);
        const double den = std::max(std::abs(cur), std::abs(prev));
        // absolute floor at the roundoff of an n-term weighted sum, so
        // projections that vanish to working precision register as
        // converged zeros instead of chasing noise
        const double floor = 1e-15 * (2.0 * order) * scale;
        res.rel_change = (den > 0.0) ? diff / den : 0.0;
        if (diff <= rel_tol * den + floor) {
            res.value = cur;
            res.quad_order = 2 * order;
            res.converged = true;
            res.amp_scale = scale;
            return res;
        }
        prev = cur;
        order *= 2;
    }
    res.value = prev;
    res.quad_order = order;
    res.converged = false;
    res.amp_scale = scale;
    return res;
}

/// General (J, l) projection with both solid angles integrated explicitly:
///   (1/(4 pi)^2) sum_{m_s, m_s'} C^{JM}_{l,M-m_s,s,m_s} C^{JM}_{l,M-m_s',s,m_s'}
///     II dOmega_p dOmega_q Y*_{l,M-m_s'}(q) Y_{l,M-m_s}(p) amplitude(p, q, m_s, m_s')
/// The spin argument of the Clebsch-Gordan coefficients is the total spin s,
/// so s = 0 collapses to the single-axis Legendre projection.
/// amplitude: (Vec3 p_hat, Vec3 q_hat, int m_s, int m_s') -> cplx.
template <class F>
cplx project_Jl(F&& amplitude, int J, int l, int s, int M, int n_theta, int n_phi)
{
    if (l < 0 || s < 0 || J < 0) throw std::invalid_argument("project_Jl: negative quantum number");
    if (J < std::abs(l - s) || J > l + s)
        throw std::invalid_argument("project_Jl: triangle rule (l, s, J) violated");
    if (std::abs(M) > J) throw std::invalid_argument("project_Jl: |M| must be <= J");
    if (n_theta < 1 || n_phi < 1) throw std::invalid_argument("project_Jl: quadrature order < 1");

    const QuadratureRule gauss = gauss_legendre(n_theta);
    const double w_phi = 2.0 * pi / n_phi;

    struct Node {
        Vec3 dir;
        double weight;
        double theta, phi;
    };
    std::vector<Node> nodes;
    nodes.reserve(static_cast<std::size_t>(n_theta) * n_phi);
    for (int i = 0; i < n_theta; ++i) {
        const double ct = gauss.nodes[i];
        const double st = std::sqrt((1.0 - ct) * (1.0 + ct));
        const double theta = std::acos(ct);
        for (int j = 0; j < n_phi; ++j) {
            const double phi = w_phi * j;
            nodes.push_back({{st * std::cos(phi), st * std::sin(phi), ct},
                             gauss.weights[i] * w_phi, theta, phi});
        }
    }

    cplx total = 0.0;
    for (int ms = -s; ms <= s; ++ms) {
        const int m = M - ms;
        if (std::abs(m) > l) continue;
        const double c1 = clebsch_gordan(l, m, s, ms, J, M);
        if (c1 == 0.0) continue;
        for (int msp = -s; msp <= s; ++msp) {
            const int mp = M - msp;
            if (std::abs(mp) > l) continue;
            const double c2 = clebsch_gordan(l, mp, s, msp, J, M);
            if (c2 == 0.0) continue;

            std::vector<cplx> yq(nodes.size());
            for (std::size_t j = 0; j < nodes.size(); ++j)
                yq[j] = std::conj(spherical_harmonic(l, mp, nodes[j].theta, nodes[j].phi));

            cplx acc = 0.0;
            for (const auto& np : nodes) {
                const cplx yp = spherical_harmonic(l, m, np.theta, np.phi);
                cplx inner = 0.0;
                for (std::size_t j = 0; j < nodes.size(); ++j)
                    inner += nodes[j].weight * yq[j] * amplitude(np.dir, nodes[j].dir, ms, msp);
                acc += np.weight * yp * inner;
            }
            total += c1 * c2 * acc;
        }
    }
    return total / (16.0 * pi * pi);
}

/// Doubles both angular orders until the result stabilizes, mirroring the
/// project_l convergence protocol.
template <class F>
ProjectionResult project_Jl_adaptive(F&& amplitude, int J, int l, int s, int M,
                                     int base_n_theta = 12, int base_n_phi = 12,
                                     double rel_tol = 1e-8, int max_doublings = 3)
{
    ProjectionResult res;
    int nt = base_n_theta, np = base_n_phi;
    cplx prev = project_Jl(amplitude, J, l, s, M, nt, np);
    for (int step = 0; step < max_doublings; ++step) {
        const cplx cur = project_Jl(amplitude, J, l, s, M, 2 * nt, 2 * np);
        const double diff = std::abs(cur - prev);
        const double den = std::max(std::abs(cur), std::abs(prev));
        res.rel_change = (den > 0.0) ? diff / den : 0.0;
        res.quad_order = 2 * nt;
        if (diff <= rel_tol * den + 1e-14) {
            res.value = cur;
            res.converged = true;
            return res;
        }
        prev = cur;
        nt *= 2;
        np *= 2;
    }
    res.value = prev;
    res.converged = false;
    return res;
}

enum class Method { A, B };

inline char wave_label(int l)
{
    constexpr const char* labels = "SPDF";
    if (l < 0 || l > 3) throw std::invalid_argument("wave_label: l must be in 0..3");
    return labels[l];
}

/// Spatial parity (-1)^l of the wave: +1 for S, D and -1 for P, F.
inline int wave_parity(int l)
{
    if (l < 0) throw std::invalid_argument("wave_parity: l must be >= 0");
    return (l % 2 == 0) ? +1 : -1;
}

/// One phase-shift evaluation at a grid point, plus its diagnostics.
/// Accepted records have im_residual < 1e-8 and a passed order-doubling test;
/// anything else carries a non-empty error annotation.
struct PhaseShiftRecord {
    Method method = Method::A;
    AmplitudeMode mode{};
    std::uint32_t term_mask = all_terms_mask;
    int l = 0;
    int J = 0;
    double k = 0.0;
    double alpha = 0.0;
    double delta = 0.0;
    double im_residual = 0.0;
    int quad_order = 0;
    std::string error;  ///< empty when the record is good

    bool ok() const { return error.empty(); }
};

/// Born phase shift delta_l^J = -(1/2) E k Re M^{Jl}(k) with E the total
/// two-electron energy. The projection order starts at base_quad_order and is
/// doubled until the convergence test passes.
inline PhaseShiftRecord phase_shift(Method method, const AmplitudeMode& mode, int l, int J,
                                    double m, double k, double alpha, int base_quad_order = 64,
                                    std::uint32_t term_mask = all_terms_mask)
{
    if (l < 0 || l > 3) throw std::invalid_argument("phase_shift: l must be in 0..3");
    if (J != l) throw std::invalid_argument("phase_shift: spin-zero channel requires J = l");
    if (!(alpha > 0.0))
        throw std::invalid_argument(
            "phase_shift: alpha must be > 0 (forward singularity at the quadrature endpoints)");

    const auto amplitude = [&](double x) -> cplx {
        const ComKinematics kin = build_kinematics(m, k, x);
        if (method == Method::A) {
            return method_a_amplitude(kin, alpha, mode, 0, 0, 0, term_mask);
        }
        return method_b_singlet_amplitude(kin, alpha, mode.vertex, mode.channels);
    };

    PhaseShiftRecord rec;
    rec.method = method;
    rec.mode = mode;
    rec.term_mask = term_mask;
    rec.l = l;
    rec.J = J;
    rec.k = k;
    rec.alpha = alpha;

    const ProjectionResult proj = project_l_adaptive(amplitude, l, base_quad_order);
    rec.quad_order = proj.quad_order;
    rec.delta = -0.5 * 2.0 * std::sqrt(k * k + m * m) * k * proj.value.real();
    rec.im_residual =
        (proj.amp_scale > 0.0) ? std::abs(proj.value.imag()) * 4.0 * pi / proj.amp_scale : 0.0;
    if (!proj.converged) {
        rec.error = "projection not converged at order " + std::to_string(proj.quad_order) +
                    " (rel change " + std::to_string(proj.rel_change) + ")";
    } else if (rec.im_residual >= 1e-8) {
        rec.error = "imaginary residual " + std::to_string(rec.im_residual) + " exceeds 1e-8";
    }
    return rec;
}

/// First-Born phase shift for V(r) = A e^{-alpha r}/r:
///   delta_l = -(mu A / k) Q_l(1 + alpha^2/(2 k^2)).
/// Independent closed-form reference for the nonrelativistic screened-Coulomb
/// limit of the amplitude machinery.
inline double yukawa_born_oracle(int l, double k, double alpha, double coupling, double reduced_mass)
{
    if (!(k > 0.0)) throw std::invalid_argument("yukawa_born_oracle: k must be > 0");
    if (!(alpha > 0.0)) throw std::invalid_argument("yukawa_born_oracle: alpha must be > 0");
    return -(reduced_mass * coupling / k) * legendre_q(l, 1.0 + alpha * alpha / (2.0 * k * k));
}

/// V = -(197)^3 (d delta/d k) / (2 M), the order-of-magnitude bookkeeping
/// with M in eV and the conventional 197^3 conversion factor kept verbatim.
inline double potential_estimate(double ddelta_dk, double electron_mass_ev)
{
    if (!(electron_mass_ev > 0.0))
        throw std::invalid_argument("potential_estimate: mass must be > 0");
    return -(197.0 * 197.0 * 197.0) * ddelta_dk / (2.0 * electron_mass_ev);
}

struct SlopeFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_linearity_dev = 0.0;  ///< max residual relative to the data range
    bool linearity_warning = false;  ///< deviation from linearity exceeds 10%
};

/// Least-squares line through (k, delta) over the fit window.
inline SlopeFit fit_ddelta_dk(std::span<const double> k, std::span<const double> delta)
{
    if (k.size() != delta.size() || k.size() < 2)
        throw std::invalid_argument("fit_ddelta_dk: need at least two matching samples");
    const double n = static_cast<double>(k.size());
    double sk = 0.0, sd = 0.0, skk = 0.0, skd = 0.0;
    for (std::size_t i = 0; i < k.size(); ++i) {
        sk += k[i];
        sd += delta[i];
        skk += k[i] * k[i];
        skd += k[i] * delta[i];
    }
    SlopeFit fit;
    const double det = n * skk - sk * sk;
    fit.slope = (n * skd - sk * sd) / det;
    fit.intercept = (sd - fit.slope * sk) / n;

    double scale = 0.0;
    for (std::size_t i = 0; i < delta.size(); ++i) scale = std::max(scale, std::abs(delta[i]));
    if (scale > 0.0) {
        for (std::size_t i = 0; i < k.size(); ++i) {
            const double resid = std::abs(delta[i] - (fit.intercept + fit.slope * k[i]));
            fit.max_linearity_dev = std::max(fit.max_linearity_dev, resid / scale);
        }
    }
    fit.linearity_warning = fit.max_linearity_dev > 0.10;
    return fit;
}

}  // namespace pairshift
