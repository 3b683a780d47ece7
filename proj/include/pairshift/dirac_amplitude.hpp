#pragma once

#include <array>
#include <stdexcept>

#include "pairshift/kinematics.hpp"
#include "pairshift/operator_amplitude.hpp"

namespace pairshift {

/// Spin projection along +z in the CoM frame (not helicity); Down is the
/// second Pauli eigenstate regardless of the particle's momentum direction.
enum class Spin { Up, Down };

/// 4-component spinor u(p, lambda) = sqrt((E+m)/2E) (chi, sigma.p/(E+m) chi).
struct DiracSpinor {
    std::array<cplx, 4> c{};
};

/// gamma^0..gamma^3 in the Dirac (standard) representation, g = diag(+,-,-,-).
struct GammaSet {
    std::array<std::array<cplx, 16>, 4> g{};  // row-major 4x4 each

    static const GammaSet& dirac()
    {
        static const GammaSet set = [] {
            GammaSet s;
            const cplx i{0.0, 1.0};
            auto& g0 = s.g[0];
            g0[0] = g0[5] = 1.0;
            g0[10] = g0[15] = -1.0;
            // gamma^j = [[0, sigma_j], [-sigma_j, 0]]
            auto put = [&s](int mu, int r, int c, cplx v) { s.g[mu][4 * r + c] = v; };
            put(1, 0, 3, 1.0);  put(1, 1, 2, 1.0);
            put(1, 2, 1, -1.0); put(1, 3, 0, -1.0);
            put(2, 0, 3, -i);   put(2, 1, 2, i);
            put(2, 2, 1, i);    put(2, 3, 0, -i);
            put(3, 0, 2, 1.0);  put(3, 1, 3, -1.0);
            put(3, 2, 0, -1.0); put(3, 3, 1, 1.0);
            return s;
        }();
        return set;
    }
};

inline DiracSpinor dirac_spinor(Vec3 p, Spin lambda, double m)
{
    if (!(m > 0.0)) throw std::invalid_argument("dirac_spinor: m must be > 0");
    const double e = std::sqrt(norm_sq(p) + m * m);
    const double n = std::sqrt((e + m) / (2.0 * e));
    const double r = 1.0 / (e + m);
    DiracSpinor u;
    if (lambda == Spin::Up) {
        u.c = {n, 0.0,
               n * r * p.z, n * r * cplx{p.x, p.y}};
    } else {
        u.c = {0.0, n,
               n * r * cplx{p.x, -p.y}, -n * r * p.z};
    }
    return u;
}

/// ubar(a) gamma^mu u(b)
inline cplx bilinear(const DiracSpinor& a, int mu, const DiracSpinor& b)
{
    const auto& g0 = GammaSet::dirac().g[0];
    const auto& gm = GammaSet::dirac().g[mu];
    // ubar = a^dagger gamma^0; with diagonal gamma^0 this is a sign flip on
    // the lower components.
    cplx r = 0.0;
    for (int i = 0; i < 4; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < 4; ++j) row += gm[4 * i + j] * b.c[j];
        r += std::conj(a.c[i]) * g0[4 * i + i] * row;
    }
    return r;
}

namespace detail {

inline std::array<DiracSpinor, 4> external_spinors(const ComKinematics& kin,
                                                   const std::array<Spin, 4>& lambdas)
{
    return {dirac_spinor(kin.p_vec, lambdas[0], kin.m),
            dirac_spinor(-kin.p_vec, lambdas[1], kin.m),
            dirac_spinor(kin.q_vec, lambdas[2], kin.m),
            dirac_spinor(-kin.q_vec, lambdas[3], kin.m)};
}

}  // namespace detail

/// Metric-contracted bilinear product for one pairing of Eq-style tree
/// amplitudes: sum_mu g_mumu (ubar3 gamma^mu u_a)(ubar4 gamma^mu u_b) with
/// (a, b) = (1, 2) for Direct and (2, 1) for Exchange.
inline cplx bilinear_contraction(const ComKinematics& kin, const std::array<Spin, 4>& lambdas,
                                 Vertex vertex, Channel pairing)
{
    const auto u = detail::external_spinors(kin, lambdas);
    const int a = (pairing == Channel::Direct) ? 0 : 1;
    const int b = 1 - a;
    const int mu_max = (vertex == Vertex::Gamma0Only) ? 0 : 3;
    cplx r = 0.0;
    for (int mu = 0; mu <= mu_max; ++mu) {
        const double sign = (mu == 0) ? 1.0 : -1.0;
        r += sign * bilinear(u[2], mu, u[a]) * bilinear(u[3], mu, u[b]);
    }
    return r;
}

/// Method B matrix element for fixed z-axis polarizations (lambda1..lambda4),
/// screened denominators included.
inline cplx polarized_element(const ComKinematics& kin, const std::array<Spin, 4>& lambdas,
                              double alpha, Vertex vertex, Channels channels = Channels::Both)
{
    static const PhysicsConstants constants{};
    const double e2 = constants.e_squared();
    cplx r = bilinear_contraction(kin, lambdas, vertex, Channel::Direct) /
             screened_denominator(kin, Channel::Direct, alpha);
    if (channels == Channels::Both) {
        r -= bilinear_contraction(kin, lambdas, vertex, Channel::Exchange) /
             screened_denominator(kin, Channel::Exchange, alpha);
    }
    return -e2 * r;
}

/// <-+|M|-+> - <+-|M|-+>, the two-term form of the polarized singlet
/// matrix element. Particle 1 carries the left label.
inline cplx method_b_singlet_amplitude(const ComKinematics& kin, double alpha, Vertex vertex,
                                       Channels channels = Channels::Both)
{
    const cplx keep =
        polarized_element(kin, {Spin::Down, Spin::Up, Spin::Down, Spin::Up}, alpha, vertex, channels);
    const cplx flip =
        polarized_element(kin, {Spin::Down, Spin::Up, Spin::Up, Spin::Down}, alpha, vertex, channels);
    return keep - flip;
}

/// Full four-sandwich expansion (1/2)(<+-| - <-+|) M (|+-> - |-+>). The
/// two-term form above relies on symmetry relations among these; this path
/// exists to verify them numerically rather than assume them.
inline cplx method_b_singlet_amplitude_4term(const ComKinematics& kin, double alpha, Vertex vertex,
                                             Channels channels = Channels::Both)
{
    const auto el = [&](Spin l1, Spin l2, Spin l3, Spin l4) {
        return polarized_element(kin, {l1, l2, l3, l4}, alpha, vertex, channels);
    };
    return 0.5 * (el(Spin::Up, Spin::Down, Spin::Up, Spin::Down) -
                  el(Spin::Down, Spin::Up, Spin::Up, Spin::Down) -
                  el(Spin::Up, Spin::Down, Spin::Down, Spin::Up) +
                  el(Spin::Down, Spin::Up, Spin::Down, Spin::Up));
}

}  // namespace pairshift
