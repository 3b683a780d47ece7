#pragma once

#include <cstdint>
#include <stdexcept>

#include "pairshift/kinematics.hpp"
#include "pairshift/spin_algebra.hpp"

namespace pairshift {

enum class Vertex { FullGammaMu, Gamma0Only };

/// How the exchange-term sandwich of M2 is taken: literally between the same
/// coupled states (PlainSandwich), or with the spin-exchange eigenvalue of the
/// coupled state applied to the exchange term (ExchangeOperator). Both
/// readings of the exchange spin pairing are kept; the figure report shows
/// both.
enum class ExchangeSpinTreatment { PlainSandwich, ExchangeOperator };

enum class Channels { Both, DirectOnly };

struct AmplitudeMode {
    Vertex vertex = Vertex::FullGammaMu;
    ExchangeSpinTreatment exchange = ExchangeSpinTreatment::PlainSandwich;
    Channels channels = Channels::Both;
};

/// Term slots of the tree-level two-spin operators, maskable one by one:
///   0  identity
///   1  2 q.p                                 (E+m)^-2, sign flips in M2
///   2  3i (qxp).(sigma1+sigma2)              (E+m)^-2, sign flips in M2;
///      coefficient i instead of 3i under Gamma0Only
///   3  q^2 (1 - sigma1.sigma2)               (E+m)^-2
///   4  (q.sigma1)(q.sigma2)                  (E+m)^-2
///   5  2 q.p (1 + sigma1.sigma2)             (E+m)^-2, sign flips in M2
///   6  -(p.sigma1)(q.sigma2)                 (E+m)^-2, sign flips in M2
///   7  -(q.sigma1)(p.sigma2)                 (E+m)^-2, sign flips in M2
///   8  p^2 (1 - sigma1.sigma2)               (E+m)^-2
///   9  (p.sigma1)(p.sigma2)                  (E+m)^-2
///   10 [q.p + i(qxp).sigma1][q.p + i(qxp).sigma2]   (E+m)^-4
/// Gamma0Only keeps only slots 0, 1, 2 and 10.
inline constexpr std::uint32_t all_terms_mask = 0x7FF;

inline constexpr std::uint32_t same_momentum_terms_mask = (1u << 4) | (1u << 9);
inline constexpr std::uint32_t cross_momentum_terms_mask = (1u << 6) | (1u << 7);

namespace detail {

/// Shared builder for M1 (sign = +1) and M2 (sign = -1); arbitrary momentum
/// directions so the solid-angle projection can reuse it.
inline TwoSpinOperator tree_operator(double m, Vec3 p, Vec3 q, double sign, Vertex vertex,
                                     std::uint32_t mask)
{
    const double k2p = norm_sq(p);
    const double k2q = norm_sq(q);
    const double e = std::sqrt(0.5 * (k2p + k2q) + m * m);
    const double c2 = 1.0 / ((e + m) * (e + m));
    const double c4 = c2 * c2;
    const double qp = dot(q, p);
    const Vec3 qxp = cross(q, p);
    const cplx i{0.0, 1.0};

    const auto on = [mask](int slot) { return ((mask >> slot) & 1u) != 0u; };

    TwoSpinOperator op;
    if (on(0)) op += pauli_term({PauliKind::Identity, {}, {}, 1.0});
    if (on(1)) op += pauli_term({PauliKind::Identity, {}, {}, 2.0 * sign * qp * c2});
    if (on(2)) {
        const cplx coeff = (vertex == Vertex::FullGammaMu) ? 3.0 * i * sign * c2 : i * sign * c2;
        op += pauli_term({PauliKind::SumSigma, qxp, {}, coeff});
    }
    if (vertex == Vertex::FullGammaMu) {
        if (on(3)) {
            op += pauli_term({PauliKind::Identity, {}, {}, k2q * c2});
            op += pauli_term({PauliKind::Sigma1DotSigma2, {}, {}, -k2q * c2});
        }
        if (on(4)) op += pauli_term({PauliKind::Product, q, q, c2});
        if (on(5)) {
            op += pauli_term({PauliKind::Identity, {}, {}, 2.0 * sign * qp * c2});
            op += pauli_term({PauliKind::Sigma1DotSigma2, {}, {}, 2.0 * sign * qp * c2});
        }
        if (on(6)) op += pauli_term({PauliKind::Product, p, q, -sign * c2});
        if (on(7)) op += pauli_term({PauliKind::Product, q, p, -sign * c2});
        if (on(8)) {
            op += pauli_term({PauliKind::Identity, {}, {}, k2p * c2});
            op += pauli_term({PauliKind::Sigma1DotSigma2, {}, {}, -k2p * c2});
        }
        if (on(9)) op += pauli_term({PauliKind::Product, p, p, c2});
    }
    if (on(10)) {
        // [q.p + i(qxp).s1][q.p + i(qxp).s2]
        //   = (q.p)^2 + i q.p (qxp).(s1+s2) - ((qxp).s1)((qxp).s2)
        op += pauli_term({PauliKind::Identity, {}, {}, qp * qp * c4});
        op += pauli_term({PauliKind::SumSigma, qxp, {}, i * qp * c4});
        op += pauli_term({PauliKind::Product, qxp, qxp, -c4});
    }
    return op;
}

}  // namespace detail

inline TwoSpinOperator m1_operator(const ComKinematics& kin, Vertex vertex,
                                   std::uint32_t term_mask = all_terms_mask)
{
    return detail::tree_operator(kin.m, kin.p_vec, kin.q_vec, +1.0, vertex, term_mask);
}

inline TwoSpinOperator m2_operator(const ComKinematics& kin, Vertex vertex,
                                   std::uint32_t term_mask = all_terms_mask)
{
    return detail::tree_operator(kin.m, kin.p_vec, kin.q_vec, -1.0, vertex, term_mask);
}

namespace detail {

inline cplx method_a_amplitude_impl(double m, Vec3 p, Vec3 q, double alpha,
                                    const AmplitudeMode& mode, int s, int m_s, int m_s_prime,
                                    std::uint32_t term_mask)
{
    if (std::abs(m_s) > s || std::abs(m_s_prime) > s)
        throw std::invalid_argument("method_a_amplitude: |m_s| must be <= s");
    const TwoSpinState ket = coupled_state(s, m_s);
    const TwoSpinState bra = coupled_state(s, m_s_prime);

    static const PhysicsConstants constants{};
    const double e2 = constants.e_squared();

    const cplx s1 =
        sandwich(bra, tree_operator(m, p, q, +1.0, mode.vertex, term_mask), ket);
    const double d_direct = screened_denominator(p, q, Channel::Direct, alpha);
    cplx result = s1 / d_direct;

    if (mode.channels == Channels::Both) {
        const cplx s2 =
            sandwich(bra, tree_operator(m, p, q, -1.0, mode.vertex, term_mask), ket);
        const double d_exchange = screened_denominator(p, q, Channel::Exchange, alpha);
        const double eta = (mode.exchange == ExchangeSpinTreatment::PlainSandwich)
                               ? 1.0
                               : (s == 0 ? -1.0 : 1.0);
        result -= eta * s2 / d_exchange;
    }
    return -e2 * result;
}

}  // namespace detail

/// Method A: antisymmetrized tree amplitude sandwiched between coupled
/// two-spin states, with screened photon denominators.
inline cplx method_a_amplitude(const ComKinematics& kin, double alpha, const AmplitudeMode& mode,
                               int s, int m_s, int m_s_prime,
                               std::uint32_t term_mask = all_terms_mask)
{
    return detail::method_a_amplitude_impl(kin.m, kin.p_vec, kin.q_vec, alpha, mode, s, m_s,
                                           m_s_prime, term_mask);
}

/// Same amplitude for arbitrary momentum directions on the elastic shell;
/// used by the double solid-angle projection.
inline cplx method_a_amplitude_vectors(double m, Vec3 p, Vec3 q, double alpha,
                                       const AmplitudeMode& mode, int s, int m_s, int m_s_prime,
                                       std::uint32_t term_mask = all_terms_mask)
{
    return detail::method_a_amplitude_impl(m, p, q, alpha, mode, s, m_s, m_s_prime, term_mask);
}

}  // namespace pairshift
