#pragma once

#include <array>
#include <complex>
#include <stdexcept>

#include "pairshift/numerics.hpp"
#include "pairshift/vec3.hpp"

namespace pairshift {

/// Two-electron spin state in the product basis (|++>, |+->, |-+>, |-->),
/// particle 1 on the left tensor factor.
struct TwoSpinState {
    std::array<cplx, 4> amp{};

    double norm() const
    {
        double n = 0.0;
        for (const auto& a : amp) n += std::norm(a);
        return std::sqrt(n);
    }
};

/// 4x4 complex operator on the two-electron spin space, same basis ordering
/// as TwoSpinState.
struct TwoSpinOperator {
    std::array<cplx, 16> m{};

    cplx& at(int r, int c) { return m[4 * r + c]; }
    const cplx& at(int r, int c) const { return m[4 * r + c]; }

    TwoSpinOperator& operator+=(const TwoSpinOperator& o)
    {
        for (int i = 0; i < 16; ++i) m[i] += o.m[i];
        return *this;
    }

    TwoSpinOperator adjoint() const
    {
        TwoSpinOperator r;
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) r.at(i, j) = std::conj(at(j, i));
        return r;
    }
};

inline TwoSpinOperator operator+(TwoSpinOperator a, const TwoSpinOperator& b) { return a += b; }

inline TwoSpinOperator operator*(cplx s, const TwoSpinOperator& o)
{
    TwoSpinOperator r;
    for (int i = 0; i < 16; ++i) r.m[i] = s * o.m[i];
    return r;
}

namespace detail {

using Mat2 = std::array<cplx, 4>;  // row-major 2x2

inline constexpr Mat2 kId2{1.0, 0.0, 0.0, 1.0};
inline constexpr Mat2 kSigmaX{0.0, 1.0, 1.0, 0.0};
inline constexpr Mat2 kSigmaY{0.0, cplx{0.0, -1.0}, cplx{0.0, 1.0}, 0.0};
inline constexpr Mat2 kSigmaZ{1.0, 0.0, 0.0, -1.0};

inline Mat2 sigma_dot(Vec3 v)
{
    Mat2 r{};
    for (int i = 0; i < 4; ++i) r[i] = v.x * kSigmaX[i] + v.y * kSigmaY[i] + v.z * kSigmaZ[i];
    return r;
}

inline TwoSpinOperator kron(const Mat2& a, const Mat2& b)
{
    TwoSpinOperator r;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) r.at(2 * i + k, 2 * j + l) = a[2 * i + j] * b[2 * k + l];
    return r;
}

}  // namespace detail

enum class PauliKind {
    Identity,        ///< 1 x 1
    DotSigma1,       ///< (a . sigma_1)
    DotSigma2,       ///< (a . sigma_2)
    Sigma1DotSigma2, ///< sigma_1 . sigma_2
    Product,         ///< (a . sigma_1)(b . sigma_2)
    SumSigma,        ///< a . (sigma_1 + sigma_2)
};

struct PauliTerm {
    PauliKind kind = PauliKind::Identity;
    Vec3 a{};  // direction for DotSigma1/DotSigma2/SumSigma and the sigma_1 slot of Product
    Vec3 b{};  // sigma_2 slot of Product
    cplx coefficient{1.0, 0.0};
};

/// Builds coefficient * (tensor operator) as an explicit 4x4 matrix.
inline TwoSpinOperator pauli_term(const PauliTerm& t)
{
    using namespace detail;
    TwoSpinOperator r;
    switch (t.kind) {
        case PauliKind::Identity:
            r = kron(kId2, kId2);
            break;
        case PauliKind::DotSigma1:
            r = kron(sigma_dot(t.a), kId2);
            break;
        case PauliKind::DotSigma2:
            r = kron(kId2, sigma_dot(t.a));
            break;
        case PauliKind::Sigma1DotSigma2:
            r = kron(kSigmaX, kSigmaX) + kron(kSigmaY, kSigmaY) + kron(kSigmaZ, kSigmaZ);
            break;
        case PauliKind::Product:
            r = kron(sigma_dot(t.a), sigma_dot(t.b));
            break;
        case PauliKind::SumSigma:
            r = kron(sigma_dot(t.a), kId2) + kron(kId2, sigma_dot(t.a));
            break;
    }
    return t.coefficient * r;
}

/// Closed-form singlet expectation of a single term; alternate evaluation path
/// cross-checked against the matrix path in tests. The matrix path is the
/// authoritative one in the amplitude code.
inline cplx closed_form_singlet_expectation(const PauliTerm& t)
{
    switch (t.kind) {
        case PauliKind::Identity: return t.coefficient;
        case PauliKind::DotSigma1:
        case PauliKind::DotSigma2:
        case PauliKind::SumSigma: return 0.0;
        case PauliKind::Sigma1DotSigma2: return -3.0 * t.coefficient;
        case PauliKind::Product: return -dot(t.a, t.b) * t.coefficient;
    }
    return 0.0;
}

/// Normalized coupled basis state |s m_s>; singlet is (0, 1/sqrt2, -1/sqrt2, 0).
inline TwoSpinState coupled_state(int s, int m_s)
{
    if (s != 0 && s != 1) throw std::invalid_argument("coupled_state: s must be 0 or 1");
    if (std::abs(m_s) > s) throw std::invalid_argument("coupled_state: |m_s| must be <= s");
    const double r2 = 1.0 / std::sqrt(2.0);
    TwoSpinState st;
    if (s == 0) {
        st.amp = {0.0, r2, -r2, 0.0};
    } else if (m_s == 1) {
        st.amp = {1.0, 0.0, 0.0, 0.0};
    } else if (m_s == 0) {
        st.amp = {0.0, r2, r2, 0.0};
    } else {
        st.amp = {0.0, 0.0, 0.0, 1.0};
    }
    return st;
}

/// bra^dagger . op . ket
inline cplx sandwich(const TwoSpinState& bra, const TwoSpinOperator& op, const TwoSpinState& ket)
{
    cplx r = 0.0;
    for (int i = 0; i < 4; ++i) {
        cplx row = 0.0;
        for (int j = 0; j < 4; ++j) row += op.at(i, j) * ket.amp[j];
        r += std::conj(bra.amp[i]) * row;
    }
    return r;
}

}  // namespace pairshift
