#pragma once

#include <cmath>
#include <stdexcept>

#include "pairshift/numerics.hpp"
#include "pairshift/vec3.hpp"

namespace pairshift {

/// hbar = c = 1 throughout; the electron mass sets the internal energy scale.
struct PhysicsConstants {
    double alpha_em = 1.0 / 137.035999;
    double electron_mass = 1.0;    ///< 1 in internal units, 0.511 when working in MeV
    double hbar_c = 197.327;       ///< MeV fm, used only for unit conversion

    double e_squared() const { return 4.0 * pi * alpha_em; }
};

/// Elastic center-of-mass kinematics: p1 = -p2 = p along +z, p3 = -p4 = q in
/// the x-z plane, |p| = |q| = k.
struct ComKinematics {
    double m = 0.0;        ///< electron mass (energy units)
    double k = 0.0;        ///< momentum magnitude
    double x = 0.0;        ///< cos(theta) between p and q
    Vec3 p_vec{};  ///< incoming momentum of particle 1
    Vec3 q_vec{};  ///< outgoing momentum of particle 3
    double e_single = 0.0; ///< sqrt(k^2 + m^2)
    double e_total = 0.0;  ///< 2 e_single
};

inline ComKinematics build_kinematics(double m, double k, double x)
{
    if (!(m > 0.0)) throw std::invalid_argument("build_kinematics: m must be > 0");
    if (!(k > 0.0)) throw std::invalid_argument("build_kinematics: k must be > 0");
    if (std::abs(x) > 1.0) throw std::invalid_argument("build_kinematics: |x| must be <= 1");
    ComKinematics kin;
    kin.m = m;
    kin.k = k;
    kin.x = x;
    const double st = std::sqrt((1.0 - x) * (1.0 + x));
    kin.p_vec = {0.0, 0.0, k};
    kin.q_vec = {k * st, 0.0, k * x};
    kin.e_single = std::sqrt(k * k + m * m);
    kin.e_total = 2.0 * kin.e_single;
    return kin;
}

enum class Channel { Direct, Exchange };

/// Thrown when a photon propagator denominator vanishes (alpha = 0 at
/// x = +-1, the unscreened forward/backward singularity).
class ForwardSingularity : public std::domain_error {
  public:
    ForwardSingularity() : std::domain_error("forward singularity: vanishing photon denominator") {}
};

/// Minkowski momentum-transfer squared minus alpha^2, metric (+,-,-,-).
/// Elastic CoM has zero energy transfer, so
///   Direct   = (p1-p3)^2 - alpha^2 = -(2k^2(1-x) + alpha^2)
///   Exchange = (p2-p3)^2 - alpha^2 = -(2k^2(1+x) + alpha^2)
inline double screened_denominator(const ComKinematics& kin, Channel channel, double alpha)
{
    if (alpha < 0.0) throw std::invalid_argument("screened_denominator: alpha must be >= 0");
    const double sign = (channel == Channel::Direct) ? -1.0 : 1.0;
    const double t = 2.0 * kin.k * kin.k * (1.0 + sign * kin.x) + alpha * alpha;
    if (t == 0.0) throw ForwardSingularity{};
    return -t;
}

/// Same denominator for arbitrary momentum directions (used by the full
/// solid-angle projection); p and q are the spatial momenta.
inline double screened_denominator(Vec3 p, Vec3 q, Channel channel, double alpha)
{
    if (alpha < 0.0) throw std::invalid_argument("screened_denominator: alpha must be >= 0");
    const Vec3 d = (channel == Channel::Direct) ? p - q : -p - q;
    const double t = norm_sq(d) + alpha * alpha;
    if (t == 0.0) throw ForwardSingularity{};
    return -t;
}

}  // namespace pairshift
