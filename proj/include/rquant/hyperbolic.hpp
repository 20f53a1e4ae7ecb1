#pragma once

#include <complex>

#include <Eigen/Core>

namespace rquant::h2 {

// Upper half-plane model: points z = (x, y) with y > 0, metric
// ds^2 = (dx^2 + dy^2) / y^2. Geodesics are handled through the SL2 action
// z -> (az + b)/(cz + d); the same isometries move Gaussian samples from the
// origin i to an arbitrary center.

/// SL2(R) element acting on the half-plane by Moebius transformation.
struct Mobius {
    double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

    Mobius inverse() const { return {d, -b, -c, a}; } // det = 1
};

Mobius compose(const Mobius& first_applied, const Mobius& then_applied);

/// The transitive element mapping i to x + iy.
Mobius from_origin(const Eigen::Vector2d& z);

/// Stabilizer of i; acts on tangent vectors at i as rotation by 2*phi.
Mobius rotation(double phi);

std::complex<double> apply(const Mobius& m, std::complex<double> z);

/// Pushforward of a tangent vector: dT(z) v = v / (cz + d)^2.
std::complex<double> apply_tangent(const Mobius& m, std::complex<double> z,
                                   std::complex<double> v);

double distance(const Eigen::Vector2d& z1, const Eigen::Vector2d& z2);

/// Geodesic flow: conjugate the vertical flow t -> i e^t by the isometry
/// that carries z to i and aligns v with the vertical direction.
Eigen::Vector2d exp(const Eigen::Vector2d& z, const Eigen::Vector2d& v);

/// Inverse construction; |log| equals the geodesic distance.
Eigen::Vector2d log(const Eigen::Vector2d& z1, const Eigen::Vector2d& z2);

void check_in_half_plane(const Eigen::Vector2d& z);

} // namespace rquant::h2
