#include "rquant/sphere.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include <Eigen/Geometry>

#include "rquant/errors.hpp"

namespace rquant::sphere {

double distance(const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
    // atan2 of the cross and dot products stays accurate at both ends of
    // [0, pi], where acos of the clamped dot product loses half the digits.
    return std::atan2(p.cross(q).norm(), p.dot(q));
}

Eigen::Vector3d exp(const Eigen::Vector3d& p, const Eigen::Vector3d& v) {
    const double t = v.norm();
    if (t < 1e-15) {
        return p;
    }
    return std::cos(t) * p + (std::sin(t) / t) * v;
}

Eigen::Vector3d log(const Eigen::Vector3d& p, const Eigen::Vector3d& q) {
    const double d = distance(p, q);
    if (d < 1e-12) {
        return Eigen::Vector3d::Zero();
    }
    if (M_PI - d < kAntipodeTol) {
        throw CutLocusError("sphere log: point within antipodal tolerance of the base");
    }
    Eigen::Vector3d u = (d / std::sin(d)) * (q - std::cos(d) * p);
    u -= u.dot(p) * p; // strip roundoff off the tangent plane
    return u;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& p) {
    // Gram-Schmidt against the least-aligned coordinate axis.
    int axis = 0;
    p.cwiseAbs().minCoeff(&axis);
    Eigen::Vector3d e1 = Eigen::Vector3d::Unit(axis);
    e1 -= e1.dot(p) * p;
    e1.normalize();
    const Eigen::Vector3d e2 = p.cross(e1);
    return {e1, e2};
}

Eigen::Matrix3d rotation_from_pole(const Eigen::Vector3d& target) {
    const Eigen::Vector3d pole = Eigen::Vector3d::UnitZ();
    const double c = std::clamp(pole.dot(target), -1.0, 1.0);
    if (c > 1.0 - 1e-14) {
        return Eigen::Matrix3d::Identity();
    }
    if (c < -1.0 + 1e-14) {
        // Half turn about e_x.
        Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
        flip(1, 1) = -1.0;
        flip(2, 2) = -1.0;
        return flip;
    }
    // Rodrigues rotation about pole x target.
    const Eigen::Vector3d axis = pole.cross(target).normalized();
    const double angle = std::acos(c);
    Eigen::Matrix3d skew;
    skew << 0, -axis.z(), axis.y(), axis.z(), 0, -axis.x(), -axis.y(), axis.x(), 0;
    return Eigen::Matrix3d::Identity() + std::sin(angle) * skew +
           (1.0 - std::cos(angle)) * skew * skew;
}

} // namespace rquant::sphere
