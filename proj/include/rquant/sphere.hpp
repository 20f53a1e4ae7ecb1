#pragma once

#include <utility>

#include <Eigen/Core>

namespace rquant::sphere {

/// Near-antipodal log maps are refused; the returned direction would be
/// arbitrary and the online quantizer must not take that jump.
inline constexpr double kAntipodeTol = 1e-6;

double distance(const Eigen::Vector3d& p, const Eigen::Vector3d& q);

/// Great-circle flow from p along tangent v (v perpendicular to p):
/// cos(|v|) p + sin(|v|) v/|v|. Norms >= pi leave the injectivity domain
/// but are still computed.
Eigen::Vector3d exp(const Eigen::Vector3d& p, const Eigen::Vector3d& v);

/// Inverse of exp: (d / sin d) (q - cos(d) p) with d = distance(p, q).
/// Throws CutLocusError when q is within kAntipodeTol of -p.
Eigen::Vector3d log(const Eigen::Vector3d& p, const Eigen::Vector3d& q);

/// Orthonormal basis of the tangent plane at p.
std::pair<Eigen::Vector3d, Eigen::Vector3d> tangent_basis(const Eigen::Vector3d& p);

/// Rotation taking e_z to the given unit vector (identity when already e_z).
Eigen::Matrix3d rotation_from_pole(const Eigen::Vector3d& target);

} // namespace rquant::sphere
