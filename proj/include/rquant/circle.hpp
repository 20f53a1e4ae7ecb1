#pragma once

#include <algorithm>
#include <cmath>

namespace rquant::circle {

inline constexpr double kTwoPi = 2.0 * M_PI;

/// Angle reduced to [0, 2*pi).
inline double normalize_angle(double theta) {
    double t = std::fmod(theta, kTwoPi);
    if (t < 0.0) {
        t += kTwoPi;
    }
    // fmod of a tiny negative can round back up to 2*pi exactly.
    if (t >= kTwoPi) {
        t = 0.0;
    }
    return t;
}

/// Arc distance in [0, pi].
inline double distance(double theta1, double theta2) {
    const double d = std::fabs(normalize_angle(theta1 - theta2));
    return std::min(d, kTwoPi - d);
}

/// Geodesic flow: theta + v, normalized.
inline double exp(double theta, double v) { return normalize_angle(theta + v); }

/// Signed angular difference from theta1 to theta2 in (-pi, pi].
/// The antipodal tie resolves to +pi.
inline double log(double theta1, double theta2) {
    const double d = normalize_angle(theta2 - theta1);
    return d <= M_PI ? d : d - kTwoPi;
}

} // namespace rquant::circle
