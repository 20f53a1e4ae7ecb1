#include "rquant/hyperbolic.hpp"

#include <cmath>

#include "rquant/errors.hpp"

namespace rquant::h2 {

namespace {

using Complex = std::complex<double>;

constexpr Complex kI{0.0, 1.0};

Complex to_complex(const Eigen::Vector2d& z) { return {z.x(), z.y()}; }

Eigen::Vector2d to_vec(Complex z) { return {z.real(), z.imag()}; }

/// Unit tangent at i of the geodesic from i toward w, as a complex number.
/// Geodesics through i are the vertical axis and semicircles centered on the
/// real axis through i.
Complex direction_at_origin(Complex w) {
    const double a = w.real();
    const double b = w.imag();
    if (std::fabs(a) < 1e-300) {
        return b >= 1.0 ? kI : -kI;
    }
    const double center = (a * a + b * b - 1.0) / (2.0 * a);
    Complex t{1.0, center};
    t /= std::abs(t);
    return a > 0.0 ? t : -t;
}

} // namespace

Mobius compose(const Mobius& f, const Mobius& g) {
    // Matrix product g * f: apply f first, then g.
    return {g.a * f.a + g.b * f.c, g.a * f.b + g.b * f.d, g.c * f.a + g.d * f.c,
            g.c * f.b + g.d * f.d};
}

Mobius from_origin(const Eigen::Vector2d& z) {
    check_in_half_plane(z);
    const double s = std::sqrt(z.y());
    return {s, z.x() / s, 0.0, 1.0 / s};
}

Mobius rotation(double phi) {
    const double c = std::cos(phi);
    const double s = std::sin(phi);
    return {c, s, -s, c};
}

Complex apply(const Mobius& m, Complex z) { return (m.a * z + m.b) / (m.c * z + m.d); }

Complex apply_tangent(const Mobius& m, Complex z, Complex v) {
    const Complex denom = m.c * z + m.d;
    return v / (denom * denom);
}

double distance(const Eigen::Vector2d& z1, const Eigen::Vector2d& z2) {
    check_in_half_plane(z1);
    check_in_half_plane(z2);
    const double dx = z1.x() - z2.x();
    const double dy = z1.y() - z2.y();
    const double arg = 1.0 + (dx * dx + dy * dy) / (2.0 * z1.y() * z2.y());
    return std::acosh(std::max(arg, 1.0));
}

Eigen::Vector2d exp(const Eigen::Vector2d& z, const Eigen::Vector2d& v) {
    check_in_half_plane(z);
    // Push v down to the origin i; the pushforward of from_origin(z)^{-1}
    // at z is division by y.
    const Complex u = to_complex(v) / z.y();
    const double t = std::abs(u);
    if (t < 1e-15) {
        return z;
    }
    // Rotate u to the vertical, ride the vertical geodesic, undo everything.
    const double phi = 0.5 * (M_PI_2 - std::arg(u));
    const Mobius back = compose(rotation(-phi), from_origin(z));
    return to_vec(apply(back, kI * std::exp(t)));
}

Eigen::Vector2d log(const Eigen::Vector2d& z1, const Eigen::Vector2d& z2) {
    check_in_half_plane(z1);
    check_in_half_plane(z2);
    const Mobius down = from_origin(z1).inverse();
    const Complex w = apply(down, to_complex(z2));
    const double d = distance(Eigen::Vector2d{0.0, 1.0}, to_vec(w));
    if (d < 1e-15) {
        return Eigen::Vector2d::Zero();
    }
    const Complex u = d * direction_at_origin(w);
    // Pull back to z1: the pushforward of from_origin(z1) at i is
    // multiplication by y.
    return to_vec(u * z1.y());
}

void check_in_half_plane(const Eigen::Vector2d& z) {
    if (!(z.y() > 0.0) || !std::isfinite(z.x()) || !std::isfinite(z.y())) {
        throw DataError("hyperbolic point outside the upper half-plane");
    }
}

} // namespace rquant::h2
