#include "rquant/sampling.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <string>

#include "rquant/circle.hpp"
#include "rquant/errors.hpp"
#include "rquant/hyperbolic.hpp"
#include "rquant/sphere.hpp"

namespace rquant {

namespace {

void require_count(std::size_t count) {
    if (count == 0) {
        throw UsageError("sample count must be >= 1");
    }
}

void check_acceptance(const SampleDiagnostics& diag, const char* sampler) {
    if (diag.proposals >= 100 && diag.acceptance_rate() < 0.1) {
        throw NumericError(std::string(sampler) +
                           " rejection rate above 90%, envelope no longer "
                           "dominates the target density");
    }
}

ManifoldPoint circle_point(double theta) {
    ManifoldPoint p;
    p.manifold = ManifoldId::circle();
    p.coords.resize(1);
    p.coords[0] = circle::normalize_angle(theta);
    return p;
}

ManifoldPoint sphere_point(const Eigen::Vector3d& v) {
    ManifoldPoint p;
    p.manifold = ManifoldId::sphere2();
    p.coords = v;
    return p;
}

} // namespace

std::vector<ManifoldPoint> sample_uniform(const ManifoldId& id, std::size_t count,
                                          Rng& rng) {
    require_count(count);
    std::vector<ManifoldPoint> out;
    out.reserve(count);
    if (id.kind == ManifoldKind::circle) {
        for (std::size_t i = 0; i < count; ++i) {
            out.push_back(circle_point(rng.uniform(0.0, circle::kTwoPi)));
        }
        return out;
    }
    if (id.kind == ManifoldKind::sphere2) {
        for (std::size_t i = 0; i < count; ++i) {
            Eigen::Vector3d g;
            double n = 0.0;
            do {
                g << rng.normal(), rng.normal(), rng.normal();
                n = g.norm();
            } while (n < 1e-12);
            out.push_back(sphere_point(g / n));
        }
        return out;
    }
    throw UsageError("uniform sampling is only defined for circle and sphere2");
}

std::vector<ManifoldPoint> sample_von_mises(double center, double kappa,
                                            std::size_t count, Rng& rng,
                                            SampleDiagnostics* diag) {
    require_count(count);
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw UsageError("von Mises concentration must be positive");
    }
    // Best-Fisher (1979) wrapped-Cauchy envelope.
    const double tau = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (tau - std::sqrt(2.0 * tau)) / (2.0 * kappa);
    const double r = (1.0 + rho * rho) / (2.0 * rho);

    SampleDiagnostics local;
    SampleDiagnostics& d = diag ? *diag : local;
    std::vector<ManifoldPoint> out;
    out.reserve(count);
    while (out.size() < count) {
        ++d.proposals;
        const double z = std::cos(M_PI * rng.uniform());
        const double f = (1.0 + r * z) / (r + z);
        const double c = kappa * (r - f);
        const double u2 = rng.uniform();
        if (c * (2.0 - c) - u2 > 0.0 || std::log(c / u2) + 1.0 - c >= 0.0) {
            ++d.accepted;
            const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
            out.push_back(circle_point(center + sign * std::acos(f)));
        }
        check_acceptance(d, "von Mises");
    }
    return out;
}

std::vector<ManifoldPoint> sample_vmf_sphere(const Eigen::Vector3d& center,
                                             double kappa, std::size_t count,
                                             Rng& rng) {
    require_count(count);
    if (!(kappa > 0.0) || !std::isfinite(kappa)) {
        throw UsageError("von Mises-Fisher concentration must be positive");
    }
    if (std::abs(center.norm() - 1.0) > 1e-9) {
        throw DataError("von Mises-Fisher center must be a unit vector");
    }
    const Eigen::Matrix3d rot = sphere::rotation_from_pole(center.normalized());
    std::vector<ManifoldPoint> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        // Inverse CDF of the polar cosine, exact in 3 dimensions.
        const double u = rng.uniform();
        double w =
            1.0 + std::log(u + (1.0 - u) * std::exp(-2.0 * kappa)) / kappa;
        w = std::clamp(w, -1.0, 1.0);
        const double s = std::sqrt(std::max(0.0, 1.0 - w * w));
        const double phi = rng.uniform(0.0, circle::kTwoPi);
        const Eigen::Vector3d local(s * std::cos(phi), s * std::sin(phi), w);
        out.push_back(sphere_point((rot * local).normalized()));
    }
    return out;
}

std::vector<ManifoldPoint> sample_gaussian_h2(const Eigen::Vector2d& center,
                                              double sigma, std::size_t count,
                                              Rng& rng,
                                              SampleDiagnostics* diag) {
    require_count(count);
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw UsageError("hyperbolic Gaussian standard deviation must be positive");
    }
    h2::check_in_half_plane(center);
    const h2::Mobius move = h2::from_origin(center);

    SampleDiagnostics local;
    SampleDiagnostics& d = diag ? *diag : local;
    std::vector<ManifoldPoint> out;
    out.reserve(count);
    while (out.size() < count) {
        // Radial density prop. to exp(-r^2/(2 s^2)) sinh(r); completing the
        // square against e^r gives the dominating Gaussian N(s^2, s) with
        // residual acceptance probability (1 - e^{-2r}) on r > 0.
        ++d.proposals;
        const double r = sigma * sigma + sigma * rng.normal();
        if (r <= 0.0 || rng.uniform() >= 1.0 - std::exp(-2.0 * r)) {
            check_acceptance(d, "hyperbolic Gaussian");
            continue;
        }
        ++d.accepted;
        const double phi = rng.uniform(0.0, circle::kTwoPi);
        // Unit direction e^{i phi} at i, geodesic polar coordinates.
        const Eigen::Vector2d v(r * std::cos(phi), r * std::sin(phi));
        const Eigen::Vector2d at_origin = h2::exp(Eigen::Vector2d(0.0, 1.0), v);
        const std::complex<double> moved =
            h2::apply(move, {at_origin[0], at_origin[1]});
        ManifoldPoint p;
        p.manifold = ManifoldId::hyperbolic2();
        p.coords.resize(2);
        p.coords << moved.real(), moved.imag();
        out.push_back(std::move(p));
    }
    return out;
}

} // namespace rquant
