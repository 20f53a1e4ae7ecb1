#pragma once

#include <cstdint>
#include <vector>

#include "rquant/manifold.hpp"
#include "rquant/rng.hpp"

namespace rquant {

/// Rejection-sampler bookkeeping. A healthy envelope accepts well over half
/// of its proposals; a rate under 10% means the envelope no longer bounds
/// the target and is reported as a numeric failure.
struct SampleDiagnostics {
    std::uint64_t proposals = 0;
    std::uint64_t accepted = 0;

    double acceptance_rate() const {
        return proposals == 0 ? 1.0 : static_cast<double>(accepted) /
                                          static_cast<double>(proposals);
    }
};

/// Uniform law on the circle (angle in [0,2pi)) or the sphere (normalized
/// standard Gaussian 3-vectors). Other manifolds are rejected.
std::vector<ManifoldPoint> sample_uniform(const ManifoldId& id, std::size_t count,
                                          Rng& rng);

/// Angular von Mises density prop. to exp(kappa cos(theta - center)),
/// Best-Fisher wrapped-Cauchy rejection.
std::vector<ManifoldPoint> sample_von_mises(double center, double kappa,
                                            std::size_t count, Rng& rng,
                                            SampleDiagnostics* diag = nullptr);

/// Von Mises-Fisher on S^2: cosine of the polar angle by the closed-form
/// inverse CDF, uniform azimuth, rotated so the mode sits at `center`.
std::vector<ManifoldPoint> sample_vmf_sphere(const Eigen::Vector3d& center,
                                             double kappa, std::size_t count,
                                             Rng& rng);

/// Isotropic Gaussian on the hyperbolic half-plane: radial density prop. to
/// exp(-r^2/(2 sigma^2)) sinh(r), sampled by rejection under the Gaussian
/// envelope N(sigma^2, sigma), uniform direction, then moved to `center` by
/// the Moebius isometry.
std::vector<ManifoldPoint> sample_gaussian_h2(const Eigen::Vector2d& center,
                                              double sigma, std::size_t count,
                                              Rng& rng,
                                              SampleDiagnostics* diag = nullptr);

} // namespace rquant
