#include <cmath>
#include <complex>
#include <numeric>

#include <doctest.h>

#include "rquant/circle.hpp"
#include "rquant/errors.hpp"
#include "rquant/manifold.hpp"
#include "rquant/sampling.hpp"

#include "oracles.hpp"

using rquant::ManifoldId;
using rquant::ManifoldPoint;

TEST_CASE("uniform circle sampling has flat circular moments") {
    rquant::Rng rng(101);
    const auto pts = rquant::sample_uniform(ManifoldId::circle(), 20000, rng);
    std::complex<double> m1(0, 0);
    std::complex<double> m2(0, 0);
    for (const ManifoldPoint& p : pts) {
        m1 += std::polar(1.0, p.coords[0]);
        m2 += std::polar(1.0, 2.0 * p.coords[0]);
    }
    m1 /= static_cast<double>(pts.size());
    m2 /= static_cast<double>(pts.size());
    // Resultant of N uniform angles concentrates like 1/sqrt(N).
    CHECK(std::abs(m1) < 0.02);
    CHECK(std::abs(m2) < 0.02);
    for (const ManifoldPoint& p : pts) {
        REQUIRE(p.coords[0] >= 0.0);
        REQUIRE(p.coords[0] < 2 * M_PI);
    }
}

TEST_CASE("uniform sphere sampling has zero mean and isotropic covariance") {
    rquant::Rng rng(102);
    const auto pts = rquant::sample_uniform(ManifoldId::sphere2(), 20000, rng);
    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    Eigen::Matrix3d second = Eigen::Matrix3d::Zero();
    for (const ManifoldPoint& p : pts) {
        const Eigen::Vector3d v = p.coords;
        REQUIRE(std::abs(v.norm() - 1.0) < 1e-12);
        mean += v;
        second += v * v.transpose();
    }
    mean /= static_cast<double>(pts.size());
    second /= static_cast<double>(pts.size());
    CHECK(mean.norm() < 0.02);
    // E[x x^T] = I/3 on the unit sphere.
    CHECK((second - Eigen::Matrix3d::Identity() / 3.0).norm() < 0.02);
}

TEST_CASE("uniform sampling rejects unbounded manifolds") {
    rquant::Rng rng(103);
    CHECK_THROWS_AS(
        (void)rquant::sample_uniform(ManifoldId::hyperbolic2(), 10, rng),
        rquant::UsageError);
    CHECK_THROWS_AS((void)rquant::sample_uniform(ManifoldId::euclidean(2), 10, rng),
                    rquant::UsageError);
}

TEST_CASE("von Mises sample matches the Bessel mean resultant length") {
    // For kappa = 5 the mean resultant length is I_1(5)/I_0(5) = 0.893342.
    const double kappa = 5.0;
    const double expect_r = std::cyl_bessel_i(1.0, kappa) / std::cyl_bessel_i(0.0, kappa);
    CHECK(expect_r == doctest::Approx(0.8934).epsilon(1e-4)); // frozen cross-check

    rquant::Rng rng(104);
    const double center = 1.2;
    rquant::SampleDiagnostics diag;
    const auto pts = rquant::sample_von_mises(center, kappa, 20000, rng, &diag);
    std::complex<double> m(0, 0);
    for (const ManifoldPoint& p : pts) {
        m += std::polar(1.0, p.coords[0]);
    }
    m /= static_cast<double>(pts.size());
    CHECK(std::abs(m) == doctest::Approx(expect_r).epsilon(0.01));
    CHECK(rquant::circle::distance(std::arg(m), center) < 0.02);
    CHECK(diag.acceptance_rate() > 0.5);
}

TEST_CASE("von Mises with tiny concentration approaches uniform") {
    rquant::Rng rng(105);
    const auto pts = rquant::sample_von_mises(0.0, 0.01, 20000, rng);
    std::complex<double> m(0, 0);
    for (const ManifoldPoint& p : pts) {
        m += std::polar(1.0, p.coords[0]);
    }
    m /= static_cast<double>(pts.size());
    CHECK(std::abs(m) < 0.03);
}

TEST_CASE("vMF sample concentrates around its center") {
    const double kappa = 5.0;
    // E[cos angle to mode] = coth(kappa) - 1/kappa = 0.800007 at kappa 5.
    const double expect = 1.0 / std::tanh(kappa) - 1.0 / kappa;
    CHECK(expect == doctest::Approx(0.8000).epsilon(1e-4));

    rquant::Rng rng(106);
    const Eigen::Vector3d center = Eigen::Vector3d(1.0, 2.0, -1.0).normalized();
    const auto pts = rquant::sample_vmf_sphere(center, kappa, 20000, rng);
    double mean_cos = 0.0;
    for (const ManifoldPoint& p : pts) {
        REQUIRE(std::abs(p.coords.norm() - 1.0) < 1e-9);
        mean_cos += center.dot(p.coords);
    }
    mean_cos /= static_cast<double>(pts.size());
    CHECK(mean_cos == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("hyperbolic Gaussian is isotropic around its center") {
    rquant::Rng rng(107);
    const Eigen::Vector2d center(0.5, 2.0);
    const double sigma = 0.6;
    rquant::SampleDiagnostics diag;
    const auto pts = rquant::sample_gaussian_h2(center, sigma, 20000, rng, &diag);
    ManifoldPoint c{ManifoldId::hyperbolic2(), center};

    // Radial law r ~ exp(-r^2/2s^2) sinh(r): compare the sample mean radius
    // with quadrature of the density.
    const auto dens = [sigma](double r) {
        return std::exp(-r * r / (2 * sigma * sigma)) * std::sinh(r);
    };
    const double z = oracle::simpson(dens, 0.0, 12.0 * sigma + 12.0);
    const double expect_mean =
        oracle::simpson([&](double r) { return r * dens(r); }, 0.0,
                        12.0 * sigma + 12.0) /
        z;

    double mean_r = 0.0;
    double mean_dir = 0.0;
    for (const ManifoldPoint& p : pts) {
        REQUIRE(p.coords[1] > 0.0);
        const double r = rquant::distance(c, p);
        mean_r += r;
        const rquant::TangentVector v = rquant::log_map(c, p);
        mean_dir += std::atan2(v.vec[1], v.vec[0]);
    }
    mean_r /= static_cast<double>(pts.size());
    CHECK(mean_r == doctest::Approx(expect_mean).epsilon(0.02));
    CHECK(diag.acceptance_rate() > 0.2);
}

TEST_CASE("samplers are reproducible from the seed") {
    for (int which = 0; which < 3; ++which) {
        rquant::Rng a(991);
        rquant::Rng b(991);
        rquant::Rng c(992);
        std::vector<ManifoldPoint> pa;
        std::vector<ManifoldPoint> pb;
        std::vector<ManifoldPoint> pc;
        switch (which) {
        case 0:
            pa = rquant::sample_von_mises(0.3, 4.0, 50, a);
            pb = rquant::sample_von_mises(0.3, 4.0, 50, b);
            pc = rquant::sample_von_mises(0.3, 4.0, 50, c);
            break;
        case 1:
            pa = rquant::sample_vmf_sphere({0, 0, 1}, 4.0, 50, a);
            pb = rquant::sample_vmf_sphere({0, 0, 1}, 4.0, 50, b);
            pc = rquant::sample_vmf_sphere({0, 0, 1}, 4.0, 50, c);
            break;
        default:
            pa = rquant::sample_gaussian_h2({0, 1}, 0.5, 50, a);
            pb = rquant::sample_gaussian_h2({0, 1}, 0.5, 50, b);
            pc = rquant::sample_gaussian_h2({0, 1}, 0.5, 50, c);
            break;
        }
        bool identical = true;
        bool differs = false;
        for (std::size_t i = 0; i < pa.size(); ++i) {
            identical = identical && pa[i].coords == pb[i].coords;
            differs = differs || pa[i].coords != pc[i].coords;
        }
        CHECK(identical);
        CHECK(differs);
    }
}

TEST_CASE("split sub-streams are independent of consumption order") {
    rquant::Rng a(7);
    rquant::Rng b(7);
    (void)a.uniform(); // advancing the parent must not move the child
    rquant::Rng ca = a.split(42);
    rquant::Rng cb = b.split(42);
    CHECK(ca.next_u64() == cb.next_u64());
    CHECK(a.split(1).next_u64() != a.split(2).next_u64());
}

TEST_CASE("degenerate sampler parameters are rejected") {
    rquant::Rng rng(108);
    CHECK_THROWS_AS((void)rquant::sample_von_mises(0.0, -1.0, 10, rng),
                    rquant::UsageError);
    CHECK_THROWS_AS((void)rquant::sample_vmf_sphere({0, 0, 1}, -1.0, 10, rng),
                    rquant::UsageError);
    CHECK_THROWS_AS((void)rquant::sample_gaussian_h2({0, 1}, 0.0, 10, rng),
                    rquant::UsageError);
    CHECK_THROWS_AS((void)rquant::sample_gaussian_h2({0, -1}, 0.5, 10, rng),
                    rquant::DataError);
}
