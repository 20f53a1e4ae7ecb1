#include <cmath>
#include <complex>
#include <vector>

#include <doctest.h>

#include "rquant/circle.hpp"
#include "rquant/errors.hpp"
#include "rquant/hyperbolic.hpp"
#include "rquant/manifold.hpp"
#include "rquant/spd.hpp"
#include "rquant/sphere.hpp"

#include "oracles.hpp"

using rquant::ManifoldId;
using rquant::ManifoldPoint;
using rquant::TangentVector;

namespace {

const std::vector<ManifoldId> kAllManifolds = {
    ManifoldId::circle(), ManifoldId::sphere2(), ManifoldId::hyperbolic2(),
    ManifoldId::euclidean(3), ManifoldId::spd(2), ManifoldId::spd(3)};

} // namespace

TEST_CASE("circle distance and log agree with arc arithmetic") {
    CHECK(rquant::circle::distance(0.0, M_PI / 2) == doctest::Approx(M_PI / 2));
    CHECK(rquant::circle::distance(0.1, 2 * M_PI - 0.1) == doctest::Approx(0.2));
    // Antipodal pair: distance pi, log picks the +pi representative.
    CHECK(rquant::circle::distance(0.0, M_PI) == doctest::Approx(M_PI));
    CHECK(rquant::circle::log(0.0, M_PI) == doctest::Approx(M_PI));
    // Wrap-around goes the short way.
    CHECK(rquant::circle::log(0.1, 2 * M_PI - 0.1) == doctest::Approx(-0.2));
    CHECK(rquant::circle::exp(0.1, -0.2) ==
          doctest::Approx(2 * M_PI - 0.1));
}

TEST_CASE("sphere distance matches closed-form values") {
    ManifoldPoint n = ManifoldPoint{ManifoldId::sphere2(), Eigen::Vector3d(0, 0, 1)};
    ManifoldPoint e = ManifoldPoint{ManifoldId::sphere2(), Eigen::Vector3d(1, 0, 0)};
    CHECK(rquant::distance(n, e) == doctest::Approx(M_PI / 2));
    ManifoldPoint s = ManifoldPoint{ManifoldId::sphere2(), Eigen::Vector3d(0, 0, -1)};
    CHECK(rquant::distance(n, s) == doctest::Approx(M_PI));
    CHECK_THROWS_AS((void)rquant::log_map(n, s), rquant::CutLocusError);
}

TEST_CASE("half-plane distance matches the cross-ratio formula") {
    ManifoldPoint a{ManifoldId::hyperbolic2(), Eigen::Vector2d(0.0, 1.0)};
    ManifoldPoint b{ManifoldId::hyperbolic2(), Eigen::Vector2d(0.0, std::exp(1.0))};
    // Vertical geodesic: d((0,1),(0,e)) = 1.
    CHECK(rquant::distance(a, b) == doctest::Approx(1.0).epsilon(1e-12));
    // d((−1,1),(1,1)) = arcosh(1 + 4/2) = arcosh(3).
    ManifoldPoint l{ManifoldId::hyperbolic2(), Eigen::Vector2d(-1.0, 1.0)};
    ManifoldPoint r{ManifoldId::hyperbolic2(), Eigen::Vector2d(1.0, 1.0)};
    CHECK(rquant::distance(l, r) == doctest::Approx(std::acosh(3.0)).epsilon(1e-12));
}

TEST_CASE("half-plane distance is Moebius invariant") {
    rquant::Rng rng(11);
    const rquant::h2::Mobius g{2.0, 1.0, 1.0, 1.0}; // det 1
    for (int it = 0; it < 200; ++it) {
        ManifoldPoint p = oracle::random_h2(rng);
        ManifoldPoint q = oracle::random_h2(rng);
        const std::complex<double> gp =
            rquant::h2::apply(g, {p.coords[0], p.coords[1]});
        const std::complex<double> gq =
            rquant::h2::apply(g, {q.coords[0], q.coords[1]});
        ManifoldPoint p2{ManifoldId::hyperbolic2(),
                         Eigen::Vector2d(gp.real(), gp.imag())};
        ManifoldPoint q2{ManifoldId::hyperbolic2(),
                         Eigen::Vector2d(gq.real(), gq.imag())};
        CHECK(rquant::distance(p2, q2) ==
              doctest::Approx(rquant::distance(p, q)).epsilon(1e-9));
    }
}

TEST_CASE("spd distance has the closed eigenvalue form") {
    ManifoldId id = ManifoldId::spd(2);
    ManifoldPoint eye = ManifoldPoint::from_matrix(id, Eigen::Matrix2d::Identity());
    Eigen::Matrix2d d2;
    d2 << std::exp(2.0), 0.0, 0.0, 1.0;
    ManifoldPoint p = ManifoldPoint::from_matrix(id, d2);
    // d(I, diag(e^2, 1)) = 2.
    CHECK(rquant::distance(eye, p) == doctest::Approx(2.0).epsilon(1e-12));

    Eigen::Matrix2d d3;
    d3 << 2.0, 0.0, 0.0, 0.5;
    ManifoldPoint q = ManifoldPoint::from_matrix(id, d3);
    const double expect = std::sqrt(2.0) * std::log(2.0);
    CHECK(rquant::distance(eye, q) == doctest::Approx(expect).epsilon(1e-12));
}

TEST_CASE("spd distance is congruence invariant") {
    rquant::Rng rng(12);
    for (int it = 0; it < 100; ++it) {
        const int n = (it % 2 == 0) ? 2 : 3;
        const ManifoldId id = ManifoldId::spd(n);
        ManifoldPoint p = oracle::random_spd(n, rng);
        ManifoldPoint q = oracle::random_spd(n, rng);
        Eigen::MatrixXd g(n, n);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                g(i, j) = rng.normal();
            }
        }
        if (std::abs(g.determinant()) < 1e-3) {
            continue;
        }
        ManifoldPoint gp = ManifoldPoint::from_matrix(
            id, (g * p.as_matrix() * g.transpose()).eval());
        ManifoldPoint gq = ManifoldPoint::from_matrix(
            id, (g * q.as_matrix() * g.transpose()).eval());
        CHECK(rquant::distance(gp, gq) ==
              doctest::Approx(rquant::distance(p, q)).epsilon(1e-7));
    }
}

TEST_CASE("exp/log roundtrip on every manifold") {
    rquant::Rng rng(13);
    for (const ManifoldId& id : kAllManifolds) {
        CAPTURE(id.tag());
        for (int it = 0; it < 50; ++it) {
            ManifoldPoint p = oracle::random_point(id, rng);
            ManifoldPoint q = oracle::random_point(id, rng);
            if (id.kind == rquant::ManifoldKind::sphere2 &&
                rquant::distance(p, q) > M_PI - 1e-3) {
                continue;
            }
            const TangentVector v = rquant::log_map(p, q);
            const ManifoldPoint back = rquant::exp_map(v);
            CHECK(rquant::distance(back, q) < 1e-9);
            // |log| equals the distance.
            CHECK(rquant::norm(v) ==
                  doctest::Approx(rquant::distance(p, q)).epsilon(1e-9));
        }
    }
}

TEST_CASE("exp is a local isometry along geodesics") {
    // d(p, exp_p(t u)) = t for unit u, t below the injectivity radius.
    rquant::Rng rng(14);
    for (const ManifoldId& id : kAllManifolds) {
        CAPTURE(id.tag());
        for (int it = 0; it < 30; ++it) {
            ManifoldPoint p = oracle::random_point(id, rng);
            const TangentVector u = oracle::random_unit_tangent(p, rng);
            const double t = rng.uniform(0.05, 1.5);
            const ManifoldPoint q = rquant::exp_map(rquant::scaled(u, t));
            CHECK(rquant::distance(p, q) == doctest::Approx(t).epsilon(1e-8));
        }
    }
}

TEST_CASE("distance is symmetric and obeys the triangle inequality") {
    rquant::Rng rng(15);
    for (const ManifoldId& id : kAllManifolds) {
        CAPTURE(id.tag());
        for (int it = 0; it < 60; ++it) {
            ManifoldPoint a = oracle::random_point(id, rng);
            ManifoldPoint b = oracle::random_point(id, rng);
            ManifoldPoint c = oracle::random_point(id, rng);
            const double ab = rquant::distance(a, b);
            const double ba = rquant::distance(b, a);
            CHECK(ab == doctest::Approx(ba).epsilon(1e-10));
            CHECK(rquant::distance(a, c) <= ab + rquant::distance(b, c) + 1e-9);
            CHECK(rquant::distance(a, a) == doctest::Approx(0.0));
        }
    }
}

TEST_CASE("tangent bases are orthonormal") {
    rquant::Rng rng(16);
    for (const ManifoldId& id : kAllManifolds) {
        CAPTURE(id.tag());
        ManifoldPoint p = oracle::random_point(id, rng);
        const std::vector<TangentVector> basis = rquant::tangent_basis(p);
        CHECK(static_cast<int>(basis.size()) == id.dim());
        for (std::size_t i = 0; i < basis.size(); ++i) {
            for (std::size_t j = 0; j < basis.size(); ++j) {
                const double expect = i == j ? 1.0 : 0.0;
                CHECK(rquant::inner(basis[i], basis[j]) ==
                      doctest::Approx(expect).epsilon(1e-9));
            }
        }
    }
}

TEST_CASE("squared-distance gradient is minus twice the log") {
    // grad_a d^2(x, a) = -2 log_a(x), checked against normal-coordinate
    // finite differences.
    rquant::Rng rng(17);
    for (const ManifoldId& id : kAllManifolds) {
        CAPTURE(id.tag());
        for (int it = 0; it < 20; ++it) {
            ManifoldPoint a = oracle::random_point(id, rng);
            ManifoldPoint x = oracle::random_point(id, rng);
            if (id.kind == rquant::ManifoldKind::sphere2 &&
                rquant::distance(a, x) > M_PI - 0.2) {
                continue;
            }
            const auto f = [&x](const ManifoldPoint& p) {
                const double d = rquant::distance(x, p);
                return d * d;
            };
            const Eigen::VectorXd fd = oracle::fd_gradient(f, a, 1e-5);
            const TangentVector expect =
                rquant::scaled(rquant::log_map(a, x), -2.0);
            const Eigen::VectorXd ec = oracle::basis_coefficients(expect);
            const double scale = std::max(1.0, ec.norm());
            CHECK((fd - ec).norm() / scale < 1e-4);
        }
    }
}

TEST_CASE("2x2 symmetric eigensolver matches the general solver") {
    rquant::Rng rng(18);
    for (int it = 0; it < 300; ++it) {
        Eigen::Matrix2d m;
        const double a = rng.uniform(-5.0, 5.0);
        const double b = rng.uniform(-5.0, 5.0);
        const double c = rng.uniform(-5.0, 5.0);
        m << a, b, b, c;
        const rquant::spd::SymEig eig = rquant::spd::sym_eig(m);
        const Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> ref(m);
        CHECK(eig.values[0] == doctest::Approx(ref.eigenvalues()[0]).epsilon(1e-12));
        CHECK(eig.values[1] == doctest::Approx(ref.eigenvalues()[1]).epsilon(1e-12));
        // Reconstruction, not eigenvector comparison: signs are free.
        const Eigen::MatrixXd rec = eig.vectors *
                                    eig.values.asDiagonal() *
                                    eig.vectors.transpose();
        CHECK((rec - m).norm() < 1e-10);
        CHECK((eig.vectors.transpose() * eig.vectors -
               Eigen::Matrix2d::Identity())
                  .norm() < 1e-12);
    }
    // Repeated eigenvalue.
    const rquant::spd::SymEig eye = rquant::spd::sym_eig(Eigen::Matrix2d::Identity());
    CHECK(eye.values[0] == doctest::Approx(1.0));
    CHECK(eye.values[1] == doctest::Approx(1.0));
}

TEST_CASE("spd validation floors drift and rejects real violations") {
    const ManifoldId id = ManifoldId::spd(2);
    // Tiny asymmetry is absorbed.
    Eigen::Matrix2d near_sym;
    near_sym << 1.0, 0.5 + 4e-10, 0.5, 2.0;
    ManifoldPoint p{id, Eigen::VectorXd(4)};
    p.coords << near_sym(0, 0), near_sym(0, 1), near_sym(1, 0), near_sym(1, 1);
    const ManifoldPoint v = rquant::validated(p);
    CHECK(v.as_matrix()(0, 1) == doctest::Approx(v.as_matrix()(1, 0)));

    // Large asymmetry is not.
    Eigen::Matrix2d bad_sym;
    bad_sym << 1.0, 0.7, 0.5, 2.0;
    ManifoldPoint b = ManifoldPoint{id, Eigen::VectorXd(4)};
    b.coords << bad_sym(0, 0), bad_sym(0, 1), bad_sym(1, 0), bad_sym(1, 1);
    CHECK_THROWS_AS((void)rquant::validated(b), rquant::DataError);

    // Clearly indefinite matrices are rejected.
    Eigen::Matrix2d neg;
    neg << 1.0, 0.0, 0.0, -0.5;
    CHECK_THROWS_AS((void)rquant::validated(ManifoldPoint::from_matrix(id, neg)),
                    rquant::DataError);
}

TEST_CASE("sphere validation renormalizes drift only") {
    const ManifoldId id = ManifoldId::sphere2();
    ManifoldPoint p{id, Eigen::Vector3d(0, 0, 1.0 + 5e-10)};
    const ManifoldPoint v = rquant::validated(p);
    CHECK(v.coords.norm() == doctest::Approx(1.0).epsilon(1e-15));
    ManifoldPoint far{id, Eigen::Vector3d(0, 0, 1.1)};
    CHECK_THROWS_AS((void)rquant::validated(far), rquant::DataError);
}

TEST_CASE("half-plane validation requires positive height") {
    const ManifoldId id = ManifoldId::hyperbolic2();
    CHECK_THROWS_AS(
        (void)rquant::validated(ManifoldPoint{id, Eigen::Vector2d(0.0, -0.1)}),
        rquant::DataError);
    CHECK_NOTHROW((void)rquant::validated(ManifoldPoint{id, Eigen::Vector2d(3.0, 0.2)}));
}

TEST_CASE("loewner comparison classifies definite and indefinite gaps") {
    using rquant::spd::LoewnerOrder;
    Eigen::Matrix2d a = Eigen::Matrix2d::Identity();
    Eigen::Matrix2d b = 2.0 * Eigen::Matrix2d::Identity();
    CHECK(rquant::spd::loewner_compare(a, b) == LoewnerOrder::less_equal);
    CHECK(rquant::spd::loewner_compare(b, a) == LoewnerOrder::greater_equal);
    CHECK(rquant::spd::loewner_compare(a, a) == LoewnerOrder::equal);
    Eigen::Matrix2d c;
    c << 3.0, 0.0, 0.0, 0.5; // neither dominates against identity
    CHECK(rquant::spd::loewner_compare(a, c) == LoewnerOrder::incomparable);
}

TEST_CASE("mismatched manifolds are refused") {
    ManifoldPoint c{ManifoldId::circle(), Eigen::VectorXd::Zero(1)};
    ManifoldPoint s{ManifoldId::sphere2(), Eigen::Vector3d(0, 0, 1)};
    CHECK_THROWS_AS((void)rquant::distance(c, s), rquant::DataError);
}
