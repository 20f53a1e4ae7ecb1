#include "rquant/manifold.hpp"

#include <cmath>

#include "rquant/circle.hpp"
#include "rquant/errors.hpp"
#include "rquant/hyperbolic.hpp"
#include "rquant/spd.hpp"
#include "rquant/sphere.hpp"

namespace rquant {

namespace {

constexpr double kMembershipTol = 1e-9;

void require_finite(const Eigen::VectorXd& v, const char* what) {
    if (!v.allFinite()) {
        throw DataError(std::string(what) + " has non-finite coordinates");
    }
}

Eigen::Vector3d unit_or_throw(const Eigen::VectorXd& coords) {
    Eigen::Vector3d p = coords;
    const double n = p.norm();
    if (std::abs(n - 1.0) > kMembershipTol) {
        throw DataError("sphere2 point is off the unit sphere by " +
                        std::to_string(std::abs(n - 1.0)));
    }
    return p / n;
}

Eigen::Vector3d project_sphere_tangent(const Eigen::Vector3d& p,
                                       const Eigen::Vector3d& v) {
    const double along = v.dot(p);
    if (std::abs(along) > kMembershipTol * std::max(1.0, v.norm())) {
        throw DataError("sphere2 tangent vector is not orthogonal to its base");
    }
    return v - along * p;
}

} // namespace

ManifoldId ManifoldId::euclidean(int d) {
    if (d < 1) {
        throw DataError("euclidean dimension must be >= 1");
    }
    return {ManifoldKind::euclidean, d};
}

ManifoldId ManifoldId::circle() { return {ManifoldKind::circle, 0}; }
ManifoldId ManifoldId::sphere2() { return {ManifoldKind::sphere2, 0}; }
ManifoldId ManifoldId::hyperbolic2() { return {ManifoldKind::hyperbolic2, 0}; }

ManifoldId ManifoldId::spd(int n) {
    if (n < 2) {
        throw DataError("spd matrix size must be >= 2");
    }
    return {ManifoldKind::spd, n};
}

int ManifoldId::dim() const {
    switch (kind) {
    case ManifoldKind::euclidean: return param;
    case ManifoldKind::circle: return 1;
    case ManifoldKind::sphere2: return 2;
    case ManifoldKind::hyperbolic2: return 2;
    case ManifoldKind::spd: return param * (param + 1) / 2;
    }
    throw UsageError("unknown manifold kind");
}

int ManifoldId::coord_size() const {
    switch (kind) {
    case ManifoldKind::euclidean: return param;
    case ManifoldKind::circle: return 1;
    case ManifoldKind::sphere2: return 3;
    case ManifoldKind::hyperbolic2: return 2;
    case ManifoldKind::spd: return param * param;
    }
    throw UsageError("unknown manifold kind");
}

std::string ManifoldId::tag() const {
    switch (kind) {
    case ManifoldKind::euclidean: return "euclidean";
    case ManifoldKind::circle: return "circle";
    case ManifoldKind::sphere2: return "sphere2";
    case ManifoldKind::hyperbolic2: return "hyperbolic2";
    case ManifoldKind::spd: return "spd";
    }
    throw UsageError("unknown manifold kind");
}

ManifoldId ManifoldId::from_tag(const std::string& tag, int param) {
    if (tag == "euclidean" || tag == "eucl") {
        return euclidean(param > 0 ? param : 1);
    }
    if (tag == "circle") {
        return circle();
    }
    if (tag == "sphere2" || tag == "sphere") {
        return sphere2();
    }
    if (tag == "hyperbolic2" || tag == "h2") {
        return hyperbolic2();
    }
    if (tag == "spd") {
        return spd(param > 0 ? param : 2);
    }
    throw UsageError("unknown manifold tag '" + tag + "'");
}

Eigen::MatrixXd ManifoldPoint::as_matrix() const {
    const int n = manifold.param;
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(coords.data(), n, n);
}

ManifoldPoint ManifoldPoint::from_matrix(const ManifoldId& id,
                                         const Eigen::MatrixXd& m) {
    ManifoldPoint p;
    p.manifold = id;
    p.coords.resize(m.size());
    Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                             Eigen::RowMajor>>(p.coords.data(), m.rows(), m.cols()) = m;
    return p;
}

Eigen::MatrixXd TangentVector::as_matrix() const {
    const int n = base.manifold.param;
    return Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                          Eigen::RowMajor>>(vec.data(), n, n);
}

ManifoldPoint validated(const ManifoldPoint& p) {
    if (p.coords.size() != p.manifold.coord_size()) {
        throw DataError("point has " + std::to_string(p.coords.size()) +
                        " coordinates, expected " +
                        std::to_string(p.manifold.coord_size()) + " on " +
                        p.manifold.tag());
    }
    require_finite(p.coords, "point");
    ManifoldPoint out = p;
    switch (p.manifold.kind) {
    case ManifoldKind::euclidean:
        return out;
    case ManifoldKind::circle:
        out.coords[0] = circle::normalize_angle(out.coords[0]);
        return out;
    case ManifoldKind::sphere2:
        out.coords = unit_or_throw(p.coords);
        return out;
    case ManifoldKind::hyperbolic2:
        if (!(p.coords[1] > 0.0)) {
            throw DataError("hyperbolic2 point must have y > 0");
        }
        return out;
    case ManifoldKind::spd:
        return ManifoldPoint::from_matrix(p.manifold,
                                          spd::validated(p.as_matrix()));
    }
    throw UsageError("unknown manifold kind");
}

void require_same_manifold(const ManifoldId& a, const ManifoldId& b) {
    if (a != b) {
        throw DataError("manifold mismatch: " + a.tag() + " vs " + b.tag());
    }
}

double distance(const ManifoldPoint& p, const ManifoldPoint& q) {
    require_same_manifold(p.manifold, q.manifold);
    const ManifoldPoint a = validated(p);
    const ManifoldPoint b = validated(q);
    switch (a.manifold.kind) {
    case ManifoldKind::euclidean:
        return (a.coords - b.coords).norm();
    case ManifoldKind::circle:
        return circle::distance(a.coords[0], b.coords[0]);
    case ManifoldKind::sphere2:
        return sphere::distance(a.coords, b.coords);
    case ManifoldKind::hyperbolic2:
        return h2::distance(a.coords, b.coords);
    case ManifoldKind::spd:
        return spd::distance(a.as_matrix(), b.as_matrix());
    }
    throw UsageError("unknown manifold kind");
}

ManifoldPoint exp_map(const TangentVector& v) {
    const ManifoldPoint base = validated(v.base);
    if (v.vec.size() != base.coords.size()) {
        throw DataError("tangent vector length does not match its base point");
    }
    require_finite(v.vec, "tangent vector");
    ManifoldPoint out = base;
    switch (base.manifold.kind) {
    case ManifoldKind::euclidean:
        out.coords = base.coords + v.vec;
        return out;
    case ManifoldKind::circle:
        out.coords[0] = circle::exp(base.coords[0], v.vec[0]);
        return out;
    case ManifoldKind::sphere2:
        out.coords = sphere::exp(Eigen::Vector3d(base.coords),
                                 project_sphere_tangent(base.coords, v.vec));
        return out;
    case ManifoldKind::hyperbolic2:
        out.coords = h2::exp(base.coords, v.vec);
        return out;
    case ManifoldKind::spd: {
        Eigen::MatrixXd w = v.as_matrix();
        const double asym = (w - w.transpose()).cwiseAbs().maxCoeff();
        if (asym > kMembershipTol) {
            throw DataError("spd tangent vector is not symmetric");
        }
        return ManifoldPoint::from_matrix(
            base.manifold, spd::exp(base.as_matrix(), spd::symmetrize(w)));
    }
    }
    throw UsageError("unknown manifold kind");
}

TangentVector log_map(const ManifoldPoint& p, const ManifoldPoint& q) {
    require_same_manifold(p.manifold, q.manifold);
    const ManifoldPoint a = validated(p);
    const ManifoldPoint b = validated(q);
    TangentVector out;
    out.base = a;
    switch (a.manifold.kind) {
    case ManifoldKind::euclidean:
        out.vec = b.coords - a.coords;
        return out;
    case ManifoldKind::circle:
        out.vec.resize(1);
        out.vec[0] = circle::log(a.coords[0], b.coords[0]);
        return out;
    case ManifoldKind::sphere2:
        out.vec = sphere::log(a.coords, b.coords);
        return out;
    case ManifoldKind::hyperbolic2:
        out.vec = h2::log(a.coords, b.coords);
        return out;
    case ManifoldKind::spd: {
        Eigen::MatrixXd w = spd::log(a.as_matrix(), b.as_matrix());
        out.vec.resize(w.size());
        Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                 Eigen::RowMajor>>(out.vec.data(), w.rows(),
                                                   w.cols()) = w;
        return out;
    }
    }
    throw UsageError("unknown manifold kind");
}

double inner(const TangentVector& u, const TangentVector& w) {
    require_same_manifold(u.base.manifold, w.base.manifold);
    if ((u.base.coords - w.base.coords).cwiseAbs().maxCoeff() > kMembershipTol) {
        throw DataError("inner product of tangent vectors at different base points");
    }
    switch (u.base.manifold.kind) {
    case ManifoldKind::euclidean:
    case ManifoldKind::circle:
    case ManifoldKind::sphere2:
        return u.vec.dot(w.vec);
    case ManifoldKind::hyperbolic2: {
        const double y = u.base.coords[1];
        return u.vec.dot(w.vec) / (y * y);
    }
    case ManifoldKind::spd:
        return spd::inner(u.base.as_matrix(), u.as_matrix(), w.as_matrix());
    }
    throw UsageError("unknown manifold kind");
}

double norm(const TangentVector& v) { return std::sqrt(inner(v, v)); }

TangentVector zero_tangent(const ManifoldPoint& p) {
    TangentVector v;
    v.base = p;
    v.vec = Eigen::VectorXd::Zero(p.coords.size());
    return v;
}

TangentVector scaled(const TangentVector& v, double s) {
    TangentVector out = v;
    out.vec *= s;
    return out;
}

TangentVector added(const TangentVector& u, const TangentVector& w) {
    TangentVector out = u;
    out.vec += w.vec;
    return out;
}

std::vector<TangentVector> tangent_basis(const ManifoldPoint& p) {
    const ManifoldPoint base = validated(p);
    std::vector<TangentVector> basis;
    switch (base.manifold.kind) {
    case ManifoldKind::euclidean: {
        for (int i = 0; i < base.manifold.param; ++i) {
            TangentVector v = zero_tangent(base);
            v.vec[i] = 1.0;
            basis.push_back(std::move(v));
        }
        return basis;
    }
    case ManifoldKind::circle: {
        TangentVector v = zero_tangent(base);
        v.vec[0] = 1.0;
        basis.push_back(std::move(v));
        return basis;
    }
    case ManifoldKind::sphere2: {
        auto [e1, e2] = sphere::tangent_basis(base.coords);
        TangentVector v1 = zero_tangent(base);
        v1.vec = e1;
        TangentVector v2 = zero_tangent(base);
        v2.vec = e2;
        basis.push_back(std::move(v1));
        basis.push_back(std::move(v2));
        return basis;
    }
    case ManifoldKind::hyperbolic2: {
        const double y = base.coords[1];
        TangentVector v1 = zero_tangent(base);
        v1.vec << y, 0.0;
        TangentVector v2 = zero_tangent(base);
        v2.vec << 0.0, y;
        basis.push_back(std::move(v1));
        basis.push_back(std::move(v2));
        return basis;
    }
    case ManifoldKind::spd: {
        for (const Eigen::MatrixXd& w : spd::tangent_basis(base.as_matrix())) {
            TangentVector v = zero_tangent(base);
            Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic,
                                     Eigen::RowMajor>>(v.vec.data(), w.rows(),
                                                       w.cols()) = w;
            basis.push_back(std::move(v));
        }
        return basis;
    }
    }
    throw UsageError("unknown manifold kind");
}

TangentVector from_basis_coeffs(const ManifoldPoint& p,
                                const std::vector<TangentVector>& basis,
                                const Eigen::VectorXd& c) {
    TangentVector v = zero_tangent(p);
    for (Eigen::Index k = 0; k < c.size(); ++k) {
        v.vec += c[k] * basis[static_cast<std::size_t>(k)].vec;
    }
    return v;
}

} // namespace rquant
