#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

namespace rquant {

enum class ManifoldKind { euclidean, circle, sphere2, hyperbolic2, spd };

/// Identifies a manifold instance. `param` is the ambient dimension for
/// euclidean (>= 1) and the matrix size for spd (>= 2); unused otherwise.
struct ManifoldId {
    ManifoldKind kind = ManifoldKind::euclidean;
    int param = 1;

    static ManifoldId euclidean(int d);
    static ManifoldId circle();
    static ManifoldId sphere2();
    static ManifoldId hyperbolic2();
    static ManifoldId spd(int n);

    bool operator==(const ManifoldId& o) const {
        return kind == o.kind && effective_param() == o.effective_param();
    }
    bool operator!=(const ManifoldId& o) const { return !(*this == o); }

    /// param with the don't-care cases collapsed, so circle == circle even if
    /// the params were constructed differently.
    int effective_param() const {
        return (kind == ManifoldKind::euclidean || kind == ManifoldKind::spd)
                   ? param
                   : 0;
    }

    /// Intrinsic dimension: 1, 2, 2, d, n(n+1)/2.
    int dim() const;
    /// Length of the coordinate vector: 1, 3, 2, d, n*n.
    int coord_size() const;
    /// Serialization tag: "euclidean", "circle", "sphere2", "hyperbolic2", "spd".
    std::string tag() const;
    static ManifoldId from_tag(const std::string& tag, int param);
};

/// A point on a manifold. Coordinate layout: angle in [0,2pi) for circle,
/// unit 3-vector for sphere2, (x, y) with y > 0 for hyperbolic2, plain vector
/// for euclidean, row-major symmetric matrix for spd.
struct ManifoldPoint {
    ManifoldId manifold;
    Eigen::VectorXd coords;

    /// The spd coordinate block viewed as a matrix.
    Eigen::MatrixXd as_matrix() const;
    static ManifoldPoint from_matrix(const ManifoldId& id, const Eigen::MatrixXd& m);
};

/// A tangent vector at `base`, same coordinate layout as the point.
struct TangentVector {
    ManifoldPoint base;
    Eigen::VectorXd vec;

    Eigen::MatrixXd as_matrix() const;
};

/// Validates membership with tolerance 1e-9 and absorbs sub-tolerance drift
/// (sphere renormalization, spd symmetrization and eigenvalue floor, circle
/// angle normalization); throws DataError beyond that.
ManifoldPoint validated(const ManifoldPoint& p);

double distance(const ManifoldPoint& p, const ManifoldPoint& q);

ManifoldPoint exp_map(const TangentVector& v);

/// Throws CutLocusError for a sphere2 antipode; defined everywhere else.
TangentVector log_map(const ManifoldPoint& p, const ManifoldPoint& q);

/// Riemannian inner product at the common base point.
double inner(const TangentVector& u, const TangentVector& w);

double norm(const TangentVector& v);

TangentVector zero_tangent(const ManifoldPoint& p);

TangentVector scaled(const TangentVector& v, double s);

/// u + w at the same base point.
TangentVector added(const TangentVector& u, const TangentVector& w);

/// Orthonormal basis of the tangent space at p, used for normal-coordinate
/// finite differences and for pushing perturbations through exp_map.
std::vector<TangentVector> tangent_basis(const ManifoldPoint& p);

/// Composes p's basis with coefficients c: sum_k c_k e_k.
TangentVector from_basis_coeffs(const ManifoldPoint& p,
                                const std::vector<TangentVector>& basis,
                                const Eigen::VectorXd& c);

void require_same_manifold(const ManifoldId& a, const ManifoldId& b);

} // namespace rquant
