#pragma once

#include <vector>

#include <Eigen/Core>

namespace rquant::spd {

/// Inputs with eigenvalues below this are rejected, not clamped; the
/// affine-invariant distance blows up logarithmically near the boundary.
inline constexpr double kEigFloor = 1e-12;

/// Asymmetry tolerated before an input is rejected outright.
inline constexpr double kSymTol = 1e-9;

struct SymEig {
    Eigen::VectorXd values;  // ascending
    Eigen::MatrixXd vectors; // columns
};

/// Symmetric eigendecomposition; closed-form quadratic for 2x2 (branch safe
/// at repeated eigenvalues), Eigen's solver otherwise.
SymEig sym_eig(const Eigen::MatrixXd& s);

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m);

/// Membership check. Asymmetry below kSymTol is symmetrized away; eigenvalues
/// within kSymTol below kEigFloor are floored (drift absorption); anything
/// worse throws DataError. Callers that want real regularization of
/// near-singular data add their own ridge before calling.
Eigen::MatrixXd validated(const Eigen::MatrixXd& sigma);

Eigen::MatrixXd sqrt(const Eigen::MatrixXd& sigma);
Eigen::MatrixXd inv_sqrt(const Eigen::MatrixXd& sigma);

/// Matrix exponential of a symmetric matrix.
Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& w);

/// Matrix logarithm of an SPD matrix.
Eigen::MatrixXd sym_log(const Eigen::MatrixXd& sigma);

/// Affine-invariant metric: tr(S^{-1/2} W1 S^{-1} W2 S^{-1/2}).
double inner(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& w1,
             const Eigen::MatrixXd& w2);

/// Geodesic distance sqrt(sum log^2 lambda_i(S1^{-1/2} S2 S1^{-1/2})).
double distance(const Eigen::MatrixXd& sigma1, const Eigen::MatrixXd& sigma2);

/// exp_S(W) = S^{1/2} exp(S^{-1/2} W S^{-1/2}) S^{1/2}.
Eigen::MatrixXd exp(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& w);

/// log_{S1}(S2) = S1^{1/2} log(S1^{-1/2} S2 S1^{-1/2}) S1^{1/2}.
Eigen::MatrixXd log(const Eigen::MatrixXd& sigma1, const Eigen::MatrixXd& sigma2);

enum class LoewnerOrder { less_equal, greater_equal, equal, incomparable };

/// Classification of A - B by eigenvalue signs, zero tolerance 1e-10.
LoewnerOrder loewner_compare(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

/// Orthonormal basis of the tangent space (symmetric matrices) at sigma
/// under the affine-invariant metric: S^{1/2} E_k S^{1/2} for the standard
/// Frobenius-orthonormal symmetric basis E_k.
std::vector<Eigen::MatrixXd> tangent_basis(const Eigen::MatrixXd& sigma);

} // namespace rquant::spd
