#include "rquant/spd.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "rquant/errors.hpp"

namespace rquant::spd {

namespace {

constexpr double kLoewnerTol = 1e-10;

Eigen::MatrixXd apply_spectral(const Eigen::MatrixXd& s, double (*f)(double)) {
    SymEig eig = sym_eig(symmetrize(s));
    Eigen::VectorXd mapped(eig.values.size());
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        mapped[i] = f(eig.values[i]);
    }
    return symmetrize(eig.vectors * mapped.asDiagonal() * eig.vectors.transpose());
}

double log_checked(double x) {
    if (x < kEigFloor) {
        throw NumericError("matrix logarithm of a non-positive-definite input");
    }
    return std::log(x);
}

double sqrt_checked(double x) {
    if (x < 0.0) {
        throw NumericError("matrix square root of an indefinite input");
    }
    return std::sqrt(x);
}

double inv_sqrt_checked(double x) {
    if (x < kEigFloor) {
        throw NumericError("inverse square root of a near-singular input");
    }
    return 1.0 / std::sqrt(x);
}

} // namespace

SymEig sym_eig(const Eigen::MatrixXd& s) {
    const Eigen::Index n = s.rows();
    SymEig out;
    if (n == 1) {
        out.values = Eigen::VectorXd::Constant(1, s(0, 0));
        out.vectors = Eigen::MatrixXd::Identity(1, 1);
        return out;
    }
    if (n == 2) {
        const double a = s(0, 0), b = s(0, 1), c = s(1, 1);
        const double half_tr = 0.5 * (a + c);
        const double disc = std::hypot(0.5 * (a - c), b);
        out.values = Eigen::VectorXd(2);
        out.values << half_tr - disc, half_tr + disc;
        out.vectors = Eigen::MatrixXd(2, 2);
        if (disc < 1e-300) {
            out.vectors.setIdentity();
            return out;
        }
        // Pick the numerically larger residual column for the top eigenvector.
        Eigen::Vector2d v2;
        if (std::abs(out.values[1] - a) > std::abs(out.values[1] - c)) {
            v2 << b, out.values[1] - a;
        } else {
            v2 << out.values[1] - c, b;
        }
        const double norm = v2.norm();
        if (norm < 1e-300) {
            out.vectors.setIdentity();
            return out;
        }
        v2 /= norm;
        out.vectors.col(1) = v2;
        out.vectors.col(0) = Eigen::Vector2d(-v2[1], v2[0]);
        return out;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(s);
    if (solver.info() != Eigen::Success) {
        throw NumericError("symmetric eigendecomposition failed to converge");
    }
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    return out;
}

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) {
    return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd validated(const Eigen::MatrixXd& sigma) {
    if (sigma.rows() != sigma.cols() || sigma.rows() < 1) {
        throw DataError("covariance matrix must be square and non-empty");
    }
    const double asym = (sigma - sigma.transpose()).cwiseAbs().maxCoeff();
    if (asym >= kSymTol) {
        throw DataError("matrix is not symmetric (max asymmetry " +
                        std::to_string(asym) + ")");
    }
    Eigen::MatrixXd s = symmetrize(sigma);
    SymEig eig = sym_eig(s);
    if (eig.values[0] >= kEigFloor) {
        return s;
    }
    // Two-zone policy: eigenvalues within kSymTol below the floor are
    // floating-point drift and get floored; anything further below is a
    // genuinely degenerate input and is rejected, never clamped silently.
    if (eig.values[0] < kEigFloor - kSymTol) {
        throw DataError("matrix is not positive definite (smallest eigenvalue " +
                        std::to_string(eig.values[0]) + ")");
    }
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        eig.values[i] = std::max(eig.values[i], kEigFloor);
    }
    return symmetrize(eig.vectors * eig.values.asDiagonal() *
                      eig.vectors.transpose());
}

Eigen::MatrixXd sqrt(const Eigen::MatrixXd& sigma) {
    return apply_spectral(sigma, &sqrt_checked);
}

Eigen::MatrixXd inv_sqrt(const Eigen::MatrixXd& sigma) {
    return apply_spectral(sigma, &inv_sqrt_checked);
}

Eigen::MatrixXd sym_exp(const Eigen::MatrixXd& w) {
    return apply_spectral(w, +[](double x) { return std::exp(x); });
}

Eigen::MatrixXd sym_log(const Eigen::MatrixXd& sigma) {
    return apply_spectral(sigma, &log_checked);
}

double inner(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& w1,
             const Eigen::MatrixXd& w2) {
    Eigen::MatrixXd a = inv_sqrt(sigma);
    Eigen::MatrixXd u1 = a * symmetrize(w1) * a;
    Eigen::MatrixXd u2 = a * symmetrize(w2) * a;
    return (u1.array() * u2.array()).sum();
}

double distance(const Eigen::MatrixXd& sigma1, const Eigen::MatrixXd& sigma2) {
    Eigen::MatrixXd a = inv_sqrt(sigma1);
    SymEig eig = sym_eig(symmetrize(a * sigma2 * a));
    double acc = 0.0;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        const double l = log_checked(eig.values[i]);
        acc += l * l;
    }
    return std::sqrt(acc);
}

Eigen::MatrixXd exp(const Eigen::MatrixXd& sigma, const Eigen::MatrixXd& w) {
    Eigen::MatrixXd r = sqrt(sigma);
    Eigen::MatrixXd a = inv_sqrt(sigma);
    return symmetrize(r * sym_exp(a * symmetrize(w) * a) * r);
}

Eigen::MatrixXd log(const Eigen::MatrixXd& sigma1, const Eigen::MatrixXd& sigma2) {
    Eigen::MatrixXd r = sqrt(sigma1);
    Eigen::MatrixXd a = inv_sqrt(sigma1);
    return symmetrize(r * sym_log(symmetrize(a * sigma2 * a)) * r);
}

LoewnerOrder loewner_compare(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    SymEig eig = sym_eig(symmetrize(a - b));
    bool has_pos = false, has_neg = false;
    for (Eigen::Index i = 0; i < eig.values.size(); ++i) {
        if (eig.values[i] > kLoewnerTol) {
            has_pos = true;
        } else if (eig.values[i] < -kLoewnerTol) {
            has_neg = true;
        }
    }
    if (has_pos && has_neg) {
        return LoewnerOrder::incomparable;
    }
    if (has_pos) {
        return LoewnerOrder::greater_equal;
    }
    if (has_neg) {
        return LoewnerOrder::less_equal;
    }
    return LoewnerOrder::equal;
}

std::vector<Eigen::MatrixXd> tangent_basis(const Eigen::MatrixXd& sigma) {
    const Eigen::Index n = sigma.rows();
    Eigen::MatrixXd r = sqrt(sigma);
    std::vector<Eigen::MatrixXd> basis;
    basis.reserve(static_cast<std::size_t>(n * (n + 1) / 2));
    const double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = i; j < n; ++j) {
            Eigen::MatrixXd e = Eigen::MatrixXd::Zero(n, n);
            if (i == j) {
                e(i, i) = 1.0;
            } else {
                e(i, j) = inv_sqrt2;
                e(j, i) = inv_sqrt2;
            }
            basis.push_back(symmetrize(r * e * r));
        }
    }
    return basis;
}

} // namespace rquant::spd
