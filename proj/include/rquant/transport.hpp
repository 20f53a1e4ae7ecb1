#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "rquant/quantization.hpp"

namespace rquant {

/// Coupling between two discrete measures. Row sums reproduce the source
/// weights and column sums the target weights, each within 1e-9.
struct TransportPlan {
    Eigen::MatrixXd flows;
    double p = 1.0;
    /// (sum_ij flow_ij * d_ij^p)^(1/p).
    double cost = 0.0;
};

/// Exact solution of the transportation LP min sum_ij pi_ij c_ij subject to
/// marginals (a, b), by the transportation simplex: northwest-corner start,
/// MODI improvement with Bland's entering rule, rank-based epsilon
/// perturbation of the marginals against degenerate cycling. The reported
/// flows are re-solved on the optimal basis from the unperturbed marginals,
/// so the perturbation never appears in the output. `cost` is the raw LP
/// objective; the caller applies any exponent.
TransportPlan solve_transport(const Eigen::MatrixXd& cost,
                              const Eigen::VectorXd& a, const Eigen::VectorXd& b);

/// Wasserstein cost between quantized measures with ground cost d(A_i,B_j)^p.
/// Supports up to 256 atoms each; weights must each sum to 1 within 1e-9.
TransportPlan discrete_wasserstein(const QuantizedMeasure& mu,
                                   const QuantizedMeasure& nu, double p = 1.0);

/// W1 on the circle between weighted atom sets, computed exactly: the
/// cumulative-difference step function over the merged sorted atoms, minus
/// its length-weighted median level, integrated in arc length. Coincident
/// atoms (within 1e-12) are merged first.
double circle_w1(const std::vector<double>& mu_atoms,
                 const std::vector<double>& mu_weights,
                 const std::vector<double>& nu_atoms,
                 const std::vector<double>& nu_weights);

double circle_w1(const QuantizedMeasure& mu, const QuantizedMeasure& nu);

/// Both measures re-expressed on the union of their supports (zero masses
/// added) before solving; the cost matches the unpadded computation.
std::pair<double, TransportPlan> padded_union_compare(const QuantizedMeasure& mu,
                                                      const QuantizedMeasure& nu,
                                                      double p = 1.0);

} // namespace rquant
