#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rquant/manifold.hpp"
#include "rquant/parallel.hpp"
#include "rquant/rng.hpp"

namespace rquant {

/// Centers must stay pairwise distinct by more than this.
inline constexpr double kDistinctTol = 1e-10;

struct Codebook {
    ManifoldId manifold;
    std::vector<ManifoldPoint> centers;

    std::size_t size() const { return centers.size(); }
};

/// Throws DataError unless n >= 1, all centers live on `manifold`, and the
/// centers are pairwise distinct.
void check_codebook(const Codebook& cb);

/// Discrete measure carried by a codebook. Weights are cell masses; counts
/// are kept so exact statements (sums, emptiness) stay in integer arithmetic.
struct QuantizedMeasure {
    Codebook codebook;
    std::vector<double> weights;
    std::vector<std::uint64_t> counts;
};

/// gamma_k = gamma0 * b / (b + k); with gamma0 in (0,1) and b > 0 every step
/// lies in (0,1), the sum diverges and the square sum converges.
struct StepSchedule {
    double gamma0 = 0.9;
    double b = 50.0;

    double gamma(std::uint64_t k) const {
        return gamma0 * b / (b + static_cast<double>(k));
    }
};

void check_schedule(const StepSchedule& s);

/// Index of the nearest center, ties broken by lowest index.
std::size_t voronoi_assign(const Codebook& cb, const ManifoldPoint& x);

/// Nearest-center labels for a whole dataset; elementwise parallel,
/// bit-identical to the serial pass.
std::vector<std::size_t> voronoi_labels(const Codebook& cb,
                                        const std::vector<ManifoldPoint>& data,
                                        Exec exec = Exec::parallel);

/// (1/N) sum_k min_i d(x_k, a_i)^p.
double empirical_distortion(const Codebook& cb,
                            const std::vector<ManifoldPoint>& data, double p = 2.0,
                            Exec exec = Exec::parallel);

/// Gradient of the quadratic distortion: component i is
/// -(2/N) sum over cell i of log_map(a_i, x). Quadratic case only.
std::vector<TangentVector> distortion_gradient(
    const Codebook& cb, const std::vector<ManifoldPoint>& data,
    Exec exec = Exec::parallel);

struct KarcherResult {
    ManifoldPoint mean;
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;
};

/// Fixed-point iteration x <- exp_x(mean of log_x(x_i)); stops when the
/// tangent mean norm drops below tol.
KarcherResult karcher_mean(const std::vector<ManifoldPoint>& data,
                           double tol = 1e-9, int max_iter = 200);

/// One online update: the winning center moves toward x by fraction gamma
/// along the geodesic; everything else is untouched. A cut-locus error
/// leaves the codebook unchanged and reports false.
bool clrq_step(Codebook& cb, const ManifoldPoint& x, double gamma);

struct Checkpoint {
    std::uint64_t k = 0; // observations consumed
    double distortion = 0.0;
    std::optional<double> w1_trace; // circle runs only, when requested
    Codebook codebook;
};

enum class InitPolicy { prefix_distinct, spread };

struct ClrqOptions {
    std::size_t n = 3;
    StepSchedule schedule;
    std::uint64_t repeat_m = 1; // hold gamma_k over blocks of m observations
    InitPolicy init = InitPolicy::prefix_distinct;
    std::optional<Codebook> initial_codebook; // overrides the init policy
    std::uint64_t epochs = 1;
    std::uint64_t checkpoint_every = 0; // 0: about 20 checkpoints
    bool trace_w1 = false;              // circle only
    double distortion_p = 2.0;
    /// Checkpoint distortion uses the full dataset up to this size, else a
    /// fixed held-out subsample of eval_subsample points.
    std::size_t eval_budget = 200000;
    std::size_t eval_subsample = 10000;
    Exec exec = Exec::parallel;
};

struct RunReport {
    std::uint64_t seed = 0;
    std::size_t n = 0;
    StepSchedule schedule;
    std::uint64_t repeat_m = 1;
    std::uint64_t epochs = 1;
    std::string init_policy;
    std::string rng_algorithm;
    std::vector<Checkpoint> checkpoints;
    Codebook final_codebook;
    QuantizedMeasure measure;
    std::uint64_t steps_taken = 0;
    std::uint64_t cut_locus_skips = 0;
};

/// Online competitive-learning quantization over the dataset in stream
/// order, gamma_k held constant across blocks of repeat_m observations,
/// cycled for `epochs` passes. The rng drives initialization only.
RunReport clrq_run(const std::vector<ManifoldPoint>& data, const ClrqOptions& opt,
                   Rng& rng);

/// Cell masses of the codebook's Voronoi partition under the empirical law.
QuantizedMeasure quantized_measure(const Codebook& cb,
                                   const std::vector<ManifoldPoint>& data,
                                   Exec exec = Exec::parallel);

} // namespace rquant
