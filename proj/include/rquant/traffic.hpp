#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "rquant/parallel.hpp"
#include "rquant/quantization.hpp"
#include "rquant/rng.hpp"

namespace rquant {

/// One radar return: planar position and planar velocity, abstract units.
struct TrafficSample {
    Eigen::Vector2d z;
    Eigen::Vector2d v;
};

/// Truncated Gaussian kernel K(x) = exp(-x^2/2)/sqrt(2 pi) on |x| < r,
/// applied at scale h to the distance ||z - Z_i||: a sample contributes
/// weight zero exactly when ||z - Z_i|| >= r * h.
struct KernelConfig {
    double h = 1.0;
    double r = 3.0;
};

void check_kernel(const KernelConfig& cfg, std::string* warning = nullptr);

struct StandardizeInfo {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Vector2d stddev = Eigen::Vector2d::Ones();
    /// Population convention: divide by N, not N-1.
    std::string convention = "population";
    bool degenerate_x = false; // component had zero variance, left centered
    bool degenerate_y = false;
};

/// Center and reduce each velocity component to mean 0, standard deviation 1.
std::vector<TrafficSample> standardize_velocities(
    const std::vector<TrafficSample>& samples, StandardizeInfo* info = nullptr);

struct NwEstimate {
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    std::size_t support = 0; // samples with nonzero kernel weight
};

/// Nadaraya-Watson local mean and covariance of the velocities around z,
/// ridge added to keep the estimate strictly positive definite. Throws
/// DataError when no sample falls inside the kernel support.
NwEstimate nw_estimate(const std::vector<TrafficSample>& samples,
                       const Eigen::Vector2d& z, const KernelConfig& cfg,
                       double ridge = 1e-8);

/// Batch version over many query positions; embarrassingly parallel with
/// per-position results identical to the serial pass. Empty-kernel queries
/// surface as support == 0 instead of throwing.
std::vector<NwEstimate> nw_estimate_batch(const std::vector<TrafficSample>& samples,
                                          const std::vector<Eigen::Vector2d>& queries,
                                          const KernelConfig& cfg,
                                          double ridge = 1e-8,
                                          Exec exec = Exec::parallel);

struct AtmOptions {
    std::size_t n = 3;
    KernelConfig kernel;
    double ridge = 1e-8;
    StepSchedule schedule;
    std::uint64_t repeat_m = 1;
    std::uint64_t epochs = 1;
    Exec exec = Exec::parallel;
};

struct TrafficSummary {
    /// Codebook ordered by ascending complexity class.
    QuantizedMeasure measure;
    /// "total" when the Loewner order ranks all centers, else "partial";
    /// partial summaries fall back to trace ordering for the class labels.
    std::string loewner_order;
    /// Per-sample class label in [1..n], 1 = lowest complexity.
    std::vector<int> labels;
    StandardizeInfo standardization;
    std::uint64_t empty_kernel_skips = 0;
    std::uint64_t cut_locus_skips = 0;
};

/// The covariance-field quantizer: standardizes velocities, visits samples in
/// a seeded random order, estimates the local covariance at each visited
/// position and feeds it to the online quantizer on spd(2); a final labeling
/// pass assigns every sample to its class.
TrafficSummary atm_quantize(const std::vector<TrafficSample>& samples,
                            const AtmOptions& opt, Rng& rng);

/// Symmetric matrix of pairwise transport costs between summaries.
Eigen::MatrixXd compare_summaries(const std::vector<QuantizedMeasure>& measures,
                                  double p = 1.0);

/// Stereographic projection onto the tangent plane at the reference point,
/// scaled by the Earth radius (km). Throws DataError at the antipode.
Eigen::Vector2d project_planar(double lat_deg, double lon_deg, double ref_lat_deg,
                               double ref_lon_deg);

struct IngestOptions {
    std::optional<std::pair<double, double>> ref;    // lat, lon
    std::optional<std::pair<double, double>> window; // on the optional t column
};

/// Reads header `x,y,vx,vy` (planar) or `lat,lon,vx,vy` (requires ref),
/// optional `t` column for windowing. Bad rows are skipped and reported in
/// `diagnostics` with their line numbers; zero valid rows is an error.
std::vector<TrafficSample> ingest_traffic_csv(
    const std::string& path, const IngestOptions& opt = {},
    std::vector<std::string>* diagnostics = nullptr);

} // namespace rquant
