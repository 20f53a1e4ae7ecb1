#include "rquant/traffic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "rquant/errors.hpp"
#include "rquant/spd.hpp"
#include "rquant/transport.hpp"

namespace rquant {

namespace {

constexpr double kEarthRadiusKm = 6371.0;

double kernel_weight(double dist, const KernelConfig& cfg) {
    const double x = dist / cfg.h;
    if (x >= cfg.r) {
        return 0.0;
    }
    return std::exp(-0.5 * x * x) / (std::sqrt(2.0 * M_PI) * cfg.h);
}

NwEstimate nw_estimate_at(const std::vector<TrafficSample>& samples,
                          const Eigen::Vector2d& z, const KernelConfig& cfg,
                          double ridge) {
    NwEstimate est;
    double wsum = 0.0;
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const TrafficSample& s : samples) {
        const double w = kernel_weight((z - s.z).norm(), cfg);
        if (w <= 0.0) {
            continue;
        }
        ++est.support;
        wsum += w;
        mean += w * s.v;
    }
    if (est.support == 0 || !(wsum > 0.0)) {
        return est; // support == 0 signals the empty kernel
    }
    mean /= wsum;
    Eigen::Matrix2d cov = Eigen::Matrix2d::Zero();
    for (const TrafficSample& s : samples) {
        const double w = kernel_weight((z - s.z).norm(), cfg);
        if (w <= 0.0) {
            continue;
        }
        const Eigen::Vector2d d = s.v - mean;
        cov += w * (d * d.transpose());
    }
    cov /= wsum;
    est.mean = mean;
    est.cov = spd::symmetrize(cov) + ridge * Eigen::Matrix2d::Identity();
    return est;
}

ManifoldPoint spd_point(const Eigen::Matrix2d& m) {
    return ManifoldPoint::from_matrix(ManifoldId::spd(2), m);
}

} // namespace

void check_kernel(const KernelConfig& cfg, std::string* warning) {
    if (!(cfg.h > 0.0) || !std::isfinite(cfg.h)) {
        throw UsageError("kernel bandwidth h must be positive and finite");
    }
    if (!(cfg.r > 0.0) || !std::isfinite(cfg.r)) {
        throw UsageError("kernel truncation radius r must be positive and finite");
    }
    if (cfg.r < cfg.h && warning) {
        *warning = "kernel truncation radius r < bandwidth h; the kernel is "
                   "cut off well inside its core";
    }
}

std::vector<TrafficSample> standardize_velocities(
    const std::vector<TrafficSample>& samples, StandardizeInfo* info) {
    if (samples.size() < 2) {
        throw DataError("velocity standardization needs at least 2 samples");
    }
    const double n = static_cast<double>(samples.size());
    Eigen::Vector2d mean = Eigen::Vector2d::Zero();
    for (const TrafficSample& s : samples) {
        mean += s.v;
    }
    mean /= n;
    Eigen::Vector2d var = Eigen::Vector2d::Zero();
    for (const TrafficSample& s : samples) {
        var += (s.v - mean).cwiseAbs2();
    }
    var /= n;

    StandardizeInfo local;
    StandardizeInfo& out = info ? *info : local;
    out = StandardizeInfo{};
    out.mean = mean;
    out.stddev << std::sqrt(var[0]), std::sqrt(var[1]);
    out.degenerate_x = !(out.stddev[0] > 0.0);
    out.degenerate_y = !(out.stddev[1] > 0.0);

    std::vector<TrafficSample> result = samples;
    for (TrafficSample& s : result) {
        s.v -= mean;
        if (!out.degenerate_x) {
            s.v[0] /= out.stddev[0];
        }
        if (!out.degenerate_y) {
            s.v[1] /= out.stddev[1];
        }
    }
    return result;
}

NwEstimate nw_estimate(const std::vector<TrafficSample>& samples,
                       const Eigen::Vector2d& z, const KernelConfig& cfg,
                       double ridge) {
    check_kernel(cfg);
    if (!(ridge >= 0.0)) {
        throw UsageError("covariance ridge must be nonnegative");
    }
    NwEstimate est = nw_estimate_at(samples, z, cfg, ridge);
    if (est.support == 0) {
        throw DataError("no sample within the kernel support of the query point");
    }
    return est;
}

std::vector<NwEstimate> nw_estimate_batch(const std::vector<TrafficSample>& samples,
                                          const std::vector<Eigen::Vector2d>& queries,
                                          const KernelConfig& cfg, double ridge,
                                          Exec exec) {
    check_kernel(cfg);
    if (!(ridge >= 0.0)) {
        throw UsageError("covariance ridge must be nonnegative");
    }
    std::vector<NwEstimate> out(queries.size());
    for_each_index(
        queries.size(),
        [&](std::size_t q) { out[q] = nw_estimate_at(samples, queries[q], cfg, ridge); },
        exec);
    return out;
}

TrafficSummary atm_quantize(const std::vector<TrafficSample>& raw,
                            const AtmOptions& opt, Rng& rng) {
    check_kernel(opt.kernel);
    check_schedule(opt.schedule);
    if (opt.n < 1) {
        throw UsageError("class count n must be >= 1");
    }
    if (raw.size() < opt.n) {
        throw DataError("fewer samples than requested classes");
    }
    if (opt.repeat_m < 1 || opt.epochs < 1) {
        throw UsageError("repetition and epoch counts must be >= 1");
    }

    TrafficSummary summary;
    const std::vector<TrafficSample> samples =
        standardize_velocities(raw, &summary.standardization);
    const std::size_t N = samples.size();

    // Local covariance per sample position, computed on first visit. The
    // kernel at a sample position always contains the sample itself, so the
    // empty-kernel path cannot trigger here; it is kept for the contract.
    std::vector<char> have(N, 0);
    std::vector<Eigen::Matrix2d> sigma(N);
    std::vector<char> empty(N, 0);
    auto sigma_at = [&](std::size_t i) -> const Eigen::Matrix2d* {
        if (!have[i]) {
            have[i] = 1;
            const NwEstimate est =
                nw_estimate_at(samples, samples[i].z, opt.kernel, opt.ridge);
            if (est.support == 0) {
                empty[i] = 1;
            } else {
                sigma[i] = est.cov;
            }
        }
        return empty[i] ? nullptr : &sigma[i];
    };

    // Initial codebook: n random distinct sample covariances.
    Codebook cb;
    cb.manifold = ManifoldId::spd(2);
    {
        std::size_t attempts = 0;
        while (cb.size() < opt.n) {
            if (++attempts > 200 * opt.n) {
                throw DataError(
                    "could not draw n distinct covariance matrices for "
                    "initialization");
            }
            const std::size_t i = rng.uniform_index(N);
            const Eigen::Matrix2d* s = sigma_at(i);
            if (s == nullptr) {
                ++summary.empty_kernel_skips;
                continue;
            }
            const ManifoldPoint cand = spd_point(*s);
            bool distinct = true;
            for (const ManifoldPoint& c : cb.centers) {
                if (distance(c, cand) <= kDistinctTol) {
                    distinct = false;
                    break;
                }
            }
            if (distinct) {
                cb.centers.push_back(cand);
            }
        }
    }

    // Online pass in a seeded random order, reshuffled per epoch.
    std::vector<std::size_t> order(N);
    std::iota(order.begin(), order.end(), 0);
    std::uint64_t t = 0;
    for (std::uint64_t epoch = 0; epoch < opt.epochs; ++epoch) {
        rng.shuffle(order);
        for (std::size_t i : order) {
            const Eigen::Matrix2d* s = sigma_at(i);
            if (s == nullptr) {
                ++summary.empty_kernel_skips;
                if (summary.empty_kernel_skips * 2 > N * opt.epochs) {
                    throw DataError(
                        "more than half of the visited positions had an empty "
                        "kernel");
                }
                continue;
            }
            const std::uint64_t step_index = t / opt.repeat_m + 1;
            if (!clrq_step(cb, spd_point(*s), opt.schedule.gamma(step_index))) {
                ++summary.cut_locus_skips;
            }
            ++t;
        }
    }

    // Labeling pass: every sample's covariance, nearest center.
    std::vector<ManifoldPoint> points;
    points.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        const Eigen::Matrix2d* s = sigma_at(i);
        if (s == nullptr) {
            throw DataError("empty kernel at a sample position during labeling");
        }
        points.push_back(spd_point(*s));
    }
    const std::vector<std::size_t> raw_labels =
        voronoi_labels(cb, points, opt.exec);

    // Complexity ranking of the centers: Loewner order when total, trace
    // otherwise.
    const std::size_t n = cb.size();
    bool total = true;
    for (std::size_t i = 0; i < n && total; ++i) {
        for (std::size_t j = i + 1; j < n && total; ++j) {
            const spd::LoewnerOrder ord = spd::loewner_compare(
                cb.centers[i].as_matrix(), cb.centers[j].as_matrix());
            if (ord == spd::LoewnerOrder::incomparable) {
                total = false;
            }
        }
    }
    summary.loewner_order = total ? "total" : "partial";
    std::vector<std::size_t> rank(n);
    std::iota(rank.begin(), rank.end(), 0);
    if (total) {
        std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
            const spd::LoewnerOrder ord = spd::loewner_compare(
                cb.centers[a].as_matrix(), cb.centers[b].as_matrix());
            if (ord == spd::LoewnerOrder::less_equal) {
                return true;
            }
            if (ord == spd::LoewnerOrder::greater_equal) {
                return false;
            }
            return a < b; // equal centers cannot happen (pairwise distinct)
        });
    } else {
        std::sort(rank.begin(), rank.end(), [&](std::size_t a, std::size_t b) {
            return cb.centers[a].as_matrix().trace() <
                   cb.centers[b].as_matrix().trace();
        });
    }

    Codebook ordered;
    ordered.manifold = cb.manifold;
    std::vector<int> new_label(n);
    for (std::size_t pos = 0; pos < n; ++pos) {
        ordered.centers.push_back(cb.centers[rank[pos]]);
        new_label[rank[pos]] = static_cast<int>(pos) + 1;
    }
    summary.labels.resize(N);
    std::vector<std::uint64_t> counts(n, 0);
    for (std::size_t i = 0; i < N; ++i) {
        summary.labels[i] = new_label[raw_labels[i]];
        ++counts[static_cast<std::size_t>(summary.labels[i] - 1)];
    }
    summary.measure.codebook = ordered;
    summary.measure.counts = counts;
    summary.measure.weights.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        summary.measure.weights[i] =
            static_cast<double>(counts[i]) / static_cast<double>(N);
    }
    return summary;
}

Eigen::MatrixXd compare_summaries(const std::vector<QuantizedMeasure>& measures,
                                  double p) {
    if (measures.size() < 2) {
        throw UsageError("summary comparison needs at least 2 measures");
    }
    for (std::size_t i = 1; i < measures.size(); ++i) {
        require_same_manifold(measures[0].codebook.manifold,
                              measures[i].codebook.manifold);
    }
    const Eigen::Index k = static_cast<Eigen::Index>(measures.size());
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(k, k);
    for (Eigen::Index i = 0; i < k; ++i) {
        for (Eigen::Index j = i + 1; j < k; ++j) {
            const TransportPlan plan =
                discrete_wasserstein(measures[static_cast<std::size_t>(i)],
                                     measures[static_cast<std::size_t>(j)], p);
            d(i, j) = plan.cost;
            d(j, i) = plan.cost;
        }
    }
    return d;
}

Eigen::Vector2d project_planar(double lat_deg, double lon_deg, double ref_lat_deg,
                               double ref_lon_deg) {
    const double deg = M_PI / 180.0;
    auto on_sphere = [&](double lat, double lon) {
        return Eigen::Vector3d(std::cos(lat * deg) * std::cos(lon * deg),
                               std::cos(lat * deg) * std::sin(lon * deg),
                               std::sin(lat * deg));
    };
    const Eigen::Vector3d p = on_sphere(lat_deg, lon_deg);
    const Eigen::Vector3d c = on_sphere(ref_lat_deg, ref_lon_deg);
    const double dot = p.dot(c);
    if (dot <= -1.0 + 1e-12) {
        throw DataError("point is antipodal to the projection reference");
    }
    // Projection from the antipode of the reference onto the tangent plane
    // at the reference: 2 (p - (p.c) c) / (1 + p.c).
    const Eigen::Vector3d planar = 2.0 * (p - dot * c) / (1.0 + dot);
    const double lat0 = ref_lat_deg * deg, lon0 = ref_lon_deg * deg;
    const Eigen::Vector3d east(-std::sin(lon0), std::cos(lon0), 0.0);
    const Eigen::Vector3d north(-std::sin(lat0) * std::cos(lon0),
                                -std::sin(lat0) * std::sin(lon0), std::cos(lat0));
    return kEarthRadiusKm *
           Eigen::Vector2d(planar.dot(east), planar.dot(north));
}

std::vector<TrafficSample> ingest_traffic_csv(
    const std::string& path, const IngestOptions& opt,
    std::vector<std::string>* diagnostics) {
    std::ifstream in(path);
    if (!in) {
        throw DataError("cannot open traffic file '" + path + "'");
    }
    std::string line;
    long line_no = 0;
    // Header: locate the required columns, tolerating extras.
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            field.erase(0, field.find_first_not_of(" \t\r"));
            field.erase(field.find_last_not_of(" \t\r") + 1);
            header.push_back(field);
        }
        break;
    }
    auto col = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        return it == header.end() ? -1
                                  : static_cast<int>(it - header.begin());
    };
    const int cx = col("x"), cy = col("y");
    const int clat = col("lat"), clon = col("lon");
    const int cvx = col("vx"), cvy = col("vy");
    const int ct = col("t");
    const bool planar = cx >= 0 && cy >= 0;
    const bool geographic = clat >= 0 && clon >= 0;
    if ((!planar && !geographic) || cvx < 0 || cvy < 0) {
        throw DataError("traffic header must provide x,y,vx,vy or lat,lon,vx,vy");
    }
    if (geographic && !planar && !opt.ref) {
        throw UsageError("lat/lon input requires a projection reference point");
    }
    if (opt.window && ct < 0) {
        throw UsageError("time windowing requires a t column");
    }

    std::vector<TrafficSample> samples;
    std::vector<double> fields;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') {
            continue;
        }
        fields.clear();
        std::stringstream ss(line);
        std::string field;
        bool bad = false;
        while (std::getline(ss, field, ',')) {
            try {
                fields.push_back(std::stod(field));
            } catch (const std::exception&) {
                bad = true;
                break;
            }
        }
        if (!bad && fields.size() < header.size()) {
            bad = true;
        }
        auto get = [&](int c) { return fields[static_cast<std::size_t>(c)]; };
        TrafficSample s;
        if (!bad) {
            if (planar) {
                s.z << get(cx), get(cy);
            } else {
                try {
                    s.z = project_planar(get(clat), get(clon), opt.ref->first,
                                         opt.ref->second);
                } catch (const DataError&) {
                    bad = true;
                }
            }
        }
        if (!bad) {
            s.v << get(cvx), get(cvy);
            bad = !(s.z.allFinite() && s.v.allFinite());
        }
        if (bad) {
            if (diagnostics) {
                diagnostics->push_back("line " + std::to_string(line_no) +
                                       ": skipped malformed row");
            }
            continue;
        }
        if (opt.window) {
            const double tstamp = get(ct);
            if (tstamp < opt.window->first || tstamp > opt.window->second) {
                continue;
            }
        }
        samples.push_back(s);
    }
    if (samples.empty()) {
        throw DataError("no valid traffic rows in '" + path + "'");
    }
    return samples;
}

} // namespace rquant
