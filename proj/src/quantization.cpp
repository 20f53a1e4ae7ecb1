#include "rquant/quantization.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rquant/errors.hpp"
#include "rquant/transport.hpp"

namespace rquant {

namespace {

void require_data(const std::vector<ManifoldPoint>& data) {
    if (data.empty()) {
        throw DataError("empty dataset");
    }
}

void require_on_manifold(const ManifoldId& id,
                         const std::vector<ManifoldPoint>& data) {
    for (const ManifoldPoint& x : data) {
        require_same_manifold(id, x.manifold);
    }
}

std::size_t nearest_center(const Codebook& cb, const ManifoldPoint& x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < cb.size(); ++i) {
        const double d = distance(cb.centers[i], x);
        if (d < best_d) { // strict: ties keep the lowest index
            best_d = d;
            best = i;
        }
    }
    return best;
}

} // namespace

void check_codebook(const Codebook& cb) {
    if (cb.centers.empty()) {
        throw DataError("codebook must hold at least one center");
    }
    for (const ManifoldPoint& c : cb.centers) {
        require_same_manifold(cb.manifold, c.manifold);
    }
    for (std::size_t i = 0; i < cb.size(); ++i) {
        for (std::size_t j = i + 1; j < cb.size(); ++j) {
            if (distance(cb.centers[i], cb.centers[j]) <= kDistinctTol) {
                throw DataError("codebook centers " + std::to_string(i) + " and " +
                                std::to_string(j) + " coincide");
            }
        }
    }
}

void check_schedule(const StepSchedule& s) {
    if (!(s.gamma0 > 0.0 && s.gamma0 < 1.0)) {
        throw UsageError("schedule gamma0 must lie in (0,1)");
    }
    if (!(s.b > 0.0) || !std::isfinite(s.b)) {
        throw UsageError("schedule b must be positive");
    }
}

std::size_t voronoi_assign(const Codebook& cb, const ManifoldPoint& x) {
    check_codebook(cb);
    require_same_manifold(cb.manifold, x.manifold);
    return nearest_center(cb, x);
}

std::vector<std::size_t> voronoi_labels(const Codebook& cb,
                                        const std::vector<ManifoldPoint>& data,
                                        Exec exec) {
    check_codebook(cb);
    require_data(data);
    require_on_manifold(cb.manifold, data);
    std::vector<std::size_t> labels(data.size());
    for_each_index(
        data.size(), [&](std::size_t k) { labels[k] = nearest_center(cb, data[k]); },
        exec);
    return labels;
}

double empirical_distortion(const Codebook& cb,
                            const std::vector<ManifoldPoint>& data, double p,
                            Exec exec) {
    check_codebook(cb);
    require_data(data);
    require_on_manifold(cb.manifold, data);
    if (!(p >= 1.0)) {
        throw UsageError("distortion exponent must be >= 1");
    }
    const double total = sum_reduce(
        data.size(),
        [&](std::size_t k) {
            double best = std::numeric_limits<double>::infinity();
            for (const ManifoldPoint& c : cb.centers) {
                best = std::min(best, distance(c, data[k]));
            }
            return p == 2.0 ? best * best : std::pow(best, p);
        },
        exec);
    return total / static_cast<double>(data.size());
}

std::vector<TangentVector> distortion_gradient(
    const Codebook& cb, const std::vector<ManifoldPoint>& data, Exec exec) {
    check_codebook(cb);
    require_data(data);
    require_on_manifold(cb.manifold, data);
    const std::size_t n = cb.size();
    const Eigen::Index csize = cb.centers[0].coords.size();

    using Acc = std::vector<Eigen::VectorXd>;
    Acc sums = reduce_indexed<Acc>(
        data.size(),
        [&] { return Acc(n, Eigen::VectorXd::Zero(csize)); },
        [&](Acc& acc, std::size_t k) {
            const std::size_t win = nearest_center(cb, data[k]);
            acc[win] += log_map(cb.centers[win], data[k]).vec;
        },
        [](Acc& into, const Acc& from) {
            for (std::size_t i = 0; i < into.size(); ++i) {
                into[i] += from[i];
            }
        },
        exec);

    std::vector<TangentVector> grad;
    grad.reserve(n);
    const double scale = -2.0 / static_cast<double>(data.size());
    for (std::size_t i = 0; i < n; ++i) {
        TangentVector g = zero_tangent(cb.centers[i]);
        g.vec = scale * sums[i];
        grad.push_back(std::move(g));
    }
    return grad;
}

KarcherResult karcher_mean(const std::vector<ManifoldPoint>& data, double tol,
                           int max_iter) {
    require_data(data);
    require_on_manifold(data[0].manifold, data);
    const std::size_t n = data.size();
    const Eigen::Index csize = data[0].coords.size();

    KarcherResult res;
    res.mean = validated(data[0]);
    for (int it = 0; it <= max_iter; ++it) {
        const Eigen::VectorXd sum = reduce_indexed<Eigen::VectorXd>(
            n, [&] { return Eigen::VectorXd::Zero(csize); },
            [&](Eigen::VectorXd& acc, std::size_t k) {
                acc += log_map(res.mean, data[k]).vec;
            },
            [](Eigen::VectorXd& into, const Eigen::VectorXd& from) {
                into += from;
            },
            Exec::parallel);
        TangentVector step = zero_tangent(res.mean);
        step.vec = sum / static_cast<double>(n);
        res.grad_norm = norm(step);
        if (res.grad_norm < tol) {
            res.converged = true;
            return res;
        }
        if (it == max_iter) {
            break;
        }
        res.mean = exp_map(step);
        res.iterations = it + 1;
    }
    res.converged = false;
    return res;
}

bool clrq_step(Codebook& cb, const ManifoldPoint& x, double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0)) {
        throw UsageError("competitive learning step size must lie in (0,1)");
    }
    const std::size_t win = nearest_center(cb, x);
    try {
        const TangentVector dir = log_map(cb.centers[win], x);
        // Moving a fraction gamma toward x keeps the winner strictly nearest
        // to x, so pairwise distinctness survives without a check.
        cb.centers[win] = exp_map(scaled(dir, gamma));
        return true;
    } catch (const CutLocusError&) {
        return false;
    }
}

RunReport clrq_run(const std::vector<ManifoldPoint>& data, const ClrqOptions& opt,
                   Rng& rng) {
    require_data(data);
    check_schedule(opt.schedule);
    if (opt.repeat_m < 1) {
        throw UsageError("repetition count m must be >= 1");
    }
    if (opt.epochs < 1) {
        throw UsageError("epoch count must be >= 1");
    }
    const ManifoldId manifold = data[0].manifold;
    require_on_manifold(manifold, data);
    if (opt.trace_w1 && manifold.kind != ManifoldKind::circle) {
        throw UsageError("the W1 trace is only defined on the circle");
    }

    RunReport report;
    report.seed = rng.seed();
    report.schedule = opt.schedule;
    report.repeat_m = opt.repeat_m;
    report.epochs = opt.epochs;
    report.rng_algorithm = std::string(Rng::kAlgorithm);

    // Initial codebook.
    Codebook cb;
    cb.manifold = manifold;
    if (opt.initial_codebook) {
        cb = *opt.initial_codebook;
        require_same_manifold(manifold, cb.manifold);
        check_codebook(cb);
        report.init_policy = "explicit";
    } else {
        const std::size_t n = opt.n;
        if (n < 1) {
            throw UsageError("codebook size n must be >= 1");
        }
        if (opt.init == InitPolicy::prefix_distinct) {
            for (const ManifoldPoint& x : data) {
                bool distinct = true;
                for (const ManifoldPoint& c : cb.centers) {
                    if (distance(c, x) <= kDistinctTol) {
                        distinct = false;
                        break;
                    }
                }
                if (distinct) {
                    cb.centers.push_back(validated(x));
                }
                if (cb.size() == n) {
                    break;
                }
            }
            if (cb.size() < n) {
                throw DataError("dataset holds fewer than n distinct points");
            }
            report.init_policy = "prefix-distinct";
        } else {
            // Spread (k-means++ style) over a prefix window: each next center
            // is drawn with probability proportional to its squared distance
            // to the chosen set.
            const std::size_t window = std::min<std::size_t>(data.size(), 2048);
            cb.centers.push_back(validated(data[rng.uniform_index(window)]));
            std::vector<double> d2(window);
            while (cb.size() < n) {
                double total = 0.0;
                for (std::size_t k = 0; k < window; ++k) {
                    double best = std::numeric_limits<double>::infinity();
                    for (const ManifoldPoint& c : cb.centers) {
                        best = std::min(best, distance(c, data[k]));
                    }
                    d2[k] = best <= kDistinctTol ? 0.0 : best * best;
                    total += d2[k];
                }
                if (!(total > 0.0)) {
                    throw DataError("dataset holds fewer than n distinct points");
                }
                double target = rng.uniform() * total;
                std::size_t pick = window - 1;
                for (std::size_t k = 0; k < window; ++k) {
                    target -= d2[k];
                    if (target <= 0.0 && d2[k] > 0.0) {
                        pick = k;
                        break;
                    }
                }
                cb.centers.push_back(validated(data[pick]));
            }
            report.init_policy = "spread";
        }
    }
    check_codebook(cb);
    report.n = cb.size();

    // Evaluation set: the full dataset when affordable, else a fixed
    // held-out subsample excluded from the training stream.
    std::vector<char> held_out(data.size(), 0);
    std::vector<ManifoldPoint> eval_points;
    if (data.size() <= opt.eval_budget) {
        eval_points = data;
    } else {
        Rng eval_rng = rng.split(0x6576616cULL); // "eval"
        std::vector<std::size_t> idx(data.size());
        std::iota(idx.begin(), idx.end(), 0);
        for (std::size_t k = 0; k < opt.eval_subsample; ++k) {
            const std::size_t j = k + eval_rng.uniform_index(idx.size() - k);
            std::swap(idx[k], idx[j]);
        }
        idx.resize(opt.eval_subsample);
        std::sort(idx.begin(), idx.end());
        eval_points.reserve(idx.size());
        for (std::size_t k : idx) {
            held_out[k] = 1;
            eval_points.push_back(data[k]);
        }
    }

    std::vector<double> eval_angles;
    std::vector<double> eval_weights;
    if (opt.trace_w1) {
        eval_angles.reserve(eval_points.size());
        for (const ManifoldPoint& x : eval_points) {
            eval_angles.push_back(x.coords[0]);
        }
        eval_weights.assign(eval_points.size(),
                            1.0 / static_cast<double>(eval_points.size()));
    }

    std::vector<std::size_t> train_idx;
    train_idx.reserve(data.size());
    for (std::size_t k = 0; k < data.size(); ++k) {
        if (!held_out[k]) {
            train_idx.push_back(k);
        }
    }
    if (train_idx.empty()) {
        throw DataError("held-out evaluation subsample consumed every point");
    }

    const std::uint64_t total_obs =
        static_cast<std::uint64_t>(train_idx.size()) * opt.epochs;
    const std::uint64_t every =
        opt.checkpoint_every > 0
            ? opt.checkpoint_every
            : std::max<std::uint64_t>(1, total_obs / 20);

    auto emit_checkpoint = [&](std::uint64_t k) {
        Checkpoint cp;
        cp.k = k;
        cp.distortion =
            empirical_distortion(cb, eval_points, opt.distortion_p, opt.exec);
        if (opt.trace_w1) {
            const QuantizedMeasure qm = quantized_measure(cb, eval_points, opt.exec);
            std::vector<double> cb_angles;
            cb_angles.reserve(cb.size());
            for (const ManifoldPoint& c : cb.centers) {
                cb_angles.push_back(c.coords[0]);
            }
            cp.w1_trace = circle_w1(cb_angles, qm.weights, eval_angles, eval_weights);
        }
        cp.codebook = cb;
        report.checkpoints.push_back(std::move(cp));
    };

    emit_checkpoint(0);
    std::uint64_t t = 0;
    for (std::uint64_t epoch = 0; epoch < opt.epochs; ++epoch) {
        for (std::size_t k : train_idx) {
            // gamma_k held constant across blocks of m observations.
            const std::uint64_t step_index = t / opt.repeat_m + 1;
            const double gamma = opt.schedule.gamma(step_index);
            if (clrq_step(cb, data[k], gamma)) {
                ++report.steps_taken;
            } else {
                ++report.cut_locus_skips;
            }
            ++t;
            if (t % every == 0 && t != total_obs) {
                emit_checkpoint(t);
            }
        }
    }
    emit_checkpoint(total_obs);

    report.final_codebook = cb;
    report.measure = quantized_measure(cb, data, opt.exec);
    return report;
}

QuantizedMeasure quantized_measure(const Codebook& cb,
                                   const std::vector<ManifoldPoint>& data,
                                   Exec exec) {
    const std::vector<std::size_t> labels = voronoi_labels(cb, data, exec);
    QuantizedMeasure qm;
    qm.codebook = cb;
    qm.counts.assign(cb.size(), 0);
    for (std::size_t lab : labels) {
        ++qm.counts[lab];
    }
    qm.weights.resize(cb.size());
    for (std::size_t i = 0; i < cb.size(); ++i) {
        qm.weights[i] = static_cast<double>(qm.counts[i]) /
                        static_cast<double>(data.size());
    }
    return qm;
}

} // namespace rquant
