// Times each data-parallel kernel against its serial reference. Run with
// --benchmark_filter=distortion (etc.) to narrow down.

#include <vector>

#include <benchmark/benchmark.h>

#include "rquant/parallel.hpp"
#include "rquant/quantization.hpp"
#include "rquant/sampling.hpp"
#include "rquant/traffic.hpp"

namespace {

using rquant::Codebook;
using rquant::Exec;
using rquant::ManifoldId;
using rquant::ManifoldPoint;

struct SphereFixture {
    std::vector<ManifoldPoint> data;
    Codebook cb;

    explicit SphereFixture(std::size_t n_points, std::size_t n_centers) {
        rquant::Rng rng(1);
        data = rquant::sample_uniform(ManifoldId::sphere2(), n_points, rng);
        cb.manifold = ManifoldId::sphere2();
        const auto centers =
            rquant::sample_uniform(ManifoldId::sphere2(), n_centers, rng);
        cb.centers = centers;
    }
};

const SphereFixture& sphere_fixture() {
    static SphereFixture f(200000, 16);
    return f;
}

struct TrafficFixture {
    std::vector<rquant::TrafficSample> scene;
    std::vector<Eigen::Vector2d> queries;

    TrafficFixture() {
        rquant::Rng rng(2);
        for (int i = 0; i < 4000; ++i) {
            rquant::TrafficSample s;
            s.z << rng.uniform(-10.0, 10.0), rng.uniform(-10.0, 10.0);
            s.v << rng.normal(), rng.normal();
            scene.push_back(s);
        }
        for (int i = 0; i < 512; ++i) {
            queries.emplace_back(rng.uniform(-10.0, 10.0),
                                 rng.uniform(-10.0, 10.0));
        }
    }
};

const TrafficFixture& traffic_fixture() {
    static TrafficFixture f;
    return f;
}

Exec exec_of(const benchmark::State& state) {
    return state.range(0) == 0 ? Exec::serial : Exec::parallel;
}

void set_exec_label(benchmark::State& state) {
    state.SetLabel(state.range(0) == 0
                       ? "serial"
                       : "parallel/" + std::to_string(rquant::max_threads()) +
                             "t");
}

void BM_distortion(benchmark::State& state) {
    const auto& f = sphere_fixture();
    set_exec_label(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            rquant::empirical_distortion(f.cb, f.data, 2.0, exec_of(state)));
    }
}
BENCHMARK(BM_distortion)->Arg(0)->Arg(1);

void BM_distortion_gradient(benchmark::State& state) {
    const auto& f = sphere_fixture();
    set_exec_label(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            rquant::distortion_gradient(f.cb, f.data, exec_of(state)));
    }
}
BENCHMARK(BM_distortion_gradient)->Arg(0)->Arg(1);

void BM_voronoi_labels(benchmark::State& state) {
    const auto& f = sphere_fixture();
    set_exec_label(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            rquant::voronoi_labels(f.cb, f.data, exec_of(state)));
    }
}
BENCHMARK(BM_voronoi_labels)->Arg(0)->Arg(1);

void BM_nw_batch(benchmark::State& state) {
    const auto& f = traffic_fixture();
    set_exec_label(state);
    const rquant::KernelConfig cfg{1.0, 3.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rquant::nw_estimate_batch(
            f.scene, f.queries, cfg, 1e-8, exec_of(state)));
    }
}
BENCHMARK(BM_nw_batch)->Arg(0)->Arg(1);

void BM_karcher_mean(benchmark::State& state) {
    // Concentrated cloud, far from any cut locus. The flow always runs its
    // reduction with the parallel policy; this measures thread-count effect
    // end to end.
    static const std::vector<ManifoldPoint> cloud = [] {
        rquant::Rng rng(3);
        return rquant::sample_vmf_sphere({0.0, 0.0, 1.0}, 10.0, 50000, rng);
    }();
    set_exec_label(state);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rquant::karcher_mean(cloud, 1e-8, 50));
    }
}
BENCHMARK(BM_karcher_mean)->Arg(0)->Arg(1);

} // namespace

BENCHMARK_MAIN();
