#pragma once

#include <algorithm>
#include <cstddef>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace rquant {

/// Execution policy for the data-parallel kernels. Every kernel ships a plain
/// serial reference next to the OpenMP version; tests compare the two and the
/// benchmark target times them against each other.
enum class Exec { serial, parallel };

/// Block size of the deterministic reduction. Partial sums are produced per
/// fixed block and combined in block order, so the result is independent of
/// the OpenMP thread count (bit-identical for any OMP_NUM_THREADS).
inline constexpr std::size_t kReduceBlock = 2048;

namespace detail {

inline std::size_t block_count(std::size_t n) {
    return (n + kReduceBlock - 1) / kReduceBlock;
}

} // namespace detail

/// General reduction over [0, n).
///   make_init()            -> Acc      fresh accumulator
///   accumulate(acc, i)                 fold element i into acc
///   join(acc, other)                   fold a partial accumulator into acc
/// Serial: one accumulator, straight index order (the reference path).
/// Parallel: per-block accumulators joined in ascending block order.
template <typename Acc, typename MakeInit, typename AccumFn, typename JoinFn>
Acc reduce_indexed(std::size_t n, MakeInit make_init, AccumFn accumulate, JoinFn join,
                   Exec exec = Exec::parallel) {
    if (exec == Exec::serial || n <= kReduceBlock) {
        Acc acc = make_init();
        for (std::size_t i = 0; i < n; ++i) {
            accumulate(acc, i);
        }
        return acc;
    }
    const std::size_t nblocks = detail::block_count(n);
    std::vector<Acc> partials;
    partials.reserve(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        partials.push_back(make_init());
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long b = 0; b < static_cast<long long>(nblocks); ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * kReduceBlock;
        const std::size_t hi = std::min(lo + kReduceBlock, n);
        Acc& acc = partials[static_cast<std::size_t>(b)];
        for (std::size_t i = lo; i < hi; ++i) {
            accumulate(acc, i);
        }
    }
    Acc total = make_init();
    for (std::size_t b = 0; b < nblocks; ++b) {
        join(total, partials[b]);
    }
    return total;
}

/// Scalar sum of f(i) over [0, n).
template <typename F>
double sum_reduce(std::size_t n, F f, Exec exec = Exec::parallel) {
    return reduce_indexed<double>(
        n, [] { return 0.0; }, [&](double& acc, std::size_t i) { acc += f(i); },
        [](double& acc, double part) { acc += part; }, exec);
}

/// Independent per-element work (writes to disjoint slots); trivially
/// deterministic under any schedule.
template <typename F>
void for_each_index(std::size_t n, F f, Exec exec = Exec::parallel) {
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) {
            f(i);
        }
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long i = 0; i < static_cast<long long>(n); ++i) {
        f(static_cast<std::size_t>(i));
    }
}

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

} // namespace rquant
