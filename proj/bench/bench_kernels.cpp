// Serial reference versus OpenMP kernels on experiment-sized grids.
#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "brlab/geometry.hpp"
#include "brlab/kernels.hpp"

using namespace brlab;
using kernels::cplx;

namespace {

std::vector<cplx> random_complex(std::size_t n) {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> g;
    std::vector<cplx> v(n);
    for (auto& x : v) x = {g(rng), g(rng)};
    return v;
}

std::vector<double> random_real(std::size_t n) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = u(rng);
    return v;
}

template <bool Parallel>
void BM_multiply(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0)) * state.range(0);
    auto data = random_complex(n);
    auto sym = random_real(n);
    for (auto _ : state) {
        if constexpr (Parallel) kernels::omp::multiply(data, sym, 1.0);
        else kernels::serial::multiply(data, sym, 1.0);
        benchmark::DoNotOptimize(data.data());
    }
}

template <bool Parallel>
void BM_abs_pow(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0)) * state.range(0);
    auto data = random_complex(n);
    std::vector<double> out(n);
    for (auto _ : state) {
        if constexpr (Parallel) kernels::omp::abs_pow(data, 1.2, out);
        else kernels::serial::abs_pow(data, 1.2, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_ball_mean(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    Lattice lat(2, N);
    auto src = random_real(lat.size());
    auto ball = ball_offsets(2, 4.0);
    IndexBox targets{2, {N / 4, N / 4, 0}, {3 * N / 4, 3 * N / 4, 0}};
    std::vector<double> out(static_cast<std::size_t>(targets.count()));
    for (auto _ : state) {
        if constexpr (Parallel) kernels::omp::ball_mean(src, lat, ball, targets, out);
        else kernels::serial::ball_mean(src, lat, ball, targets, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_offset_max(benchmark::State& state) {
    const int N = static_cast<int>(state.range(0));
    IndexBox src_box{2, {0, 0, 0}, {N, N, 0}};
    auto src = random_real(static_cast<std::size_t>(src_box.count()));
    auto offsets = thin_offsets(ball_offsets(2, 8.0), 2, 64);
    IndexBox targets{2, {8, 8, 0}, {N - 8, N - 8, 0}};
    std::vector<double> out(static_cast<std::size_t>(targets.count()));
    for (auto _ : state) {
        if constexpr (Parallel) kernels::omp::offset_max(src, src_box, offsets, targets, out);
        else kernels::serial::offset_max(src, src_box, offsets, targets, out);
        benchmark::DoNotOptimize(out.data());
    }
}

template <bool Parallel>
void BM_blocked_sum(benchmark::State& state) {
    const std::size_t n = static_cast<std::size_t>(state.range(0)) * state.range(0);
    auto v = random_real(n);
    for (auto _ : state) {
        double s = Parallel ? kernels::omp::blocked_sum(v) : kernels::serial::blocked_sum(v);
        benchmark::DoNotOptimize(s);
    }
}

}  // namespace

BENCHMARK(BM_multiply<false>)->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(BM_multiply<true>)->Arg(256)->Arg(512)->Arg(1024);
BENCHMARK(BM_abs_pow<false>)->Arg(512)->Arg(1024);
BENCHMARK(BM_abs_pow<true>)->Arg(512)->Arg(1024);
BENCHMARK(BM_ball_mean<false>)->Arg(256)->Arg(512);
BENCHMARK(BM_ball_mean<true>)->Arg(256)->Arg(512);
BENCHMARK(BM_offset_max<false>)->Arg(256)->Arg(512);
BENCHMARK(BM_offset_max<true>)->Arg(256)->Arg(512);
BENCHMARK(BM_blocked_sum<false>)->Arg(512)->Arg(1024);
BENCHMARK(BM_blocked_sum<true>)->Arg(512)->Arg(1024);

BENCHMARK_MAIN();
