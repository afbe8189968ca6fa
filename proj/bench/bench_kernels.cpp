// Serial reference loops against their OpenMP counterparts.
//
//   bench_kernels --benchmark_filter=VarDelta
//
// Set OMP_NUM_THREADS to control the parallel side.

#include "mdfit/kernels.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

namespace {

using mdfit::Matrix;
namespace k = mdfit::kernels;

struct Problem {
    Matrix x;
    Matrix d;
    Matrix delta;
};

Problem make_problem(int n, int p)
{
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    Matrix x(n, p);
    Matrix y(n, p);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            x(i, j) = u(rng);
            y(i, j) = x(i, j) + 0.1 * u(rng);
        }
    }
    return {x, k::serial::row_distances(y), k::serial::row_distances(x)};
}

template <bool Parallel>
void ExpectedError(benchmark::State& st)
{
    const auto pr = make_problem(static_cast<int>(st.range(0)), 8);
    const k::PairProblem pb{pr.d, pr.delta, 8, 0.5, 1.0};
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? k::parallel::expected_error(pb)
                                          : k::serial::expected_error(pb));
    }
}

template <bool Parallel>
void VarDelta(benchmark::State& st)
{
    const auto pr = make_problem(static_cast<int>(st.range(0)), 8);
    const k::PairProblem pb{pr.d, pr.delta, 8, 0.5, 1.0};
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? k::parallel::var_delta_upper(pb)
                                          : k::serial::var_delta_upper(pb));
    }
}

template <bool Parallel>
void Tabulate(benchmark::State& st)
{
    const auto len = static_cast<std::size_t>(st.range(0));
    std::vector<double> half(len);
    std::vector<double> three(len);
    for (auto _ : st) {
        if (Parallel) {
            k::parallel::tabulate_laguerre(1.5, 1e-2, 0, half, three);
        } else {
            k::serial::tabulate_laguerre(1.5, 1e-2, 0, half, three);
        }
        benchmark::DoNotOptimize(half.data());
    }
    st.SetItemsProcessed(static_cast<std::int64_t>(st.iterations() * len));
}

template <bool Parallel>
void RowDistances(benchmark::State& st)
{
    const auto pr = make_problem(static_cast<int>(st.range(0)), 37);
    for (auto _ : st) {
        benchmark::DoNotOptimize(Parallel ? k::parallel::row_distances(pr.x)
                                          : k::serial::row_distances(pr.x));
    }
}

BENCHMARK(ExpectedError<false>)->Name("ExpectedError/serial")->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(ExpectedError<true>)->Name("ExpectedError/parallel")->RangeMultiplier(4)->Range(16, 1024);
BENCHMARK(VarDelta<false>)->Name("VarDelta/serial")->RangeMultiplier(2)->Range(8, 64);
BENCHMARK(VarDelta<true>)->Name("VarDelta/parallel")->RangeMultiplier(2)->Range(8, 64);
BENCHMARK(Tabulate<false>)->Name("Tabulate/serial")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(Tabulate<true>)->Name("Tabulate/parallel")->Arg(1 << 14)->Arg(1 << 17);
BENCHMARK(RowDistances<false>)->Name("RowDistances/serial")->Arg(64)->Arg(512);
BENCHMARK(RowDistances<true>)->Name("RowDistances/parallel")->Arg(64)->Arg(512);

} // namespace

BENCHMARK_MAIN();
