// Serial reference kernels against their OpenMP counterparts.
//
//   ./nearkit_bench --benchmark_filter=kron
//   OMP_NUM_THREADS=4 ./nearkit_bench

#include <benchmark/benchmark.h>

#include <random>

#include "nearkit/kernels.hpp"

namespace {

using nearkit::Index;
using nearkit::Matrix;
using nearkit::Vector;
namespace kn = nearkit::kernels;

Matrix noise(Index rows, Index cols, unsigned seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> N;
  Matrix M(rows, cols);
  for (Index j = 0; j < cols; ++j)
    for (Index i = 0; i < rows; ++i) M(i, j) = N(gen);
  return M;
}

template <Matrix (*F)(const Matrix&, const Matrix&)>
void BM_kron(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix A = noise(n, n, 1), B = noise(n, n, 2);
  for (auto _ : state) benchmark::DoNotOptimize(F(A, B));
  state.SetItemsProcessed(state.iterations() * n * n * n * n);
}

template <Matrix (*F)(const Matrix&, const nearkit::BlockShape&)>
void BM_rearrange2(benchmark::State& state) {
  const Index n = state.range(0);
  const nearkit::BlockShape shape{n, n, n, n};
  const Matrix A = noise(n * n, n * n, 3);
  for (auto _ : state) benchmark::DoNotOptimize(F(A, shape));
  state.SetItemsProcessed(state.iterations() * A.size());
}

template <Matrix (*F)(const Matrix&, Index)>
void BM_partial_trace(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix X = noise(n * n, n * n, 4);
  for (auto _ : state) benchmark::DoNotOptimize(F(X, n));
  state.SetItemsProcessed(state.iterations() * X.size());
}

template <Matrix (*F)(const Matrix&)>
void BM_structure(benchmark::State& state) {
  const Index n = state.range(0);
  const Matrix M = noise(n, n, 5);
  for (auto _ : state) benchmark::DoNotOptimize(F(M));
  state.SetItemsProcessed(state.iterations() * M.size());
}

template <Vector (*F)(const Vector&, double, double)>
void BM_roots(benchmark::State& state) {
  const Index n = state.range(0);
  const Vector s = noise(n, 1, 6).cwiseAbs();
  for (auto _ : state) benchmark::DoNotOptimize(F(s, 1.0, 1.5));
  state.SetItemsProcessed(state.iterations() * n);
}

}  // namespace

BENCHMARK(BM_kron<kn::serial::kron>)->Name("kron/serial")->RangeMultiplier(2)->Range(8, 32);
BENCHMARK(BM_kron<kn::kron>)->Name("kron/omp")->RangeMultiplier(2)->Range(8, 32);
BENCHMARK(BM_rearrange2<kn::serial::rearrange2>)->Name("rearrange2/serial")->Arg(8)->Arg(16);
BENCHMARK(BM_rearrange2<kn::rearrange2>)->Name("rearrange2/omp")->Arg(8)->Arg(16);
BENCHMARK(BM_partial_trace<kn::serial::partial_trace>)->Name("partial_trace/serial")->Arg(16)->Arg(32);
BENCHMARK(BM_partial_trace<kn::partial_trace>)->Name("partial_trace/omp")->Arg(16)->Arg(32);
BENCHMARK(BM_structure<kn::serial::antidiagonal_mean>)->Name("hankel_mean/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_structure<kn::antidiagonal_mean>)->Name("hankel_mean/omp")->Arg(256)->Arg(1024);
BENCHMARK(BM_structure<kn::serial::circulant_mean>)->Name("circulant_mean/serial")->Arg(256)->Arg(1024);
BENCHMARK(BM_structure<kn::circulant_mean>)->Name("circulant_mean/omp")->Arg(256)->Arg(1024);
BENCHMARK(BM_roots<kn::serial::schatten_roots>)->Name("schatten_roots/serial")->Arg(64)->Arg(1024);
BENCHMARK(BM_roots<kn::schatten_roots>)->Name("schatten_roots/omp")->Arg(64)->Arg(1024);

BENCHMARK_MAIN();
