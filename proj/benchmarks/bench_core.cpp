// Copyright 2026 The ltvmor Authors
// SPDX-License-Identifier: Apache-2.0

#include <cmath>
#include <cstddef>

#include <benchmark/benchmark.h>

#include "ltvmor/ltvmor.hpp"

namespace {

using namespace ltvmor;

// Banded stable system with smooth periodic variation.
LtvSystem test_system(std::size_t steps, Index n) {
  const TimeGrid grid(0.0, 2.0, steps);
  return LtvSystem(
      MatrixTrajectory::from_function(grid, n, n,
                                      [n](double t) {
                                        Matrix a = Matrix::Zero(n, n);
                                        for (Index i = 0; i < n; ++i) {
                                          a(i, i) = -1.0 - 0.5 * static_cast<double>(i);
                                          if (i + 1 < n) {
                                            a(i, i + 1) = 0.3 * std::sin(t);
                                            a(i + 1, i) = -0.3 * std::sin(t);
                                          }
                                        }
                                        return a;
                                      }),
      MatrixTrajectory::from_function(grid, n, 1,
                                      [n](double t) {
                                        Matrix b = Matrix::Ones(n, 1);
                                        b(0, 0) += 0.5 * std::cos(t);
                                        return b;
                                      }),
      MatrixTrajectory::from_function(grid, 1, n, [n](double t) {
        Matrix c = Matrix::Ones(1, n);
        c(0, n - 1) += 0.5 * std::sin(2.0 * t);
        return c;
      }));
}

void BM_Gramians(benchmark::State& state) {
  const auto sys = test_system(static_cast<std::size_t>(state.range(0)),
                               static_cast<Index>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(gramians(sys, 0.0, 0.0));
}
BENCHMARK(BM_Gramians)->Args({1000, 2})->Args({1000, 8})->Args({4000, 8})->Unit(benchmark::kMillisecond);

void BM_Stm(benchmark::State& state) {
  const auto sys = test_system(static_cast<std::size_t>(state.range(0)),
                               static_cast<Index>(state.range(1)));
  for (auto _ : state) benchmark::DoNotOptimize(stm(sys, 0.0));
}
BENCHMARK(BM_Stm)->Args({1000, 2})->Args({1000, 8})->Args({4000, 8})->Unit(benchmark::kMillisecond);

void BM_TsiaStep(benchmark::State& state) {
  const auto steps = static_cast<std::size_t>(state.range(0));
  const auto n = static_cast<Index>(state.range(1));
  const auto sys = test_system(steps, n);
  const Matrix V = Matrix::Identity(n, 1);
  const auto& grid = sys.grid();
  const auto red = reduce_projection(sys, MatrixTrajectory::constant(grid, V),
                                     MatrixTrajectory::constant(grid, V));
  TsiaOptions options;
  for (auto _ : state) benchmark::DoNotOptimize(tsia_step(sys, red, options));
}
BENCHMARK(BM_TsiaStep)->Args({1000, 2})->Args({1000, 8})->Args({3000, 2})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
