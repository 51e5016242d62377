// SPDX-License-Identifier: Apache-2.0
#include <benchmark/benchmark.h>

#include <random>

#include "langsim/ldft/sweep.hpp"

using namespace langsim::ldft;

namespace {

PorousMatrix slit(std::size_t rows, std::size_t cols) {
    std::vector<double> cells(rows * cols, 0.0);
    for (std::size_t c = 0; c < cols; ++c) {
        cells[c] = 1.0;
        cells[(rows - 1) * cols + c] = 1.0;
    }
    return {rows, cols, cells};
}

PorousMatrix random_matrix(std::size_t side, unsigned seed) {
    std::mt19937 rng(seed);
    std::bernoulli_distribution solid(0.3);
    std::vector<double> cells(side * side);
    for (auto& v : cells) v = solid(rng) ? 1.0 : 0.0;
    cells[side * side / 2] = 0.0;
    return {side, side, cells};
}

void BM_SolveDensity(benchmark::State& state) {
    auto side = static_cast<std::size_t>(state.range(0));
    auto m = random_matrix(side, 1);
    for (auto _ : state) {
        auto rho = solve_density(m, {}, 60.0, DensityField::zeros_like(m));
        benchmark::DoNotOptimize(rho);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.size()));
}
BENCHMARK(BM_SolveDensity)->Arg(16)->Arg(32)->Arg(64)->Arg(128)->Unit(benchmark::kMillisecond);

void BM_Isotherm(benchmark::State& state) {
    auto side = static_cast<std::size_t>(state.range(0));
    auto m = random_matrix(side, 2);
    for (auto _ : state) benchmark::DoNotOptimize(compute_isotherm(m, {}));
}
BENCHMARK(BM_Isotherm)->Arg(16)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);

void BM_HysteresisSlit(benchmark::State& state) {
    auto m = slit(static_cast<std::size_t>(state.range(0)), static_cast<std::size_t>(state.range(1)));
    for (auto _ : state) benchmark::DoNotOptimize(compute_hysteresis(m, {}));
}
// Wide slits sit at bulk coexistence at 100% RH and stall the solver, so only
// the length is scaled here.
BENCHMARK(BM_HysteresisSlit)->Args({8, 32})->Args({16, 32})->Args({16, 64})->Unit(benchmark::kMillisecond);

void BM_HysteresisSupercritical(benchmark::State& state) {
    auto m = slit(16, 32);
    auto hot = ThermoConditions::at_reduced_temperature(1.5);
    for (auto _ : state) benchmark::DoNotOptimize(compute_hysteresis(m, hot));
}
BENCHMARK(BM_HysteresisSupercritical)->Unit(benchmark::kMillisecond);

}  // namespace
