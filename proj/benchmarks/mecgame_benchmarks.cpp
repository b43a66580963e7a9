// Copyright 2026 The mecgame Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <mecgame/analytic.hpp>
#include <mecgame/core.hpp>
#include <mecgame/geometry.hpp>
#include <mecgame/montecarlo.hpp>
#include <mecgame/oracle.hpp>
#include <mecgame/partitions.hpp>
#include <mecgame/repro.hpp>

#include <benchmark/benchmark.h>

#include <vector>

namespace {

using namespace mecgame;

void BM_DiscRectArea(benchmark::State& state)
{
	const Rect field{0, 10, 0, 10};
	double r = 0.5;
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(disc_rect_area(Disc{{7, 6}, r}, field));
		r = r > 14 ? 0.5 : r + 0.37;
	}
}
BENCHMARK(BM_DiscRectArea);

void BM_SubsetExpectation(benchmark::State& state)
{
	const auto n = static_cast<std::size_t>(state.range(0));
	std::vector<double> w(n), q(n);
	for (std::size_t k = 0; k < n; ++k)
	{
		w[k] = 1.0 + 0.1 * static_cast<double>(k);
		q[k] = 0.05 + 0.9 * static_cast<double>(k) / static_cast<double>(n);
	}
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(subset_expectation(w, q));
	}
	state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SubsetExpectation)->DenseRange(2, 16, 2);

void BM_StructurePayoffs(benchmark::State& state)
{
	const auto cfg = reference_scenario();
	const auto cov = coverage_matrix(cfg);
	const auto cs = CoalitionStructure::grand(cfg.node_count());
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(structure_payoffs(cs, cov, cfg));
	}
}
BENCHMARK(BM_StructurePayoffs);

void BM_OracleGrand(benchmark::State& state)
{
	const auto cfg = reference_scenario();
	const auto cov = coverage_matrix(cfg);
	const Coalition all(all_nodes_mask(cfg.node_count()));
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(oracle::exact_expectations(all, cov, cfg));
	}
}
BENCHMARK(BM_OracleGrand);

void BM_EnumerateStructures(benchmark::State& state)
{
	const int n = static_cast<int>(state.range(0));
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(enumerate_structures(n));
	}
	state.counters["structures"] = static_cast<double>(bell_number(n));
}
BENCHMARK(BM_EnumerateStructures)->DenseRange(4, 10, 2);

void BM_ReduceBySymmetry(benchmark::State& state)
{
	const auto cfg = symmetric_scenario();
	const auto cov = coverage_matrix(cfg);
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(reduce_by_symmetry(enumerate_structures(4), cfg, cov));
	}
}
BENCHMARK(BM_ReduceBySymmetry);

void BM_BlockingCheck(benchmark::State& state)
{
	const auto cfg = reference_scenario();
	const auto cov = coverage_matrix(cfg);
	const auto candidate = grand_coalition_payoff(cfg, cov);
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(blocking_check(candidate, cfg, cov));
	}
}
BENCHMARK(BM_BlockingCheck);

void BM_SimulateStructure(benchmark::State& state)
{
	const auto cfg = reference_scenario();
	const auto cs = CoalitionStructure::grand(cfg.node_count());
	SimConfig sim;
	sim.replications = static_cast<std::uint64_t>(state.range(0));
	sim.mode = state.range(1) ? CoverageMode::matrix : CoverageMode::geometric;
	sim.workers = 1;
	for (auto _ : state)
	{
		benchmark::DoNotOptimize(simulate_structure(cs, cfg, sim));
	}
	state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_SimulateStructure)->Args({100'000, 0})->Args({100'000, 1})->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
