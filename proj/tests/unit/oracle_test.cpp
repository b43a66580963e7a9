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
#include <mecgame/geometry.hpp>
#include <mecgame/oracle.hpp>
#include <mecgame/repro.hpp>

#include "scenarios.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace mecgame;

namespace {

ScenarioConfig half_covered()
{
	auto cfg = reference_scenario();
	CoverageMatrix cov(2, 2);
	cov.set(0, 0, 0.5);
	cov.set(0, 1, 0.5);
	cov.set(1, 0, 0.25);
	cov.set(1, 1, 0.25);
	cfg.coverage_override = cov;
	return cfg;
}

}  // namespace

TEST(OracleTest, AtomsFormAProbabilitySpace)
{
	std::mt19937_64 rng(31);
	for (int n = 0; n < 50; ++n)
	{
		const auto cfg = test_support::random_scenario(rng, {3, 3, false});
		const auto cov = coverage_matrix(cfg);
		for (std::uint32_t m = 1; m <= all_nodes_mask(cfg.node_count()); ++m)
		{
			double total = 0;
			oracle::for_each_atom(Coalition(m), cov, cfg, [&](const oracle::OutcomeAtom& a) {
				EXPECT_GE(a.weight, 0);
				if (a.scheduled < 0)
				{
					EXPECT_EQ(a.selected, -1);
				}
				total += a.weight;
			});
			EXPECT_NEAR(total, 1, 1e-12);
		}
	}
}

TEST(OracleTest, HandComputedSingleServerBlock)
{
	const auto cfg = half_covered();
	const auto cov = coverage_matrix(cfg);
	const auto r = oracle::exact_expectations(Coalition{1, 3}, cov, cfg);
	EXPECT_NEAR(r.total_probability, 1, 1e-15);
	const auto& md = r.breakdown.md(NodeId{1});
	EXPECT_NEAR(md.sched_ratio, 0.6, 1e-15);
	EXPECT_NEAR(md.zeta, 0.5 * 1.8, 1e-15);
	EXPECT_NEAR(md.epsilon, 0.5, 1e-15);
	EXPECT_NEAR(md.throughput, 0.6 * (0.9 + 0.5) * 0.4, 1e-15);
	EXPECT_NEAR(md.payment, 0.6 * 0.5 * 1.5, 1e-15);
	const auto& sv = r.breakdown.server(NodeId{3});
	EXPECT_NEAR(sv.employment[0], 0.5, 1e-15);
	EXPECT_NEAR(sv.revenue, 0.45, 1e-15);
	EXPECT_NEAR(sv.cost, 0.6 * 0.5 * (0.2 + 0.5), 1e-15);
}

TEST(OracleTest, TwoServersSplitUniformly)
{
	const auto cfg = half_covered();
	const auto cov = coverage_matrix(cfg);
	const auto r = oracle::exact_expectations(Coalition{1, 3, 4}, cov, cfg);
	const auto& s3 = r.breakdown.server(NodeId{3});
	const auto& s4 = r.breakdown.server(NodeId{4});
	EXPECT_NEAR(s3.employment[0], 0.5 * 0.75 + 0.5 * 0.25 / 2, 1e-15);
	EXPECT_NEAR(s4.employment[0], 0.25 * 0.5 + 0.25 * 0.5 / 2, 1e-15);
	EXPECT_NEAR(r.breakdown.md(NodeId{1}).union_coverage, 1 - 0.5 * 0.75, 1e-15);
}

TEST(OracleTest, AgreesWithClosedFormOnReferenceGrid)
{
	for (double d = 1; d <= 14; d += 1)
	{
		const auto cfg = with_transmit_distance(reference_scenario(), d);
		const auto cov = coverage_matrix(cfg);
		for (std::uint32_t m = 1; m < 16; ++m)
		{
			const Coalition s(m);
			const auto a = evaluate_coalition(s, cov, cfg);
			const auto o = oracle::exact_expectations(s, cov, cfg).breakdown;
			for (auto id : s.members())
			{
				EXPECT_LE(relative_error(a.utility(id), o.utility(id)), 1e-12) << s.to_string() << " d=" << d;
			}
		}
	}
}
