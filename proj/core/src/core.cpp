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

#include <mecgame/core.hpp>

namespace mecgame {

namespace {

void require_core_size(const ScenarioConfig& cfg)
{
	if (cfg.node_count() > max_core_nodes)
	{
		throw CapExceededError("coalition scan over " + std::to_string(cfg.node_count()) +
		                       " nodes exceeds cap " + std::to_string(max_core_nodes));
	}
}

void fail(ConditionResult& r, std::uint32_t mask)
{
	if (r.holds)
	{
		r.holds = false;
		r.witness = Coalition(mask);
	}
}

}  // namespace

PayoffVector grand_coalition_payoff(const ScenarioConfig& cfg, const CoverageMatrix& cov,
                                    const EvalOptions& options)
{
	return structure_payoffs(CoalitionStructure::grand(cfg.node_count()), cov, cfg, options);
}

CoreReport blocking_check(const PayoffVector& candidate, const ScenarioConfig& cfg,
                          const CoverageMatrix& cov, const EvalOptions& options)
{
	require_core_size(cfg);
	if (candidate.node_count() != cfg.node_count())
	{
		throw PreconditionError("candidate payoff vector does not cover every node");
	}
	CoreReport report;
	report.candidate = candidate;
	const std::uint32_t all = all_nodes_mask(cfg.node_count());
	for (std::uint32_t mask = 1; mask <= all && mask != 0; ++mask)
	{
		const Coalition s(mask);
		const auto b = evaluate_coalition(s, cov, cfg, options);
		bool blocks = true;
		Blocker blocker{s, {}};
		for (auto id : s.members())
		{
			const double y = b.utility(id);
			blocker.payoff.emplace_back(id, y);
			if (!(y > candidate[id]))
			{
				blocks = false;
				break;
			}
		}
		if (blocks)
		{
			report.blockers.push_back(std::move(blocker));
		}
		if (mask == all)
		{
			break;
		}
	}
	return report;
}

Lemma3Screen lemma3_screen(const ScenarioConfig& cfg, const CoverageMatrix& cov, const EvalOptions& options)
{
	require_core_size(cfg);
	Lemma3Screen screen;

	const std::uint32_t all = all_nodes_mask(cfg.node_count());
	for (int i = 0; i < cfg.md_count; ++i)
	{
		if (!(cfg.mds[i].alpha > 0 && cfg.mds[i].beta > 0))
		{
			fail(screen.positive_weights, std::uint32_t{1} << i);
		}
	}
	for (int j = 0; j < cfg.server_count; ++j)
	{
		if (!(cfg.servers[j].gamma > 0 && cfg.servers[j].mu > 0))
		{
			fail(screen.positive_weights, std::uint32_t{1} << (cfg.md_count + j));
		}
	}

	const auto grand = evaluate_coalition(Coalition(all), cov, cfg, options);
	for (std::uint32_t mask = 1; mask < all; ++mask)
	{
		const Coalition s(mask);
		const auto b = evaluate_coalition(s, cov, cfg, options);

		if (!b.mds.empty())
		{
			bool md_side = true;
			for (const auto& [id, v] : b.mds)
			{
				const auto& p = cfg.mds[cfg.md_index(id)];
				md_side = md_side && p.alpha * v.throughput > p.beta * v.payment;
			}
			bool server_side = !b.servers.empty();
			for (const auto& [id, v] : b.servers)
			{
				const auto& p = cfg.servers[cfg.server_index(id)];
				server_side = server_side && p.gamma * v.revenue > p.mu * v.cost;
			}
			if (!(md_side || server_side))
			{
				fail(screen.gain_per_coalition, mask);
			}
			if (!(md_side && (b.servers.empty() || server_side)))
			{
				fail(screen.gain_per_member, mask);
			}
		}

		for (auto id : s.members())
		{
			if (!(grand.utility(id) > b.utility(id)))
			{
				fail(screen.grand_coalition_dominates, mask);
				break;
			}
		}
	}
	return screen;
}

bool lemma2_check(const ScenarioConfig& cfg, const CoverageMatrix& cov, const EvalOptions& options)
{
	if (cfg.server_count == 0)
	{
		return true;
	}
	if (cfg.server_count > max_core_nodes)
	{
		throw CapExceededError("lemma2_check: too many servers");
	}
	const std::uint32_t servers = static_cast<std::uint32_t>(all_nodes_mask(cfg.server_count));
	for (std::uint32_t sub = 1; sub <= servers; ++sub)
	{
		const Coalition s(sub << cfg.md_count);
		const auto b = evaluate_coalition(s, cov, cfg, options);
		for (const auto& [id, v] : b.servers)
		{
			if (v.utility != 0 || v.revenue != 0 || v.cost != 0)
			{
				return false;
			}
		}
	}
	return true;
}

}  // namespace mecgame
