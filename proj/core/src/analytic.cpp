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

#include <algorithm>
#include <bit>
#include <cmath>

namespace mecgame {

double relative_error(double a, double b) noexcept
{
	return std::abs(a - b) / std::max({1.0, std::abs(a), std::abs(b)});
}

namespace {

// Visits every coverage pattern of n independent events: visit(mask, weight).
template <typename Visit>
void for_each_pattern(std::span<const double> probs, int cap, Visit&& visit)
{
	const int n = static_cast<int>(probs.size());
	if (n > cap)
	{
		throw CapExceededError("subset enumeration over " + std::to_string(n) +
		                       " servers exceeds cap " + std::to_string(cap));
	}
	const std::uint32_t patterns = std::uint32_t{1} << n;
	for (std::uint32_t mask = 0; mask < patterns; ++mask)
	{
		double w = 1;
		for (int k = 0; k < n; ++k)
		{
			w *= (mask >> k) & 1U ? probs[k] : 1 - probs[k];
		}
		visit(mask, w);
	}
}

std::vector<int> priority_order(const Coalition& md_part, const ScenarioConfig& cfg,
                                const EvalOptions& options)
{
	std::vector<int> order;
	for (auto id : options.priority)
	{
		if (md_part.contains(id) && std::find(order.begin(), order.end(), cfg.md_index(id)) == order.end())
		{
			order.push_back(cfg.md_index(id));
		}
	}
	for (auto id : md_part.members())
	{
		if (std::find(order.begin(), order.end(), cfg.md_index(id)) == order.end())
		{
			order.push_back(cfg.md_index(id));
		}
	}
	return order;
}

std::vector<int> server_indices(const Coalition& coalition, const ScenarioConfig& cfg)
{
	std::vector<int> out;
	for (auto id : coalition.server_part(cfg.md_count).members())
	{
		out.push_back(cfg.server_index(id));
	}
	return out;
}

std::vector<double> coverage_column(int md, const std::vector<int>& servers, const CoverageMatrix& cov)
{
	std::vector<double> q;
	q.reserve(servers.size());
	for (int j : servers)
	{
		q.push_back(cov.at(j, md));
	}
	return q;
}

double collision_free_factor(const Coalition& coalition, const ScenarioConfig& cfg)
{
	double f = 1;
	for (int k = 0; k < cfg.md_count; ++k)
	{
		if (!coalition.contains(cfg.md_id(k)))
		{
			f *= 1 - cfg.mds[k].activity_prob;
		}
	}
	return f;
}

double union_coverage(const std::vector<double>& q)
{
	double none = 1;
	for (double v : q)
	{
		none *= 1 - v;
	}
	return 1 - none;
}

void require_md_member(NodeId md, const Coalition& coalition, const ScenarioConfig& cfg)
{
	if (!cfg.is_md(md) || !coalition.contains(md))
	{
		throw PreconditionError("node " + std::to_string(md.value) + " is not an MD of " + coalition.to_string());
	}
}

double finish_utility(const MdParams& p, MdBreakdown& b)
{
	b.utility = p.alpha * b.throughput - p.beta * b.payment;
	return b.utility;
}

}  // namespace

SchedulingRatios scheduling_ratios(const Coalition& coalition, const ScenarioConfig& cfg,
                                   const EvalOptions& options)
{
	SchedulingRatios out;
	out.ratio.assign(static_cast<std::size_t>(cfg.md_count), 0.0);
	double all_ahead_silent = 1;
	for (int m : priority_order(coalition.md_part(cfg.md_count), cfg, options))
	{
		const double p = cfg.mds[m].activity_prob;
		out.ratio[m] = p * all_ahead_silent;
		all_ahead_silent *= 1 - p;
	}
	return out;
}

double subset_expectation(std::span<const double> weights, std::span<const double> probs, int cap)
{
	if (weights.size() != probs.size())
	{
		throw PreconditionError("subset_expectation: weights and probabilities differ in length");
	}
	double total = 0;
	for_each_pattern(probs, cap, [&](std::uint32_t mask, double w) {
		if (mask == 0)
		{
			return;
		}
		double sum = 0;
		for (std::uint32_t m = mask; m != 0; m &= m - 1)
		{
			sum += weights[std::countr_zero(m)];
		}
		total += sum / std::popcount(mask) * w;
	});
	return total;
}

std::vector<double> selection_probabilities(std::span<const double> probs, int cap)
{
	std::vector<double> eta(probs.size(), 0.0);
	for_each_pattern(probs, cap, [&](std::uint32_t mask, double w) {
		if (mask == 0)
		{
			return;
		}
		const double share = w / std::popcount(mask);
		for (std::uint32_t m = mask; m != 0; m &= m - 1)
		{
			eta[std::countr_zero(m)] += share;
		}
	});
	return eta;
}

MdBreakdown md_breakdown(NodeId md, const Coalition& coalition, const CoverageMatrix& cov,
                         const ScenarioConfig& cfg, const EvalOptions& options)
{
	require_md_member(md, coalition, cfg);
	const int i = cfg.md_index(md);
	const auto servers = server_indices(coalition, cfg);
	const auto q = coverage_column(i, servers, cov);

	std::vector<double> rates, prices;
	for (int j : servers)
	{
		rates.push_back(cfg.offload_rate(i, j));
		prices.push_back(cfg.price.at(j, i));
	}

	MdBreakdown b;
	b.sched_ratio = scheduling_ratios(coalition, cfg, options).ratio[i];
	b.union_coverage = union_coverage(q);
	b.zeta = subset_expectation(rates, q, options.subset_cap);
	b.chi = subset_expectation(prices, q, options.subset_cap);
	b.epsilon = cfg.mds[i].direct_rate * (1 - b.union_coverage);
	b.collision_free = collision_free_factor(coalition, cfg);
	b.throughput = b.sched_ratio * (b.epsilon + b.zeta) * b.collision_free;
	b.payment = b.sched_ratio * b.chi;
	finish_utility(cfg.mds[i], b);
	return b;
}

MdBreakdown md_breakdown_simplified(NodeId md, const Coalition& coalition, const CoverageMatrix& cov,
                                    const ScenarioConfig& cfg, const EvalOptions& options)
{
	require_md_member(md, coalition, cfg);
	const int i = cfg.md_index(md);
	const auto servers = server_indices(coalition, cfg);
	const auto q = coverage_column(i, servers, cov);

	auto uniform = [&](auto value_of) {
		return std::all_of(servers.begin(), servers.end(),
		                   [&](int j) { return value_of(j) == value_of(servers.front()); });
	};
	const bool uniform_rate = uniform([&](int j) { return cfg.offload_rate(i, j); });
	const bool uniform_price = uniform([&](int j) { return cfg.price.at(j, i); });
	if (!uniform_rate && !uniform_price)
	{
		throw PreconditionError("md_breakdown_simplified: neither rate nor price is uniform over " +
		                        coalition.to_string());
	}

	// Start from the general path and replace whichever pieces simplify.
	MdBreakdown b = md_breakdown(md, coalition, cov, cfg, options);
	const double r = cfg.mds[i].direct_rate;
	if (servers.empty())
	{
		b.zeta = 0;
		b.chi = 0;
	}
	if (uniform_rate && !servers.empty())
	{
		b.zeta = b.union_coverage * cfg.offload_rate(i, servers.front());
	}
	if (uniform_price && !servers.empty())
	{
		b.chi = b.union_coverage * cfg.price.at(servers.front(), i);
	}
	if (uniform_rate)
	{
		const double big_r = servers.empty() ? 0.0 : cfg.offload_rate(i, servers.front());
		b.throughput =
		    b.sched_ratio * (b.union_coverage * big_r + r * (1 - b.union_coverage)) * b.collision_free;
	}
	if (uniform_price)
	{
		const double xi = servers.empty() ? 0.0 : cfg.price.at(servers.front(), i);
		b.payment = b.sched_ratio * b.union_coverage * xi;
	}
	finish_utility(cfg.mds[i], b);
	return b;
}

ServerBreakdown server_breakdown(NodeId server, const Coalition& coalition, const CoverageMatrix& cov,
                                 const ScenarioConfig& cfg, const EvalOptions& options)
{
	if (!cfg.is_server(server) || !coalition.contains(server))
	{
		throw PreconditionError("node " + std::to_string(server.value) + " is not a server of " +
		                        coalition.to_string());
	}
	const int j = cfg.server_index(server);
	const auto servers = server_indices(coalition, cfg);
	const auto pos = static_cast<std::size_t>(std::find(servers.begin(), servers.end(), j) - servers.begin());
	const auto rho = scheduling_ratios(coalition, cfg, options).ratio;

	ServerBreakdown b;
	b.employment.assign(static_cast<std::size_t>(cfg.md_count), 0.0);
	for (auto id : coalition.md_part(cfg.md_count).members())
	{
		const int i = cfg.md_index(id);
		const auto q = coverage_column(i, servers, cov);
		const double eta = selection_probabilities(q, options.subset_cap)[pos];
		b.employment[i] = eta;
		b.revenue += rho[i] * eta * cfg.price.at(j, i);
		b.cost += rho[i] * (cfg.forward_cost.at(j, i) * eta + cov.at(j, i) * cfg.receive_cost.at(j, i));
	}
	b.utility = cfg.servers[j].gamma * b.revenue - cfg.servers[j].mu * b.cost;
	return b;
}

const MdBreakdown& CoalitionBreakdown::md(NodeId id) const
{
	for (const auto& [k, v] : mds)
	{
		if (k == id)
		{
			return v;
		}
	}
	throw PreconditionError("no MD " + std::to_string(id.value) + " in " + coalition.to_string());
}

const ServerBreakdown& CoalitionBreakdown::server(NodeId id) const
{
	for (const auto& [k, v] : servers)
	{
		if (k == id)
		{
			return v;
		}
	}
	throw PreconditionError("no server " + std::to_string(id.value) + " in " + coalition.to_string());
}

double CoalitionBreakdown::sum_payoff() const
{
	double f = 0;
	for (const auto& [k, v] : mds)
	{
		f += v.utility;
	}
	for (const auto& [k, v] : servers)
	{
		f += v.utility;
	}
	return f;
}

double CoalitionBreakdown::utility(NodeId id) const
{
	for (const auto& [k, v] : mds)
	{
		if (k == id)
		{
			return v.utility;
		}
	}
	return server(id).utility;
}

CoalitionBreakdown evaluate_coalition(const Coalition& coalition, const CoverageMatrix& cov,
                                      const ScenarioConfig& cfg, const EvalOptions& options)
{
	CoalitionBreakdown out;
	out.coalition = coalition;
	for (auto id : coalition.md_part(cfg.md_count).members())
	{
		out.mds.emplace_back(id, md_breakdown(id, coalition, cov, cfg, options));
	}
	for (auto id : coalition.server_part(cfg.md_count).members())
	{
		out.servers.emplace_back(id, server_breakdown(id, coalition, cov, cfg, options));
	}
	return out;
}

PayoffVector structure_payoffs(const CoalitionStructure& cs, const CoverageMatrix& cov,
                               const ScenarioConfig& cfg, const EvalOptions& options)
{
	validate_structure(cfg, cs);
	PayoffVector out(cfg.md_count, cfg.server_count);
	for (const auto& block : cs.blocks())
	{
		const auto b = evaluate_coalition(block, cov, cfg, options);
		for (const auto& [id, v] : b.mds)
		{
			out[id] = v.utility;
		}
		for (const auto& [id, v] : b.servers)
		{
			out[id] = v.utility;
		}
	}
	return out;
}

std::vector<CancellationEntry> check_pricing_cancellation(const CoalitionStructure& cs,
                                                          const CoverageMatrix& cov,
                                                          const ScenarioConfig& cfg,
                                                          const EvalOptions& options)
{
	std::vector<CancellationEntry> out;
	for (const auto& block : cs.blocks())
	{
		const auto b = evaluate_coalition(block, cov, cfg, options);
		CancellationEntry e;
		e.block = block;
		bool unit_weights = true;
		double pricing_free = 0;
		for (const auto& [id, v] : b.mds)
		{
			const auto& p = cfg.mds[cfg.md_index(id)];
			e.payments += v.payment;
			pricing_free += p.alpha * v.throughput;
			unit_weights = unit_weights && p.beta == 1;
		}
		for (const auto& [id, v] : b.servers)
		{
			const auto& p = cfg.servers[cfg.server_index(id)];
			e.revenues += v.revenue;
			pricing_free -= p.mu * v.cost;
			unit_weights = unit_weights && p.gamma == 1;
		}
		e.conservation_residual = relative_error(e.payments, e.revenues);
		if (unit_weights)
		{
			e.cancellation_residual = relative_error(b.sum_payoff(), pricing_free);
		}
		out.push_back(e);
	}
	return out;
}

std::vector<ProfitabilityEntry> pure_md_coalition_profitable(const Coalition& mds,
                                                              const ScenarioConfig& cfg)
{
	if (!mds.server_part(cfg.md_count).empty() || mds.empty())
	{
		throw PreconditionError("pure_md_coalition_profitable needs a non-empty set of MDs, got " +
		                        mds.to_string());
	}
	const CoverageMatrix no_cov(cfg.server_count, cfg.md_count);
	std::vector<ProfitabilityEntry> out;
	double ahead = 1;  // Π over higher-priority members of (1 − p)
	for (auto id : mds.members())
	{
		const int i = cfg.md_index(id);
		double others = 1;  // Π over S \ {i} of (1 − p)
		for (auto k : mds.members())
		{
			if (k != id)
			{
				others *= 1 - cfg.mds[cfg.md_index(k)].activity_prob;
			}
		}
		ProfitabilityEntry e;
		e.md = id;
		e.condition_holds = others <= ahead;
		e.utility_in_coalition = md_breakdown(id, mds, no_cov, cfg).utility;
		e.utility_alone = md_breakdown(id, Coalition::of({id}), no_cov, cfg).utility;
		e.direct_profitable =
		    e.utility_in_coalition >= e.utility_alone - 1e-12 * std::max(1.0, std::abs(e.utility_alone));
		out.push_back(e);
		ahead *= 1 - cfg.mds[i].activity_prob;
	}
	return out;
}

}  // namespace mecgame
