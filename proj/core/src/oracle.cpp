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

#include <mecgame/oracle.hpp>

#include <bit>

namespace mecgame::oracle {

namespace {

struct Members
{
	std::vector<int> mds;      // MD indices in S, ascending
	std::vector<int> servers;  // server indices in S, ascending
};

Members split(const Coalition& s, const ScenarioConfig& cfg)
{
	Members m;
	for (auto id : s.members())
	{
		if (cfg.is_md(id))
		{
			m.mds.push_back(cfg.md_index(id));
		}
		else
		{
			m.servers.push_back(cfg.server_index(id));
		}
	}
	return m;
}

void check_caps(const Members& m, const ScenarioConfig& cfg)
{
	if (cfg.md_count > max_md_count)
	{
		throw CapExceededError("oracle: " + std::to_string(cfg.md_count) + " MDs exceeds cap " +
		                       std::to_string(max_md_count));
	}
	if (m.mds.size() * m.servers.size() > static_cast<std::size_t>(max_coverage_bits))
	{
		throw CapExceededError("oracle: |S_m|·|S_s| exceeds cap " + std::to_string(max_coverage_bits));
	}
}

// Weight of coverage pattern `mask` for MD `md` over the coalition servers.
double coverage_weight(std::uint32_t mask, int md, const std::vector<int>& servers, const CoverageMatrix& cov)
{
	double w = 1;
	for (std::size_t k = 0; k < servers.size(); ++k)
	{
		const double q = cov.at(servers[k], md);
		w *= (mask >> k) & 1U ? q : 1 - q;
	}
	return w;
}

}  // namespace

void for_each_atom(const Coalition& s, const CoverageMatrix& cov, const ScenarioConfig& cfg,
                   const std::function<void(const OutcomeAtom&)>& visit)
{
	const auto m = split(s, cfg);
	check_caps(m, cfg);
	const std::uint32_t activity_patterns = std::uint32_t{1} << cfg.md_count;
	const std::uint32_t coverage_patterns = std::uint32_t{1} << m.servers.size();

	for (std::uint32_t act = 0; act < activity_patterns; ++act)
	{
		double w_act = 1;
		for (int i = 0; i < cfg.md_count; ++i)
		{
			const double p = cfg.mds[i].activity_prob;
			w_act *= (act >> i) & 1U ? p : 1 - p;
		}
		int scheduled = -1;
		for (int i : m.mds)
		{
			if ((act >> i) & 1U)
			{
				scheduled = i;
				break;
			}
		}
		if (scheduled < 0)
		{
			visit(OutcomeAtom{act, -1, 0, -1, w_act});
			continue;
		}
		for (std::uint32_t c = 0; c < coverage_patterns; ++c)
		{
			const double w = w_act * coverage_weight(c, scheduled, m.servers, cov);
			if (c == 0)
			{
				visit(OutcomeAtom{act, scheduled, c, -1, w});
				continue;
			}
			const int covering = std::popcount(c);
			for (std::size_t k = 0; k < m.servers.size(); ++k)
			{
				if ((c >> k) & 1U)
				{
					visit(OutcomeAtom{act, scheduled, c, m.servers[k], w / covering});
				}
			}
		}
	}
}

OracleResult exact_expectations(const Coalition& s, const CoverageMatrix& cov, const ScenarioConfig& cfg)
{
	const auto m = split(s, cfg);
	check_caps(m, cfg);

	std::uint32_t outside = 0;
	for (int i = 0; i < cfg.md_count; ++i)
	{
		if (!s.contains(cfg.md_id(i)))
		{
			outside |= std::uint32_t{1} << i;
		}
	}

	std::vector<MdBreakdown> md(static_cast<std::size_t>(cfg.md_count));
	std::vector<ServerBreakdown> sv(static_cast<std::size_t>(cfg.server_count));
	for (auto& b : sv)
	{
		b.employment.assign(static_cast<std::size_t>(cfg.md_count), 0.0);
	}

	// Conditionals on one MD's coverage row.
	const std::uint32_t coverage_patterns = std::uint32_t{1} << m.servers.size();
	for (int i : m.mds)
	{
		auto& b = md[i];
		for (std::uint32_t c = 0; c < coverage_patterns; ++c)
		{
			const double w = coverage_weight(c, i, m.servers, cov);
			if (c == 0)
			{
				b.epsilon += w * cfg.mds[i].direct_rate;
				continue;
			}
			b.union_coverage += w;
			const int covering = std::popcount(c);
			for (std::size_t k = 0; k < m.servers.size(); ++k)
			{
				if ((c >> k) & 1U)
				{
					const int j = m.servers[k];
					b.zeta += w / covering * cfg.offload_rate(i, j);
					b.chi += w / covering * cfg.price.at(j, i);
					sv[j].employment[i] += w / covering;
				}
			}
		}
	}

	OracleResult out;
	double silent = 0;
	for (std::uint32_t act = 0; act < (std::uint32_t{1} << cfg.md_count); ++act)
	{
		if ((act & outside) == 0)
		{
			double w = 1;
			for (int i = 0; i < cfg.md_count; ++i)
			{
				const double p = cfg.mds[i].activity_prob;
				w *= ((act >> i) & 1U) ? p : 1 - p;
			}
			silent += w;
		}
	}

	for_each_atom(s, cov, cfg, [&](const OutcomeAtom& a) {
		out.total_probability += a.weight;
		if (a.scheduled < 0)
		{
			return;
		}
		const int i = a.scheduled;
		const bool delivered = (a.activity & outside) == 0;
		md[i].sched_ratio += a.weight;
		if (a.selected < 0)
		{
			if (delivered)
			{
				md[i].throughput += a.weight * cfg.mds[i].direct_rate;
			}
		}
		else
		{
			const int j = a.selected;
			if (delivered)
			{
				md[i].throughput += a.weight * cfg.offload_rate(i, j);
			}
			md[i].payment += a.weight * cfg.price.at(j, i);
			sv[j].revenue += a.weight * cfg.price.at(j, i);
			sv[j].cost += a.weight * cfg.forward_cost.at(j, i);
		}
		// Every covering server of S receives the transmission.
		for (std::size_t k = 0; k < m.servers.size(); ++k)
		{
			if ((a.coverage >> k) & 1U)
			{
				const int j = m.servers[k];
				sv[j].cost += a.weight * cfg.receive_cost.at(j, i);
			}
		}
	});

	out.breakdown.coalition = s;
	for (int i : m.mds)
	{
		md[i].collision_free = silent;
		md[i].utility = cfg.mds[i].alpha * md[i].throughput - cfg.mds[i].beta * md[i].payment;
		out.breakdown.mds.emplace_back(cfg.md_id(i), md[i]);
	}
	for (int j : m.servers)
	{
		sv[j].utility = cfg.servers[j].gamma * sv[j].revenue - cfg.servers[j].mu * sv[j].cost;
		out.breakdown.servers.emplace_back(cfg.server_id(j), sv[j]);
	}
	return out;
}

}  // namespace mecgame::oracle
