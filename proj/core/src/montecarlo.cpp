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

#include <mecgame/geometry.hpp>
#include <mecgame/montecarlo.hpp>

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

namespace mecgame {

CoverageMode parse_coverage_mode(std::string_view text)
{
	if (text == "geometric")
	{
		return CoverageMode::geometric;
	}
	if (text == "matrix")
	{
		return CoverageMode::matrix;
	}
	throw ParseError("unknown coverage mode \"" + std::string(text) + "\"");
}

std::string_view to_string(CoverageMode mode)
{
	return mode == CoverageMode::geometric ? "geometric" : "matrix";
}

std::uint64_t CounterRng::mix(std::uint64_t x) noexcept
{
	x += 0x9E3779B97F4A7C15ULL;
	x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
	x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
	return x ^ (x >> 31);
}

std::uint64_t CounterRng::bits(std::uint64_t seed, std::uint64_t replication, std::uint64_t stream) noexcept
{
	return mix(mix(mix(seed) ^ replication) ^ stream);
}

double CounterRng::uniform(std::uint64_t seed, std::uint64_t replication, std::uint64_t stream) noexcept
{
	return static_cast<double>(bits(seed, replication, stream) >> 11) * 0x1.0p-53;
}

double normal_quantile_for(double confidence)
{
	if (!(confidence > 0 && confidence < 1))
	{
		throw PreconditionError("confidence must lie in (0, 1)");
	}
	const boost::math::normal_distribution<double> standard;
	return boost::math::quantile(standard, 0.5 + confidence / 2);
}

namespace {

struct Moments
{
	double sum = 0;
	double sum_sq = 0;

	void add(double v) noexcept
	{
		sum += v;
		sum_sq += v * v;
	}

	void merge(const Moments& o) noexcept
	{
		sum += o.sum;
		sum_sq += o.sum_sq;
	}

	SimEstimate estimate(std::uint64_t n, double z) const
	{
		SimEstimate e;
		e.n = n;
		if (n == 0)
		{
			return e;
		}
		const double dn = static_cast<double>(n);
		e.mean = sum / dn;
		if (n < 2)
		{
			e.half_width = std::numeric_limits<double>::infinity();
			return e;
		}
		const double var = std::max(0.0, (sum_sq - dn * e.mean * e.mean) / (dn - 1));
		e.half_width = z * std::sqrt(var / dn);
		return e;
	}
};

// Runs `body(first, last, slot)` over fixed chunks of [0, reps) on `workers`
// threads; slot is the chunk index.
template <typename Body>
void for_each_chunk(std::uint64_t reps, unsigned workers, Body&& body)
{
	const std::uint64_t chunks = (reps + sim_chunk_size - 1) / sim_chunk_size;
	if (workers == 0)
	{
		workers = std::max(1u, std::thread::hardware_concurrency());
	}
	workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, std::max<std::uint64_t>(chunks, 1)));

	std::atomic<std::uint64_t> next{0};
	auto run = [&] {
		for (std::uint64_t c = next++; c < chunks; c = next++)
		{
			const std::uint64_t first = c * sim_chunk_size;
			body(first, std::min(reps, first + sim_chunk_size), c);
		}
	};
	if (workers <= 1)
	{
		run();
		return;
	}
	std::vector<std::thread> pool;
	for (unsigned w = 0; w < workers; ++w)
	{
		pool.emplace_back(run);
	}
	for (auto& t : pool)
	{
		t.join();
	}
}

struct Scene
{
	const ScenarioConfig& cfg;
	CoverageMode mode;
	std::uint64_t seed;
	CoverageMatrix matrix;  // matrix mode
};

Point draw_position(const Scene& scene, std::uint64_t rep, int md)
{
	const auto law = scene.cfg.placement_for(md);
	if (law.kind == PlacementLaw::Kind::fixed_point)
	{
		return law.point;
	}
	const Rect& r = law.rectangle;
	const double u = CounterRng::uniform(scene.seed, rep, CounterRng::position_x_stream(md));
	const double v = CounterRng::uniform(scene.seed, rep, CounterRng::position_y_stream(md));
	return Point{r.x_min + u * (r.x_max - r.x_min), r.y_min + v * (r.y_max - r.y_min)};
}

bool geometric_cover(const ScenarioConfig& cfg, const Point& md_pos, int server, int md)
{
	const Point& s = cfg.servers[server].position;
	return std::hypot(md_pos.x - s.x, md_pos.y - s.y) <= cfg.mds[md].transmit_distance;
}

constexpr int node_quantities = 4;  // utility, throughput, payment/revenue, cost

}  // namespace

StructureSimulation simulate_structure(const CoalitionStructure& cs, const ScenarioConfig& cfg,
                                       const SimConfig& sim)
{
	validate_structure(cfg, cs);
	if (sim.replications < 1)
	{
		throw PreconditionError("replications must be at least 1");
	}
	const int K = cfg.md_count;
	const int L = cfg.server_count;
	const int N = cfg.node_count();
	const double z = normal_quantile_for(sim.confidence);
	Scene scene{cfg, sim.mode, sim.seed, sim.mode == CoverageMode::matrix ? coverage_matrix(cfg) : CoverageMatrix{}};

	struct BlockInfo
	{
		std::vector<int> mds;          // ascending MD index
		std::vector<int> servers;      // ascending server index
		std::uint32_t outside_mds = 0;  // activity bits of MDs not in the block
	};
	std::vector<BlockInfo> blocks;
	for (const auto& b : cs.blocks())
	{
		BlockInfo info;
		for (auto id : b.members())
		{
			if (cfg.is_md(id))
			{
				info.mds.push_back(cfg.md_index(id));
			}
			else
			{
				info.servers.push_back(cfg.server_index(id));
			}
		}
		info.outside_mds = ~b.mask() & all_nodes_mask(K);
		blocks.push_back(std::move(info));
	}

	const std::uint64_t chunks = (sim.replications + sim_chunk_size - 1) / sim_chunk_size;
	std::vector<std::vector<Moments>> partial(chunks, std::vector<Moments>(static_cast<std::size_t>(N * node_quantities)));
	std::vector<std::uint64_t> violations(chunks, 0);

	for_each_chunk(sim.replications, sim.workers, [&](std::uint64_t first, std::uint64_t last, std::uint64_t slot) {
		auto& acc = partial[slot];
		std::vector<Point> pos(static_cast<std::size_t>(K));
		std::vector<double> thr(static_cast<std::size_t>(K)), pay(static_cast<std::size_t>(K));
		std::vector<double> rev(static_cast<std::size_t>(L)), cost(static_cast<std::size_t>(L));
		std::vector<int> covering;
		for (std::uint64_t rep = first; rep < last; ++rep)
		{
			std::uint32_t active = 0;
			for (int i = 0; i < K; ++i)
			{
				if (CounterRng::uniform(sim.seed, rep, CounterRng::activity_stream(i)) < cfg.mds[i].activity_prob)
				{
					active |= std::uint32_t{1} << i;
				}
				if (sim.mode == CoverageMode::geometric)
				{
					pos[i] = draw_position(scene, rep, i);
				}
			}
			std::fill(thr.begin(), thr.end(), 0.0);
			std::fill(pay.begin(), pay.end(), 0.0);
			std::fill(rev.begin(), rev.end(), 0.0);
			std::fill(cost.begin(), cost.end(), 0.0);

			for (const auto& b : blocks)
			{
				int i = -1;
				for (int m : b.mds)
				{
					if ((active >> m) & 1U)
					{
						i = m;
						break;
					}
				}
				if (i < 0)
				{
					continue;
				}
				covering.clear();
				for (int j : b.servers)
				{
					const bool covers =
					    sim.mode == CoverageMode::geometric
					        ? geometric_cover(cfg, pos[i], j, i)
					        : CounterRng::uniform(sim.seed, rep, CounterRng::coverage_stream(j, i)) <
					              scene.matrix.at(j, i);
					if (covers)
					{
						covering.push_back(j);
					}
				}
				const bool delivered = (active & b.outside_mds) == 0;
				double block_pay = 0;
				double block_rev = 0;
				if (covering.empty())
				{
					if (delivered)
					{
						thr[i] += cfg.mds[i].direct_rate;
					}
				}
				else
				{
					const double u = CounterRng::uniform(sim.seed, rep, CounterRng::selection_stream(i));
					const auto k = std::min(covering.size() - 1,
					                        static_cast<std::size_t>(u * static_cast<double>(covering.size())));
					const int j = covering[k];
					if (delivered)
					{
						thr[i] += cfg.offload_rate(i, j);
					}
					const double xi = cfg.price.at(j, i);
					pay[i] += xi;
					rev[j] += xi;
					block_pay += xi;
					block_rev += xi;
					cost[j] += cfg.forward_cost.at(j, i);
					for (int c : covering)
					{
						cost[c] += cfg.receive_cost.at(c, i);
					}
				}
				if (block_pay != block_rev)
				{
					++violations[slot];
				}
			}

			for (int i = 0; i < K; ++i)
			{
				const auto& p = cfg.mds[i];
				Moments* m = &acc[static_cast<std::size_t>(i * node_quantities)];
				m[0].add(p.alpha * thr[i] - p.beta * pay[i]);
				m[1].add(thr[i]);
				m[2].add(pay[i]);
				m[3].add(0.0);
			}
			for (int j = 0; j < L; ++j)
			{
				const auto& p = cfg.servers[j];
				Moments* m = &acc[static_cast<std::size_t>((K + j) * node_quantities)];
				m[0].add(p.gamma * rev[j] - p.mu * cost[j]);
				m[1].add(0.0);
				m[2].add(rev[j]);
				m[3].add(cost[j]);
			}
		}
	});

	std::vector<Moments> total(static_cast<std::size_t>(N * node_quantities));
	StructureSimulation out;
	for (std::uint64_t c = 0; c < chunks; ++c)
	{
		for (std::size_t k = 0; k < total.size(); ++k)
		{
			total[k].merge(partial[c][k]);
		}
		out.ledger_violations += violations[c];
	}
	out.nodes.resize(static_cast<std::size_t>(N));
	for (int n = 0; n < N; ++n)
	{
		const Moments* m = &total[static_cast<std::size_t>(n * node_quantities)];
		out.nodes[n].utility = m[0].estimate(sim.replications, z);
		out.nodes[n].throughput = m[1].estimate(sim.replications, z);
		out.nodes[n].payment_or_revenue = m[2].estimate(sim.replications, z);
		out.nodes[n].cost = m[3].estimate(sim.replications, z);
	}
	return out;
}

CoverageEstimate estimate_coverage(const ScenarioConfig& cfg, const SimConfig& sim)
{
	if (sim.mode != CoverageMode::geometric)
	{
		throw PreconditionError("estimate_coverage needs geometric mode");
	}
	const int K = cfg.md_count;
	const int L = cfg.server_count;
	const double z = normal_quantile_for(sim.confidence);
	Scene scene{cfg, sim.mode, sim.seed, {}};

	const std::uint64_t chunks = (sim.replications + sim_chunk_size - 1) / sim_chunk_size;
	std::vector<std::vector<Moments>> partial(chunks, std::vector<Moments>(static_cast<std::size_t>(K * L)));
	for_each_chunk(sim.replications, sim.workers, [&](std::uint64_t first, std::uint64_t last, std::uint64_t slot) {
		auto& acc = partial[slot];
		for (std::uint64_t rep = first; rep < last; ++rep)
		{
			for (int i = 0; i < K; ++i)
			{
				const Point p = draw_position(scene, rep, i);
				for (int j = 0; j < L; ++j)
				{
					acc[static_cast<std::size_t>(j * K + i)].add(geometric_cover(cfg, p, j, i) ? 1.0 : 0.0);
				}
			}
		}
	});

	CoverageEstimate out;
	out.servers = L;
	out.mds = K;
	std::vector<Moments> total(static_cast<std::size_t>(K * L));
	for (const auto& chunk : partial)
	{
		for (std::size_t k = 0; k < total.size(); ++k)
		{
			total[k].merge(chunk[k]);
		}
	}
	for (const auto& m : total)
	{
		out.entries.push_back(m.estimate(sim.replications, z));
	}
	return out;
}

bool ModeComparison::distinguishable() const noexcept
{
	return std::any_of(nodes.begin(), nodes.end(), [](const ModeDivergence& d) { return d.exceeds; });
}

ModeComparison compare_modes(const CoalitionStructure& cs, const ScenarioConfig& cfg, const SimConfig& sim)
{
	SimConfig geo = sim;
	geo.mode = CoverageMode::geometric;
	SimConfig mat = sim;
	mat.mode = CoverageMode::matrix;
	const auto a = simulate_structure(cs, cfg, geo);
	const auto b = simulate_structure(cs, cfg, mat);

	ModeComparison out;
	for (int n = 0; n < cfg.node_count(); ++n)
	{
		ModeDivergence d;
		d.node = NodeId{n + 1};
		d.geometric = a.nodes[n].utility;
		d.matrix = b.nodes[n].utility;
		d.difference = d.geometric.mean - d.matrix.mean;
		d.combined_half_width = std::hypot(d.geometric.half_width, d.matrix.half_width);
		d.exceeds = std::abs(d.difference) > d.combined_half_width;
		out.nodes.push_back(d);
	}
	return out;
}

}  // namespace mecgame
