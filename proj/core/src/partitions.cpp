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

#include <mecgame/partitions.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <unordered_map>

namespace mecgame {

int StructureCatalog::class_of(std::size_t s) const
{
	for (std::size_t c = 0; c < classes.size(); ++c)
	{
		const auto& m = classes[c].members;
		if (std::binary_search(m.begin(), m.end(), s))
		{
			return static_cast<int>(c);
		}
	}
	return -1;
}

bool StructureCatalog::is_representative(std::size_t s) const
{
	return std::any_of(classes.begin(), classes.end(),
	                   [s](const EquivalenceClass& c) { return c.representative == s; });
}

std::uint64_t bell_number(int n)
{
	if (n < 0 || n > 25)
	{
		throw CapExceededError("bell_number: n must lie in [0, 25]");
	}
	// Bell triangle.
	std::vector<std::uint64_t> row{1};
	for (int k = 0; k < n; ++k)
	{
		std::vector<std::uint64_t> next{row.back()};
		for (auto v : row)
		{
			next.push_back(next.back() + v);
		}
		row = std::move(next);
	}
	return row.front();
}

namespace {

void enumerate_rgs(int n, int pos, int blocks, std::vector<std::uint32_t>& masks,
                   std::vector<CoalitionStructure>& out)
{
	if (pos == n)
	{
		std::vector<Coalition> b;
		b.reserve(static_cast<std::size_t>(blocks));
		for (int k = 0; k < blocks; ++k)
		{
			b.emplace_back(masks[k]);
		}
		out.emplace_back(std::move(b));
		return;
	}
	const std::uint32_t bit = std::uint32_t{1} << pos;
	for (int label = 0; label <= blocks && label < n; ++label)
	{
		masks[label] |= bit;
		enumerate_rgs(n, pos + 1, std::max(blocks, label + 1), masks, out);
		masks[label] &= ~bit;
	}
}

using Permutation = std::vector<int>;  // 0-based node index -> node index

CoalitionStructure apply(const Permutation& perm, const CoalitionStructure& cs)
{
	std::vector<Coalition> blocks;
	for (const auto& b : cs.blocks())
	{
		std::uint32_t mask = 0;
		for (std::uint32_t m = b.mask(); m != 0; m &= m - 1)
		{
			mask |= std::uint32_t{1} << perm[std::countr_zero(m)];
		}
		blocks.emplace_back(mask);
	}
	return CoalitionStructure(std::move(blocks)).canonical();
}

// Largest payoff difference between node x in `a` and node perm[x] in `b`.
double relabeled_difference(const PayoffVector& a, const PayoffVector& b, const Permutation& perm)
{
	double worst = 0;
	for (int x = 0; x < a.node_count(); ++x)
	{
		worst = std::max(worst, relative_error(a.values()[x], b.values()[perm[x]]));
	}
	return worst;
}

CoalitionStructure split_server_only_blocks(const CoalitionStructure& cs, int md_count)
{
	std::vector<Coalition> blocks;
	for (const auto& b : cs.blocks())
	{
		if (b.md_part(md_count).empty() && b.size() > 1)
		{
			for (auto id : b.members())
			{
				blocks.push_back(Coalition::of({id}));
			}
		}
		else
		{
			blocks.push_back(b);
		}
	}
	return CoalitionStructure(std::move(blocks)).canonical();
}

bool has_grouped_servers(const CoalitionStructure& cs, int md_count)
{
	return std::any_of(cs.blocks().begin(), cs.blocks().end(),
	                   [&](const Coalition& b) { return b.md_part(md_count).empty() && b.size() > 1; });
}

// All permutations that act within each group (product of symmetric groups).
std::vector<Permutation> group_elements(const std::vector<std::vector<NodeId>>& groups, int n)
{
	std::vector<Permutation> out{Permutation(static_cast<std::size_t>(n))};
	std::iota(out.front().begin(), out.front().end(), 0);
	for (const auto& g : groups)
	{
		if (g.size() < 2)
		{
			continue;
		}
		std::vector<int> slots;
		for (auto id : g)
		{
			slots.push_back(id.value - 1);
		}
		std::vector<Permutation> next;
		std::vector<int> image = slots;
		do
		{
			for (const auto& base : out)
			{
				Permutation p = base;
				for (std::size_t k = 0; k < slots.size(); ++k)
				{
					p[slots[k]] = image[k];
				}
				next.push_back(std::move(p));
			}
		} while (std::next_permutation(image.begin(), image.end()));
		out = std::move(next);
	}
	return out;
}

std::uint64_t factorial(int n)
{
	std::uint64_t f = 1;
	for (int k = 2; k <= n; ++k)
	{
		f *= static_cast<std::uint64_t>(k);
	}
	return f;
}

struct DisjointSets
{
	explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }

	std::size_t find(std::size_t x)
	{
		while (parent[x] != x)
		{
			parent[x] = parent[parent[x]];
			x = parent[x];
		}
		return x;
	}

	void unite(std::size_t a, std::size_t b)
	{
		a = find(a);
		b = find(b);
		if (a != b)
		{
			parent[std::max(a, b)] = std::min(a, b);
		}
	}

	std::vector<std::size_t> parent;
};

}  // namespace

std::uint64_t restricted_growth_key(const CoalitionStructure& cs, int node_count)
{
	if (node_count > 16)
	{
		throw CapExceededError("restricted_growth_key supports at most 16 nodes");
	}
	const auto canon = cs.canonical();
	std::uint64_t key = 0;
	for (std::size_t label = 0; label < canon.blocks().size(); ++label)
	{
		for (std::uint32_t m = canon.blocks()[label].mask(); m != 0; m &= m - 1)
		{
			key |= static_cast<std::uint64_t>(label) << (4 * std::countr_zero(m));
		}
	}
	return key;
}

StructureCatalog enumerate_structures(int node_count)
{
	if (node_count < 1)
	{
		throw PreconditionError("enumerate_structures needs at least one node");
	}
	if (node_count > max_partition_nodes)
	{
		throw CapExceededError("enumerate_structures: " + std::to_string(node_count) +
		                       " nodes exceeds cap " + std::to_string(max_partition_nodes));
	}
	StructureCatalog catalog;
	catalog.structures.reserve(static_cast<std::size_t>(bell_number(node_count)));
	std::vector<std::uint32_t> masks(static_cast<std::size_t>(node_count), 0);
	enumerate_rgs(node_count, 0, 0, masks, catalog.structures);
	return catalog;
}

std::vector<std::vector<NodeId>> exchangeable_groups(const ScenarioConfig& cfg, const CoverageMatrix& cov)
{
	auto same_md = [&](int a, int b) {
		const auto& x = cfg.mds[a];
		const auto& y = cfg.mds[b];
		if (x.activity_prob != y.activity_prob || x.direct_rate != y.direct_rate ||
		    x.transmit_distance != y.transmit_distance || x.alpha != y.alpha || x.beta != y.beta)
		{
			return false;
		}
		for (int j = 0; j < cfg.server_count; ++j)
		{
			if (cfg.rate_gain.at(j, a) != cfg.rate_gain.at(j, b) || cfg.price.at(j, a) != cfg.price.at(j, b) ||
			    cfg.receive_cost.at(j, a) != cfg.receive_cost.at(j, b) ||
			    cfg.forward_cost.at(j, a) != cfg.forward_cost.at(j, b) || cov.at(j, a) != cov.at(j, b))
			{
				return false;
			}
		}
		return true;
	};
	auto same_server = [&](int a, int b) {
		const auto& x = cfg.servers[a];
		const auto& y = cfg.servers[b];
		if (x.gamma != y.gamma || x.mu != y.mu)
		{
			return false;
		}
		for (int i = 0; i < cfg.md_count; ++i)
		{
			if (cfg.rate_gain.at(a, i) != cfg.rate_gain.at(b, i) || cfg.price.at(a, i) != cfg.price.at(b, i) ||
			    cfg.receive_cost.at(a, i) != cfg.receive_cost.at(b, i) ||
			    cfg.forward_cost.at(a, i) != cfg.forward_cost.at(b, i) || cov.at(a, i) != cov.at(b, i))
			{
				return false;
			}
		}
		return true;
	};

	std::vector<std::vector<NodeId>> groups;
	auto collect = [&](int count, auto same, auto to_id) {
		std::vector<bool> placed(static_cast<std::size_t>(count), false);
		for (int a = 0; a < count; ++a)
		{
			if (placed[a])
			{
				continue;
			}
			std::vector<NodeId> g{to_id(a)};
			placed[a] = true;
			for (int b = a + 1; b < count; ++b)
			{
				if (!placed[b] && same(a, b))
				{
					g.push_back(to_id(b));
					placed[b] = true;
				}
			}
			groups.push_back(std::move(g));
		}
	};
	collect(cfg.md_count, same_md, [&](int k) { return cfg.md_id(k); });
	collect(cfg.server_count, same_server, [&](int k) { return cfg.server_id(k); });
	return groups;
}

StructureCatalog reduce_by_symmetry(StructureCatalog catalog, const ScenarioConfig& cfg,
                                    const CoverageMatrix& cov, const SymmetryOptions& options)
{
	const int n = cfg.node_count();
	const auto& structures = catalog.structures;
	const std::size_t count = structures.size();

	std::unordered_map<std::uint64_t, std::size_t> index;
	std::vector<PayoffVector> payoffs;
	payoffs.reserve(count);
	for (std::size_t s = 0; s < count; ++s)
	{
		index.emplace(restricted_growth_key(structures[s], n), s);
		payoffs.push_back(structure_payoffs(structures[s], cov, cfg, options.eval));
	}
	auto lookup = [&](const CoalitionStructure& cs) {
		const auto it = index.find(restricted_growth_key(cs, n));
		if (it == index.end())
		{
			throw PreconditionError("structure " + cs.to_string() + " is not in the catalog");
		}
		return it->second;
	};

	DisjointSets sets(count);
	Permutation identity(static_cast<std::size_t>(n));
	std::iota(identity.begin(), identity.end(), 0);

	// (a) server-only blocks carry no payoff; their arrangement is irrelevant.
	for (std::size_t s = 0; s < count; ++s)
	{
		const std::size_t t = lookup(split_server_only_blocks(structures[s], cfg.md_count));
		if (t != s && relabeled_difference(payoffs[s], payoffs[t], identity) <= options.tolerance)
		{
			sets.unite(s, t);
		}
	}

	// (b) node relabelings. The role-exchange group (every MD permutation with
	// every server permutation) is scanned when small enough, so failed
	// exchanges can be reported; otherwise only exact-parameter groups are.
	const std::uint64_t role_size = factorial(cfg.md_count) * factorial(cfg.server_count);
	const bool scan_roles = cfg.md_count <= 12 && cfg.server_count <= 12 &&
	                        role_size * count <= options.claim_scan_limit;
	std::vector<std::vector<NodeId>> groups;
	if (scan_roles)
	{
		std::vector<NodeId> mds, servers;
		for (int i = 0; i < cfg.md_count; ++i)
		{
			mds.push_back(cfg.md_id(i));
		}
		for (int j = 0; j < cfg.server_count; ++j)
		{
			servers.push_back(cfg.server_id(j));
		}
		groups = {mds, servers};
	}
	else
	{
		groups = exchangeable_groups(cfg, cov);
	}
	const auto perms = group_elements(groups, n);

	std::map<std::pair<std::size_t, std::size_t>, double> unresolved;
	for (std::size_t s = 0; s < count; ++s)
	{
		for (const auto& perm : perms)
		{
			const std::size_t t = lookup(apply(perm, structures[s]));
			if (t == s)
			{
				continue;
			}
			const double diff = relabeled_difference(payoffs[s], payoffs[t], perm);
			if (diff <= options.tolerance)
			{
				sets.unite(s, t);
			}
			else
			{
				const auto key = std::minmax(s, t);
				auto [it, fresh] = unresolved.emplace(key, diff);
				if (!fresh)
				{
					it->second = std::min(it->second, diff);
				}
			}
		}
	}

	// Assemble classes.
	std::map<std::size_t, std::vector<std::size_t>> by_root;
	for (std::size_t s = 0; s < count; ++s)
	{
		by_root[sets.find(s)].push_back(s);
	}
	std::vector<std::size_t> preferred;
	for (const auto& p : options.preferred)
	{
		if (static_cast<int>(p.blocks().size()) > 0)
		{
			const auto it = index.find(restricted_growth_key(p, n));
			if (it != index.end())
			{
				preferred.push_back(it->second);
			}
		}
	}
	auto rank = [&](std::size_t s) {
		const bool grouped = has_grouped_servers(structures[s], cfg.md_count);
		const auto pit = std::find(preferred.begin(), preferred.end(), s);
		const std::size_t pref = pit == preferred.end() ? preferred.size() : pit - preferred.begin();
		return std::tuple(grouped, pref, s);
	};

	catalog.classes.clear();
	for (auto& [root, members] : by_root)
	{
		EquivalenceClass c;
		c.members = members;
		c.representative = *std::min_element(members.begin(), members.end(),
		                                     [&](std::size_t a, std::size_t b) { return rank(a) < rank(b); });
		catalog.classes.push_back(std::move(c));
	}
	std::sort(catalog.classes.begin(), catalog.classes.end(),
	          [](const EquivalenceClass& a, const EquivalenceClass& b) { return a.members.front() < b.members.front(); });

	// Report exchanges that never certified, once per pair of classes.
	catalog.flagged.clear();
	std::map<std::pair<std::size_t, std::size_t>, DistinctClaim> claims;
	for (const auto& [pair, diff] : unresolved)
	{
		const auto a = sets.find(pair.first);
		const auto b = sets.find(pair.second);
		if (a == b)
		{
			continue;
		}
		const auto key = std::minmax(a, b);
		auto it = claims.find(key);
		if (it == claims.end() || diff < it->second.max_difference)
		{
			claims[key] = DistinctClaim{pair.first, pair.second, diff};
		}
	}
	for (auto& [key, claim] : claims)
	{
		catalog.flagged.push_back(claim);
	}
	return catalog;
}

const std::vector<LabelledStructure>& four_node_reference()
{
	static const std::vector<LabelledStructure> table = [] {
		const std::pair<const char*, const char*> rows[] = {
		    {"C1", "{1,2,3,4}"},   {"C2", "{1,3,4}|{2}"},   {"C3", "{1,2}|{3}|{4}"},
		    {"C4", "{1}|{2}|{3}|{4}"}, {"C5", "{1}|{3}|{2,4}"}, {"C6", "{1,3}|{2,4}"},
		    {"C7", "{1,2,3}|{4}"}, {"C8", "{1}|{2,3,4}"},   {"C9", "{1,4}|{2,3}"},
		    {"C10", "{1}|{4}|{2,3}"}, {"C11", "{1,2}|{3,4}"}, {"C12", "{1}|{2}|{3,4}"},
		    {"C13", "{1,2,4}|{3}"}, {"C14", "{1,4}|{2}|{3}"}, {"C15", "{2}|{4}|{1,3}"},
		};
		std::vector<LabelledStructure> out;
		for (const auto& [label, text] : rows)
		{
			out.push_back({label, CoalitionStructure::parse(text)});
		}
		return out;
	}();
	return table;
}

std::string four_node_label(const CoalitionStructure& cs)
{
	std::uint32_t covered = 0;
	for (const auto& b : cs.blocks())
	{
		covered |= b.mask();
	}
	if (covered != all_nodes_mask(4))
	{
		return {};
	}
	const auto key = restricted_growth_key(cs, 4);
	for (const auto& row : four_node_reference())
	{
		if (restricted_growth_key(row.structure, 4) == key)
		{
			return row.label;
		}
	}
	return {};
}

}  // namespace mecgame
