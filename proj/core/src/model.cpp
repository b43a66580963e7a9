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

#include <mecgame/model.hpp>

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <sstream>

namespace mecgame {

PairTable::PairTable(int servers, int mds, double fill)
: servers_(servers), mds_(mds), values_(static_cast<std::size_t>(servers) * mds, fill)
{
}

std::size_t PairTable::index(int server, int md) const
{
	if (server < 0 || server >= servers_ || md < 0 || md >= mds_)
	{
		throw std::out_of_range("PairTable index out of range");
	}
	return static_cast<std::size_t>(server) * mds_ + md;
}

CoverageMatrix::CoverageMatrix(int servers, int mds, double fill)
: table_(servers, mds, 0)
{
	for (int j = 0; j < servers; ++j)
	{
		for (int i = 0; i < mds; ++i)
		{
			set(j, i, fill);
		}
	}
}

void CoverageMatrix::set(int server, int md, double probability)
{
	if (!(probability >= 0 && probability <= 1))
	{
		throw ValidationError("coverage[" + std::to_string(server) + "][" + std::to_string(md) + "]",
		                      "probability " + format_double(probability) + " outside [0, 1]");
	}
	table_.at(server, md) = probability;
}

PlacementLaw ScenarioConfig::placement_for(int md) const
{
	if (placement.kind == PlacementLaw::Kind::uniform_rectangle)
	{
		return placement;
	}
	PlacementLaw law;
	law.kind = PlacementLaw::Kind::fixed_point;
	law.point = mds.at(md).position.value_or(Point{});
	return law;
}

namespace {

void require(bool ok, const std::string& key, const std::string& what)
{
	if (!ok)
	{
		throw ValidationError(key, what);
	}
}

bool finite_nonneg(double v) { return std::isfinite(v) && v >= 0; }
bool finite_pos(double v) { return std::isfinite(v) && v > 0; }

void check_table(const PairTable& t, const ScenarioConfig& cfg, const char* name, bool per_md)
{
	require(t.servers() == cfg.server_count && t.mds() == cfg.md_count, name,
	        "table shape does not match K and L");
	for (int j = 0; j < t.servers(); ++j)
	{
		for (int i = 0; i < t.mds(); ++i)
		{
			const std::string key = per_md ? "md." + std::to_string(cfg.md_id(i).value) + "." + name
			                               : "server." + std::to_string(cfg.server_id(j).value) + "." + name;
			require(finite_nonneg(t.at(j, i)), key, "must be finite and non-negative");
		}
	}
}

}  // namespace

void validate(const ScenarioConfig& cfg)
{
	require(cfg.md_count >= 0, "system.K", "must be non-negative");
	require(cfg.server_count >= 0, "system.L", "must be non-negative");
	require(cfg.node_count() >= 1, "system", "scenario needs at least one node");
	require(cfg.node_count() <= max_nodes, "system",
	        "at most " + std::to_string(max_nodes) + " nodes are supported");
	require(static_cast<int>(cfg.mds.size()) == cfg.md_count, "md", "expected K MD sections");
	require(static_cast<int>(cfg.servers.size()) == cfg.server_count, "server",
	        "expected L server sections");
	require(cfg.system.replications >= 1, "system.replications", "must be at least 1");

	for (int i = 0; i < cfg.md_count; ++i)
	{
		const auto& md = cfg.mds[i];
		const std::string sec = "md." + std::to_string(cfg.md_id(i).value);
		require(md.activity_prob >= 0 && md.activity_prob <= 1, sec + ".p", "must lie in [0, 1]");
		require(finite_nonneg(md.direct_rate), sec + ".r", "must be finite and non-negative");
		require(finite_nonneg(md.transmit_distance), sec + ".d", "must be finite and non-negative");
		require(finite_pos(md.alpha), sec + ".alpha", "must be finite and positive");
		require(finite_pos(md.beta), sec + ".beta", "must be finite and positive");
		if (cfg.placement.kind == PlacementLaw::Kind::fixed_point)
		{
			require(md.position.has_value(), sec + ".x", "fixed-point placement needs x and y");
		}
	}
	for (int j = 0; j < cfg.server_count; ++j)
	{
		const auto& sv = cfg.servers[j];
		const std::string sec = "server." + std::to_string(cfg.server_id(j).value);
		require(std::isfinite(sv.position.x), sec + ".x", "must be finite");
		require(std::isfinite(sv.position.y), sec + ".y", "must be finite");
		require(finite_pos(sv.gamma), sec + ".gamma", "must be finite and positive");
		require(finite_pos(sv.mu), sec + ".mu", "must be finite and positive");
	}
	check_table(cfg.rate_gain, cfg, "delta", true);
	check_table(cfg.price, cfg, "price", false);
	check_table(cfg.receive_cost, cfg, "cost_r", false);
	check_table(cfg.forward_cost, cfg, "cost_f", false);

	if (cfg.placement.kind == PlacementLaw::Kind::uniform_rectangle)
	{
		const Rect& r = cfg.placement.rectangle;
		require(std::isfinite(r.x_min) && std::isfinite(r.x_max) && std::isfinite(r.y_min) &&
		            std::isfinite(r.y_max),
		        "placement", "rectangle bounds must be finite");
		require(r.x_min < r.x_max && r.y_min < r.y_max, "placement",
		        "rectangle must have strictly positive area");
	}
	if (cfg.coverage_override)
	{
		require(cfg.coverage_override->servers() == cfg.server_count &&
		            cfg.coverage_override->mds() == cfg.md_count,
		        "coverage", "override shape does not match K and L");
	}
}

ScenarioConfig with_transmit_distance(ScenarioConfig cfg, double d)
{
	for (auto& md : cfg.mds)
	{
		md.transmit_distance = d;
	}
	return cfg;
}

Coalition::Coalition(std::initializer_list<int> ids)
{
	for (int id : ids)
	{
		mask_ |= std::uint32_t{1} << (id - 1);
	}
}

Coalition Coalition::of(const std::vector<NodeId>& ids)
{
	std::uint32_t mask = 0;
	for (auto id : ids)
	{
		mask |= std::uint32_t{1} << (id.value - 1);
	}
	return Coalition(mask);
}

int Coalition::size() const noexcept { return std::popcount(mask_); }

bool Coalition::contains(NodeId id) const noexcept
{
	return id.value >= 1 && id.value <= 32 && (mask_ >> (id.value - 1)) & 1U;
}

Coalition Coalition::md_part(int md_count) const noexcept
{
	return Coalition(mask_ & all_nodes_mask(md_count));
}

Coalition Coalition::server_part(int md_count) const noexcept
{
	return Coalition(mask_ & ~all_nodes_mask(md_count));
}

std::vector<NodeId> Coalition::members() const
{
	std::vector<NodeId> out;
	out.reserve(size());
	for (std::uint32_t m = mask_; m != 0; m &= m - 1)
	{
		out.push_back(NodeId{std::countr_zero(m) + 1});
	}
	return out;
}

NodeId Coalition::min_member() const
{
	if (mask_ == 0)
	{
		throw PreconditionError("empty coalition has no minimal member");
	}
	return NodeId{std::countr_zero(mask_) + 1};
}

std::string Coalition::to_string() const
{
	std::string s = "{";
	bool first = true;
	for (auto id : members())
	{
		if (!first)
		{
			s += ',';
		}
		s += std::to_string(id.value);
		first = false;
	}
	s += '}';
	return s;
}

CoalitionStructure::CoalitionStructure(std::vector<Coalition> blocks) : blocks_(std::move(blocks)) {}

const Coalition& CoalitionStructure::block_of(NodeId id) const
{
	for (const auto& b : blocks_)
	{
		if (b.contains(id))
		{
			return b;
		}
	}
	throw PreconditionError("node " + std::to_string(id.value) + " is in no block");
}

CoalitionStructure CoalitionStructure::canonical() const
{
	auto blocks = blocks_;
	std::sort(blocks.begin(), blocks.end(), [](const Coalition& a, const Coalition& b) {
		return std::countr_zero(a.mask()) < std::countr_zero(b.mask());
	});
	return CoalitionStructure(std::move(blocks));
}

std::string CoalitionStructure::to_string() const
{
	std::string s;
	for (std::size_t k = 0; k < blocks_.size(); ++k)
	{
		if (k > 0)
		{
			s += '|';
		}
		s += blocks_[k].to_string();
	}
	return s;
}

CoalitionStructure CoalitionStructure::parse(std::string_view text)
{
	std::string compact;
	for (char c : text)
	{
		if (!std::isspace(static_cast<unsigned char>(c)))
		{
			compact += c;
		}
	}
	if (compact.empty())
	{
		throw ParseError("empty structure string");
	}

	std::vector<Coalition> blocks;
	std::size_t pos = 0;
	while (pos < compact.size())
	{
		if (compact[pos] != '{')
		{
			throw ParseError("expected '{' at offset " + std::to_string(pos) + " in \"" + compact + "\"");
		}
		const auto close = compact.find('}', pos);
		if (close == std::string::npos)
		{
			throw ParseError("unterminated block in \"" + compact + "\"");
		}
		const std::string_view body(compact.data() + pos + 1, close - pos - 1);
		if (body.empty())
		{
			throw ParseError("empty block in \"" + compact + "\"");
		}
		std::uint32_t mask = 0;
		std::size_t p = 0;
		while (p <= body.size())
		{
			auto comma = body.find(',', p);
			if (comma == std::string_view::npos)
			{
				comma = body.size();
			}
			const auto tok = body.substr(p, comma - p);
			int id = 0;
			const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), id);
			if (ec != std::errc{} || ptr != tok.data() + tok.size() || tok.empty())
			{
				throw ParseError("bad node id \"" + std::string(tok) + "\"");
			}
			if (id < 1 || id > 32)
			{
				throw ValidationError("structure", "unknown node " + std::to_string(id));
			}
			const std::uint32_t bit = std::uint32_t{1} << (id - 1);
			if (mask & bit)
			{
				throw ValidationError("structure", "overlap on node " + std::to_string(id));
			}
			mask |= bit;
			p = comma + 1;
		}
		blocks.emplace_back(mask);
		pos = close + 1;
		if (pos < compact.size())
		{
			if (compact[pos] != '|')
			{
				throw ParseError("expected '|' between blocks in \"" + compact + "\"");
			}
			++pos;
			if (pos == compact.size())
			{
				throw ParseError("trailing '|' in \"" + compact + "\"");
			}
		}
	}
	return CoalitionStructure(std::move(blocks));
}

CoalitionStructure CoalitionStructure::grand(int node_count)
{
	return CoalitionStructure({Coalition(all_nodes_mask(node_count))});
}

CoalitionStructure CoalitionStructure::singletons(int node_count)
{
	std::vector<Coalition> blocks;
	for (int k = 0; k < node_count; ++k)
	{
		blocks.emplace_back(std::uint32_t{1} << k);
	}
	return CoalitionStructure(std::move(blocks));
}

void validate_structure(const ScenarioConfig& cfg, const CoalitionStructure& cs)
{
	const std::uint32_t all = all_nodes_mask(cfg.node_count());
	std::uint32_t seen = 0;
	for (const auto& b : cs.blocks())
	{
		if (b.empty())
		{
			throw ValidationError("structure", "empty block");
		}
		if (const auto unknown = b.mask() & ~all; unknown != 0)
		{
			throw ValidationError("structure", "unknown node(s) " + Coalition(unknown).to_string());
		}
		if (const auto overlap = seen & b.mask(); overlap != 0)
		{
			throw ValidationError("structure", "overlap on node(s) " + Coalition(overlap).to_string());
		}
		seen |= b.mask();
	}
	if (seen != all)
	{
		throw ValidationError("structure", "missing node(s) " + Coalition(all & ~seen).to_string());
	}
}

PayoffVector::PayoffVector(int md_count, int server_count)
: md_count_(md_count), values_(static_cast<std::size_t>(md_count + server_count), 0.0)
{
}

std::string format_double(double value)
{
	char buf[64];
	const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
	if (ec != std::errc{})
	{
		return "nan";
	}
	return std::string(buf, ptr);
}

}  // namespace mecgame
