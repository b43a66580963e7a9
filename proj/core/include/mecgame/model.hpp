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

#ifndef MECGAME_MODEL_HPP
#define MECGAME_MODEL_HPP

#include <compare>
#include <cstdint>
#include <filesystem>
#include <initializer_list>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

/// Domain types shared by every mecgame module.
///
/// Node numbering: mobile devices (MDs) are nodes 1..K and MEC servers are
/// nodes K+1..K+L. The scheduler's priority rule (lowest-index active MD
/// transmits) is defined against this numbering.
namespace mecgame {

class Error : public std::runtime_error
{
public:
	using std::runtime_error::runtime_error;
};

/// Malformed input (scenario file, structure string, numeric literal).
class ParseError : public Error
{
public:
	using Error::Error;
};

/// Input that parses but violates an invariant. `key()` names the offending
/// scenario key or structure element.
class ValidationError : public Error
{
public:
	ValidationError(std::string key, const std::string& what)
	: Error(key + ": " + what), key_(std::move(key))
	{
	}

	const std::string& key() const noexcept { return key_; }

private:
	std::string key_;
};

/// An enumeration would exceed its configured size cap.
class CapExceededError : public Error
{
public:
	using Error::Error;
};

/// A function was called outside its documented precondition.
class PreconditionError : public Error
{
public:
	using Error::Error;
};

/// Hard cap on the number of nodes a scenario may hold (coalitions are
/// 32-bit masks; every exhaustive routine additionally caps itself).
inline constexpr int max_nodes = 20;

struct NodeId
{
	int value = 0;

	friend constexpr auto operator<=>(NodeId, NodeId) = default;
};

struct Point
{
	double x = 0;
	double y = 0;

	friend constexpr bool operator==(const Point&, const Point&) = default;
};

struct Rect
{
	double x_min = 0;
	double x_max = 0;
	double y_min = 0;
	double y_max = 0;

	double area() const noexcept { return (x_max - x_min) * (y_max - y_min); }

	friend constexpr bool operator==(const Rect&, const Rect&) = default;
};

struct PlacementLaw
{
	enum class Kind { fixed_point, uniform_rectangle };

	Kind kind = Kind::uniform_rectangle;
	Rect rectangle;  ///< used when kind == uniform_rectangle
	Point point;     ///< used when kind == fixed_point

	friend bool operator==(const PlacementLaw&, const PlacementLaw&) = default;
};

struct MdParams
{
	double activity_prob = 0;
	double direct_rate = 0;
	double transmit_distance = 0;
	double alpha = 1;
	double beta = 1;
	std::optional<Point> position;  ///< only meaningful under fixed-point placement

	friend bool operator==(const MdParams&, const MdParams&) = default;
};

struct ServerParams
{
	Point position;
	double gamma = 1;
	double mu = 1;

	friend bool operator==(const ServerParams&, const ServerParams&) = default;
};

/// Dense server-by-MD table for the per-pair quantities (price, costs,
/// rate gain). Indices are 0-based within each role.
class PairTable
{
public:
	PairTable() = default;
	PairTable(int servers, int mds, double fill = 0);

	int servers() const noexcept { return servers_; }
	int mds() const noexcept { return mds_; }

	double at(int server, int md) const { return values_[index(server, md)]; }
	double& at(int server, int md) { return values_[index(server, md)]; }

	friend bool operator==(const PairTable&, const PairTable&) = default;

private:
	std::size_t index(int server, int md) const;

	int servers_ = 0;
	int mds_ = 0;
	std::vector<double> values_;
};

/// Per (server j, MD i) probability that j covers i.
class CoverageMatrix
{
public:
	CoverageMatrix() = default;
	CoverageMatrix(int servers, int mds, double fill = 0);

	int servers() const noexcept { return table_.servers(); }
	int mds() const noexcept { return table_.mds(); }

	double at(int server, int md) const { return table_.at(server, md); }

	/// Throws ValidationError when `probability` is outside [0, 1].
	void set(int server, int md, double probability);

	friend bool operator==(const CoverageMatrix&, const CoverageMatrix&) = default;

private:
	PairTable table_;
};

struct SystemDefaults
{
	std::uint64_t replications = 100000;
	std::uint64_t seed = 1;

	friend bool operator==(const SystemDefaults&, const SystemDefaults&) = default;
};

struct ScenarioConfig
{
	int md_count = 0;
	int server_count = 0;
	std::vector<MdParams> mds;
	std::vector<ServerParams> servers;
	PairTable rate_gain;     ///< Δ, rate increase when MD i offloads to server j
	PairTable price;         ///< ξ, charged per transmission
	PairTable receive_cost;  ///< c^r
	PairTable forward_cost;  ///< c^f
	PlacementLaw placement;
	std::optional<CoverageMatrix> coverage_override;
	SystemDefaults system;

	int node_count() const noexcept { return md_count + server_count; }

	bool is_md(NodeId id) const noexcept { return id.value >= 1 && id.value <= md_count; }
	bool is_server(NodeId id) const noexcept
	{
		return id.value > md_count && id.value <= node_count();
	}

	int md_index(NodeId id) const noexcept { return id.value - 1; }
	int server_index(NodeId id) const noexcept { return id.value - md_count - 1; }
	NodeId md_id(int index) const noexcept { return NodeId{index + 1}; }
	NodeId server_id(int index) const noexcept { return NodeId{md_count + index + 1}; }

	/// R_ij = r_i + Δ_ij.
	double offload_rate(int md, int server) const
	{
		return mds[md].direct_rate + rate_gain.at(server, md);
	}

	/// Placement law of one MD: the shared rectangle, or the MD's own point.
	PlacementLaw placement_for(int md) const;

	friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Checks every invariant of a config assembled in code; throws
/// ValidationError naming the offending key.
void validate(const ScenarioConfig& cfg);

/// Copy of `cfg` with every MD's transmit distance set to `d`.
ScenarioConfig with_transmit_distance(ScenarioConfig cfg, double d);

/// A non-empty set of nodes, stored as a bit mask (bit k is node k+1).
class Coalition
{
public:
	constexpr Coalition() = default;
	constexpr explicit Coalition(std::uint32_t mask) : mask_(mask) {}
	Coalition(std::initializer_list<int> ids);

	static Coalition of(const std::vector<NodeId>& ids);

	constexpr std::uint32_t mask() const noexcept { return mask_; }
	constexpr bool empty() const noexcept { return mask_ == 0; }
	int size() const noexcept;
	bool contains(NodeId id) const noexcept;

	/// S_m: members that are MDs.
	Coalition md_part(int md_count) const noexcept;
	/// S_s: members that are servers.
	Coalition server_part(int md_count) const noexcept;

	/// Members in increasing id order.
	std::vector<NodeId> members() const;
	NodeId min_member() const;

	std::string to_string() const;

	friend constexpr auto operator<=>(const Coalition&, const Coalition&) = default;

private:
	std::uint32_t mask_ = 0;
};

/// Mask with bits for node ids 1..n.
constexpr std::uint32_t all_nodes_mask(int n) noexcept
{
	return n >= 32 ? ~std::uint32_t{0} : ((std::uint32_t{1} << n) - 1);
}

/// A list of coalitions; a valid structure is a partition of every node.
class CoalitionStructure
{
public:
	CoalitionStructure() = default;
	explicit CoalitionStructure(std::vector<Coalition> blocks);

	const std::vector<Coalition>& blocks() const noexcept { return blocks_; }

	/// Block holding `id`; throws PreconditionError when absent.
	const Coalition& block_of(NodeId id) const;

	/// Blocks sorted by their smallest member.
	CoalitionStructure canonical() const;

	/// "{1,2}|{3}|{4}" in the current block order.
	std::string to_string() const;

	/// Parses the "{a,b}|{c}" grammar (whitespace-insensitive). Repeated ids
	/// inside one block raise a ValidationError; cross-block overlap is left
	/// for validate_structure.
	static CoalitionStructure parse(std::string_view text);

	static CoalitionStructure grand(int node_count);
	static CoalitionStructure singletons(int node_count);

	friend bool operator==(const CoalitionStructure&, const CoalitionStructure&) = default;

private:
	std::vector<Coalition> blocks_;
};

/// Confirms `cs` partitions the scenario's nodes. Throws ValidationError with
/// key "structure" naming overlapping, missing or unknown nodes.
void validate_structure(const ScenarioConfig& cfg, const CoalitionStructure& cs);

/// Per-node utilities: u_i for MDs, ũ_j for servers, indexed by node id.
class PayoffVector
{
public:
	PayoffVector() = default;
	PayoffVector(int md_count, int server_count);

	int node_count() const noexcept { return static_cast<int>(values_.size()); }
	int md_count() const noexcept { return md_count_; }

	double operator[](NodeId id) const { return values_.at(id.value - 1); }
	double& operator[](NodeId id) { return values_.at(id.value - 1); }

	const std::vector<double>& values() const noexcept { return values_; }

	friend bool operator==(const PayoffVector&, const PayoffVector&) = default;

private:
	int md_count_ = 0;
	std::vector<double> values_;
};

/// Reads and validates a scenario file (INI; see docs/scenario_format.md).
ScenarioConfig load_scenario(const std::filesystem::path& path);
ScenarioConfig parse_scenario(std::string_view text);

/// Writes `cfg` in the same format; parse_scenario(serialize_scenario(c)) == c.
std::string serialize_scenario(const ScenarioConfig& cfg);
void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path);

/// Shortest round-trip decimal representation.
std::string format_double(double value);

}  // namespace mecgame

#endif  // MECGAME_MODEL_HPP
