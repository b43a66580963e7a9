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

#ifndef MECGAME_MONTECARLO_HPP
#define MECGAME_MONTECARLO_HPP

#include <mecgame/model.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

/// Slot-level simulation. One replication is one topology draw and one slot:
/// MD positions (or coverage indicators), activities, per-block scheduling,
/// helper selection, collision check, and charging.
namespace mecgame {

enum class CoverageMode
{
	geometric,  ///< MD positions drawn from the placement law; coverage from distances
	matrix,     ///< each coverage indicator drawn independently from the coverage matrix
};

CoverageMode parse_coverage_mode(std::string_view text);
std::string_view to_string(CoverageMode mode);

struct SimConfig
{
	std::uint64_t replications = 1'000'000;
	std::uint64_t seed = 1;
	CoverageMode mode = CoverageMode::geometric;
	double confidence = 0.95;
	unsigned workers = 0;  ///< 0: hardware concurrency. Results do not depend on it.
};

struct SimEstimate
{
	double mean = 0;
	double half_width = 0;  ///< normal-approximation CI half-width
	std::uint64_t n = 0;
};

/// Counter-based generator: each draw is a pure function of
/// (seed, replication, stream), built from the SplitMix64 finalizer.
///
/// Streams per replication, for MD index i and server index j:
///   16 i + 0   activity
///   16 i + 1   position x
///   16 i + 2   position y
///   16 i + 3   helper selection when i is scheduled
///   2^20 + 1024 j + i   matrix-mode coverage indicator (j, i)
class CounterRng
{
public:
	static std::uint64_t mix(std::uint64_t x) noexcept;
	static std::uint64_t bits(std::uint64_t seed, std::uint64_t replication, std::uint64_t stream) noexcept;
	/// Uniform on [0, 1) with 53 random bits.
	static double uniform(std::uint64_t seed, std::uint64_t replication, std::uint64_t stream) noexcept;

	static constexpr std::uint64_t activity_stream(int md) noexcept { return 16u * md; }
	static constexpr std::uint64_t position_x_stream(int md) noexcept { return 16u * md + 1; }
	static constexpr std::uint64_t position_y_stream(int md) noexcept { return 16u * md + 2; }
	static constexpr std::uint64_t selection_stream(int md) noexcept { return 16u * md + 3; }
	static constexpr std::uint64_t coverage_stream(int server, int md) noexcept
	{
		return (std::uint64_t{1} << 20) + 1024u * server + md;
	}
};

/// Replications are reduced in fixed chunks of this size, in chunk order.
inline constexpr std::uint64_t sim_chunk_size = 4096;

struct NodeEstimates
{
	SimEstimate utility;
	SimEstimate throughput;          ///< MDs only; zero for servers
	SimEstimate payment_or_revenue;  ///< MD payment or server revenue
	SimEstimate cost;                ///< servers only; zero for MDs
};

struct StructureSimulation
{
	std::vector<NodeEstimates> nodes;  ///< by node id − 1
	/// Slots in which some block's payments differed from its revenues.
	std::uint64_t ledger_violations = 0;

	const NodeEstimates& node(NodeId id) const { return nodes.at(id.value - 1); }
};

StructureSimulation simulate_structure(const CoalitionStructure& cs, const ScenarioConfig& cfg,
                                       const SimConfig& sim);

/// Empirical coverage frequencies per (server index, MD index); geometric
/// mode only.
struct CoverageEstimate
{
	int servers = 0;
	int mds = 0;
	std::vector<SimEstimate> entries;  ///< server-major

	const SimEstimate& at(int server, int md) const { return entries.at(static_cast<std::size_t>(server) * mds + md); }
};

CoverageEstimate estimate_coverage(const ScenarioConfig& cfg, const SimConfig& sim);

struct ModeDivergence
{
	NodeId node;
	SimEstimate geometric;
	SimEstimate matrix;
	double difference = 0;     ///< geometric − matrix
	double combined_half_width = 0;
	bool exceeds = false;      ///< |difference| > combined_half_width
};

struct ModeComparison
{
	std::vector<ModeDivergence> nodes;

	bool distinguishable() const noexcept;
};

/// Runs both coverage modes with the same replication count and seed.
ModeComparison compare_modes(const CoalitionStructure& cs, const ScenarioConfig& cfg, const SimConfig& sim);

/// z such that a normal CI at `confidence` is mean ± z · sd / √n.
double normal_quantile_for(double confidence);

}  // namespace mecgame

#endif  // MECGAME_MONTECARLO_HPP
