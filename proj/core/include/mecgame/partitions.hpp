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

#ifndef MECGAME_PARTITIONS_HPP
#define MECGAME_PARTITIONS_HPP

#include <mecgame/analytic.hpp>
#include <mecgame/model.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace mecgame {

inline constexpr int max_partition_nodes = 12;

struct EquivalenceClass
{
	std::size_t representative = 0;    ///< index into StructureCatalog::structures
	std::vector<std::size_t> members;  ///< ascending, includes the representative
};

/// Two classes related by a role exchange (any MD permutation combined with
/// any server permutation) whose payoff vectors nevertheless differ under
/// every such relabeling.
struct DistinctClaim
{
	std::size_t first = 0;   ///< structure index
	std::size_t second = 0;  ///< structure index
	double max_difference = 0;
};

struct StructureCatalog
{
	std::vector<CoalitionStructure> structures;
	/// Empty straight after enumeration; filled by reduce_by_symmetry.
	std::vector<EquivalenceClass> classes;
	std::vector<DistinctClaim> flagged;

	/// Class index of structure `s`, or -1 before reduction.
	int class_of(std::size_t s) const;
	bool is_representative(std::size_t s) const;
};

/// Bell(n) for n <= 25.
std::uint64_t bell_number(int n);

/// Every set partition of nodes 1..n, ordered lexicographically by
/// restricted-growth string. Blocks appear in order of their smallest node.
StructureCatalog enumerate_structures(int node_count);

/// Packed restricted-growth string of `cs` (4 bits per node, any block
/// order). Equal keys mean equal partitions. Requires node_count <= 16.
std::uint64_t restricted_growth_key(const CoalitionStructure& cs, int node_count);

struct SymmetryOptions
{
	/// Certification tolerance for payoff equality (relative_error).
	double tolerance = 1e-12;
	/// Structures preferred as class representatives, in priority order.
	std::vector<CoalitionStructure> preferred;
	/// The role-exchange scan behind `flagged` is skipped when
	/// K! · L! · |catalog| exceeds this.
	std::uint64_t claim_scan_limit = 2'000'000;
	EvalOptions eval;
};

/// Groups structures whose payoff vectors coincide under
///  (a) splitting server-only blocks into singletons (such servers earn
///      nothing either way), and
///  (b) permutations of nodes with identical parameters and coverage.
/// Every merge is certified by comparing full payoff vectors under the
/// relabeling. Role exchanges that fail certification are reported in
/// `flagged` instead of being merged.
StructureCatalog reduce_by_symmetry(StructureCatalog catalog, const ScenarioConfig& cfg,
                                    const CoverageMatrix& cov, const SymmetryOptions& options = {});

/// Nodes grouped by exact interchangeability (same role, parameters,
/// per-pair values and coverage). Each group lists node ids ascending.
std::vector<std::vector<NodeId>> exchangeable_groups(const ScenarioConfig& cfg, const CoverageMatrix& cov);

/// The fifteen 2-MD / 2-server structures with their conventional labels
/// C1..C15 (MDs 1, 2; servers 3, 4).
struct LabelledStructure
{
	std::string label;
	CoalitionStructure structure;
};
const std::vector<LabelledStructure>& four_node_reference();

/// Label of `cs` in four_node_reference(), or empty.
std::string four_node_label(const CoalitionStructure& cs);

}  // namespace mecgame

#endif  // MECGAME_PARTITIONS_HPP
