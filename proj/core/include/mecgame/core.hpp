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

#ifndef MECGAME_CORE_HPP
#define MECGAME_CORE_HPP

#include <mecgame/analytic.hpp>
#include <mecgame/model.hpp>

#include <optional>
#include <vector>

/// Core membership for the game in which every coalition S realizes exactly
/// one payoff vector: the one produced by its scheduler, uniform server
/// choice and the configured prices.
namespace mecgame {

inline constexpr int max_core_nodes = 20;

/// A coalition that, standing alone, gives every member strictly more than
/// the candidate does.
struct Blocker
{
	Coalition coalition;
	std::vector<std::pair<NodeId, double>> payoff;  ///< standalone payoff per member
};

/// Outcome of one sufficient condition: whether it holds and, if not, the
/// first violating coalition in ascending mask order.
struct ConditionResult
{
	bool holds = true;
	std::optional<Coalition> witness;
};

struct Lemma3Screen
{
	ConditionResult positive_weights;         ///< α, β, γ, μ all > 0
	ConditionResult gain_per_coalition;       ///< gain condition, per-coalition reading
	ConditionResult gain_per_member;          ///< gain condition, per-member reading
	ConditionResult grand_coalition_dominates;  ///< every member better off in the grand coalition

	/// All three conditions, gain condition in its per-coalition reading.
	bool passes() const noexcept
	{
		return positive_weights.holds && gain_per_coalition.holds && grand_coalition_dominates.holds;
	}
};

struct CoreReport
{
	PayoffVector candidate;
	std::vector<Blocker> blockers;  ///< sorted by coalition mask
	std::optional<Lemma3Screen> lemma3;

	bool in_core() const noexcept { return blockers.empty(); }
};

/// Payoff vector of the grand coalition.
PayoffVector grand_coalition_payoff(const ScenarioConfig& cfg, const CoverageMatrix& cov,
                                    const EvalOptions& options = {});

/// Tests every non-empty coalition for strict improvement of all members
/// over `candidate`.
CoreReport blocking_check(const PayoffVector& candidate, const ScenarioConfig& cfg,
                          const CoverageMatrix& cov, const EvalOptions& options = {});

/// Sufficient conditions for a non-empty core, screened over every proper
/// coalition.
///
/// Weights: every α, β, γ, μ > 0.
/// Gain, per-coalition reading: for each proper S with at least one MD, either
///     every MD member has α T > β P or every server member has γ R > μ C
///     (an empty side does not satisfy its disjunct). Per-member reading:
///     every member satisfies its own inequality. Server-only coalitions are
///     skipped; they have R = C = 0 and cannot meet a strict inequality.
/// Dominance: every member of every proper S earns strictly more in the grand
///     coalition than in S.
Lemma3Screen lemma3_screen(const ScenarioConfig& cfg, const CoverageMatrix& cov,
                           const EvalOptions& options = {});

/// True when every server-only coalition pays each member exactly zero.
bool lemma2_check(const ScenarioConfig& cfg, const CoverageMatrix& cov, const EvalOptions& options = {});

}  // namespace mecgame

#endif  // MECGAME_CORE_HPP
