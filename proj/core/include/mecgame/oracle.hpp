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

#ifndef MECGAME_ORACLE_HPP
#define MECGAME_ORACLE_HPP

#include <mecgame/analytic.hpp>
#include <mecgame/model.hpp>

#include <functional>

/// Brute-force reference for the closed forms in analytic.hpp.
///
/// The slot's probability space is enumerated atom by atom: the activity of
/// every MD, then the coverage row of the MD the coalition schedules, then
/// the uniformly chosen covering server. Expectations are plain weighted
/// sums over atoms; nothing here reuses the product formulas.
namespace mecgame::oracle {

inline constexpr int max_md_count = 12;
inline constexpr int max_coverage_bits = 20;

struct OutcomeAtom
{
	std::uint32_t activity = 0;  ///< bit i: MD index i active
	int scheduled = -1;          ///< MD index transmitting inside S, or -1
	std::uint32_t coverage = 0;  ///< bit k: k-th server of S (ascending id) covers the scheduled MD
	int selected = -1;           ///< server index chosen as helper, or -1 (direct)
	double weight = 0;
};

/// Calls `visit` for every atom of coalition `s`.
void for_each_atom(const Coalition& s, const CoverageMatrix& cov, const ScenarioConfig& cfg,
                   const std::function<void(const OutcomeAtom&)>& visit);

struct OracleResult
{
	CoalitionBreakdown breakdown;
	double total_probability = 0;
};

/// Exact expectations of every per-MD and per-server quantity of `s`.
/// Per-MD conditionals (ζ, χ, ε, 𝓟, η) come from enumerating that MD's
/// coverage row; slot-level quantities (ρ, T, P, R, C) from the atoms.
OracleResult exact_expectations(const Coalition& s, const CoverageMatrix& cov, const ScenarioConfig& cfg);

}  // namespace mecgame::oracle

#endif  // MECGAME_ORACLE_HPP
