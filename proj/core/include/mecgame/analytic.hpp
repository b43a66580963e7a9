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

#ifndef MECGAME_ANALYTIC_HPP
#define MECGAME_ANALYTIC_HPP

#include <mecgame/model.hpp>

#include <optional>
#include <span>
#include <vector>

/// Closed-form payoffs of the offloading game.
///
/// Within a coalition S the scheduler lets the highest-priority active MD
/// transmit (default priority: lowest node id). The scheduled MD picks one
/// covering server of S uniformly at random, or transmits directly at r_i
/// when none covers it. Throughput only counts when every MD outside S is
/// silent; charging ignores outside collisions.
namespace mecgame {

inline constexpr int default_subset_cap = 20;

/// |a − b| / max(1, |a|, |b|).
double relative_error(double a, double b) noexcept;

struct EvalOptions
{
	/// Largest |S_s| the subset kernel will enumerate (2^n patterns).
	int subset_cap = default_subset_cap;
	/// Scheduler priority as MD node ids, highest first. Empty means
	/// ascending id. MDs missing from the list rank after listed ones, in
	/// ascending id.
	std::vector<NodeId> priority;
};

/// Per-MD share of slots in which the MD is the scheduled transmitter,
/// indexed by MD index (0-based); zero for MDs outside S.
struct SchedulingRatios
{
	std::vector<double> ratio;
};

SchedulingRatios scheduling_ratios(const Coalition& coalition, const ScenarioConfig& cfg,
                                   const EvalOptions& options = {});

/// Σ over non-empty A ⊆ servers of mean(weights over A) · Π_{A} q · Π_{not A} (1 − q).
/// `weights` and `probs` are aligned per server. Returns 0 for no servers.
double subset_expectation(std::span<const double> weights, std::span<const double> probs,
                          int cap = default_subset_cap);

/// Probability that each server is the selected helper under uniform choice
/// among covering servers: q_j · E[1 / (1 + #other covering servers)].
std::vector<double> selection_probabilities(std::span<const double> probs,
                                            int cap = default_subset_cap);

struct MdBreakdown
{
	double sched_ratio = 0;     ///< ρ_i
	double zeta = 0;            ///< mean offloaded rate, ζ_i
	double epsilon = 0;         ///< mean direct rate, ε_i = r_i (1 − 𝓟_i)
	double union_coverage = 0;  ///< 𝓟_i, some coalition server covers i
	double collision_free = 0;  ///< Π over MDs outside S of (1 − p)
	double throughput = 0;      ///< T_i
	double chi = 0;             ///< mean price per transmission, χ_i
	double payment = 0;         ///< P_i(S)
	double utility = 0;         ///< u_i = α T − β P
};

struct ServerBreakdown
{
	std::vector<double> employment;  ///< η_ij by MD index; zero outside S_m
	double revenue = 0;              ///< R_j
	double cost = 0;                 ///< C_j
	double utility = 0;              ///< ũ_j = γ R − μ C
};

MdBreakdown md_breakdown(NodeId md, const Coalition& coalition, const CoverageMatrix& cov,
                         const ScenarioConfig& cfg, const EvalOptions& options = {});

/// Uniform-rate / uniform-price form: T = ρ (𝓟 𝓡 + r (1 − 𝓟)) Π(1 − p),
/// P = ρ 𝓟 ξ. Either simplification is applied when its per-pair values are
/// constant over the coalition's servers; throws PreconditionError when
/// neither is.
MdBreakdown md_breakdown_simplified(NodeId md, const Coalition& coalition, const CoverageMatrix& cov,
                                    const ScenarioConfig& cfg, const EvalOptions& options = {});

ServerBreakdown server_breakdown(NodeId server, const Coalition& coalition, const CoverageMatrix& cov,
                                 const ScenarioConfig& cfg, const EvalOptions& options = {});

struct CoalitionBreakdown
{
	Coalition coalition;
	std::vector<std::pair<NodeId, MdBreakdown>> mds;
	std::vector<std::pair<NodeId, ServerBreakdown>> servers;

	const MdBreakdown& md(NodeId id) const;
	const ServerBreakdown& server(NodeId id) const;

	/// f(S): sum of member utilities.
	double sum_payoff() const;
	/// Utility of a member, MD or server.
	double utility(NodeId id) const;
};

/// Everything for one coalition standing alone.
CoalitionBreakdown evaluate_coalition(const Coalition& coalition, const CoverageMatrix& cov,
                                      const ScenarioConfig& cfg, const EvalOptions& options = {});

PayoffVector structure_payoffs(const CoalitionStructure& cs, const CoverageMatrix& cov,
                               const ScenarioConfig& cfg, const EvalOptions& options = {});

struct CancellationEntry
{
	Coalition block;
	double payments = 0;
	double revenues = 0;
	double conservation_residual = 0;  ///< relative_error(payments, revenues)
	/// Present when every member has β = 1 / γ = 1: relative error between
	/// f(S) and Σ α T − Σ μ C.
	std::optional<double> cancellation_residual;
};

std::vector<CancellationEntry> check_pricing_cancellation(const CoalitionStructure& cs,
                                                          const CoverageMatrix& cov,
                                                          const ScenarioConfig& cfg,
                                                          const EvalOptions& options = {});

struct ProfitabilityEntry
{
	NodeId md;
	bool condition_holds = false;    ///< product comparison on activity probabilities
	bool direct_profitable = false;  ///< u_i(S) >= u_i({i})
	double utility_in_coalition = 0;
	double utility_alone = 0;
};

/// For a coalition of MDs only: does joining S beat acting alone, by the
/// product condition and by direct payoff comparison.
std::vector<ProfitabilityEntry> pure_md_coalition_profitable(const Coalition& mds,
                                                              const ScenarioConfig& cfg);

}  // namespace mecgame

#endif  // MECGAME_ANALYTIC_HPP
