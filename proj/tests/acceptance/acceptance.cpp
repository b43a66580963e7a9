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

// Acceptance criteria AC1..AC10. Each criterion prints one line:
//   ACn PASS|FAIL <observations> (<seconds> s, budget <seconds> s)
// and the process exits non-zero when any selected criterion fails.

#include <mecgame/analytic.hpp>
#include <mecgame/core.hpp>
#include <mecgame/geometry.hpp>
#include <mecgame/montecarlo.hpp>
#include <mecgame/oracle.hpp>
#include <mecgame/partitions.hpp>
#include <mecgame/repro.hpp>

#include "cli.hpp"
#include "scenarios.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

using namespace mecgame;

namespace {

struct Verdict
{
	bool passed = true;
	std::ostringstream detail;

	void require(bool ok, const std::string& what)
	{
		if (!ok)
		{
			passed = false;
			detail << "[failed: " << what << "] ";
		}
	}
};

const std::vector<std::string> representative_labels = {"C1", "C2", "C3", "C4", "C5", "C6", "C7"};

CoalitionStructure labelled(const std::string& label)
{
	for (const auto& e : four_node_reference())
	{
		if (e.label == label)
		{
			return e.structure;
		}
	}
	throw PreconditionError("no structure labelled " + label);
}

std::string sci(double v)
{
	std::ostringstream s;
	s << std::setprecision(3) << v;
	return s.str();
}

// AC1: Bell count, table match and the seven symmetric representatives.
void criterion_1(Verdict& v)
{
	const auto catalog = enumerate_structures(4);
	v.require(catalog.structures.size() == 15, "15 structures");
	std::set<std::uint64_t> table;
	for (const auto& e : four_node_reference())
	{
		table.insert(restricted_growth_key(e.structure, 4));
	}
	std::set<std::uint64_t> found;
	for (const auto& cs : catalog.structures)
	{
		found.insert(restricted_growth_key(cs, 4));
	}
	v.require(found == table && table.size() == 15, "enumeration equals the labelled table");

	const auto cfg = with_transmit_distance(symmetric_scenario(), 6);
	SymmetryOptions opts;
	for (const auto& label : representative_labels)
	{
		opts.preferred.push_back(labelled(label));
	}
	const auto reduced = reduce_by_symmetry(catalog, cfg, coverage_matrix(cfg), opts);
	std::vector<std::string> reps;
	for (const auto& cls : reduced.classes)
	{
		reps.push_back(four_node_label(reduced.structures[cls.representative]));
	}
	std::sort(reps.begin(), reps.end());
	std::string joined;
	for (const auto& r : reps)
	{
		joined += (joined.empty() ? "" : ",") + r;
	}
	v.require(reps == representative_labels, "representatives C1..C7");
	v.detail << catalog.structures.size() << " structures; symmetric classes " << reduced.classes.size() << " {"
	         << joined << "}";
}

// AC2: analytic vs oracle on every coalition of the reference scenario.
void criterion_2(Verdict& v)
{
	double worst = 0;
	std::size_t compared = 0;
	const auto track = [&](double a, double b) {
		worst = std::max(worst, relative_error(a, b));
		++compared;
	};
	for (int d = 1; d <= 14; ++d)
	{
		const auto cfg = with_transmit_distance(reference_scenario(), d);
		const auto cov = coverage_matrix(cfg);
		for (std::uint32_t m = 1; m <= all_nodes_mask(4); ++m)
		{
			const Coalition s(m);
			const auto a = evaluate_coalition(s, cov, cfg);
			const auto o = oracle::exact_expectations(s, cov, cfg).breakdown;
			for (const auto& [id, x] : a.mds)
			{
				const auto& y = o.md(id);
				track(x.sched_ratio, y.sched_ratio);
				track(x.zeta, y.zeta);
				track(x.chi, y.chi);
				track(x.throughput, y.throughput);
				track(x.payment, y.payment);
				track(x.utility, y.utility);
			}
			for (const auto& [id, x] : a.servers)
			{
				const auto& y = o.server(id);
				for (int i = 0; i < cfg.md_count; ++i)
				{
					track(x.employment[i], y.employment[i]);
				}
				track(x.revenue, y.revenue);
				track(x.cost, y.cost);
				track(x.utility, y.utility);
			}
		}
	}
	v.require(worst <= 1e-12, "max relative error <= 1e-12");
	v.detail << compared << " quantities over d=1..14, max relative error " << sci(worst);
}

std::vector<ScenarioConfig> random_scenarios(std::uint64_t seed, bool unit_weights)
{
	std::mt19937_64 rng(seed);
	std::vector<ScenarioConfig> out;
	for (int n = 0; n < 1000; ++n)
	{
		out.push_back(test_support::random_scenario(rng, {4, 4, unit_weights}));
	}
	return out;
}

// Each coalition S as its own block, the remaining nodes as a second block.
CoalitionStructure with_rest(std::uint32_t mask, int nodes)
{
	std::vector<Coalition> blocks{Coalition(mask)};
	const std::uint32_t rest = all_nodes_mask(nodes) & ~mask;
	if (rest != 0)
	{
		blocks.emplace_back(rest);
	}
	return CoalitionStructure(std::move(blocks));
}

// AC3: payments equal revenues; prices cancel from the sum with unit weights.
void criterion_3(Verdict& v)
{
	double conservation = 0;
	double cancellation = 0;
	std::size_t coalitions = 0;
	for (bool unit : {false, true})
	{
		for (const auto& cfg : random_scenarios(unit ? 302 : 301, unit))
		{
			const auto cov = coverage_matrix(cfg);
			for (std::uint32_t m = 1; m <= all_nodes_mask(cfg.node_count()); ++m)
			{
				for (const auto& e : check_pricing_cancellation(with_rest(m, cfg.node_count()), cov, cfg))
				{
					if (e.block.mask() != m)
					{
						continue;
					}
					++coalitions;
					conservation = std::max(conservation, e.conservation_residual);
					if (unit)
					{
						v.require(e.cancellation_residual.has_value(), "cancellation residual reported for unit weights");
						cancellation = std::max(cancellation, e.cancellation_residual.value_or(0));
					}
				}
			}
		}
	}
	v.require(conservation <= 1e-10, "conservation residual <= 1e-10");
	v.require(cancellation <= 1e-10, "cancellation residual <= 1e-10");
	v.detail << "2x1000 random scenarios, " << coalitions << " coalitions; max conservation residual "
	         << sci(conservation) << ", max cancellation residual " << sci(cancellation);
}

// AC4: server-only coalitions pay exactly zero.
void criterion_4(Verdict& v)
{
	std::size_t checked = 0;
	std::size_t nonzero = 0;
	for (const auto& cfg : random_scenarios(301, false))
	{
		const auto cov = coverage_matrix(cfg);
		v.require(lemma2_check(cfg, cov) || nonzero > 0, "lemma2_check");
		for (std::uint32_t sub = 1; sub <= all_nodes_mask(cfg.server_count) && cfg.server_count > 0; ++sub)
		{
			const auto b = evaluate_coalition(Coalition(sub << cfg.md_count), cov, cfg);
			for (const auto& [id, s] : b.servers)
			{
				++checked;
				nonzero += s.utility == 0 ? 0 : 1;
			}
		}
	}
	v.require(nonzero == 0, "every server-only payoff is exactly 0");
	v.detail << checked << " server payoffs in server-only coalitions over 1000 scenarios, " << nonzero << " non-zero";
}

// AC5: closed-form anchors at the published parameters.
void criterion_5(Verdict& v)
{
	double worst = 0;
	for (double d = 0; d <= 14; d += 0.5)
	{
		const auto cfg = with_transmit_distance(reference_scenario(), d);
		const auto cov = coverage_matrix(cfg);
		const auto singles = structure_payoffs(CoalitionStructure::singletons(4), cov, cfg);
		const auto c3 = structure_payoffs(labelled("C3"), cov, cfg);
		const std::vector<double> want_singles = {2.4, 2.4, 0, 0};
		const std::vector<double> want_c3 = {6.0, 2.4, 0, 0};
		for (int k = 0; k < 4; ++k)
		{
			worst = std::max(worst, std::abs(singles.values()[k] - want_singles[k]));
			worst = std::max(worst, std::abs(c3.values()[k] - want_c3[k]));
		}
	}
	v.require(worst <= 1e-12, "anchors exact to 1e-12");
	v.detail << "u_i({i}) = 2.4 and C3 = (6.0, 2.4, 0, 0) for d in [0, 14]; max abs error " << sci(worst);
}

// AC6: coverage geometry against the published values and Monte Carlo.
void criterion_6(Verdict& v)
{
	const auto law = reference_scenario().placement;
	const double far = coverage_probability({0, 0}, 10, law);
	const double near = coverage_probability({7, 6}, 2, law);
	v.require(std::round(far * 1e4) / 1e4 == 0.7854, "0.7854 at (0,0), d=10");
	v.require(std::round(near * 1e4) / 1e4 == 0.1257, "0.1257 at (7,6), d=2");

	double worst_se = 0;
	SimConfig sim;
	sim.replications = 1'000'000;
	sim.seed = 1;
	for (double d : {2.0, 6.0, 10.0, 13.0})
	{
		const auto cfg = with_transmit_distance(reference_scenario(), d);
		const auto exact = geometric_coverage_matrix(cfg);
		const auto est = estimate_coverage(cfg, sim);
		for (int j = 0; j < 2; ++j)
		{
			for (int i = 0; i < 2; ++i)
			{
				const double q = exact.at(j, i);
				const double se = std::sqrt(q * (1 - q) / static_cast<double>(sim.replications));
				const double gap = std::abs(est.at(j, i).mean - q);
				worst_se = std::max(worst_se, se > 0 ? gap / se : (gap == 0 ? 0 : HUGE_VAL));
			}
		}
	}
	v.require(worst_se <= 4, "Monte Carlo within 4 binomial SE");

	bool monotone = true;
	bool dominates = true;
	double prev_far = 0, prev_near = 0;
	for (int k = 0; k <= 1500; ++k)
	{
		const double d = k * 0.01;
		const double a = coverage_probability({0, 0}, d, law);
		const double b = coverage_probability({7, 6}, d, law);
		monotone = monotone && a >= prev_far && b >= prev_near;
		if (d > 0 && d < 12)
		{
			dominates = dominates && b > a;
		}
		prev_far = a;
		prev_near = b;
	}
	v.require(monotone, "non-decreasing in d");
	v.require(dominates, "(7,6) curve above (0,0) curve on (0,12)");
	v.detail << "P(10)=" << std::fixed << std::setprecision(4) << far << " P(2)=" << near << std::defaultfloat
	         << "; 1e6-sample worst gap " << sci(worst_se) << " SE; monotone " << (monotone ? "yes" : "no")
	         << "; dominance on (0,12) " << (dominates ? "yes" : "no");
}

// AC7: matrix-mode simulation against the closed forms.
void criterion_7(Verdict& v)
{
	int cells = 0;
	int within = 0;
	double worst = 0;
	SimConfig sim;
	sim.replications = 100'000;
	sim.seed = 1;
	sim.mode = CoverageMode::matrix;
	for (double d : {3.0, 6.0, 9.0, 12.0})
	{
		const auto cfg = with_transmit_distance(reference_scenario(), d);
		const auto cov = coverage_matrix(cfg);
		for (const auto& label : representative_labels)
		{
			const auto cs = labelled(label);
			const auto exact = structure_payoffs(cs, cov, cfg);
			const auto est = simulate_structure(cs, cfg, sim);
			v.require(est.ledger_violations == 0, "no ledger violations");
			for (int id = 1; id <= 4; ++id)
			{
				const auto& u = est.node(NodeId{id}).utility;
				const double gap = std::abs(u.mean - exact[NodeId{id}]);
				++cells;
				if (gap <= 4 * u.half_width || gap == 0)
				{
					++within;
				}
				if (u.half_width > 0)
				{
					worst = std::max(worst, gap / u.half_width);
				}
			}
		}
	}
	const double share = static_cast<double>(within) / cells;
	v.require(share >= 0.95, ">= 95% of cells within 4 half-widths");
	v.detail << within << "/" << cells << " cells within 4 half-widths (" << std::fixed << std::setprecision(1)
	         << 100 * share << "%), worst " << std::setprecision(2) << worst << " half-widths";
}

// AC8: utility trends of the seven representatives in geometric mode.
void criterion_8(Verdict& v)
{
	ReproOptions opts;
	opts.replications = 100'000;
	opts.seed = 1;
	const std::vector<std::string> cases = {"grand-coalition-trends", "all-singletons-trends",
	                                        "md1-with-servers-trends", "md-pair-trends",
	                                        "md2-server4-pair-trends", "paired-blocks-trends",
	                                        "mds-with-server3-trends"};
	int passed = 0;
	for (const auto& id : cases)
	{
		const auto out = run_repro_case(id, reference_scenario(), opts);
		if (out.passed)
		{
			++passed;
			continue;
		}
		v.require(false, id);
		for (std::size_t k = 0; k < out.failures.size() && k < 3; ++k)
		{
			v.detail << out.failures[k] << "; ";
		}
		if (out.failures.size() > 3)
		{
			v.detail << "(" << out.failures.size() - 3 << " more) ";
		}
	}
	v.detail << passed << "/" << cases.size() << " trend cases hold";
}

// AC9: the grand coalition is in the core and has the best sum payoff.
void criterion_9(Verdict& v)
{
	std::vector<double> grid;
	for (int d = 1; d <= 14; ++d)
	{
		grid.push_back(d);
	}
	const double d = first_positive_grand_d(reference_scenario(), grid);
	v.require(d > 0, "some d gives positive grand-coalition utilities");
	if (d <= 0)
	{
		return;
	}
	const auto cfg = with_transmit_distance(reference_scenario(), d);
	const auto cov = coverage_matrix(cfg);
	const auto grand = grand_coalition_payoff(cfg, cov);
	const auto report = blocking_check(grand, cfg, cov);
	v.require(report.in_core(), "no blockers");
	const auto total = [&](const CoalitionStructure& cs) {
		double s = 0;
		const auto payoffs = structure_payoffs(cs, cov, cfg);
		for (double x : payoffs.values())
		{
			s += x;
		}
		return s;
	};
	const double best = total(labelled("C1"));
	std::string runner_up;
	double second = -HUGE_VAL;
	for (const auto& label : representative_labels)
	{
		if (label == "C1")
		{
			continue;
		}
		const double t = total(labelled(label));
		if (t > second)
		{
			second = t;
			runner_up = label;
		}
	}
	v.require(best >= second, "grand coalition has the highest sum payoff");
	v.detail << "first positive d=" << d << "; blockers " << report.blockers.size() << "; sum C1 " << sci(best)
	         << " vs best other " << runner_up << " " << sci(second);
}

std::string run_cli(const std::vector<std::string>& args)
{
	std::vector<const char*> argv{"mecgame"};
	for (const auto& a : args)
	{
		argv.push_back(a.c_str());
	}
	std::ostringstream out, err;
	const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
	if (code != 0)
	{
		throw Error("mecgame exited with " + std::to_string(code) + ": " + err.str());
	}
	return out.str();
}

bool same_bits(const SimEstimate& a, const SimEstimate& b)
{
	return a.n == b.n && std::memcmp(&a.mean, &b.mean, sizeof(double)) == 0 &&
	       std::memcmp(&a.half_width, &b.half_width, sizeof(double)) == 0;
}

// AC10: byte-identical CSVs and worker-count invariance.
void criterion_10(Verdict& v)
{
	::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
	const std::string ref = test_support::scenario_path("reference.ini").string();
	const std::vector<std::vector<std::string>> commands = {
	    {"coverage", "--config", ref, "--d", "1:1:14", "--reps", "20000"},
	    {"evaluate", "--config", ref, "--structure", "{1,3}|{2,4}", "--d", "1:1:14", "--reps", "20000"},
	    {"evaluate", "--config", ref, "--structure", "{1,2,3,4}", "--d", "2:2:12", "--mode", "matrix", "--reps",
	     "20000", "--workers", "3"},
	    {"enumerate", "--config", ref, "--d", "7"},
	};
	int identical = 0;
	for (const auto& c : commands)
	{
		const auto a = run_cli(c);
		const auto b = run_cli(c);
		if (a == b && !a.empty())
		{
			++identical;
		}
	}
	v.require(identical == static_cast<int>(commands.size()), "repeated CLI runs byte-identical");
	::unsetenv("SOURCE_DATE_EPOCH");

	int invariant = 0;
	int runs = 0;
	const auto cfg = with_transmit_distance(reference_scenario(), 8);
	for (auto mode : {CoverageMode::geometric, CoverageMode::matrix})
	{
		SimConfig sim;
		sim.replications = 50'001;
		sim.seed = 3;
		sim.mode = mode;
		sim.workers = 1;
		const auto base = simulate_structure(labelled("C6"), cfg, sim);
		for (unsigned w : {2u, 3u, 8u})
		{
			sim.workers = w;
			const auto other = simulate_structure(labelled("C6"), cfg, sim);
			bool same = other.ledger_violations == base.ledger_violations;
			for (std::size_t k = 0; k < base.nodes.size(); ++k)
			{
				same = same && same_bits(base.nodes[k].utility, other.nodes[k].utility) &&
				       same_bits(base.nodes[k].throughput, other.nodes[k].throughput) &&
				       same_bits(base.nodes[k].payment_or_revenue, other.nodes[k].payment_or_revenue) &&
				       same_bits(base.nodes[k].cost, other.nodes[k].cost);
			}
			++runs;
			invariant += same ? 1 : 0;
		}
	}
	v.require(invariant == runs, "bit-identical across worker counts");
	v.detail << identical << "/" << commands.size() << " CLI outputs byte-identical; " << invariant << "/" << runs
	         << " worker-count runs bit-identical";
}

struct Criterion
{
	void (*run)(Verdict&);
	double budget_seconds;
};

const std::map<int, Criterion> criteria = {
    {1, {criterion_1, 1}},   {2, {criterion_2, 10}},  {3, {criterion_3, 5}},   {4, {criterion_4, 1}},
    {5, {criterion_5, 1}},   {6, {criterion_6, 30}},  {7, {criterion_7, 180}}, {8, {criterion_8, 180}},
    {9, {criterion_9, 10}},  {10, {criterion_10, 60}},
};

bool run_one(int n)
{
	const auto& c = criteria.at(n);
	Verdict v;
	const auto start = std::chrono::steady_clock::now();
	try
	{
		c.run(v);
	}
	catch (const std::exception& e)
	{
		v.require(false, std::string("exception: ") + e.what());
	}
	const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
	v.require(seconds < c.budget_seconds, "runtime budget");
	std::cout << "AC" << n << ' ' << (v.passed ? "PASS" : "FAIL") << ' ' << v.detail.str() << " (" << std::fixed
	          << std::setprecision(2) << seconds << " s, budget " << std::setprecision(0) << c.budget_seconds
	          << " s)" << std::defaultfloat << std::endl;
	return v.passed;
}

}  // namespace

int main(int argc, char** argv)
{
	CLI::App app{"Acceptance criteria"};
	std::vector<int> selected;
	app.add_option("--criterion", selected, "criterion number (repeatable); default: all")
	    ->check(CLI::Range(1, static_cast<int>(criteria.size())));
	CLI11_PARSE(app, argc, argv);
	if (selected.empty())
	{
		for (const auto& [n, c] : criteria)
		{
			selected.push_back(n);
		}
	}
	bool all = true;
	for (int n : selected)
	{
		all = run_one(n) && all;
	}
	return all ? EXIT_SUCCESS : EXIT_FAILURE;
}
