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

#include <mecgame/analytic.hpp>
#include <mecgame/core.hpp>
#include <mecgame/geometry.hpp>
#include <mecgame/montecarlo.hpp>
#include <mecgame/partitions.hpp>
#include <mecgame/repro.hpp>

#include <algorithm>
#include <cmath>

namespace mecgame {

namespace {

constexpr std::string_view reference_ini = R"(
[system]
K = 2
L = 2
replications = 1000000
seed = 1

[placement]
kind = uniform-rectangle
x_min = 0
x_max = 10
y_min = 0
y_max = 10

[md.1]
p = 0.6
r = 1
d = 10
delta = 0.8
alpha = 10
beta = 1

[md.2]
p = 0.6
r = 1
d = 10
delta = 0.8
alpha = 10
beta = 1

[server.3]
x = 0
y = 0
price = 1.5
cost_r = 0.2
cost_f = 0.5
gamma = 1
mu = 1

[server.4]
x = 7
y = 6
price = 1.5
cost_r = 0.2
cost_f = 0.5
gamma = 1
mu = 1
)";

const std::string evaluate_prefix = "mecgame evaluate --config scenarios/reference.ini --d 1:1:14 --reps 100000 "
                                    "--mode geometric --structure ";

const std::vector<ReproCase> cases = {
    {"coverage-vs-distance",
     "exact coverage 0.7854 (server 3, d=10) and 0.1257 (server 4, d=2); Monte Carlo within 4 standard errors; "
     "non-decreasing in d; server 4 above server 3 for 0 < d < 12",
     "mecgame coverage --config scenarios/reference.ini --d 0:0.5:15 --reps 1000000", 4},
    {"structure-catalog", "15 structures for 4 nodes; 7 symmetry classes when both servers cover equally",
     "mecgame enumerate --config scenarios/symmetric.ini --d 10", 0},
    {"grand-coalition-trends",
     "{1,2,3,4}: every utility non-decreasing in d; MD 1 >= MD 2; server 4 >= server 3",
     evaluate_prefix + "\"{1,2,3,4}\"", 1},
    {"all-singletons-trends", "{1}|{2}|{3}|{4}: MD utilities constant and equal; server utilities zero",
     evaluate_prefix + "\"{1}|{2}|{3}|{4}\"", 1},
    {"md1-with-servers-trends", "{1,3,4}|{2}: MD 1 increasing in d; MD 2 constant; MD 1 >= MD 2",
     evaluate_prefix + "\"{1,3,4}|{2}\"", 1},
    {"md-pair-trends", "{1,2}|{3}|{4}: utilities constant; MD 1 > MD 2; server utilities zero",
     evaluate_prefix + "\"{1,2}|{3}|{4}\"", 1},
    {"md2-server4-pair-trends", "{1}|{2,4}|{3}: MD 2 >= MD 1 and server 4 >= server 3; MD 1 constant",
     evaluate_prefix + "\"{1}|{2,4}|{3}\"", 1},
    {"paired-blocks-trends", "{1,3}|{2,4}: MD 2 >= MD 1 and server 4 >= server 3",
     evaluate_prefix + "\"{1,3}|{2,4}\"", 1},
    {"mds-with-server3-trends", "{1,2,3}|{4}: server 4 utility zero; MD 1 >= MD 2",
     evaluate_prefix + "\"{1,2,3}|{4}\"", 1},
    {"pricing-cancellation",
     "in every block of every structure, payments equal revenues and the sum payoff has no price terms",
     "mecgame selftest --config scenarios/reference.ini", 1e-10},
    {"server-only-coalitions", "every coalition without MDs gives each member exactly zero",
     "mecgame selftest --config scenarios/reference.ini", 0},
    {"core-sufficient-conditions",
     "at the first d with all grand-coalition utilities positive, no coalition blocks the grand-coalition payoff "
     "and the grand coalition has the highest total among the seven representative structures",
     "mecgame core --config scenarios/reference.ini --d 1", 0},
};

const std::vector<std::string> required_ids = {
    "coverage-vs-distance",    "grand-coalition-trends", "all-singletons-trends",
    "md1-with-servers-trends", "md-pair-trends",         "md2-server4-pair-trends",
    "paired-blocks-trends",    "mds-with-server3-trends", "pricing-cancellation",
    "server-only-coalitions",  "core-sufficient-conditions",
};

// The seven representatives of the reference scenario, as 4-node structures.
const std::vector<std::string> representative_specs = {
    "{1,2,3,4}", "{1,3,4}|{2}", "{1,2}|{3}|{4}", "{1}|{2}|{3}|{4}", "{1}|{2,4}|{3}", "{1,3}|{2,4}", "{1,2,3}|{4}",
};

void require_reference_shape(const ScenarioConfig& cfg)
{
	if (cfg.md_count != 2 || cfg.server_count != 2)
	{
		throw PreconditionError("reproduction cases need 2 MDs and 2 servers");
	}
}

std::string node_name(NodeId id, const ScenarioConfig& cfg)
{
	return (cfg.is_md(id) ? "MD " : "server ") + std::to_string(id.value);
}

class Checker
{
public:
	explicit Checker(ReproOutcome& out) : out_(out) {}

	void require(bool ok, const std::string& expected, const std::string& observed)
	{
		if (!ok)
		{
			out_.failures.push_back("expected " + expected + "; observed " + observed);
		}
	}

private:
	ReproOutcome& out_;
};

using Sweep = std::vector<StructureSimulation>;

Sweep simulate_sweep(const std::string& spec, const ScenarioConfig& cfg, const ReproOptions& options)
{
	const auto cs = CoalitionStructure::parse(spec);
	SimConfig sim;
	sim.replications = options.replications;
	sim.seed = options.seed;
	sim.mode = CoverageMode::geometric;
	sim.workers = options.workers;
	Sweep out;
	for (double d : options.d_grid)
	{
		out.push_back(simulate_structure(cs, with_transmit_distance(cfg, d), sim));
	}
	return out;
}

std::string at_d(double d)
{
	return " at d=" + format_double(d);
}

std::string pair_text(const SimEstimate& a, const SimEstimate& b)
{
	return format_double(a.mean) + " vs " + format_double(b.mean) + " (slack " +
	       format_double(a.half_width + b.half_width) + ")";
}

// a >= b up to the two half-widths, at every grid point.
void check_ordering(Checker& c, const Sweep& sw, const ReproOptions& o, const ScenarioConfig& cfg, NodeId a, NodeId b)
{
	for (std::size_t k = 0; k < sw.size(); ++k)
	{
		const auto& x = sw[k].node(a).utility;
		const auto& y = sw[k].node(b).utility;
		c.require(x.mean >= y.mean - (x.half_width + y.half_width),
		          node_name(a, cfg) + " >= " + node_name(b, cfg) + at_d(o.d_grid[k]), pair_text(x, y));
	}
}

void check_strict_ordering(Checker& c, const Sweep& sw, const ReproOptions& o, const ScenarioConfig& cfg, NodeId a,
                           NodeId b)
{
	for (std::size_t k = 0; k < sw.size(); ++k)
	{
		const auto& x = sw[k].node(a).utility;
		const auto& y = sw[k].node(b).utility;
		c.require(x.mean - y.mean > x.half_width + y.half_width,
		          node_name(a, cfg) + " > " + node_name(b, cfg) + at_d(o.d_grid[k]), pair_text(x, y));
	}
}

void check_non_decreasing(Checker& c, const Sweep& sw, const ReproOptions& o, const ScenarioConfig& cfg, NodeId a)
{
	for (std::size_t k = 1; k < sw.size(); ++k)
	{
		const auto& prev = sw[k - 1].node(a).utility;
		const auto& next = sw[k].node(a).utility;
		c.require(next.mean >= prev.mean - (prev.half_width + next.half_width),
		          node_name(a, cfg) + " non-decreasing from d=" + format_double(o.d_grid[k - 1]) + " to d=" +
		              format_double(o.d_grid[k]),
		          pair_text(next, prev));
	}
}

void check_increasing(Checker& c, const Sweep& sw, const ReproOptions& o, const ScenarioConfig& cfg, NodeId a)
{
	check_non_decreasing(c, sw, o, cfg, a);
	if (sw.size() < 2)
	{
		return;
	}
	const auto& first = sw.front().node(a).utility;
	const auto& last = sw.back().node(a).utility;
	c.require(last.mean - first.mean > first.half_width + last.half_width,
	          node_name(a, cfg) + " to increase over the grid", pair_text(last, first));
}

// Common random numbers make a d-independent utility bit-identical across d.
void check_constant(Checker& c, const Sweep& sw, const ReproOptions& o, const ScenarioConfig& cfg, NodeId a)
{
	for (std::size_t k = 1; k < sw.size(); ++k)
	{
		const double v0 = sw.front().node(a).utility.mean;
		const double v = sw[k].node(a).utility.mean;
		c.require(v == v0, node_name(a, cfg) + " constant" + at_d(o.d_grid[k]),
		          format_double(v) + " vs " + format_double(v0));
	}
}

void check_zero(Checker& c, const Sweep& sw, const ReproOptions& o, const ScenarioConfig& cfg, NodeId a)
{
	for (std::size_t k = 0; k < sw.size(); ++k)
	{
		const double v = sw[k].node(a).utility.mean;
		c.require(v == 0, node_name(a, cfg) + " utility exactly 0" + at_d(o.d_grid[k]), format_double(v));
	}
}

void check_equal(Checker& c, const Sweep& sw, const ReproOptions& o, const ScenarioConfig& cfg, NodeId a, NodeId b)
{
	for (std::size_t k = 0; k < sw.size(); ++k)
	{
		const auto& x = sw[k].node(a).utility;
		const auto& y = sw[k].node(b).utility;
		c.require(std::abs(x.mean - y.mean) <= x.half_width + y.half_width,
		          node_name(a, cfg) + " == " + node_name(b, cfg) + at_d(o.d_grid[k]), pair_text(x, y));
	}
}

void coverage_case(Checker& c, const ScenarioConfig& cfg, const ReproOptions& o)
{
	const Rect field = cfg.placement.rectangle;
	const PlacementLaw law{PlacementLaw::Kind::uniform_rectangle, field, {}};
	const Point s3 = cfg.servers[0].position;
	const Point s4 = cfg.servers[1].position;

	const auto round4 = [](double v) { return std::round(v * 1e4) / 1e4; };
	const double p3 = coverage_probability(s3, 10, law);
	const double p4 = coverage_probability(s4, 2, law);
	c.require(round4(p3) == 0.7854, "server 3 coverage 0.7854 at d=10", format_double(p3));
	c.require(round4(p4) == 0.1257, "server 4 coverage 0.1257 at d=2", format_double(p4));

	double prev3 = 0;
	double prev4 = 0;
	for (int step = 0; step <= 60; ++step)
	{
		const double d = 0.25 * step;
		const double q3 = coverage_probability(s3, d, law);
		const double q4 = coverage_probability(s4, d, law);
		c.require(q3 >= prev3 && q4 >= prev4, "coverage non-decreasing" + at_d(d),
		          format_double(q3) + ", " + format_double(q4));
		if (d > 0 && d < 12)
		{
			c.require(q4 > q3, "server 4 coverage above server 3" + at_d(d),
			          format_double(q4) + " vs " + format_double(q3));
		}
		prev3 = q3;
		prev4 = q4;
	}

	SimConfig sim;
	sim.replications = o.replications;
	sim.seed = o.seed;
	sim.workers = o.workers;
	for (double d : o.d_grid)
	{
		const auto at = with_transmit_distance(cfg, d);
		const auto exact = geometric_coverage_matrix(at);
		const auto est = estimate_coverage(at, sim);
		for (int j = 0; j < cfg.server_count; ++j)
		{
			for (int i = 0; i < cfg.md_count; ++i)
			{
				const double p = exact.at(j, i);
				const double se = std::sqrt(p * (1 - p) / static_cast<double>(sim.replications));
				const double got = est.at(j, i).mean;
				c.require(std::abs(got - p) <= 4 * se,
				          "Monte Carlo coverage (server " + std::to_string(cfg.server_id(j).value) + ", MD " +
				              std::to_string(i + 1) + ") within 4 SE of " + format_double(p) + at_d(d),
				          format_double(got));
			}
		}
	}
}

void catalog_case(Checker& c, const ScenarioConfig&)
{
	auto catalog = enumerate_structures(4);
	c.require(catalog.structures.size() == 15, "15 structures", std::to_string(catalog.structures.size()));
	const auto sym = symmetric_scenario();
	SymmetryOptions opts;
	for (const auto& s : representative_specs)
	{
		opts.preferred.push_back(CoalitionStructure::parse(s));
	}
	catalog = reduce_by_symmetry(std::move(catalog), sym, coverage_matrix(sym), opts);
	c.require(catalog.classes.size() == 7, "7 symmetry classes", std::to_string(catalog.classes.size()));
	for (const auto& cls : catalog.classes)
	{
		const auto& rep = catalog.structures[cls.representative];
		const bool listed = std::find(opts.preferred.begin(), opts.preferred.end(), rep.canonical()) != opts.preferred.end();
		c.require(listed, "representative among the seven reference structures", rep.to_string());
	}
}

void cancellation_case(Checker& c, const ScenarioConfig& cfg, const ReproOptions& o, double tol)
{
	const auto catalog = enumerate_structures(cfg.node_count());
	for (double d : o.d_grid)
	{
		const auto at = with_transmit_distance(cfg, d);
		const auto cov = coverage_matrix(at);
		for (const auto& cs : catalog.structures)
		{
			for (const auto& e : check_pricing_cancellation(cs, cov, at))
			{
				c.require(e.conservation_residual <= tol,
				          "payments == revenues in " + e.block.to_string() + at_d(d),
				          format_double(e.payments) + " vs " + format_double(e.revenues));
				if (e.cancellation_residual)
				{
					c.require(*e.cancellation_residual <= tol, "price-free sum payoff in " + e.block.to_string() + at_d(d),
					          "residual " + format_double(*e.cancellation_residual));
				}
			}
		}
	}
}

void server_only_case(Checker& c, const ScenarioConfig& cfg, const ReproOptions& o)
{
	for (double d : o.d_grid)
	{
		const auto at = with_transmit_distance(cfg, d);
		c.require(lemma2_check(at, coverage_matrix(at)), "server-only coalitions worth zero" + at_d(d), "nonzero");
	}
}

void core_case(Checker& c, const ScenarioConfig& cfg, const ReproOptions& o)
{
	const double d = first_positive_grand_d(cfg, o.d_grid);
	c.require(d >= 0, "a grid point with all grand-coalition utilities positive", "none");
	if (d < 0)
	{
		return;
	}
	const auto at = with_transmit_distance(cfg, d);
	const auto cov = coverage_matrix(at);
	const auto grand = grand_coalition_payoff(at, cov);
	const auto report = blocking_check(grand, at, cov);
	for (const auto& b : report.blockers)
	{
		c.require(false, "no blocking coalition" + at_d(d), b.coalition.to_string() + " blocks");
	}
	const auto total = [&](const std::string& spec) {
		const auto v = structure_payoffs(CoalitionStructure::parse(spec), cov, at).values();
		double s = 0;
		for (double x : v)
		{
			s += x;
		}
		return s;
	};
	const double best = total(representative_specs.front());
	for (std::size_t k = 1; k < representative_specs.size(); ++k)
	{
		const double other = total(representative_specs[k]);
		c.require(best >= other, "grand coalition total >= " + representative_specs[k] + at_d(d),
		          format_double(best) + " vs " + format_double(other));
	}
}

}  // namespace

const std::vector<ReproCase>& repro_cases()
{
	return cases;
}

const std::vector<std::string>& required_repro_ids()
{
	return required_ids;
}

ScenarioConfig reference_scenario()
{
	return parse_scenario(reference_ini);
}

ScenarioConfig symmetric_scenario()
{
	auto cfg = reference_scenario();
	cfg.servers[1].position = Point{10, 10};
	return cfg;
}

double first_positive_grand_d(const ScenarioConfig& cfg, const std::vector<double>& d_grid)
{
	for (double d : d_grid)
	{
		const auto at = with_transmit_distance(cfg, d);
		const auto payoff = grand_coalition_payoff(at, coverage_matrix(at));
		const auto& v = payoff.values();
		if (std::all_of(v.begin(), v.end(), [](double x) { return x > 0; }))
		{
			return d;
		}
	}
	return -1;
}

ReproOutcome run_repro_case(const std::string& id, const ScenarioConfig& cfg, const ReproOptions& options)
{
	const auto it = std::find_if(cases.begin(), cases.end(), [&](const ReproCase& c) { return c.id == id; });
	if (it == cases.end())
	{
		throw PreconditionError("unknown reproduction case \"" + id + "\"");
	}
	require_reference_shape(cfg);
	ReproOutcome out;
	out.id = id;
	Checker c(out);
	const NodeId md1{1}, md2{2}, s3{3}, s4{4};
	const auto& o = options;

	if (id == "coverage-vs-distance")
	{
		coverage_case(c, cfg, o);
	}
	else if (id == "structure-catalog")
	{
		catalog_case(c, cfg);
	}
	else if (id == "grand-coalition-trends")
	{
		const auto sw = simulate_sweep("{1,2,3,4}", cfg, o);
		for (auto n : {md1, md2, s3, s4})
		{
			check_non_decreasing(c, sw, o, cfg, n);
		}
		check_ordering(c, sw, o, cfg, md1, md2);
		check_ordering(c, sw, o, cfg, s4, s3);
	}
	else if (id == "all-singletons-trends")
	{
		const auto sw = simulate_sweep("{1}|{2}|{3}|{4}", cfg, o);
		check_constant(c, sw, o, cfg, md1);
		check_constant(c, sw, o, cfg, md2);
		check_equal(c, sw, o, cfg, md1, md2);
		check_zero(c, sw, o, cfg, s3);
		check_zero(c, sw, o, cfg, s4);
	}
	else if (id == "md1-with-servers-trends")
	{
		const auto sw = simulate_sweep("{1,3,4}|{2}", cfg, o);
		check_increasing(c, sw, o, cfg, md1);
		check_constant(c, sw, o, cfg, md2);
		check_ordering(c, sw, o, cfg, md1, md2);
	}
	else if (id == "md-pair-trends")
	{
		const auto sw = simulate_sweep("{1,2}|{3}|{4}", cfg, o);
		for (auto n : {md1, md2})
		{
			check_constant(c, sw, o, cfg, n);
		}
		check_strict_ordering(c, sw, o, cfg, md1, md2);
		check_zero(c, sw, o, cfg, s3);
		check_zero(c, sw, o, cfg, s4);
	}
	else if (id == "md2-server4-pair-trends")
	{
		const auto sw = simulate_sweep("{1}|{2,4}|{3}", cfg, o);
		check_constant(c, sw, o, cfg, md1);
		check_ordering(c, sw, o, cfg, md2, md1);
		check_ordering(c, sw, o, cfg, s4, s3);
	}
	else if (id == "paired-blocks-trends")
	{
		const auto sw = simulate_sweep("{1,3}|{2,4}", cfg, o);
		check_ordering(c, sw, o, cfg, md2, md1);
		check_ordering(c, sw, o, cfg, s4, s3);
	}
	else if (id == "mds-with-server3-trends")
	{
		const auto sw = simulate_sweep("{1,2,3}|{4}", cfg, o);
		check_zero(c, sw, o, cfg, s4);
		check_ordering(c, sw, o, cfg, md1, md2);
	}
	else if (id == "pricing-cancellation")
	{
		cancellation_case(c, cfg, o, it->tolerance);
	}
	else if (id == "server-only-coalitions")
	{
		server_only_case(c, cfg, o);
	}
	else if (id == "core-sufficient-conditions")
	{
		core_case(c, cfg, o);
	}
	out.passed = out.failures.empty();
	return out;
}

std::vector<ReproOutcome> run_repro_suite(const ScenarioConfig& cfg, const ReproOptions& options)
{
	std::vector<ReproOutcome> out;
	for (const auto& c : cases)
	{
		out.push_back(run_repro_case(c.id, cfg, options));
	}
	return out;
}

}  // namespace mecgame
