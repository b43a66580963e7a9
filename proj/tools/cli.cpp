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

#include "cli.hpp"

#include <mecgame/analytic.hpp>
#include <mecgame/core.hpp>
#include <mecgame/geometry.hpp>
#include <mecgame/model.hpp>
#include <mecgame/montecarlo.hpp>
#include <mecgame/oracle.hpp>
#include <mecgame/partitions.hpp>
#include <mecgame/repro.hpp>
#include <mecgame/version.hpp>

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

namespace mecgame::cli {

namespace {

struct Flags
{
	std::string config;
	std::string structure;
	std::optional<std::string> d;
	std::optional<std::uint64_t> reps;
	std::optional<std::uint64_t> seed;
	std::string mode;
	std::string out;
	unsigned workers = 0;
};

struct Context
{
	std::string command_line;
	std::ostream& out;
	std::ostream& err;
};

std::string hex64(std::uint64_t v)
{
	char buf[17];
	auto r = std::to_chars(buf, buf + 16, v, 16);
	std::string s(buf, r.ptr);
	return std::string(16 - s.size(), '0') + s;
}

std::string quote_arg(std::string_view a)
{
	if (!a.empty() && a.find_first_of(" \t\"'{}|;&<>()$*?") == std::string_view::npos)
	{
		return std::string(a);
	}
	std::string q = "'";
	for (char c : a)
	{
		if (c == '\'')
		{
			q += "'\\''";
		}
		else
		{
			q += c;
		}
	}
	return q + "'";
}

class CsvWriter
{
public:
	CsvWriter(const Context& ctx, const Flags& flags, const ScenarioConfig& cfg, std::uint64_t seed)
	{
		if (!flags.out.empty())
		{
			file_.open(flags.out, std::ios::binary | std::ios::trunc);
			if (!file_)
			{
				throw Error("cannot write " + flags.out);
			}
		}
		os_ = flags.out.empty() ? &ctx.out : &file_;
		*os_ << "# command: " << ctx.command_line << '\n'
		     << "# config_hash: fnv1a64:" << hex64(fnv1a64(serialize_scenario(cfg))) << '\n'
		     << "# seed: " << seed << '\n'
		     << "# version: " << version << '\n'
		     << "# timestamp: " << manifest_timestamp() << '\n';
	}

	void comment(const std::string& text) { *os_ << "# " << text << '\n'; }

	void row(const std::vector<std::string>& cells)
	{
		for (std::size_t k = 0; k < cells.size(); ++k)
		{
			*os_ << (k ? "," : "") << cells[k];
		}
		*os_ << '\n';
	}

	void finish(const std::string& path)
	{
		os_->flush();
		if (!*os_)
		{
			throw Error("write failed: " + (path.empty() ? std::string("<stdout>") : path));
		}
	}

private:
	std::ofstream file_;
	std::ostream* os_ = nullptr;
};

std::string num(double v)
{
	return format_double(v);
}

std::string csv_quote(const std::string& s)
{
	return '"' + s + '"';
}

ScenarioConfig load_config(const Flags& f)
{
	if (f.config.empty())
	{
		throw ValidationError("config", "--config is required");
	}
	return load_scenario(f.config);
}

std::vector<double> grid_or_scenario(const Flags& f, const ScenarioConfig& cfg)
{
	if (f.d)
	{
		return parse_d_grid(*f.d);
	}
	if (cfg.md_count == 0)
	{
		return {0};
	}
	const double d0 = cfg.mds.front().transmit_distance;
	for (const auto& m : cfg.mds)
	{
		if (m.transmit_distance != d0)
		{
			throw ValidationError("d", "MDs have different transmit distances; pass --d");
		}
	}
	return {d0};
}

double single_d(const Flags& f, const ScenarioConfig& cfg)
{
	const auto grid = grid_or_scenario(f, cfg);
	if (grid.size() != 1)
	{
		throw ValidationError("d", "this command takes a single distance");
	}
	return grid.front();
}

SimConfig sim_config(const Flags& f, const ScenarioConfig& cfg, CoverageMode fallback)
{
	SimConfig sim;
	sim.replications = f.reps.value_or(cfg.system.replications);
	sim.seed = f.seed.value_or(cfg.system.seed);
	sim.mode = f.mode.empty() ? fallback : parse_coverage_mode(f.mode);
	sim.workers = f.workers;
	if (sim.replications < 1)
	{
		throw ValidationError("reps", "must be at least 1");
	}
	return sim;
}

int cmd_coverage(const Context& ctx, const Flags& f)
{
	const auto cfg = load_config(f);
	const auto grid = parse_d_grid(f.d.value_or(""));
	auto sim = sim_config(f, cfg, CoverageMode::geometric);
	if (sim.mode != CoverageMode::geometric)
	{
		throw ValidationError("mode", "coverage is estimated in geometric mode only");
	}
	CsvWriter csv(ctx, f, cfg, sim.seed);
	csv.comment("replications: " + std::to_string(sim.replications));
	csv.row({"d", "server_id", "md_id", "exact_probability", "mc_estimate", "mc_half_width"});
	for (double d : grid)
	{
		const auto at = with_transmit_distance(cfg, d);
		const auto exact = geometric_coverage_matrix(at);
		const auto est = estimate_coverage(at, sim);
		for (int j = 0; j < cfg.server_count; ++j)
		{
			for (int i = 0; i < cfg.md_count; ++i)
			{
				csv.row({num(d), std::to_string(cfg.server_id(j).value), std::to_string(cfg.md_id(i).value),
				         num(exact.at(j, i)), num(est.at(j, i).mean), num(est.at(j, i).half_width)});
			}
		}
	}
	csv.finish(f.out);
	return exit_ok;
}

struct NodeRow
{
	double utility = 0;
	double throughput = 0;
	double payment_or_revenue = 0;
	double cost = 0;
};

std::vector<NodeRow> analytic_rows(const CoalitionStructure& cs, const CoverageMatrix& cov, const ScenarioConfig& cfg)
{
	std::vector<NodeRow> rows(static_cast<std::size_t>(cfg.node_count()));
	for (const auto& block : cs.blocks())
	{
		const auto b = evaluate_coalition(block, cov, cfg);
		for (const auto& [id, m] : b.mds)
		{
			rows[id.value - 1] = NodeRow{m.utility, m.throughput, m.payment, 0};
		}
		for (const auto& [id, s] : b.servers)
		{
			rows[id.value - 1] = NodeRow{s.utility, 0, s.revenue, s.cost};
		}
	}
	return rows;
}

int cmd_evaluate(const Context& ctx, const Flags& f)
{
	const auto cfg = load_config(f);
	if (f.structure.empty())
	{
		throw ValidationError("structure", "--structure is required");
	}
	const auto cs = CoalitionStructure::parse(f.structure);
	validate_structure(cfg, cs);
	const auto grid = grid_or_scenario(f, cfg);
	const auto sim =
	    sim_config(f, cfg, cfg.coverage_override ? CoverageMode::matrix : CoverageMode::geometric);

	CsvWriter csv(ctx, f, cfg, sim.seed);
	csv.comment("structure: " + cs.to_string());
	csv.comment("mode: " + std::string(to_string(sim.mode)) + ", replications: " + std::to_string(sim.replications));
	csv.row({"d", "node_id", "analytic_utility", "mc_utility", "mc_half_width", "throughput", "payment_or_revenue",
	         "cost"});
	for (double d : grid)
	{
		const auto at = with_transmit_distance(cfg, d);
		const auto rows = analytic_rows(cs, coverage_matrix(at), at);
		const auto mc = simulate_structure(cs, at, sim);
		for (int n = 0; n < cfg.node_count(); ++n)
		{
			const auto& r = rows[n];
			const auto& e = mc.nodes[n].utility;
			csv.row({num(d), std::to_string(n + 1), num(r.utility), num(e.mean), num(e.half_width), num(r.throughput),
			         num(r.payment_or_revenue), num(r.cost)});
		}
	}
	csv.finish(f.out);
	return exit_ok;
}

SymmetryOptions symmetry_options_for(const ScenarioConfig& cfg)
{
	SymmetryOptions opts;
	if (cfg.md_count == 2 && cfg.server_count == 2)
	{
		for (const auto& ref : four_node_reference())
		{
			opts.preferred.push_back(ref.structure);
		}
	}
	return opts;
}

int cmd_enumerate(const Context& ctx, const Flags& f)
{
	const auto base = load_config(f);
	const auto cfg = with_transmit_distance(base, single_d(f, base));
	const auto cov = coverage_matrix(cfg);
	auto catalog = reduce_by_symmetry(enumerate_structures(cfg.node_count()), cfg, cov, symmetry_options_for(cfg));
	const bool labelled = cfg.md_count == 2 && cfg.server_count == 2;

	CsvWriter csv(ctx, f, cfg, cfg.system.seed);
	csv.comment("d: " + num(cfg.md_count ? cfg.mds.front().transmit_distance : 0) +
	            ", structures: " + std::to_string(catalog.structures.size()) +
	            ", classes: " + std::to_string(catalog.classes.size()));
	for (const auto& claim : catalog.flagged)
	{
		const auto& a = catalog.structures[claim.first];
		const auto& b = catalog.structures[claim.second];
		csv.comment("role exchange maps " + a.to_string() + " to " + b.to_string() +
		            " but payoffs differ by up to " + num(claim.max_difference));
	}
	std::vector<std::string> header = {"structure", "label", "class", "representative"};
	for (int n = 1; n <= cfg.node_count(); ++n)
	{
		header.push_back("u" + std::to_string(n));
	}
	header.push_back("block_sum_payoffs");
	csv.row(header);

	for (std::size_t s = 0; s < catalog.structures.size(); ++s)
	{
		const auto& cs = catalog.structures[s];
		const auto payoff = structure_payoffs(cs, cov, cfg);
		std::vector<std::string> row = {csv_quote(cs.to_string()), labelled ? four_node_label(cs) : "",
		                                std::to_string(catalog.class_of(s)),
		                                catalog.is_representative(s) ? "1" : "0"};
		for (double v : payoff.values())
		{
			row.push_back(num(v));
		}
		std::string sums;
		for (const auto& block : cs.blocks())
		{
			double f_s = 0;
			for (auto id : block.members())
			{
				f_s += payoff[id];
			}
			sums += (sums.empty() ? "" : ";") + num(f_s);
		}
		row.push_back(sums);
		csv.row(row);
	}
	csv.finish(f.out);
	return exit_ok;
}

std::string condition_text(const ConditionResult& r)
{
	return r.holds ? "holds" : "fails (witness " + r.witness->to_string() + ")";
}

int cmd_core(const Context& ctx, const Flags& f)
{
	const auto base = load_config(f);
	const double d = single_d(f, base);
	const auto cfg = with_transmit_distance(base, d);
	const auto cov = coverage_matrix(cfg);
	const auto candidate = grand_coalition_payoff(cfg, cov);
	auto report = blocking_check(candidate, cfg, cov);
	report.lemma3 = lemma3_screen(cfg, cov);

	std::ostream& o = ctx.out;
	o << "d: " << num(d) << '\n' << "candidate (grand-coalition payoff):\n";
	for (int n = 1; n <= cfg.node_count(); ++n)
	{
		o << "  node " << n << (cfg.is_md(NodeId{n}) ? " (MD): " : " (server): ") << num(candidate[NodeId{n}]) << '\n';
	}
	const auto& screen = *report.lemma3;
	o << "sufficient-condition screen:\n"
	  << "  positive weights: " << condition_text(screen.positive_weights) << '\n'
	  << "  gain condition, per-coalition reading: " << condition_text(screen.gain_per_coalition) << '\n'
	  << "  gain condition, per-member reading: " << condition_text(screen.gain_per_member) << '\n'
	  << "  grand coalition dominates: " << condition_text(screen.grand_coalition_dominates) << '\n'
	  << "  screen passes (per-coalition reading): " << (screen.passes() ? "yes" : "no") << '\n'
	  << "  screen passes (per-member reading): "
	  << (screen.positive_weights.holds && screen.gain_per_member.holds && screen.grand_coalition_dominates.holds
	          ? "yes"
	          : "no")
	  << '\n';
	o << "blocking coalitions: " << (report.blockers.empty() ? "none" : std::to_string(report.blockers.size())) << '\n';
	for (const auto& b : report.blockers)
	{
		o << "  " << b.coalition.to_string() << '\n';
	}
	o << "in core: " << (report.in_core() ? "yes" : "no") << '\n';

	if (!f.out.empty())
	{
		CsvWriter csv(ctx, f, cfg, cfg.system.seed);
		csv.row({"coalition", "node_id", "standalone_payoff", "candidate_payoff"});
		for (const auto& b : report.blockers)
		{
			for (const auto& [id, y] : b.payoff)
			{
				csv.row({csv_quote(b.coalition.to_string()), std::to_string(id.value), num(y), num(candidate[id])});
			}
		}
		csv.finish(f.out);
	}
	return exit_ok;
}

// Selftest ------------------------------------------------------------------

struct SuiteResult
{
	enum class Status { pass, fail, skip } status = Status::pass;
	std::string detail;
};

class Suite
{
public:
	void fail(const std::string& what)
	{
		if (result_.status != SuiteResult::Status::fail)
		{
			result_.status = SuiteResult::Status::fail;
			result_.detail = what;
		}
	}

	void skip(const std::string& why)
	{
		result_.status = SuiteResult::Status::skip;
		result_.detail = why;
	}

	void expect_close(double got, double want, double tol, const std::string& what)
	{
		if (!(relative_error(got, want) <= tol))
		{
			fail(what + ": " + num(got) + " vs " + num(want));
		}
	}

	const SuiteResult& result() const { return result_; }

private:
	SuiteResult result_;
};

void for_each_coalition(const ScenarioConfig& cfg, const std::function<void(const Coalition&)>& visit)
{
	const std::uint32_t all = all_nodes_mask(cfg.node_count());
	for (std::uint32_t mask = 1; mask != 0 && mask <= all; ++mask)
	{
		visit(Coalition(mask));
		if (mask == all)
		{
			break;
		}
	}
}

constexpr int selftest_node_cap = 16;

int cmd_selftest(const Context& ctx, const Flags& f)
{
	const auto cfg = load_config(f);
	if (cfg.node_count() > selftest_node_cap)
	{
		throw CapExceededError("selftest scans every coalition; " + std::to_string(cfg.node_count()) +
		                       " nodes exceeds cap " + std::to_string(selftest_node_cap));
	}
	const auto cov = coverage_matrix(cfg);
	std::vector<std::pair<std::string, SuiteResult>> results;
	const auto run_suite = [&](const std::string& name, const std::function<void(Suite&)>& body) {
		Suite s;
		try
		{
			body(s);
		}
		catch (const CapExceededError& e)
		{
			s.skip(e.what());
		}
		catch (const std::exception& e)
		{
			s.fail(std::string("exception: ") + e.what());
		}
		results.emplace_back(name, s.result());
	};

	run_suite("coverage-range", [&](Suite& s) {
		if (cfg.server_count == 0)
		{
			s.skip("no servers");
			return;
		}
		for (int j = 0; j < cfg.server_count; ++j)
		{
			for (int i = 0; i < cfg.md_count; ++i)
			{
				const double q = cov.at(j, i);
				if (!(q >= 0 && q <= 1))
				{
					s.fail("coverage (" + std::to_string(j) + ", " + std::to_string(i) + ") = " + num(q));
				}
			}
		}
	});

	run_suite("scheduling", [&](Suite& s) {
		for_each_coalition(cfg, [&](const Coalition& c) {
			const auto r = scheduling_ratios(c, cfg);
			double sum = 0;
			double idle = 1;
			for (int i = 0; i < cfg.md_count; ++i)
			{
				if (r.ratio[i] < 0)
				{
					s.fail("negative ratio in " + c.to_string());
				}
				sum += r.ratio[i];
				if (c.contains(cfg.md_id(i)))
				{
					idle *= 1 - cfg.mds[i].activity_prob;
				}
			}
			s.expect_close(sum, 1 - idle, 1e-12, "sum of ratios in " + c.to_string());
		});
	});

	run_suite("employment", [&](Suite& s) {
		if (cfg.server_count == 0)
		{
			s.skip("no servers");
			return;
		}
		for_each_coalition(cfg, [&](const Coalition& c) {
			const auto b = evaluate_coalition(c, cov, cfg);
			for (const auto& [id, m] : b.mds)
			{
				double eta = 0;
				for (const auto& [sid, sv] : b.servers)
				{
					eta += sv.employment[cfg.md_index(id)];
				}
				s.expect_close(eta, m.union_coverage, 1e-12,
				               "employment of MD " + std::to_string(id.value) + " in " + c.to_string());
			}
		});
	});

	run_suite("oracle-equivalence", [&](Suite& s) {
		for_each_coalition(cfg, [&](const Coalition& c) {
			const auto a = evaluate_coalition(c, cov, cfg);
			const auto o = oracle::exact_expectations(c, cov, cfg);
			s.expect_close(o.total_probability, 1, 1e-12, "atom mass in " + c.to_string());
			const std::string in = " in " + c.to_string();
			for (const auto& [id, m] : a.mds)
			{
				const auto& x = o.breakdown.md(id);
				const std::string who = "MD " + std::to_string(id.value);
				s.expect_close(m.sched_ratio, x.sched_ratio, 1e-12, who + " rho" + in);
				s.expect_close(m.zeta, x.zeta, 1e-12, who + " zeta" + in);
				s.expect_close(m.epsilon, x.epsilon, 1e-12, who + " epsilon" + in);
				s.expect_close(m.chi, x.chi, 1e-12, who + " chi" + in);
				s.expect_close(m.throughput, x.throughput, 1e-12, who + " throughput" + in);
				s.expect_close(m.payment, x.payment, 1e-12, who + " payment" + in);
				s.expect_close(m.utility, x.utility, 1e-12, who + " utility" + in);
			}
			for (const auto& [id, v] : a.servers)
			{
				const auto& x = o.breakdown.server(id);
				const std::string who = "server " + std::to_string(id.value);
				for (int i = 0; i < cfg.md_count; ++i)
				{
					s.expect_close(v.employment[i], x.employment[i], 1e-12, who + " eta" + in);
				}
				s.expect_close(v.revenue, x.revenue, 1e-12, who + " revenue" + in);
				s.expect_close(v.cost, x.cost, 1e-12, who + " cost" + in);
				s.expect_close(v.utility, x.utility, 1e-12, who + " utility" + in);
			}
		});
	});

	run_suite("simplified-form", [&](Suite& s) {
		bool any = false;
		for_each_coalition(cfg, [&](const Coalition& c) {
			for (auto id : c.members())
			{
				if (!cfg.is_md(id))
				{
					continue;
				}
				MdBreakdown simple;
				try
				{
					simple = md_breakdown_simplified(id, c, cov, cfg);
				}
				catch (const PreconditionError&)
				{
					continue;
				}
				any = true;
				const auto full = md_breakdown(id, c, cov, cfg);
				s.expect_close(simple.utility, full.utility, 1e-12,
				               "simplified utility of MD " + std::to_string(id.value) + " in " + c.to_string());
			}
		});
		if (!any && s.result().status == SuiteResult::Status::pass)
		{
			s.skip("no coalition with uniform rates or prices");
		}
	});

	run_suite("singleton-closed-form", [&](Suite& s) {
		double idle_all = 1;
		for (const auto& m : cfg.mds)
		{
			idle_all *= 1 - m.activity_prob;
		}
		for (int i = 0; i < cfg.md_count; ++i)
		{
			const auto& m = cfg.mds[i];
			double others = 1;
			for (int k = 0; k < cfg.md_count; ++k)
			{
				if (k != i)
				{
					others *= 1 - cfg.mds[k].activity_prob;
				}
			}
			const double want = m.alpha * m.activity_prob * m.direct_rate * others;
			const auto b = evaluate_coalition(Coalition({i + 1}), cov, cfg);
			s.expect_close(b.utility(cfg.md_id(i)), want, 1e-12, "singleton utility of MD " + std::to_string(i + 1));
		}
	});

	run_suite("pricing-cancellation", [&](Suite& s) {
		for_each_coalition(cfg, [&](const Coalition& c) {
			std::vector<Coalition> blocks = {c};
			for (int n = 0; n < cfg.node_count(); ++n)
			{
				if (!c.contains(NodeId{n + 1}))
				{
					blocks.push_back(Coalition(std::uint32_t{1} << n));
				}
			}
			for (const auto& e : check_pricing_cancellation(CoalitionStructure(blocks), cov, cfg))
			{
				if (e.block != c)
				{
					continue;
				}
				if (!(e.conservation_residual <= 1e-10))
				{
					s.fail("payments " + num(e.payments) + " vs revenues " + num(e.revenues) + " in " + c.to_string());
				}
				if (e.cancellation_residual && !(*e.cancellation_residual <= 1e-10))
				{
					s.fail("sum payoff keeps price terms in " + c.to_string());
				}
			}
		});
	});

	run_suite("server-only-coalitions", [&](Suite& s) {
		if (cfg.server_count == 0)
		{
			s.skip("no servers");
			return;
		}
		if (!lemma2_check(cfg, cov))
		{
			s.fail("a server-only coalition has nonzero utility");
		}
	});

	int failures = 0;
	for (const auto& [name, r] : results)
	{
		switch (r.status)
		{
			case SuiteResult::Status::pass:
				ctx.out << "PASS " << name << '\n';
				break;
			case SuiteResult::Status::skip:
				ctx.out << "SKIP " << name << ": " << r.detail << '\n';
				break;
			case SuiteResult::Status::fail:
				ctx.out << "FAIL " << name << ": " << r.detail << '\n';
				++failures;
				break;
		}
	}
	ctx.out << (failures ? "selftest: " + std::to_string(failures) + " suite(s) failed" : "selftest: all suites passed")
	        << '\n';
	return failures ? exit_selftest : exit_ok;
}

int cmd_repro(const Context& ctx, const Flags& f)
{
	const auto cfg = f.config.empty() ? reference_scenario() : load_scenario(f.config);
	ReproOptions opts;
	opts.replications = f.reps.value_or(opts.replications);
	opts.seed = f.seed.value_or(opts.seed);
	opts.workers = f.workers;
	if (f.d)
	{
		opts.d_grid = parse_d_grid(*f.d);
	}
	if (opts.replications < 2)
	{
		throw ValidationError("reps", "must be at least 2");
	}
	const auto outcomes = run_repro_suite(cfg, opts);
	int failed = 0;
	for (const auto& o : outcomes)
	{
		ctx.out << (o.passed ? "PASS " : "FAIL ") << o.id << '\n';
		for (const auto& line : o.failures)
		{
			ctx.out << "    " << line << '\n';
		}
		failed += o.passed ? 0 : 1;
	}
	ctx.out << "repro: " << outcomes.size() - failed << " of " << outcomes.size() << " cases passed\n";

	if (!f.out.empty())
	{
		CsvWriter csv(ctx, f, cfg, opts.seed);
		csv.row({"case", "passed", "failed_assertions", "first_failure"});
		for (const auto& o : outcomes)
		{
			std::string first = o.failures.empty() ? "" : o.failures.front();
			for (auto& ch : first)
			{
				ch = ch == '"' ? '\'' : ch;
			}
			csv.row({o.id, o.passed ? "1" : "0", std::to_string(o.failures.size()), csv_quote(first)});
		}
		csv.finish(f.out);
	}
	return failed ? exit_selftest : exit_ok;
}

}  // namespace

std::vector<double> parse_d_grid(std::string_view text)
{
	const auto parse = [](std::string_view part) {
		while (!part.empty() && part.front() == ' ')
		{
			part.remove_prefix(1);
		}
		while (!part.empty() && part.back() == ' ')
		{
			part.remove_suffix(1);
		}
		double v = 0;
		const auto r = std::from_chars(part.data(), part.data() + part.size(), v);
		if (part.empty() || r.ec != std::errc{} || r.ptr != part.data() + part.size() || !std::isfinite(v))
		{
			throw ParseError("d: expected a number, got \"" + std::string(part) + "\"");
		}
		return v;
	};
	std::vector<double> grid;
	if (text.find_first_not_of(' ') == std::string_view::npos)
	{
		return grid;
	}
	const auto c1 = text.find(':');
	if (c1 == std::string_view::npos)
	{
		grid.push_back(parse(text));
	}
	else
	{
		const auto c2 = text.find(':', c1 + 1);
		if (c2 == std::string_view::npos || text.find(':', c2 + 1) != std::string_view::npos)
		{
			throw ParseError("d: expected value or start:step:end, got \"" + std::string(text) + "\"");
		}
		const double start = parse(text.substr(0, c1));
		const double step = parse(text.substr(c1 + 1, c2 - c1 - 1));
		const double end = parse(text.substr(c2 + 1));
		if (!(step > 0))
		{
			throw ValidationError("d", "step must be positive");
		}
		if (end < start)
		{
			throw ValidationError("d", "end must not be below start");
		}
		const auto count = static_cast<std::size_t>(std::floor((end - start) / step + 1e-9)) + 1;
		for (std::size_t k = 0; k < count; ++k)
		{
			grid.push_back(start + static_cast<double>(k) * step);
		}
	}
	for (double d : grid)
	{
		if (d < 0)
		{
			throw ValidationError("d", "transmit distance must be non-negative");
		}
	}
	return grid;
}

std::uint64_t fnv1a64(std::string_view bytes)
{
	std::uint64_t h = 0xcbf29ce484222325ULL;
	for (unsigned char c : bytes)
	{
		h ^= c;
		h *= 0x100000001b3ULL;
	}
	return h;
}

std::string manifest_timestamp()
{
	std::time_t t = std::time(nullptr);
	if (const char* env = std::getenv("SOURCE_DATE_EPOCH"))
	{
		long long v = 0;
		const std::string_view s(env);
		const auto r = std::from_chars(s.data(), s.data() + s.size(), v);
		if (r.ec == std::errc{} && r.ptr == s.data() + s.size())
		{
			t = static_cast<std::time_t>(v);
		}
	}
	std::tm tm{};
	gmtime_r(&t, &tm);
	char buf[32];
	std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
	return buf;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
	std::string command_line = "mecgame";
	for (int k = 1; k < argc; ++k)
	{
		command_line += ' ' + quote_arg(argv[k]);
	}
	const Context ctx{command_line, out, err};

	CLI::App app{"Coalition payoffs, core checks and slot simulation for MD/MEC-server offloading", "mecgame"};
	app.set_version_flag("--version", std::string(version));
	app.require_subcommand(1);

	Flags flags;
	using Handler = int (*)(const Context&, const Flags&);
	std::vector<std::pair<CLI::App*, Handler>> commands;

	const auto add = [&](const std::string& name, const std::string& about, Handler h) {
		auto* sub = app.add_subcommand(name, about);
		sub->add_option("--config", flags.config, "scenario file (INI)");
		sub->add_option("--d", flags.d, "transmit distance: value or start:step:end");
		sub->add_option("--out", flags.out, "output CSV path (default: stdout)");
		sub->add_option("--workers", flags.workers, "simulation threads (0: all cores)");
		commands.emplace_back(sub, h);
		return sub;
	};
	const auto add_sim = [&](CLI::App* sub) {
		sub->add_option("--reps", flags.reps, "Monte Carlo replications");
		sub->add_option("--seed", flags.seed, "Monte Carlo seed");
		sub->add_option("--mode", flags.mode, "coverage mode: geometric or matrix");
	};

	add_sim(add("coverage", "coverage probability against transmit distance", cmd_coverage));
	auto* eval = add("evaluate", "node utilities of one structure", cmd_evaluate);
	add_sim(eval);
	eval->add_option("--structure", flags.structure, "structure, e.g. \"{1,3}|{2,4}\"");
	add("enumerate", "every coalition structure with payoffs and symmetry classes", cmd_enumerate);
	add("core", "blocking check of the grand-coalition payoff", cmd_core);
	add("selftest", "invariant suites against a scenario", cmd_selftest);
	add_sim(add("repro", "qualitative reproduction cases", cmd_repro));

	try
	{
		app.parse(argc, argv);
	}
	catch (const CLI::CallForHelp&)
	{
		out << app.help();
		return exit_ok;
	}
	catch (const CLI::CallForVersion&)
	{
		out << version << '\n';
		return exit_ok;
	}
	catch (const CLI::ParseError& e)
	{
		err << "error: " << e.what() << '\n';
		return exit_invalid;
	}

	try
	{
		for (const auto& [sub, handler] : commands)
		{
			if (sub->parsed())
			{
				return handler(ctx, flags);
			}
		}
	}
	catch (const CapExceededError& e)
	{
		err << "error: " << e.what() << '\n';
		return exit_cap;
	}
	catch (const Error& e)
	{
		err << "error: " << e.what() << '\n';
		return exit_invalid;
	}
	return exit_invalid;
}

}  // namespace mecgame::cli
