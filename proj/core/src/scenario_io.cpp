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

// Scenario files are INI documents read through Boost.PropertyTree. The
// exact schema lives in docs/scenario_format.md.

#include <mecgame/model.hpp>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

namespace mecgame {

namespace pt = boost::property_tree;

namespace {

std::string trim(std::string_view s)
{
	const auto b = s.find_first_not_of(" \t\r\n");
	if (b == std::string_view::npos)
	{
		return {};
	}
	const auto e = s.find_last_not_of(" \t\r\n");
	return std::string(s.substr(b, e - b + 1));
}

double parse_number(const std::string& key, std::string_view raw)
{
	const std::string text = trim(raw);
	double v = 0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
	if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
	{
		throw ParseError(key + ": expected a number, got \"" + text + "\"");
	}
	return v;
}

std::uint64_t parse_count(const std::string& key, std::string_view raw)
{
	const std::string text = trim(raw);
	std::uint64_t v = 0;
	const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
	if (text.empty() || ec != std::errc{} || ptr != text.data() + text.size())
	{
		throw ParseError(key + ": expected a non-negative integer, got \"" + text + "\"");
	}
	return v;
}

std::vector<double> parse_list(const std::string& key, std::string_view raw)
{
	std::vector<double> out;
	std::size_t p = 0;
	while (p <= raw.size())
	{
		auto comma = raw.find(',', p);
		if (comma == std::string_view::npos)
		{
			comma = raw.size();
		}
		out.push_back(parse_number(key, raw.substr(p, comma - p)));
		p = comma + 1;
	}
	return out;
}

/// A section's keys, with every consumed key ticked off so leftovers can be
/// reported as unknown.
class Section
{
public:
	Section(std::string name, const pt::ptree& tree) : name_(std::move(name)), tree_(tree) {}

	const std::string& name() const { return name_; }
	std::string key(const std::string& k) const { return name_ + "." + k; }

	std::optional<std::string> raw(const std::string& k)
	{
		const auto it = tree_.find(k);
		if (it == tree_.not_found())
		{
			return std::nullopt;
		}
		used_.insert(k);
		return it->second.data();
	}

	double number(const std::string& k)
	{
		auto v = raw(k);
		if (!v)
		{
			throw ValidationError(key(k), "required key is missing");
		}
		return parse_number(key(k), *v);
	}

	double number_or(const std::string& k, double fallback)
	{
		auto v = raw(k);
		return v ? parse_number(key(k), *v) : fallback;
	}

	void reject_unknown() const
	{
		for (const auto& [k, child] : tree_)
		{
			if (!used_.count(k))
			{
				throw ValidationError(key(k), "unknown key");
			}
		}
	}

private:
	std::string name_;
	const pt::ptree& tree_;
	std::set<std::string> used_;
};

/// Scalar broadcast, or exactly `n` comma-separated values.
std::vector<double> scalar_or_list(Section& sec, const std::string& k, std::size_t n, double fallback)
{
	auto v = sec.raw(k);
	if (!v)
	{
		return std::vector<double>(n, fallback);
	}
	auto values = parse_list(sec.key(k), *v);
	if (values.size() == 1)
	{
		return std::vector<double>(n, values.front());
	}
	if (values.size() != n)
	{
		throw ValidationError(sec.key(k), "expected 1 or " + std::to_string(n) + " values, got " +
		                                      std::to_string(values.size()));
	}
	return values;
}

std::string join(const std::vector<double>& values)
{
	if (values.empty())
	{
		return "0";
	}
	if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values.front(); }))
	{
		return format_double(values.front());
	}
	std::string s;
	for (std::size_t k = 0; k < values.size(); ++k)
	{
		if (k > 0)
		{
			s += ", ";
		}
		s += format_double(values[k]);
	}
	return s;
}

}  // namespace

ScenarioConfig parse_scenario(std::string_view text)
{
	pt::ptree tree;
	try
	{
		std::istringstream in{std::string(text)};
		pt::read_ini(in, tree);
	}
	catch (const pt::ini_parser_error& e)
	{
		throw ParseError(std::string("scenario: ") + e.message() + " (line " + std::to_string(e.line()) + ")");
	}

	std::set<std::string> sections;
	for (const auto& [name, child] : tree)
	{
		if (!child.data().empty())
		{
			throw ParseError("scenario: key \"" + name + "\" appears outside any section");
		}
		sections.insert(name);
	}

	auto section = [&](const std::string& name) -> std::optional<Section> {
		const auto it = tree.find(name);
		if (it == tree.not_found())
		{
			return std::nullopt;
		}
		return Section(name, it->second);
	};

	ScenarioConfig cfg;
	auto sys = section("system");
	if (!sys)
	{
		throw ValidationError("system", "missing section");
	}
	const double k_raw = sys->number("K");
	const double l_raw = sys->number("L");
	if (k_raw < 0 || k_raw != static_cast<int>(k_raw))
	{
		throw ValidationError("system.K", "must be a non-negative integer");
	}
	if (l_raw < 0 || l_raw != static_cast<int>(l_raw))
	{
		throw ValidationError("system.L", "must be a non-negative integer");
	}
	cfg.md_count = static_cast<int>(k_raw);
	cfg.server_count = static_cast<int>(l_raw);
	if (cfg.node_count() > max_nodes)
	{
		throw ValidationError("system", "at most " + std::to_string(max_nodes) + " nodes are supported");
	}
	if (auto v = sys->raw("replications"))
	{
		cfg.system.replications = parse_count(sys->key("replications"), *v);
	}
	if (auto v = sys->raw("seed"))
	{
		cfg.system.seed = parse_count(sys->key("seed"), *v);
	}
	sys->reject_unknown();
	sections.erase("system");

	if (auto place = section("placement"))
	{
		const std::string kind = trim(place->raw("kind").value_or("uniform-rectangle"));
		if (kind == "uniform-rectangle")
		{
			cfg.placement.kind = PlacementLaw::Kind::uniform_rectangle;
			cfg.placement.rectangle = Rect{place->number("x_min"), place->number("x_max"),
			                               place->number("y_min"), place->number("y_max")};
		}
		else if (kind == "fixed-point")
		{
			cfg.placement.kind = PlacementLaw::Kind::fixed_point;
		}
		else
		{
			throw ValidationError("placement.kind", "expected uniform-rectangle or fixed-point, got \"" + kind + "\"");
		}
		place->reject_unknown();
		sections.erase("placement");
	}
	else
	{
		throw ValidationError("placement", "missing section");
	}

	const int K = cfg.md_count;
	const int L = cfg.server_count;
	cfg.rate_gain = PairTable(L, K);
	cfg.price = PairTable(L, K);
	cfg.receive_cost = PairTable(L, K);
	cfg.forward_cost = PairTable(L, K);

	for (int i = 0; i < K; ++i)
	{
		const std::string name = "md." + std::to_string(cfg.md_id(i).value);
		auto sec = section(name);
		if (!sec)
		{
			throw ValidationError(name, "missing section");
		}
		MdParams md;
		md.activity_prob = sec->number("p");
		md.direct_rate = sec->number("r");
		md.transmit_distance = sec->number_or("d", 0);
		md.alpha = sec->number_or("alpha", 1);
		md.beta = sec->number_or("beta", 1);
		const auto x = sec->raw("x");
		const auto y = sec->raw("y");
		if (x.has_value() != y.has_value())
		{
			throw ValidationError(sec->key(x ? "y" : "x"), "x and y must be given together");
		}
		if (x)
		{
			md.position = Point{parse_number(sec->key("x"), *x), parse_number(sec->key("y"), *y)};
		}
		const auto delta = scalar_or_list(*sec, "delta", static_cast<std::size_t>(L), 0);
		for (int j = 0; j < L; ++j)
		{
			cfg.rate_gain.at(j, i) = delta[j];
		}
		sec->reject_unknown();
		cfg.mds.push_back(md);
		sections.erase(name);
	}

	std::optional<CoverageMatrix> coverage;
	for (int j = 0; j < L; ++j)
	{
		const std::string name = "server." + std::to_string(cfg.server_id(j).value);
		auto sec = section(name);
		if (!sec)
		{
			throw ValidationError(name, "missing section");
		}
		ServerParams sv;
		sv.position = Point{sec->number("x"), sec->number("y")};
		sv.gamma = sec->number_or("gamma", 1);
		sv.mu = sec->number_or("mu", 1);
		const auto n = static_cast<std::size_t>(K);
		const auto price = scalar_or_list(*sec, "price", n, 0);
		const auto cost_r = scalar_or_list(*sec, "cost_r", n, 0);
		const auto cost_f = scalar_or_list(*sec, "cost_f", n, 0);
		for (int i = 0; i < K; ++i)
		{
			cfg.price.at(j, i) = price[i];
			cfg.receive_cost.at(j, i) = cost_r[i];
			cfg.forward_cost.at(j, i) = cost_f[i];
		}
		if (sec->raw("coverage"))
		{
			if (!coverage && j > 0)
			{
				throw ValidationError(sec->key("coverage"), "coverage must be given for every server or none");
			}
			if (!coverage)
			{
				coverage = CoverageMatrix(L, K);
			}
			const auto cov = scalar_or_list(*sec, "coverage", n, 0);
			for (int i = 0; i < K; ++i)
			{
				if (!(cov[i] >= 0 && cov[i] <= 1))
				{
					throw ValidationError(sec->key("coverage"), "probability " + format_double(cov[i]) +
					                                                " outside [0, 1]");
				}
				coverage->set(j, i, cov[i]);
			}
		}
		else if (coverage)
		{
			throw ValidationError(sec->key("coverage"), "coverage must be given for every server or none");
		}
		sec->reject_unknown();
		cfg.servers.push_back(sv);
		sections.erase(name);
	}
	cfg.coverage_override = std::move(coverage);

	if (!sections.empty())
	{
		throw ValidationError(*sections.begin(), "unknown section");
	}

	validate(cfg);
	return cfg;
}

ScenarioConfig load_scenario(const std::filesystem::path& path)
{
	std::ifstream in(path, std::ios::binary);
	if (!in)
	{
		throw ParseError("cannot open scenario file " + path.string());
	}
	std::ostringstream buf;
	buf << in.rdbuf();
	return parse_scenario(buf.str());
}

std::string serialize_scenario(const ScenarioConfig& cfg)
{
	std::ostringstream out;
	out << "[system]\n"
	    << "K = " << cfg.md_count << "\n"
	    << "L = " << cfg.server_count << "\n"
	    << "replications = " << cfg.system.replications << "\n"
	    << "seed = " << cfg.system.seed << "\n\n";

	out << "[placement]\n";
	if (cfg.placement.kind == PlacementLaw::Kind::uniform_rectangle)
	{
		const Rect& r = cfg.placement.rectangle;
		out << "kind = uniform-rectangle\n"
		    << "x_min = " << format_double(r.x_min) << "\n"
		    << "x_max = " << format_double(r.x_max) << "\n"
		    << "y_min = " << format_double(r.y_min) << "\n"
		    << "y_max = " << format_double(r.y_max) << "\n";
	}
	else
	{
		out << "kind = fixed-point\n";
	}

	for (int i = 0; i < cfg.md_count; ++i)
	{
		const auto& md = cfg.mds[i];
		std::vector<double> delta;
		for (int j = 0; j < cfg.server_count; ++j)
		{
			delta.push_back(cfg.rate_gain.at(j, i));
		}
		out << "\n[md." << cfg.md_id(i).value << "]\n"
		    << "p = " << format_double(md.activity_prob) << "\n"
		    << "r = " << format_double(md.direct_rate) << "\n"
		    << "d = " << format_double(md.transmit_distance) << "\n"
		    << "delta = " << join(delta) << "\n"
		    << "alpha = " << format_double(md.alpha) << "\n"
		    << "beta = " << format_double(md.beta) << "\n";
		if (md.position)
		{
			out << "x = " << format_double(md.position->x) << "\n"
			    << "y = " << format_double(md.position->y) << "\n";
		}
	}

	for (int j = 0; j < cfg.server_count; ++j)
	{
		const auto& sv = cfg.servers[j];
		auto row = [&](const PairTable& t) {
			std::vector<double> v;
			for (int i = 0; i < cfg.md_count; ++i)
			{
				v.push_back(t.at(j, i));
			}
			return join(v);
		};
		out << "\n[server." << cfg.server_id(j).value << "]\n"
		    << "x = " << format_double(sv.position.x) << "\n"
		    << "y = " << format_double(sv.position.y) << "\n"
		    << "price = " << row(cfg.price) << "\n"
		    << "cost_r = " << row(cfg.receive_cost) << "\n"
		    << "cost_f = " << row(cfg.forward_cost) << "\n"
		    << "gamma = " << format_double(sv.gamma) << "\n"
		    << "mu = " << format_double(sv.mu) << "\n";
		if (cfg.coverage_override)
		{
			std::vector<double> v;
			for (int i = 0; i < cfg.md_count; ++i)
			{
				v.push_back(cfg.coverage_override->at(j, i));
			}
			out << "coverage = " << join(v) << "\n";
		}
	}
	return out.str();
}

void save_scenario(const ScenarioConfig& cfg, const std::filesystem::path& path)
{
	std::ofstream out(path, std::ios::binary);
	if (!out)
	{
		throw Error("cannot write scenario file " + path.string());
	}
	out << serialize_scenario(cfg);
}

}  // namespace mecgame
