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
#include "scenarios.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace mecgame;

namespace {

struct Result
{
	int code = -1;
	std::string out;
	std::string err;
};

Result invoke(std::vector<std::string> args)
{
	args.insert(args.begin(), "mecgame");
	std::vector<const char*> argv;
	for (const auto& a : args)
	{
		argv.push_back(a.c_str());
	}
	std::ostringstream out, err;
	Result r;
	r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
	r.out = out.str();
	r.err = err.str();
	return r;
}

std::string scenario(const char* name)
{
	return test_support::scenario_path(name).string();
}

std::vector<std::string> data_rows(const std::string& csv)
{
	std::vector<std::string> rows;
	std::istringstream in(csv);
	std::string line;
	while (std::getline(in, line))
	{
		if (!line.empty() && line[0] != '#')
		{
			rows.push_back(line);
		}
	}
	return rows;
}

std::vector<std::string> split(const std::string& line)
{
	std::vector<std::string> cells;
	std::string cell;
	bool quoted = false;
	for (char c : line)
	{
		if (c == '"')
		{
			quoted = !quoted;
		}
		else if (c == ',' && !quoted)
		{
			cells.push_back(cell);
			cell.clear();
		}
		else
		{
			cell += c;
		}
	}
	cells.push_back(cell);
	return cells;
}

class TempDir
{
public:
	TempDir()
	{
		path_ = std::filesystem::temp_directory_path() /
		        ("mecgame-cli-" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) + "-" +
		         ::testing::UnitTest::GetInstance()->current_test_info()->name());
		std::filesystem::create_directories(path_);
	}
	~TempDir() { std::filesystem::remove_all(path_); }
	std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
	std::filesystem::path path_;
};

std::string slurp(const std::filesystem::path& p)
{
	std::ifstream in(p);
	std::ostringstream s;
	s << in.rdbuf();
	return s.str();
}

void write(const std::filesystem::path& p, const std::string& text)
{
	std::ofstream(p) << text;
}

}  // namespace

TEST(DGridTest, Forms)
{
	EXPECT_TRUE(cli::parse_d_grid("").empty());
	EXPECT_EQ(cli::parse_d_grid("2.5"), std::vector<double>{2.5});
	EXPECT_EQ(cli::parse_d_grid("1:1:4"), (std::vector<double>{1, 2, 3, 4}));
	EXPECT_EQ(cli::parse_d_grid("0:0.1:0.3").size(), 4u);
	EXPECT_EQ(cli::parse_d_grid("3:1:3"), std::vector<double>{3});
	for (const char* bad : {"1:0:3", "3:1:1", "-1", "a", "1:2", "1:-1:0"})
	{
		EXPECT_THROW(cli::parse_d_grid(bad), Error) << bad;
	}
}

TEST(Fnv1aTest, KnownVectors)
{
	EXPECT_EQ(cli::fnv1a64(""), 0xcbf29ce484222325ULL);
	EXPECT_EQ(cli::fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
	EXPECT_EQ(cli::fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(CliTest, HelpAndVersion)
{
	EXPECT_EQ(invoke({"--help"}).code, 0);
	const auto v = invoke({"--version"});
	EXPECT_EQ(v.code, 0);
	EXPECT_FALSE(v.out.empty());
	EXPECT_EQ(invoke({}).code, 1);
	EXPECT_EQ(invoke({"frobnicate"}).code, 1);
}

TEST(CliTest, CoverageGrid)
{
	const auto r = invoke({"coverage", "--config", scenario("reference.ini"), "--d", "1:1:14", "--reps", "2000"});
	ASSERT_EQ(r.code, 0) << r.err;
	const auto rows = data_rows(r.out);
	ASSERT_EQ(rows.size(), 1u + 56u);
	EXPECT_EQ(rows[0], "d,server_id,md_id,exact_probability,mc_estimate,mc_half_width");
	bool saw = false;
	for (std::size_t k = 1; k < rows.size(); ++k)
	{
		const auto c = split(rows[k]);
		ASSERT_EQ(c.size(), 6u);
		if (c[0] == "10" && c[1] == "3")
		{
			EXPECT_EQ(std::stod(c[3]), 0.7853981633974483);
			saw = true;
		}
	}
	EXPECT_TRUE(saw);
	EXPECT_NE(r.out.find("# config_hash: fnv1a64:"), std::string::npos);
	EXPECT_NE(r.out.find("# command: mecgame coverage"), std::string::npos);
}

TEST(CliTest, CoverageEmptyGridIsHeaderOnly)
{
	const auto r = invoke({"coverage", "--config", scenario("reference.ini"), "--reps", "10"});
	ASSERT_EQ(r.code, 0) << r.err;
	EXPECT_EQ(data_rows(r.out).size(), 1u);
}

TEST(CliTest, EnumerateRows)
{
	auto r = invoke({"enumerate", "--config", scenario("reference.ini"), "--d", "6"});
	ASSERT_EQ(r.code, 0) << r.err;
	auto rows = data_rows(r.out);
	ASSERT_EQ(rows.size(), 16u);
	EXPECT_EQ(split(rows[0])[0], "structure");
	EXPECT_EQ(split(rows[1])[0], "{1,2,3,4}");
	EXPECT_EQ(split(rows[1])[1], "C1");

	r = invoke({"enumerate", "--config", scenario("single_md.ini")});
	ASSERT_EQ(r.code, 0) << r.err;
	EXPECT_EQ(data_rows(r.out).size(), 3u);
}

TEST(CliTest, EvaluateAllSingletonsIsFlatInD)
{
	const auto r = invoke({"evaluate", "--config", scenario("reference.ini"), "--structure", "{1}|{2}|{3}|{4}",
	                       "--d", "2:4:14", "--reps", "5000", "--mode", "matrix"});
	ASSERT_EQ(r.code, 0) << r.err;
	const auto rows = data_rows(r.out);
	ASSERT_EQ(rows.size(), 1u + 4u * 4u);
	EXPECT_EQ(rows[0], "d,node_id,analytic_utility,mc_utility,mc_half_width,throughput,payment_or_revenue,cost");
	for (std::size_t k = 1; k < rows.size(); ++k)
	{
		const auto c = split(rows[k]);
		const int node = std::stoi(c[1]);
		EXPECT_EQ(std::stod(c[2]), node <= 2 ? 2.4 : 0.0) << rows[k];
	}
}

TEST(CliTest, EvaluateMatrixScenarioDefaultsToMatrixMode)
{
	const auto r = invoke({"evaluate", "--config", scenario("matrix_coverage.ini"), "--structure", "{1,2,3,4}",
	                       "--reps", "1000"});
	ASSERT_EQ(r.code, 0) << r.err;
	EXPECT_NE(r.out.find("matrix"), std::string::npos);
}

TEST(CliTest, CoreReportAndBlockers)
{
	TempDir dir;
	const auto r = invoke({"core", "--config", scenario("reference.ini"), "--d", "1", "--out",
	                       (dir / "blockers.csv").string()});
	ASSERT_EQ(r.code, 0) << r.err;
	EXPECT_NE(r.out.find("in core: yes"), std::string::npos) << r.out;
	const auto rows = data_rows(slurp(dir / "blockers.csv"));
	ASSERT_EQ(rows.size(), 1u);
	EXPECT_EQ(rows[0], "coalition,node_id,standalone_payoff,candidate_payoff");
}

TEST(CliTest, SelftestPassesOnShippedScenarios)
{
	for (const char* name : {"reference.ini", "symmetric.ini", "single_md.ini", "no_servers.ini", "matrix_coverage.ini"})
	{
		const auto r = invoke({"selftest", "--config", scenario(name)});
		EXPECT_EQ(r.code, 0) << name << "\n" << r.out << r.err;
		EXPECT_EQ(r.out.find("FAIL"), std::string::npos) << name;
	}
}

TEST(CliTest, ExitCodes)
{
	TempDir dir;
	EXPECT_EQ(invoke({"evaluate", "--config", "/nonexistent.ini", "--structure", "{1}"}).code, 1);
	EXPECT_EQ(invoke({"evaluate", "--structure", "{1}"}).code, 1);

	std::string text = slurp(test_support::scenario_path("reference.ini"));
	text.replace(text.find("p = 0.6"), 7, "p = 1.6");
	write(dir / "bad.ini", text);
	const auto bad = invoke({"evaluate", "--config", (dir / "bad.ini").string(), "--structure", "{1,2,3,4}"});
	EXPECT_EQ(bad.code, 1);
	EXPECT_NE(bad.err.find("md.1.p"), std::string::npos) << bad.err;

	write(dir / "garbled.ini", "[system\nK = 2\n");
	EXPECT_EQ(invoke({"enumerate", "--config", (dir / "garbled.ini").string()}).code, 1);

	EXPECT_EQ(invoke({"evaluate", "--config", scenario("reference.ini"), "--structure", "{1,2}|{2,3,4}"}).code, 1);
	EXPECT_EQ(invoke({"coverage", "--config", scenario("reference.ini"), "--d", "1:0:2"}).code, 1);

	std::string big = "[system]\nK = 17\nL = 0\n[placement]\nx_min = 0\nx_max = 1\ny_min = 0\ny_max = 1\n";
	for (int i = 1; i <= 17; ++i)
	{
		big += "[md." + std::to_string(i) + "]\np = 0.1\nr = 1\n";
	}
	write(dir / "big.ini", big);
	EXPECT_EQ(invoke({"enumerate", "--config", (dir / "big.ini").string()}).code, 2);
	EXPECT_EQ(invoke({"selftest", "--config", (dir / "big.ini").string()}).code, 2);

	auto failing = slurp(test_support::scenario_path("reference.ini"));
	failing.replace(failing.find("alpha = 10"), 10, "alpha = 900");
	write(dir / "failing.ini", failing);
	EXPECT_EQ(invoke({"repro", "--config", (dir / "failing.ini").string(), "--reps", "2000"}).code, 3);

	EXPECT_EQ(invoke({"coverage", "--config", scenario("reference.ini"), "--out", "/nonexistent/dir/x.csv"}).code, 1);
}

TEST(CliTest, OutputIsByteIdentical)
{
	::setenv("SOURCE_DATE_EPOCH", "1700000000", 1);
	TempDir dir;
	const std::vector<std::string> base = {"evaluate", "--config", scenario("reference.ini"), "--structure",
	                                       "{1,3}|{2,4}", "--d", "3:3:12", "--reps", "20000", "--seed", "5"};
	auto first = base;
	first.insert(first.end(), {"--out", (dir / "a.csv").string(), "--workers", "1"});
	auto second = base;
	second.insert(second.end(), {"--out", (dir / "b.csv").string(), "--workers", "1"});
	auto third = base;
	third.insert(third.end(), {"--out", (dir / "b.csv").string(), "--workers", "4"});
	ASSERT_EQ(invoke(first).code, 0);
	ASSERT_EQ(invoke(second).code, 0);
	auto a = slurp(dir / "a.csv");
	auto b = slurp(dir / "b.csv");
	ASSERT_FALSE(a.empty());
	const auto strip_command = [](std::string s) {
		const auto at = s.find('\n');
		return s.substr(at);
	};
	EXPECT_EQ(strip_command(a), strip_command(b));
	EXPECT_NE(a.find("# timestamp: 2023-11-14T22:13:20Z"), std::string::npos);
	ASSERT_EQ(invoke(third).code, 0);
	EXPECT_EQ(data_rows(a), data_rows(slurp(dir / "b.csv")));
	::unsetenv("SOURCE_DATE_EPOCH");
}
