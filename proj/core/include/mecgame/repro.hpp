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

#ifndef MECGAME_REPRO_HPP
#define MECGAME_REPRO_HPP

#include <mecgame/model.hpp>

#include <cstdint>
#include <string>
#include <vector>

/// Executable table of reproduction cases. Each case states one qualitative
/// claim (ordering, monotonicity, zero, constancy) and the CLI invocation
/// that produces the data behind it.
namespace mecgame {

struct ReproCase
{
	std::string id;
	std::string claim;
	std::string invocation;
	double tolerance = 0;
};

struct ReproOptions
{
	std::uint64_t replications = 100'000;
	std::uint64_t seed = 1;
	unsigned workers = 0;
	std::vector<double> d_grid = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12, 13, 14};
};

struct ReproOutcome
{
	std::string id;
	bool passed = false;
	/// One line per failed assertion, "expected ...; observed ...".
	std::vector<std::string> failures;
};

/// Every case, in a fixed order.
const std::vector<ReproCase>& repro_cases();

/// Ids every complete suite must contain.
const std::vector<std::string>& required_repro_ids();

/// The two-MD, two-server reference scenario (scenarios/reference.ini).
ScenarioConfig reference_scenario();

/// The same scenario with both servers at positions of equal coverage.
ScenarioConfig symmetric_scenario();

ReproOutcome run_repro_case(const std::string& id, const ScenarioConfig& cfg, const ReproOptions& options = {});

std::vector<ReproOutcome> run_repro_suite(const ScenarioConfig& cfg, const ReproOptions& options = {});

/// Smallest d on the grid where every grand-coalition utility is positive,
/// or a negative value if none qualifies.
double first_positive_grand_d(const ScenarioConfig& cfg, const std::vector<double>& d_grid);

}  // namespace mecgame

#endif  // MECGAME_REPRO_HPP
