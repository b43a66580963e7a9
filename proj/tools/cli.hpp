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

#ifndef MECGAME_TOOLS_CLI_HPP
#define MECGAME_TOOLS_CLI_HPP

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace mecgame::cli {

/// Stable exit codes.
enum ExitCode : int
{
	exit_ok = 0,
	exit_invalid = 1,
	exit_cap = 2,
	exit_selftest = 3,
};

/// Runs one command line. argv[0] is ignored.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

/// "" → empty grid, "v" → {v}, "a:s:b" → a, a+s, ... up to b inclusive.
std::vector<double> parse_d_grid(std::string_view text);

std::uint64_t fnv1a64(std::string_view bytes);

/// UTC ISO-8601 time from SOURCE_DATE_EPOCH if set, otherwise now.
std::string manifest_timestamp();

}  // namespace mecgame::cli

#endif  // MECGAME_TOOLS_CLI_HPP
