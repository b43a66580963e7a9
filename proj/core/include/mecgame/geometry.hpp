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

#ifndef MECGAME_GEOMETRY_HPP
#define MECGAME_GEOMETRY_HPP

#include <mecgame/model.hpp>

namespace mecgame {

struct Disc
{
	Point center;
	double radius = 0;
};

/// Exact area of disc ∩ rect.
///
/// The rectangle is split at the disc centre into signed quadrant pieces;
/// each piece [0,a]×[0,b] is clipped against the circle in closed form
/// (rectangle part below the chord plus a circular-segment integral), so the
/// result is continuous at tangency.
double disc_rect_area(const Disc& disc, const Rect& rect);

/// Probability that an MD drawn from `law` lies within distance `d` of
/// `server`. Fixed-point placement gives 0 or 1 (distance <= d covers).
double coverage_probability(Point server, double d, const PlacementLaw& law);

/// Coverage matrix of a scenario: the explicit override when present,
/// otherwise coverage_probability(server j, d_i, placement of MD i).
CoverageMatrix coverage_matrix(const ScenarioConfig& cfg);

/// Geometry-only variant that ignores any override.
CoverageMatrix geometric_coverage_matrix(const ScenarioConfig& cfg);

}  // namespace mecgame

#endif  // MECGAME_GEOMETRY_HPP
