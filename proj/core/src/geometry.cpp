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

#include <mecgame/geometry.hpp>

#include <algorithm>
#include <cmath>

namespace mecgame {

namespace {

// ∫_0^u sqrt(r² − t²) dt for 0 <= u <= r.
double half_chord_integral(double u, double r)
{
	const double s = std::sqrt(std::max(0.0, r * r - u * u));
	return 0.5 * (u * s + r * r * std::asin(std::clamp(u / r, -1.0, 1.0)));
}

// Area of {0<=x<=a, 0<=y<=b, x²+y²<=r²} for a, b >= 0.
double quadrant_area(double a, double b, double r)
{
	a = std::min(a, r);
	b = std::min(b, r);
	if (a <= 0 || b <= 0)
	{
		return 0;
	}
	if (a * a + b * b <= r * r)
	{
		return a * b;
	}
	// Column heights are min(b, sqrt(r²−x²)); the circle drops below b at x0.
	const double x0 = std::sqrt(std::max(0.0, r * r - b * b));
	return x0 * b + half_chord_integral(a, r) - half_chord_integral(x0, r);
}

// Oriented area of the disc (centred at the origin) over the box spanned by
// the origin and (x, y).
double signed_corner_area(double x, double y, double r)
{
	const double sx = x < 0 ? -1.0 : 1.0;
	const double sy = y < 0 ? -1.0 : 1.0;
	return sx * sy * quadrant_area(std::abs(x), std::abs(y), r);
}

}  // namespace

double disc_rect_area(const Disc& disc, const Rect& rect)
{
	const double r = disc.radius;
	if (!(r > 0))
	{
		return 0;
	}
	const double x0 = rect.x_min - disc.center.x;
	const double x1 = rect.x_max - disc.center.x;
	const double y0 = rect.y_min - disc.center.y;
	const double y1 = rect.y_max - disc.center.y;
	const double area = signed_corner_area(x1, y1, r) - signed_corner_area(x0, y1, r) -
	                    signed_corner_area(x1, y0, r) + signed_corner_area(x0, y0, r);
	const double bound = std::min(M_PI * r * r, rect.area());
	return std::clamp(area, 0.0, bound);
}

double coverage_probability(Point server, double d, const PlacementLaw& law)
{
	if (law.kind == PlacementLaw::Kind::fixed_point)
	{
		return std::hypot(law.point.x - server.x, law.point.y - server.y) <= d ? 1.0 : 0.0;
	}
	const double area = law.rectangle.area();
	return std::clamp(disc_rect_area(Disc{server, d}, law.rectangle) / area, 0.0, 1.0);
}

CoverageMatrix geometric_coverage_matrix(const ScenarioConfig& cfg)
{
	CoverageMatrix cov(cfg.server_count, cfg.md_count);
	for (int j = 0; j < cfg.server_count; ++j)
	{
		for (int i = 0; i < cfg.md_count; ++i)
		{
			cov.set(j, i,
			        coverage_probability(cfg.servers[j].position, cfg.mds[i].transmit_distance,
			                             cfg.placement_for(i)));
		}
	}
	return cov;
}

CoverageMatrix coverage_matrix(const ScenarioConfig& cfg)
{
	if (cfg.coverage_override)
	{
		return *cfg.coverage_override;
	}
	return geometric_coverage_matrix(cfg);
}

}  // namespace mecgame
