#pragma once

// Figures assembled from run artifacts: the plane picture of an elliptic
// billiard, the chart picture of any Liouville billiard, straightened web
// leaves, and the surface picture of a dual-quadric orbit.

#include <string>
#include <vector>

#include "geoweb/billiard.hpp"
#include "geoweb/config.hpp"

namespace geoweb {

// Parse bounce records written one JSON object per line. The field set
// must match the writer exactly; origin names the source in errors.
std::vector<BounceRecord> read_bounce_jsonl(const std::string& text,
                                            const std::string& origin);

// Plane picture: wall ellipse, the caustic of the first record's pencil
// parameter, straight chords through the mapped bounce points. Only the
// chart a = sinh(u), b = sin(v) maps isometrically onto the plane, so
// other coefficients are rejected. An empty record list draws the wall
// alone.
std::string render_plane_svg(const LiouvilleMetric& m, const WallSpec& wall,
                             const std::vector<BounceRecord>& recs);

// Chart picture: chart frame, wall leaves, caustic leaves of the first
// record's parameter, bounce points joined in sequence.
std::string render_chart_svg(const LiouvilleMetric& m, const WallSpec& wall,
                             const std::vector<BounceRecord>& recs);

// Web picture: coordinate and net leaves pushed through the linearizing
// coordinates, where all four families render straight.
std::string render_web_svg(const LiouvilleMetric& m);

// Surface picture of a dual-quadric run: envelopes of the two sections
// and the geodesic arcs of the first orbit.
std::string render_poncelet_svg(const PonceletExperiment& exp, int epsilon);

} // namespace geoweb
