#pragma once

#include <Eigen/Core>

#include <vector>

namespace pmfht::geom {

/// 2D polygon as a counter-clockwise vertex loop.
using Polygon = std::vector<Eigen::Vector2d>;

/// Signed area of a polygon (positive for counter-clockwise loops).
double polygon_area(const Polygon& poly);

/// Clips a convex polygon by the half-plane {x : normal.dot(x) <= offset}.
/// Returns the (possibly empty) clipped polygon, still counter-clockwise.
Polygon clip_half_plane(const Polygon& poly, const Eigen::Vector2d& normal, double offset);

/// Exact area of the intersection of a polygon with the disk of the given
/// radius centered at the origin. Edges crossing the circle are split at the
/// crossings; chord-exterior pieces contribute circular-sector area.
double disk_polygon_area(const Polygon& poly, double radius);

/// Axis-aligned square of half-width h centered at the origin.
Polygon centered_square(double h);

} // namespace pmfht::geom
