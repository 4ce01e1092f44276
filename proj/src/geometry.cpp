#include "pmfht/geometry.hpp"

#include <cmath>
#include <numbers>

namespace pmfht::geom {

double polygon_area(const Polygon& poly) {
    const std::size_t n = poly.size();
    if (n < 3)
        return 0.0;
    double twice = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& a = poly[i];
        const Eigen::Vector2d& b = poly[(i + 1) % n];
        twice += a.x() * b.y() - a.y() * b.x();
    }
    return 0.5 * twice;
}

Polygon clip_half_plane(const Polygon& poly, const Eigen::Vector2d& normal, double offset) {
    Polygon out;
    const std::size_t n = poly.size();
    if (n == 0)
        return out;
    out.reserve(n + 1);
    for (std::size_t i = 0; i < n; ++i) {
        const Eigen::Vector2d& a = poly[i];
        const Eigen::Vector2d& b = poly[(i + 1) % n];
        const double da = normal.dot(a) - offset;
        const double db = normal.dot(b) - offset;
        if (da <= 0.0) {
            out.push_back(a);
            if (db > 0.0)
                out.push_back(a + (da / (da - db)) * (b - a));
        } else if (db <= 0.0) {
            out.push_back(a + (da / (da - db)) * (b - a));
        }
    }
    if (out.size() < 3)
        out.clear();
    return out;
}

namespace {

// Area swept by the directed edge a->b inside the disk of radius r, as the
// Green's-theorem line-integral contribution. Pieces of the edge outside the
// circle are replaced by the circular sector spanning the same angle.
double edge_disk_contribution(const Eigen::Vector2d& a, const Eigen::Vector2d& b, double r) {
    const Eigen::Vector2d d = b - a;
    const double len2 = d.squaredNorm();
    if (len2 == 0.0)
        return 0.0;

    // Split the edge at circle crossings |a + t d| = r, t in (0,1).
    double ts[4] = {0.0, 1.0, 1.0, 1.0};
    int cuts = 1;
    const double qb = 2.0 * a.dot(d);
    const double qc = a.squaredNorm() - r * r;
    const double disc = qb * qb - 4.0 * len2 * qc;
    if (disc > 0.0) {
        const double s = std::sqrt(disc);
        const double t0 = (-qb - s) / (2.0 * len2);
        const double t1 = (-qb + s) / (2.0 * len2);
        if (t0 > 0.0 && t0 < 1.0)
            ts[cuts++] = t0;
        if (t1 > 0.0 && t1 < 1.0)
            ts[cuts++] = t1;
    }
    ts[cuts++] = 1.0;

    double area = 0.0;
    for (int i = 0; i + 1 < cuts; ++i) {
        if (ts[i + 1] <= ts[i])
            continue;
        const Eigen::Vector2d p = a + ts[i] * d;
        const Eigen::Vector2d q = a + ts[i + 1] * d;
        const Eigen::Vector2d mid = 0.5 * (p + q);
        if (mid.squaredNorm() <= r * r) {
            area += 0.5 * (p.x() * q.y() - p.y() * q.x());
        } else {
            double theta = std::atan2(q.y(), q.x()) - std::atan2(p.y(), p.x());
            if (theta <= -std::numbers::pi)
                theta += 2.0 * std::numbers::pi;
            else if (theta > std::numbers::pi)
                theta -= 2.0 * std::numbers::pi;
            area += 0.5 * r * r * theta;
        }
    }
    return area;
}

} // namespace

double disk_polygon_area(const Polygon& poly, double radius) {
    const std::size_t n = poly.size();
    if (n < 3 || radius <= 0.0)
        return 0.0;
    double area = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        area += edge_disk_contribution(poly[i], poly[(i + 1) % n], radius);
    return area;
}

Polygon centered_square(double h) {
    return {Eigen::Vector2d(-h, -h), Eigen::Vector2d(h, -h), Eigen::Vector2d(h, h),
            Eigen::Vector2d(-h, h)};
}

} // namespace pmfht::geom
