#include "pmfht/tangent.hpp"
#include "pmfht/errors.hpp"
#include "pmfht/geometry.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

namespace pmfht {

namespace {

// Deterministic sign convention: largest-magnitude component positive.
Eigen::Vector3d canonical_sign(Eigen::Vector3d v) {
    int arg = 0;
    v.cwiseAbs().maxCoeff(&arg);
    return v[arg] < 0.0 ? Eigen::Vector3d(-v) : v;
}

} // namespace

TangentFrame estimate_tangent_plane(const PointCloud& cloud, const NeighborIndex& index,
                                    int i, double r) {
    if (i < 0 || i >= index.size())
        throw ConfigError("tangent plane: point index " + std::to_string(i) + " out of range");
    if (r <= 0.0)
        throw ConfigError("tangent plane: neighborhood radius must be positive");

    const std::vector<int> nbhd = index.radius_query(cloud.point(i), r);
    if (nbhd.size() < 3)
        throw InputError("tangent plane at point " + std::to_string(i) + ": only " +
                         std::to_string(nbhd.size()) + " points within radius " +
                         std::to_string(r) + ", need at least 3");

    Eigen::Vector3d mean = Eigen::Vector3d::Zero();
    for (int j : nbhd)
        mean += cloud.point(j);
    mean /= static_cast<double>(nbhd.size());

    Eigen::Matrix3d cov = Eigen::Matrix3d::Zero();
    for (int j : nbhd) {
        const Eigen::Vector3d d = cloud.point(j) - mean;
        cov += d * d.transpose();
    }
    cov /= static_cast<double>(nbhd.size());

    Eigen::SelfAdjointEigenSolver<Eigen::Matrix3d> eig(cov);
    if (eig.info() != Eigen::Success)
        throw NumericError("tangent plane at point " + std::to_string(i) +
                           ": covariance eigendecomposition failed");
    const Eigen::Vector3d evals = eig.eigenvalues(); // ascending
    if (evals[1] <= 1e-12 * evals[2])
        throw InputError("tangent plane at point " + std::to_string(i) +
                         ": neighborhood is collinear");

    TangentFrame frame;
    frame.origin = cloud.point(i);
    frame.basis_u = canonical_sign(eig.eigenvectors().col(2));
    frame.basis_v = canonical_sign(eig.eigenvectors().col(1));
    frame.normal = frame.basis_u.cross(frame.basis_v);
    return frame;
}

double voronoi_cell_area(const PointCloud& cloud, const NeighborIndex& index, int i,
                         const TangentFrame& frame, double delta) {
    if (delta <= 0.0)
        throw ConfigError("voronoi cell: delta must be positive");

    const std::vector<int> nbhd = index.radius_query(cloud.point(i), delta);
    if (nbhd.size() < 4)
        throw InputError("voronoi cell at point " + std::to_string(i) + ": only " +
                         std::to_string(nbhd.size()) + " points within radius " +
                         std::to_string(delta) + ", need at least 4");

    const double coincident = 1e-12 * delta;
    std::vector<std::pair<int, Eigen::Vector2d>> sites;
    sites.reserve(nbhd.size());
    for (int j : nbhd) {
        if (j == i)
            continue;
        Eigen::Vector2d q = frame.project(cloud.point(j));
        if (q.norm() <= coincident) {
            // A point indistinguishable from the center shares its cell; no
            // perturbation resolves which of the two owns the area.
            throw InputError("voronoi cell at point " + std::to_string(i) + ": point " +
                             std::to_string(j) + " projects onto the cell center");
        }
        sites.emplace_back(j, q);
    }

    // Coincident projected neighbors yield redundant bisectors; nudge the
    // later ones apart deterministically (direction keyed to the point index).
    for (std::size_t a = 0; a < sites.size(); ++a) {
        for (std::size_t b = 0; b < a; ++b) {
            if ((sites[a].second - sites[b].second).norm() > coincident)
                continue;
            const double golden = 0.6180339887498949;
            const double angle =
                2.0 * std::numbers::pi * std::fmod(golden * static_cast<double>(sites[a].first), 1.0);
            sites[a].second += 1e-9 * delta * Eigen::Vector2d(std::cos(angle), std::sin(angle));
            if (sites[a].second.norm() <= coincident)
                throw InputError("voronoi cell at point " + std::to_string(i) + ": point " +
                                 std::to_string(sites[a].first) +
                                 " still degenerate after perturbation");
        }
    }

    // The cell of the origin is the intersection of the bisector half-planes
    // x . q <= |q|^2 / 2; seed with a square that contains the clip disk.
    geom::Polygon cell = geom::centered_square(delta);
    for (const auto& [j, q] : sites) {
        cell = geom::clip_half_plane(cell, q, 0.5 * q.squaredNorm());
        if (cell.empty())
            break;
    }

    const double area = cell.empty() ? 0.0 : geom::disk_polygon_area(cell, 0.5 * delta);
    if (!std::isfinite(area) || area <= 0.0)
        throw NumericError("voronoi cell at point " + std::to_string(i) +
                           ": degenerate cell area " + std::to_string(area));
    return area;
}

Eigen::VectorXd all_area_weights(const PointCloud& cloud, const NeighborIndex& index,
                                 double r, double delta) {
    const Eigen::Index n = cloud.size();
    Eigen::VectorXd areas(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const TangentFrame frame =
            estimate_tangent_plane(cloud, index, static_cast<int>(i), r);
        areas[i] = voronoi_cell_area(cloud, index, static_cast<int>(i), frame, delta);
    }
    return areas;
}

} // namespace pmfht
