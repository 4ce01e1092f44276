#pragma once

#include "pmfht/point_cloud.hpp"
#include "pmfht/spatial.hpp"

#include <Eigen/Dense>

namespace pmfht {

// Orthonormal local frame at a point: (basis_u, basis_v) span the estimated
// tangent plane, normal = basis_u x basis_v.
struct TangentFrame {
    Eigen::Vector3d origin;
    Eigen::Vector3d basis_u;
    Eigen::Vector3d basis_v;
    Eigen::Vector3d normal;

    // 2D coordinates of p in the tangent plane, relative to origin.
    Eigen::Vector2d project(const Eigen::Vector3d& p) const {
        const Eigen::Vector3d d = p - origin;
        return {basis_u.dot(d), basis_v.dot(d)};
    }
};

// PCA plane fit over the r-neighborhood of point i (covariance about the
// neighborhood mean). basis_u/basis_v are the top-two principal directions.
// Throws InputError if the neighborhood has fewer than 3 points or is
// collinear (two smallest covariance eigenvalues below 1e-12 of the largest).
TangentFrame estimate_tangent_plane(const PointCloud& cloud, const NeighborIndex& index,
                                    int i, double r);

// Area of point i's 2D Voronoi cell among the projections of its
// delta-neighborhood onto `frame`, clipped to the disk of radius delta/2
// about i's own projection. Coincident projected neighbors are jittered
// deterministically by 1e-9*delta; a neighbor coincident with the center
// itself is unrecoverable and raises InputError naming both indices.
double voronoi_cell_area(const PointCloud& cloud, const NeighborIndex& index, int i,
                         const TangentFrame& frame, double delta);

// Per-point cell areas, each in the point's own tangent frame. Entries are
// strictly positive and finite; per-point failures carry the point index.
Eigen::VectorXd all_area_weights(const PointCloud& cloud, const NeighborIndex& index,
                                 double r, double delta);

} // namespace pmfht
