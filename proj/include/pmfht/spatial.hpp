#pragma once

#include "pmfht/point_cloud.hpp"

#include <Eigen/Geometry>

#include <vector>

namespace pmfht {

/// Immutable kd-tree over a point cloud for exact fixed-radius and k-nearest
/// queries. Queries are read-only and safe to run concurrently.
class NeighborIndex {
public:
    explicit NeighborIndex(const PointCloud& cloud);

    /// Indices of all points with ||p_j - center|| <= radius (closed ball),
    /// sorted ascending. The query point itself is included when it is in
    /// the cloud.
    std::vector<int> radius_query(const Eigen::Vector3d& center, double radius) const;

    /// The k nearest points to center, ordered by (distance, index).
    /// Returns fewer than k entries only when the cloud is smaller than k.
    std::vector<int> knn_query(const Eigen::Vector3d& center, int k) const;

    int size() const { return static_cast<int>(points_.rows()); }
    const Eigen::AlignedBox3d& bounding_box() const { return bbox_; }
    Eigen::Vector3d point(int i) const { return points_.row(i).transpose(); }

private:
    struct Node {
        int left = -1;
        int right = -1;
        int begin = 0; // leaf range into order_
        int end = 0;
        int axis = 0;
        double split = 0.0;
        Eigen::AlignedBox3d box;
    };

    int build(int begin, int end);

    Eigen::Matrix<double, Eigen::Dynamic, 3> points_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    int root_ = -1;
    Eigen::AlignedBox3d bbox_;
};

/// Builds the spatial index for a cloud.
NeighborIndex build_index(const PointCloud& cloud);

/// Sampling density summary: epsilon is the mean nearest-neighbor distance.
struct SamplingEstimate {
    double epsilon = 0.0;
    Eigen::VectorXd per_point_nn; // distance to the nearest other point, length N
};

/// Estimates the sampling parameter epsilon as the mean over points of the
/// distance to the nearest other point. Requires N >= 2; throws InputError
/// when every nearest distance is zero (duplicate-only cloud).
SamplingEstimate estimate_epsilon(const NeighborIndex& index, const PointCloud& cloud);

} // namespace pmfht
