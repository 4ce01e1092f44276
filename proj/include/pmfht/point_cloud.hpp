#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pmfht {

/// A point cloud: N xyz positions plus optional per-vertex attributes.
///
/// Colors, when present, have one uchar RGB triple per point. Scalars is a
/// named map of per-vertex real channels (e.g. extra PLY properties); every
/// channel has length N.
struct PointCloud {
    Eigen::Matrix<double, Eigen::Dynamic, 3> points;
    std::vector<std::array<std::uint8_t, 3>> colors;
    std::map<std::string, Eigen::VectorXd> scalars;

    Eigen::Index size() const { return points.rows(); }
    Eigen::Vector3d point(Eigen::Index i) const { return points.row(i).transpose(); }
    bool has_colors() const { return !colors.empty(); }

    /// Throws InputError if any invariant is violated: at least one point,
    /// finite coordinates, attribute lengths matching the point count.
    void validate() const;

    /// Keeps only the given rows (indices into [0, N)), attributes included.
    PointCloud select(const std::vector<int>& indices) const;
};

} // namespace pmfht
