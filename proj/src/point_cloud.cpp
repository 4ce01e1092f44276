#include "pmfht/point_cloud.hpp"
#include "pmfht/errors.hpp"

#include <cmath>

namespace pmfht {

void PointCloud::validate() const {
    if (points.rows() < 1)
        throw InputError("point cloud is empty");
    if (!points.allFinite())
        throw InputError("point cloud contains non-finite coordinates");
    if (!colors.empty() && static_cast<Eigen::Index>(colors.size()) != points.rows())
        throw InputError("color channel length does not match point count");
    for (const auto& [name, values] : scalars) {
        if (values.size() != points.rows())
            throw InputError("scalar channel '" + name + "' length does not match point count");
        if (!values.allFinite())
            throw InputError("scalar channel '" + name + "' contains non-finite values");
    }
}

PointCloud PointCloud::select(const std::vector<int>& indices) const {
    PointCloud out;
    out.points.resize(static_cast<Eigen::Index>(indices.size()), 3);
    for (std::size_t k = 0; k < indices.size(); ++k)
        out.points.row(static_cast<Eigen::Index>(k)) = points.row(indices[k]);
    if (!colors.empty()) {
        out.colors.reserve(indices.size());
        for (int i : indices)
            out.colors.push_back(colors[static_cast<std::size_t>(i)]);
    }
    for (const auto& [name, values] : scalars) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(indices.size()));
        for (std::size_t k = 0; k < indices.size(); ++k)
            v[static_cast<Eigen::Index>(k)] = values[indices[k]];
        out.scalars.emplace(name, std::move(v));
    }
    return out;
}

} // namespace pmfht
