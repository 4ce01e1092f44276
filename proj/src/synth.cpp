#include "pmfht/synth.hpp"
#include "pmfht/errors.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace pmfht::synth {

namespace {

void require(bool ok, const char* what) {
    if (!ok)
        throw ConfigError(what);
}

} // namespace

PointCloud grid(int nx, int ny, double spacing) {
    require(nx >= 2 && ny >= 2 && spacing > 0.0, "grid: need nx, ny >= 2 and spacing > 0");
    PointCloud cloud;
    cloud.points.resize(static_cast<Eigen::Index>(nx) * ny, 3);
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i)
            cloud.points.row(static_cast<Eigen::Index>(j) * nx + i) =
                Eigen::RowVector3d(i * spacing, j * spacing, 0.0);
    return cloud;
}

PointCloud line(int n, double spacing) {
    require(n >= 2 && spacing > 0.0, "line: need n >= 2 and spacing > 0");
    PointCloud cloud;
    cloud.points.resize(n, 3);
    for (int i = 0; i < n; ++i)
        cloud.points.row(i) = Eigen::RowVector3d(i * spacing, 0.0, 0.0);
    return cloud;
}

PointCloud circle(int n, double radius) {
    require(n >= 3 && radius > 0.0, "circle: need n >= 3 and radius > 0");
    PointCloud cloud;
    cloud.points.resize(n, 3);
    for (int i = 0; i < n; ++i) {
        const double a = 2.0 * std::numbers::pi * i / n;
        cloud.points.row(i) = Eigen::RowVector3d(radius * std::cos(a), radius * std::sin(a), 0.0);
    }
    return cloud;
}

PointCloud fibonacci_sphere(int n, double radius) {
    require(n >= 4 && radius > 0.0, "sphere: need n >= 4 and radius > 0");
    const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
    PointCloud cloud;
    cloud.points.resize(n, 3);
    for (int i = 0; i < n; ++i) {
        const double z = 1.0 - 2.0 * (i + 0.5) / n;
        const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        const double phi = 2.0 * std::numbers::pi * i / golden;
        cloud.points.row(i) =
            radius * Eigen::RowVector3d(rho * std::cos(phi), rho * std::sin(phi), z);
    }
    return cloud;
}

PointCloud random_sphere(int n, std::uint64_t seed, double radius) {
    require(n >= 4 && radius > 0.0, "sphere: need n >= 4 and radius > 0");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    PointCloud cloud;
    cloud.points.resize(n, 3);
    for (int i = 0; i < n; ++i) {
        Eigen::Vector3d v;
        do {
            v = {gauss(rng), gauss(rng), gauss(rng)};
        } while (v.norm() < 1e-9);
        cloud.points.row(i) = radius * v.normalized().transpose();
    }
    return cloud;
}

PointCloud blob(int n) {
    PointCloud cloud = fibonacci_sphere(n);
    for (Eigen::Index i = 0; i < cloud.size(); ++i) {
        const Eigen::Vector3d p = cloud.point(i);
        const double scale = 1.0 + 0.22 * std::sin(3.0 * std::atan2(p.y(), p.x())) *
                                       (1.0 - p.z() * p.z()) +
                             0.09 * std::cos(2.5 * std::numbers::pi * p.z());
        cloud.points.row(i) *= scale;
    }
    return cloud;
}

PointCloud add_noise(PointCloud cloud, double sigma, std::uint64_t seed) {
    require(sigma >= 0.0, "noise: sigma must be nonnegative");
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, sigma);
    for (Eigen::Index i = 0; i < cloud.size(); ++i)
        for (int k = 0; k < 3; ++k)
            cloud.points(i, k) += gauss(rng);
    return cloud;
}

} // namespace pmfht::synth
