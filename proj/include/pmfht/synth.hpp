#pragma once

#include "pmfht/point_cloud.hpp"

#include <cstdint>

namespace pmfht::synth {

// Deterministic analytic test clouds. Every generator returns points only
// (no colors, no scalar channels).

PointCloud grid(int nx, int ny, double spacing);

PointCloud line(int n, double spacing);

PointCloud circle(int n, double radius = 1.0);

// Fibonacci lattice on the sphere: deterministic, near-uniform.
PointCloud fibonacci_sphere(int n, double radius = 1.0);

// Uniform random points on the sphere (normalized Gaussians).
PointCloud random_sphere(int n, std::uint64_t seed, double radius = 1.0);

// Smooth non-symmetric closed surface: a Fibonacci sphere with lobed radial
// modulation. Stands in for scanned models in demos and tests.
PointCloud blob(int n);

// Adds iid Gaussian noise to every coordinate.
PointCloud add_noise(PointCloud cloud, double sigma, std::uint64_t seed);

} // namespace pmfht::synth
