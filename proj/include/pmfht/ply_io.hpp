#pragma once

#include "pmfht/point_cloud.hpp"

#include <cstdint>
#include <filesystem>

namespace pmfht {

enum class PlyFormat { ascii, binary_little_endian };

/// Reads a PLY point cloud (ascii or binary_little_endian, version 1.0).
///
/// The vertex element must declare x, y, z as float or double; float values
/// are widened to double. uchar red/green/blue become the color channel and
/// any other float/double vertex property becomes a named scalar channel.
/// Faces, normals and other elements are skipped. Throws InputError with the
/// offending line (ascii) or byte offset (binary) on malformed input,
/// unsupported formats (big-endian, list-typed vertex properties), vertex
/// count mismatches, and non-finite coordinates.
PointCloud read_ply(const std::filesystem::path& path);

/// Writes a cloud as PLY. Coordinates (and scalar channels) are emitted as
/// double properties: binary round-trips are bit-exact, ascii keeps 9
/// significant digits. Colors, when present, are uchar red/green/blue.
void write_ply(const PointCloud& cloud, const std::filesystem::path& path, PlyFormat format);

/// Farthest-point downsampling to min(target, N) points, started from the
/// point nearest the centroid. Output keeps the original point order and all
/// attribute channels. Deterministic: ties break toward the lowest index and
/// the seed is reserved for future stochastic variants. Requires target >= 4.
PointCloud downsample(const PointCloud& cloud, int target, std::uint64_t seed);

/// The farthest-point selection order itself (first entry is the centroid
/// seed point); downsample() returns the first `target` entries, re-sorted.
std::vector<int> farthest_point_order(const PointCloud& cloud, int count);

} // namespace pmfht
