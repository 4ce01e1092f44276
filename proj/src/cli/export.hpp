#pragma once

#include "pmfht/point_cloud.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace pmfht::cli {

// Round-trip-exact decimal rendering for CSV payloads.
std::string format_double(double v);

// Compact rendering used in file names, e.g. 0.5 -> "0.5", 2.0 -> "2".
std::string format_order(double a);

// FNV-1a 64 over the raw bytes of a file, as 16 hex digits.
std::string file_content_hash(const std::filesystem::path& path);

void write_text_file(const std::filesystem::path& path, const std::string& body);

// One row per mode: mode_index, lambda, coeff_real, coeff_imag.
void write_spectrum_csv(const std::filesystem::path& path, const Eigen::VectorXd& lambdas,
                        const Eigen::VectorXcd& coeffs);

// One row per mode: mode_index, lambda.
void write_lambda_csv(const std::filesystem::path& path, const Eigen::VectorXd& lambdas);

struct StemSeries {
    std::string name;
    std::string color; // css color
    Eigen::VectorXd values;
};

// Self-contained stem plot, one stem per mode per series.
void write_stem_svg(const std::filesystem::path& path, const std::string& title,
                    const std::string& y_label, const std::vector<StemSeries>& series);

// Palette assigned to channel series in order (wraps around).
std::string series_color(std::size_t k);

// t in [0,1] -> RGB. Maps: "bwr" (blue-white-red diverging), "gray", "viridis".
std::array<std::uint8_t, 3> colormap(const std::string& name, double t);

// Min-max normalizes values and pushes them through the colormap. A constant
// vector maps to the colormap midpoint.
std::vector<std::array<std::uint8_t, 3>> colorize(const Eigen::VectorXd& values,
                                                  const std::string& map_name);

// Matrix Market coordinate format, general symmetric storage not used:
// all stored entries are written explicitly.
void write_matrix_market(const std::filesystem::path& path,
                         const Eigen::SparseMatrix<double>& m);
void write_matrix_market_diagonal(const std::filesystem::path& path,
                                  const Eigen::VectorXd& diag);

} // namespace pmfht::cli
