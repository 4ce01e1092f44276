#pragma once

#include "pmfht/fractional.hpp"
#include "pmfht/harmonic.hpp"
#include "pmfht/lbo.hpp"
#include "pmfht/point_cloud.hpp"
#include "pmfht/spatial.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace pmfht::cli {

// Everything a fracharm subcommand needs, resolved from flags. Zero-valued
// epsilon/t mean "derive from the data".
struct PipelineConfig {
    std::string command;
    std::filesystem::path input;
    std::filesystem::path out_dir;
    int target_points = 0; // 0 = keep every point
    double epsilon = 0.0;  // 0 = estimate from nearest neighbors
    double r_scale = 10.0;
    double delta_scale = 10.0;
    double t = 0.0;           // 0 = epsilon^(1/2 + t_exponent)
    double t_exponent = 0.5;  // schedule margin
    std::vector<double> orders{1.0};
    std::string filter_kind = "low";
    int cutoff_lo = -1; // -1 = not given
    int cutoff_hi = -1;
    double rolloff = 0.0;
    int modes = 6;
    std::string plot = "magnitude";
    std::string format = "ascii";
    std::string colormap_name = "bwr";
    std::uint64_t seed = 0;
    bool dump_matrices = false;
    Eigen::Index dense_limit = 4000;
};

// Resolved pipeline state. Geometry stages fill the first block; spectral
// stages (not needed by `info`) fill the rest.
struct Pipeline {
    PipelineConfig cfg;
    PointCloud cloud;
    Eigen::Index n_input = 0;
    std::optional<NeighborIndex> index;
    double epsilon = 0.0;
    bool epsilon_estimated = true;
    double r = 0.0;
    double delta = 0.0;
    double t = 0.0;
    bool t_scheduled = true;

    Eigen::VectorXd weights;
    std::optional<LboPair> lbo;
    std::optional<HarmonicBasis> basis;
    std::optional<FractionalOperator> fractional;

    // All signal channels of the working cloud: x, y, z, then each scalar
    // attribute in name order.
    Eigen::MatrixXd channel_values;
    std::vector<std::string> channel_names;
};

// Reads the input, optionally downsamples, and resolves epsilon/r/delta/t.
Pipeline prepare_geometry(const PipelineConfig& cfg);

// Area weights, operator assembly, and the eigenbasis.
void prepare_spectral(Pipeline& pipe);

// Fourier matrix eigendecomposition; requires prepare_spectral first.
void prepare_fractional(Pipeline& pipe);

// Subcommand bodies; each writes its artifacts plus manifest.json in
// cfg.out_dir and returns the process exit code (0 on success).
int run_info(const PipelineConfig& cfg);
int run_basis(const PipelineConfig& cfg);
int run_spectrum(const PipelineConfig& cfg);
int run_filter(const PipelineConfig& cfg);

} // namespace pmfht::cli
