#include "../src/cli/pipeline.hpp"

#include "pmfht/errors.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <string>
#include <vector>

namespace {

using pmfht::cli::PipelineConfig;

void add_common_options(CLI::App* cmd, PipelineConfig& cfg) {
    cmd->add_option("--input", cfg.input, "input PLY file")->required();
    cmd->add_option("--out", cfg.out_dir, "output directory")->required();
    cmd->add_option("--target-points", cfg.target_points,
                    "downsample to this many points by farthest-point sampling")
        ->check(CLI::Range(4, 1 << 30));
    cmd->add_option("--epsilon", cfg.epsilon, "sampling density override (default: estimated)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--r-scale", cfg.r_scale, "tangent PCA radius as a multiple of epsilon")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd->add_option("--delta-scale", cfg.delta_scale,
                    "operator neighborhood radius as a multiple of epsilon")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    auto* t = cmd->add_option("--t", cfg.t, "heat kernel bandwidth override")
                  ->check(CLI::PositiveNumber);
    cmd->add_option("--t-exponent", cfg.t_exponent,
                    "schedule margin m in t = epsilon^(1/2+m), in (0, 0.5]")
        ->capture_default_str()
        ->excludes(t);
    cmd->add_option("--seed", cfg.seed, "random seed recorded in the manifest")
        ->capture_default_str();
    cmd->add_option("--format", cfg.format, "PLY output format")
        ->capture_default_str()
        ->check(CLI::IsMember({"ascii", "binary"}));
    cmd->add_flag("--dump-matrices", cfg.dump_matrices,
                  "also write Q and B in Matrix Market format");
}

void add_order_options(CLI::App* cmd, PipelineConfig& cfg, std::vector<double>& orders) {
    auto* one = cmd->add_option("--order", "fractional order a");
    auto* many = cmd->add_option("--orders", orders, "comma-separated list of orders")
                     ->delimiter(',');
    one->excludes(many);
    one->each([&cfg](const std::string& s) { cfg.orders = {std::stod(s)}; });
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"point cloud manifold fractional harmonic transform"};
    app.require_subcommand(1);

    PipelineConfig cfg;
    std::vector<double> orders_list;

    CLI::App* info = app.add_subcommand("info", "report sampling parameters and feasibility");
    add_common_options(info, cfg);

    CLI::App* basis = app.add_subcommand("basis", "export colored eigenfunction PLYs");
    add_common_options(basis, cfg);
    basis->add_option("--modes", cfg.modes, "highest eigenfunction index to export")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    basis->add_option("--colormap", cfg.colormap_name, "bwr, gray, or viridis")
        ->capture_default_str()
        ->check(CLI::IsMember({"bwr", "gray", "viridis"}));

    CLI::App* spectrum = app.add_subcommand("spectrum", "export fractional spectra");
    add_common_options(spectrum, cfg);
    add_order_options(spectrum, cfg, orders_list);
    spectrum->add_option("--plot", cfg.plot, "stem plot quantity")
        ->capture_default_str()
        ->check(CLI::IsMember({"magnitude", "real", "imag"}));

    CLI::App* filter = app.add_subcommand("filter", "fractional-domain spectral filtering");
    add_common_options(filter, cfg);
    add_order_options(filter, cfg, orders_list);
    filter->add_option("--filter", cfg.filter_kind, "filter kind")
        ->capture_default_str()
        ->check(CLI::IsMember({"low", "high", "band"}));
    filter->add_option("--cutoff-lo", cfg.cutoff_lo, "lowest passband mode index");
    filter->add_option("--cutoff-hi", cfg.cutoff_hi, "highest passband mode index");
    filter->add_option("--rolloff", cfg.rolloff, "raised-cosine rolloff width in modes")
        ->capture_default_str()
        ->check(CLI::NonNegativeNumber);
    filter->add_option("--plot", cfg.plot, "stem plot quantity")
        ->capture_default_str()
        ->check(CLI::IsMember({"magnitude", "real", "imag"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 3;
    }

    if (!orders_list.empty())
        cfg.orders = orders_list;

    try {
        if (info->parsed()) {
            cfg.command = "info";
            return pmfht::cli::run_info(cfg);
        }
        if (basis->parsed()) {
            cfg.command = "basis";
            return pmfht::cli::run_basis(cfg);
        }
        if (spectrum->parsed()) {
            cfg.command = "spectrum";
            return pmfht::cli::run_spectrum(cfg);
        }
        cfg.command = "filter";
        return pmfht::cli::run_filter(cfg);
    } catch (const pmfht::InputError& e) {
        std::fprintf(stderr, "input error: %s\n", e.what());
        return 1;
    } catch (const pmfht::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const pmfht::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 3;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
