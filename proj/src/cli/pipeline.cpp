#include "pipeline.hpp"

#include "export.hpp"
#include "pmfht/errors.hpp"
#include "pmfht/filtering.hpp"
#include "pmfht/ply_io.hpp"
#include "pmfht/tangent.hpp"

#include <json.hpp>

#include <cctype>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <utility>

namespace pmfht::cli {

namespace {

using nlohmann::ordered_json;

// Rethrows pipeline failures with the stage name attached, preserving the
// error category (and hence the process exit code).
template <typename F>
decltype(auto) stage(const char* name, F&& fn) {
    try {
        return std::forward<F>(fn)();
    } catch (const InputError& e) {
        throw InputError(std::string("[") + name + "] " + e.what());
    } catch (const ConfigError& e) {
        throw ConfigError(std::string("[") + name + "] " + e.what());
    } catch (const NumericError& e) {
        throw NumericError(std::string("[") + name + "] " + e.what());
    }
}

std::string safe_name(const std::string& s) {
    std::string out;
    for (char c : s)
        out += std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' ? c : '_';
    return out.empty() ? std::string("_") : out;
}

PlyFormat output_format(const PipelineConfig& cfg) {
    if (cfg.format == "ascii")
        return PlyFormat::ascii;
    if (cfg.format == "binary")
        return PlyFormat::binary_little_endian;
    throw ConfigError("unknown output format '" + cfg.format + "' (ascii or binary)");
}

Eigen::VectorXd plot_quantity(const Eigen::VectorXcd& coeffs, const std::string& plot) {
    if (plot == "magnitude")
        return coeffs.cwiseAbs();
    if (plot == "real")
        return coeffs.real();
    if (plot == "imag")
        return coeffs.imag();
    throw ConfigError("unknown plot quantity '" + plot + "' (magnitude, real, or imag)");
}

ordered_json base_manifest(const Pipeline& pipe) {
    const PipelineConfig& cfg = pipe.cfg;
    ordered_json j;
    j["tool"] = "fracharm";
    j["command"] = cfg.command;
    j["input"] = cfg.input.string();
    j["input_hash_fnv1a64"] = file_content_hash(cfg.input);
    j["seed"] = cfg.seed;
    j["points"] = {{"input", pipe.n_input},
                   {"used", pipe.cloud.size()},
                   {"target", cfg.target_points}};
    j["sampling"] = {{"epsilon", pipe.epsilon},
                     {"epsilon_source", pipe.epsilon_estimated ? "estimated" : "override"},
                     {"r_scale", cfg.r_scale},
                     {"delta_scale", cfg.delta_scale},
                     {"r", pipe.r},
                     {"delta", pipe.delta},
                     {"t", pipe.t},
                     {"t_source", pipe.t_scheduled ? "schedule" : "override"},
                     {"t_exponent_margin", cfg.t_exponent}};
    j["dense_limit"] = cfg.dense_limit;
    j["format"] = cfg.format;
    j["channels"] = pipe.channel_names;
    return j;
}

void write_manifest(const Pipeline& pipe, ordered_json j, std::vector<std::string> outputs) {
    j["outputs"] = std::move(outputs);
    write_text_file(pipe.cfg.out_dir / "manifest.json", j.dump(2) + "\n");
}

void dump_operator_matrices(const Pipeline& pipe, std::vector<std::string>& outputs) {
    if (!pipe.cfg.dump_matrices)
        return;
    stage("matrix dump", [&] {
        write_matrix_market(pipe.cfg.out_dir / "Q.mtx", pipe.lbo->Q);
        write_matrix_market_diagonal(pipe.cfg.out_dir / "B.mtx", pipe.lbo->mass);
        outputs.push_back("Q.mtx");
        outputs.push_back("B.mtx");
        return 0;
    });
}

// Spectrum CSV + JSON mirror + stem plot for one order; returns file names.
std::vector<std::string> export_spectrum(const Pipeline& pipe, const SpectralSignal& sig,
                                         const std::string& tag) {
    std::vector<std::string> files;
    const HarmonicBasis& basis = *pipe.basis;

    std::vector<StemSeries> series;
    ordered_json channels_json;
    for (std::size_t c = 0; c < sig.channels.size(); ++c) {
        const Eigen::VectorXcd coeffs = sig.coeffs.col(static_cast<Eigen::Index>(c));
        const std::string csv_name = "spectrum_" + tag + "_" + safe_name(sig.channels[c]) + ".csv";
        write_spectrum_csv(pipe.cfg.out_dir / csv_name, basis.lambdas, coeffs);
        files.push_back(csv_name);

        ordered_json ch;
        ch["real"] = ordered_json::array();
        ch["imag"] = ordered_json::array();
        for (Eigen::Index m = 0; m < coeffs.size(); ++m) {
            ch["real"].push_back(coeffs[m].real());
            ch["imag"].push_back(coeffs[m].imag());
        }
        channels_json[sig.channels[c]] = std::move(ch);

        series.push_back({sig.channels[c], series_color(c),
                          plot_quantity(coeffs, pipe.cfg.plot)});
    }

    ordered_json j;
    j["N"] = pipe.cloud.size();
    j["t"] = pipe.t;
    j["r"] = pipe.r;
    j["delta"] = pipe.delta;
    j["epsilon"] = pipe.epsilon;
    j["order"] = sig.order;
    j["lambda"] = ordered_json::array();
    for (Eigen::Index m = 0; m < basis.lambdas.size(); ++m)
        j["lambda"].push_back(basis.lambdas[m]);
    j["channels"] = std::move(channels_json);
    const std::string json_name = "spectrum_" + tag + ".json";
    write_text_file(pipe.cfg.out_dir / json_name, j.dump(2) + "\n");
    files.push_back(json_name);

    const std::string svg_name = "spectrum_" + tag + ".svg";
    write_stem_svg(pipe.cfg.out_dir / svg_name,
                   "order " + format_order(sig.order) + " spectrum (" + pipe.cfg.plot + ")",
                   "coefficient " + pipe.cfg.plot, series);
    files.push_back(svg_name);
    return files;
}

std::vector<std::string> branch_cut_notes(const FractionalOperator& opr, double a) {
    std::vector<std::string> notes;
    if (a != std::round(a) && !opr.near_branch_cut.empty())
        notes.push_back("order " + format_order(a) + ": " +
                        std::to_string(opr.near_branch_cut.size()) +
                        " eigenvalue(s) on the negative real axis, principal branch taken");
    return notes;
}

} // namespace

Pipeline prepare_geometry(const PipelineConfig& cfg) {
    Pipeline pipe;
    pipe.cfg = cfg;
    pipe.cloud = stage("input", [&] { return read_ply(cfg.input); });
    pipe.n_input = pipe.cloud.size();

    if (cfg.target_points > 0 && cfg.target_points < pipe.cloud.size())
        pipe.cloud = stage("downsample",
                           [&] { return downsample(pipe.cloud, cfg.target_points, cfg.seed); });

    pipe.index.emplace(pipe.cloud);
    stage("sampling", [&] {
        if (cfg.r_scale <= 0.0 || cfg.delta_scale <= 0.0)
            throw ConfigError("r-scale and delta-scale must be positive");
        if (cfg.epsilon > 0.0) {
            pipe.epsilon = cfg.epsilon;
            pipe.epsilon_estimated = false;
        } else {
            pipe.epsilon = estimate_epsilon(*pipe.index, pipe.cloud).epsilon;
        }
        pipe.r = cfg.r_scale * pipe.epsilon;
        pipe.delta = cfg.delta_scale * pipe.epsilon;
        if (cfg.t > 0.0) {
            pipe.t = cfg.t;
            pipe.t_scheduled = false;
        } else {
            pipe.t = default_t(pipe.epsilon, cfg.t_exponent);
        }
        return 0;
    });

    const Eigen::Index n = pipe.cloud.size();
    pipe.channel_values.resize(n, 3 + static_cast<Eigen::Index>(pipe.cloud.scalars.size()));
    pipe.channel_values.leftCols<3>() = pipe.cloud.points;
    pipe.channel_names = {"x", "y", "z"};
    Eigen::Index col = 3;
    for (const auto& [name, values] : pipe.cloud.scalars) {
        pipe.channel_values.col(col++) = values;
        pipe.channel_names.push_back(name);
    }
    return pipe;
}

void prepare_spectral(Pipeline& pipe) {
    if (pipe.cloud.size() > pipe.cfg.dense_limit)
        throw ConfigError("[feasibility] N=" + std::to_string(pipe.cloud.size()) +
                          " exceeds the dense eigensolve limit " +
                          std::to_string(pipe.cfg.dense_limit) +
                          "; rerun with --target-points <= " +
                          std::to_string(pipe.cfg.dense_limit));
    pipe.weights = stage("area weights", [&] {
        return all_area_weights(pipe.cloud, *pipe.index, pipe.r, pipe.delta);
    });
    pipe.lbo.emplace(stage("operator assembly", [&] {
        return assemble_lbo(pipe.cloud, *pipe.index, pipe.weights, pipe.t, pipe.delta);
    }));
    pipe.basis.emplace(stage("eigenbasis", [&] {
        return solve_harmonic_basis(*pipe.lbo, pipe.cfg.dense_limit);
    }));
}

void prepare_fractional(Pipeline& pipe) {
    pipe.fractional.emplace(stage("fractional decomposition", [&] {
        const Eigen::MatrixXd fm = manifold_fourier_matrix(*pipe.basis);
        return decompose_fourier_matrix(fm, pipe.basis->id);
    }));
}

int run_info(const PipelineConfig& cfg) {
    Pipeline pipe = prepare_geometry(cfg);
    std::filesystem::create_directories(cfg.out_dir);

    const Eigen::AlignedBox3d box = pipe.index->bounding_box();
    const bool feasible = pipe.cloud.size() <= cfg.dense_limit;

    char line[256];
    std::printf("input: %s\n", cfg.input.string().c_str());
    std::printf("points: %lld (input %lld)\n", static_cast<long long>(pipe.cloud.size()),
                static_cast<long long>(pipe.n_input));
    std::snprintf(line, sizeof(line), "bounding box min: (%.6g, %.6g, %.6g)", box.min().x(),
                  box.min().y(), box.min().z());
    std::printf("%s\n", line);
    std::snprintf(line, sizeof(line), "bounding box max: (%.6g, %.6g, %.6g)", box.max().x(),
                  box.max().y(), box.max().z());
    std::printf("%s\n", line);
    std::printf("epsilon: %.9g (%s)\n", pipe.epsilon,
                pipe.epsilon_estimated ? "estimated" : "override");
    std::printf("r: %.9g  delta: %.9g  t: %.9g\n", pipe.r, pipe.delta, pipe.t);
    if (feasible)
        std::printf("dense eigensolve: feasible (N <= %lld)\n",
                    static_cast<long long>(cfg.dense_limit));
    else
        std::printf("dense eigensolve: N=%lld exceeds the limit %lld; rerun with "
                    "--target-points <= %lld\n",
                    static_cast<long long>(pipe.cloud.size()),
                    static_cast<long long>(cfg.dense_limit),
                    static_cast<long long>(cfg.dense_limit));

    ordered_json j = base_manifest(pipe);
    j["bounding_box"] = {{"min", {box.min().x(), box.min().y(), box.min().z()}},
                         {"max", {box.max().x(), box.max().y(), box.max().z()}}};
    j["dense_feasible"] = feasible;
    write_manifest(pipe, std::move(j), {});
    return 0;
}

int run_basis(const PipelineConfig& cfg) {
    Pipeline pipe = prepare_geometry(cfg);
    prepare_spectral(pipe);
    std::filesystem::create_directories(cfg.out_dir);
    const HarmonicBasis& basis = *pipe.basis;

    if (cfg.modes < 0)
        throw ConfigError("--modes must be nonnegative");
    const Eigen::Index last = std::min<Eigen::Index>(cfg.modes, basis.size() - 1);

    std::vector<std::string> outputs;
    for (Eigen::Index m = 0; m <= last; ++m) {
        PointCloud colored = pipe.cloud;
        const Eigen::VectorXd h = basis.vectors.col(m);
        colored.colors = colorize(h, cfg.colormap_name);
        colored.scalars["value"] = h;
        char name[64];
        std::snprintf(name, sizeof(name), "basis_mode%03lld.ply", static_cast<long long>(m));
        write_ply(colored, cfg.out_dir / name, output_format(cfg));
        outputs.emplace_back(name);
    }
    write_lambda_csv(cfg.out_dir / "lambdas.csv", basis.lambdas);
    outputs.emplace_back("lambdas.csv");
    dump_operator_matrices(pipe, outputs);

    ordered_json j = base_manifest(pipe);
    j["modes"] = last;
    j["colormap"] = cfg.colormap_name;
    j["raw_lambda_min"] = basis.raw_lambda_min;
    write_manifest(pipe, std::move(j), outputs);

    std::printf("wrote eigenfunctions 0..%lld and lambdas.csv to %s\n",
                static_cast<long long>(last), cfg.out_dir.string().c_str());
    return 0;
}

int run_spectrum(const PipelineConfig& cfg) {
    Pipeline pipe = prepare_geometry(cfg);
    prepare_spectral(pipe);
    prepare_fractional(pipe);
    std::filesystem::create_directories(cfg.out_dir);

    std::vector<std::string> outputs;
    std::vector<std::string> warnings;
    for (double a : cfg.orders) {
        const SpectralSignal sig = stage("fractional transform", [&] {
            return pmfht_forward(*pipe.fractional, pipe.channel_values, a, pipe.channel_names);
        });
        const std::string tag = "a" + format_order(a);
        std::vector<std::string> files =
            stage("export", [&] { return export_spectrum(pipe, sig, tag); });
        outputs.insert(outputs.end(), files.begin(), files.end());
        for (std::string& w : branch_cut_notes(*pipe.fractional, a))
            warnings.push_back(std::move(w));
        std::printf("order %s: %zu files\n", format_order(a).c_str(), files.size());
    }
    dump_operator_matrices(pipe, outputs);

    ordered_json j = base_manifest(pipe);
    j["orders"] = cfg.orders;
    j["plot"] = cfg.plot;
    j["eigenvector_condition"] = pipe.fractional->cond_p;
    j["warnings"] = warnings;
    write_manifest(pipe, std::move(j), outputs);
    return 0;
}

int run_filter(const PipelineConfig& cfg) {
    if (cfg.orders.size() != 1)
        throw ConfigError("filter takes a single --order");
    Pipeline pipe = prepare_geometry(cfg);
    prepare_spectral(pipe);
    prepare_fractional(pipe);
    std::filesystem::create_directories(cfg.out_dir);
    const Eigen::Index n = pipe.cloud.size();

    FilterSpec spec;
    spec.order = cfg.orders[0];
    spec.rolloff_width = cfg.rolloff;
    if (cfg.filter_kind == "low") {
        if (cfg.cutoff_hi < 0)
            throw ConfigError("lowpass filtering needs --cutoff-hi");
        spec.kind = FilterKind::lowpass;
        spec.cutoff_lo = 0;
        spec.cutoff_hi = cfg.cutoff_hi;
    } else if (cfg.filter_kind == "high") {
        if (cfg.cutoff_lo < 0)
            throw ConfigError("highpass filtering needs --cutoff-lo");
        spec.kind = FilterKind::highpass;
        spec.cutoff_lo = cfg.cutoff_lo;
        spec.cutoff_hi = static_cast<int>(n) - 1;
    } else if (cfg.filter_kind == "band") {
        if (cfg.cutoff_lo < 0 || cfg.cutoff_hi < 0)
            throw ConfigError("bandpass filtering needs --cutoff-lo and --cutoff-hi");
        spec.kind = FilterKind::bandpass;
        spec.cutoff_lo = cfg.cutoff_lo;
        spec.cutoff_hi = cfg.cutoff_hi;
    } else {
        throw ConfigError("unknown filter kind '" + cfg.filter_kind +
                          "' (low, high, or band)");
    }
    stage("filter spec", [&] {
        validate_filter(spec, n);
        return 0;
    });

    const SpectralSignal before = stage("fractional transform", [&] {
        return pmfht_forward(*pipe.fractional, pipe.channel_values, spec.order,
                             pipe.channel_names);
    });
    const FilterResult filtered = stage("filtering", [&] {
        return apply_filter(*pipe.fractional, *pipe.basis, pipe.channel_values, spec);
    });
    SpectralSignal after = before;
    after.coeffs = filter_mask(spec, n).cast<std::complex<double>>().asDiagonal() * after.coeffs;

    std::vector<std::string> outputs;
    stage("export", [&] {
        for (const std::vector<std::string>& files :
             {export_spectrum(pipe, before, "before"), export_spectrum(pipe, after, "after")})
            outputs.insert(outputs.end(), files.begin(), files.end());
        return 0;
    });

    PointCloud out_cloud = pipe.cloud;
    out_cloud.points = filtered.values.leftCols<3>();
    for (std::size_t c = 3; c < pipe.channel_names.size(); ++c)
        out_cloud.scalars[pipe.channel_names[c]] =
            filtered.values.col(static_cast<Eigen::Index>(c));
    write_ply(out_cloud, cfg.out_dir / "filtered.ply", output_format(cfg));
    outputs.emplace_back("filtered.ply");
    dump_operator_matrices(pipe, outputs);

    ordered_json energies_before = ordered_json::object();
    ordered_json energies_after = ordered_json::object();
    double total_before = 0.0, total_after = 0.0;
    for (std::size_t c = 0; c < pipe.channel_names.size(); ++c) {
        const double eb = smoothness_energy(*pipe.basis,
                                            pipe.channel_values.col(static_cast<Eigen::Index>(c)));
        const double ea =
            smoothness_energy(*pipe.basis, filtered.values.col(static_cast<Eigen::Index>(c)));
        energies_before[pipe.channel_names[c]] = eb;
        energies_after[pipe.channel_names[c]] = ea;
        total_before += eb;
        total_after += ea;
    }

    std::vector<std::string> warnings = filtered.warnings;
    for (std::string& w : branch_cut_notes(*pipe.fractional, spec.order))
        warnings.push_back(std::move(w));

    ordered_json j = base_manifest(pipe);
    j["filter"] = {{"kind", cfg.filter_kind},
                   {"cutoff_lo", spec.cutoff_lo},
                   {"cutoff_hi", spec.cutoff_hi},
                   {"order", spec.order},
                   {"rolloff_width", spec.rolloff_width},
                   {"gain_passband", spec.gain_passband},
                   {"gain_stopband", spec.gain_stopband}};
    j["imag_ratio"] = filtered.imag_ratio;
    j["smoothness_energy"] = {{"before", energies_before},
                              {"after", energies_after},
                              {"total_before", total_before},
                              {"total_after", total_after}};
    j["plot"] = cfg.plot;
    j["eigenvector_condition"] = pipe.fractional->cond_p;
    j["warnings"] = warnings;
    write_manifest(pipe, std::move(j), outputs);

    std::printf("filtered %lld points at order %s; smoothness energy %.6g -> %.6g, "
                "imaginary residue ratio %.3g\n",
                static_cast<long long>(n), format_order(spec.order).c_str(), total_before,
                total_after, filtered.imag_ratio);
    return 0;
}

} // namespace pmfht::cli
